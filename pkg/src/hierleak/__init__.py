"""Distortion-leakage regions and a simulator for two-phase hierarchical
joint source-channel coding with a Phase-1 leakage constraint."""

__version__ = "0.1.0"
