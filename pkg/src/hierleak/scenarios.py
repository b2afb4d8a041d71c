"""Ready-made sources, scenarios and auxiliary channels."""

from __future__ import annotations

import numpy as np

from . import dmc
from .prob import AuxChannel, CondKernel, SourceModel
from .region import ScenarioConfig


def binary_symmetric_kernel(p: float) -> CondKernel:
    return CondKernel([[1 - p, p], [p, 1 - p]])


def dsbs(p_t: float = 0.1, p_e: float = 0.1) -> SourceModel:
    """Uniform bit S; T is S through BSC(p_t); E is T through BSC(p_e)."""
    return SourceModel([0.5, 0.5], binary_symmetric_kernel(p_t), binary_symmetric_kernel(p_e))


def dsbs_scenario(p_t=0.1, p_e=0.1, ch1=None, ch2=None, rho1=1.0, rho2=1.0) -> ScenarioConfig:
    return ScenarioConfig(
        dsbs(p_t, p_e),
        ch1 if ch1 is not None else dmc.identity(2),
        ch2 if ch2 is not None else dmc.identity(2),
        rho1,
        rho2,
    )


def aux_from_maps(n_s: int, u=None, v=None, w=None) -> AuxChannel:
    """Deterministic aux channel; each of ``u``, ``v``, ``w`` is ``None``
    (constant, alphabet of size 1) or ``"s"`` (a copy of S)."""
    s = np.arange(n_s)
    n_u = n_s if u == "s" else 1
    n_v = n_s if v == "s" else 1
    n_w = n_s if w == "s" else 1
    fu = s if u == "s" else np.zeros(n_s, int)
    fv = np.broadcast_to(s if v == "s" else 0, (n_u, n_s))
    fw = np.broadcast_to(s if w == "s" else 0, (n_u, n_v, n_s))
    return AuxChannel(
        CondKernel.deterministic(fu, n_u),
        CondKernel.deterministic(fv, n_v),
        CondKernel.deterministic(fw, n_w),
    )


def anchor_aux(name: str, n_s: int = 2) -> AuxChannel:
    """One of the three reference aux channels.

    ``"u"``: U = S, V and W constant. ``"w"``: W = S, U and V constant.
    ``"v"``: V = S, U and W constant (the key-generating anchor).
    """
    if name == "u":
        return aux_from_maps(n_s, u="s")
    if name == "v":
        return aux_from_maps(n_s, v="s")
    if name == "w":
        return aux_from_maps(n_s, w="s")
    if name == "constant":
        return aux_from_maps(n_s)
    raise ValueError(f"unknown anchor {name!r}")


def random_kernel(rng: np.random.Generator, shape, alpha: float = 1.0) -> CondKernel:
    rows = rng.dirichlet(np.full(shape[-1], alpha), size=shape[:-1])
    return CondKernel(rows / rows.sum(axis=-1, keepdims=True))


def random_source(rng: np.random.Generator, n_s=2, n_t=2, n_e=2) -> SourceModel:
    p = rng.dirichlet(np.ones(n_s))
    return SourceModel(p / p.sum(), random_kernel(rng, (n_s, n_t)), random_kernel(rng, (n_t, n_e)))


def random_aux(rng: np.random.Generator, n_s: int, sizes=(2, 2, 2), alpha: float = 0.7) -> AuxChannel:
    n_u, n_v, n_w = sizes
    return AuxChannel(
        random_kernel(rng, (n_s, n_u), alpha),
        random_kernel(rng, (n_u, n_s, n_v), alpha),
        random_kernel(rng, (n_u, n_v, n_s, n_w), alpha),
    )


def random_scenario(rng: np.random.Generator, n_s=2, n_t=2, n_e=2) -> ScenarioConfig:
    return ScenarioConfig(
        random_source(rng, n_s, n_t, n_e),
        dmc.bsc(float(rng.uniform(0, 0.5))),
        dmc.bsc(float(rng.uniform(0, 0.5))),
        float(rng.uniform(0.2, 2.0)),
        float(rng.uniform(0.2, 2.0)),
    )
