"""JSON schemas for channels, sources, aux channels, scenarios and experiments.

Matrices are nested lists, row-major. A kernel with several inputs is a
nested list indexed by inputs in order, ending in the output pmf, so
``v_given_us[u][s]`` is the pmf of V. Every top-level document carries
``schema_version``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import dmc
from .codec import SimParams
from .errors import HierLeakError, ModelError
from .prob import AuxChannel, CondKernel, SourceModel
from .region import DistortionMeasure, ScenarioConfig

SCHEMA_VERSION = 1


class ParseError(HierLeakError, ValueError):
    def __init__(self, message: str):
        super().__init__("PARSE_ERROR", message)


def read_json(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"{path}: unsupported schema_version {version!r}")
    return doc


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _field(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    return doc[key]


def _wrap(where: str, build):
    try:
        return build()
    except ParseError:
        raise
    except (ModelError, ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None


# channel ---------------------------------------------------------------


def channel_to_json(ch: dmc.Channel) -> dict:
    return {"schema_version": SCHEMA_VERSION, "transition": ch.transition.tolist()}


def channel_from_json(doc: dict, where: str = "channel") -> dmc.Channel:
    return _wrap(where, lambda: dmc.Channel(np.array(_field(doc, "transition", where), float)))


# source and aux ----------------------------------------------------------


def source_to_json(src: SourceModel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "p_s": src.p_s.tolist(),
        "t_given_s": src.t_given_s.rows.tolist(),
        "e_given_t": src.e_given_t.rows.tolist(),
    }


def source_from_json(doc: dict, where: str = "source") -> SourceModel:
    return _wrap(where, lambda: SourceModel(
        np.array(_field(doc, "p_s", where), float),
        CondKernel(np.array(_field(doc, "t_given_s", where), float)),
        CondKernel(np.array(_field(doc, "e_given_t", where), float)),
    ))


def aux_to_json(aux: AuxChannel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "u_given_s": aux.u_given_s.rows.tolist(),
        "v_given_us": aux.v_given_us.rows.tolist(),
        "w_given_uvs": aux.w_given_uvs.rows.tolist(),
    }


def aux_from_json(doc: dict, where: str = "aux") -> AuxChannel:
    return _wrap(where, lambda: AuxChannel(
        CondKernel(np.array(_field(doc, "u_given_s", where), float)),
        CondKernel(np.array(_field(doc, "v_given_us", where), float)),
        CondKernel(np.array(_field(doc, "w_given_uvs", where), float)),
    ))


# scenario ----------------------------------------------------------------


def scenario_to_json(sc: ScenarioConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "source": source_to_json(sc.src),
        "ch1": channel_to_json(sc.ch1),
        "ch2": channel_to_json(sc.ch2),
        "rho1": sc.rho1,
        "rho2": sc.rho2,
        "distortion": sc.distortion.d.tolist(),
    }


def scenario_from_json(doc: dict, where: str = "scenario") -> ScenarioConfig:
    def build():
        dist = doc.get("distortion")
        return ScenarioConfig(
            source_from_json(_field(doc, "source", where), f"{where}.source"),
            channel_from_json(_field(doc, "ch1", where), f"{where}.ch1"),
            channel_from_json(_field(doc, "ch2", where), f"{where}.ch2"),
            float(doc.get("rho1", 1.0)),
            float(doc.get("rho2", 1.0)),
            DistortionMeasure(np.array(dist, float)) if dist is not None else None,
        )

    return _wrap(where, build)


# experiment ----------------------------------------------------------------


def sim_to_json(sp: SimParams) -> dict:
    return {"n": sp.n, "delta": sp.delta, "channel_mode": sp.channel_mode, "seed": sp.seed,
            "max_words": sp.max_words}


def sim_from_json(doc: dict, where: str = "sim") -> SimParams:
    return _wrap(where, lambda: SimParams(
        n=int(_field(doc, "n", where)),
        delta=float(doc.get("delta", SimParams.delta)),
        channel_mode=str(doc.get("channel_mode", SimParams.channel_mode)),
        seed=int(doc.get("seed", 0)),
        max_words=int(doc.get("max_words", SimParams.max_words)),
    ))


def experiment_to_json(aux: AuxChannel, sc: ScenarioConfig, sp: SimParams) -> dict:
    return {"schema_version": SCHEMA_VERSION, "scenario": scenario_to_json(sc),
            "aux": aux_to_json(aux), "sim": sim_to_json(sp)}


def experiment_from_json(doc: dict, base: Path | None = None):
    """(aux, scenario, sim params); ``scenario``/``aux`` may be file paths."""

    def sub(key):
        val = _field(doc, key, "experiment")
        if isinstance(val, str):
            path = Path(val) if base is None or Path(val).is_absolute() else base / val
            return read_json(path)
        return val

    return (aux_from_json(sub("aux")), scenario_from_json(sub("scenario")),
            sim_from_json(_field(doc, "sim", "experiment")))
