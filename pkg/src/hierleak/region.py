"""Inner-bound regions for two-phase coding with a Phase-1 leakage constraint.

A candidate point is an auxiliary channel (U, V, W) given S. Its rate terms,
key rates, leakage lower bound and best achievable distortions are evaluated
exactly on the assembled joint law of (S, T, E, U, V, W).

Two regions are supported. ``"r1"`` is the achievable region with constraints

    I(U;S|E) + I(W;S|V,U,T) <= rho1*C1,    I(V;S|T,U) <= rho2*C2,

and ``"r2"`` the relaxed region with

    I(U;S|E) <= rho1*C1,    I(V;S|T,U) <= rho2*C2,
    I(U;S|E) + I(V,W;S|T,U) <= rho1*C1 + rho2*C2.

Both share the leakage bound
``I(U,E;S) + [I(W;S|T,U,V) - R_K1 - R_K2]^+``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import dmc
from .errors import InfeasibleError, ModelError
from .prob import (
    JOINT_AXES,
    MAX_CELLS,
    AuxChannel,
    CondKernel,
    JointDist,
    SourceModel,
    assemble_joint,
    joint_tensor,
)

log = logging.getLogger(__name__)

SLACK_TOL = 1e-9
CAPACITY_TOL = 1e-10
REGIONS = ("r1", "r2")


@dataclass(frozen=True, eq=False)
class DistortionMeasure:
    """Per-letter distortion ``d[s, s_hat]`` on source x reconstruction alphabets."""

    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.ndim != 2 or d.shape[1] < 1:
            raise ModelError("SHAPE_MISMATCH", "distortion must be an |S| x |S_hat| matrix")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ModelError("NEGATIVE_MASS", "distortion entries must be finite and nonnegative")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n_recon(self) -> int:
        return self.d.shape[1]

    @property
    def d_max(self) -> float:
        return float(self.d.max())


def hamming(k: int) -> DistortionMeasure:
    return DistortionMeasure(1.0 - np.eye(k))


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    src: SourceModel
    ch1: dmc.Channel
    ch2: dmc.Channel
    rho1: float = 1.0
    rho2: float = 1.0
    distortion: DistortionMeasure | None = None

    def __post_init__(self):
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise ModelError("BAD_BANDWIDTH", "bandwidth expansions must be positive")
        if self.distortion is None:
            object.__setattr__(self, "distortion", hamming(self.src.n_s))
        if self.distortion.d.shape[0] != self.src.n_s:
            raise ModelError(
                "ALPHABET_MISMATCH",
                f"distortion has {self.distortion.d.shape[0]} source rows, |S| = {self.src.n_s}",
            )

    @cached_property
    def c1(self) -> float:
        return dmc.capacity(self.ch1, CAPACITY_TOL).capacity

    @cached_property
    def c2(self) -> float:
        return dmc.capacity(self.ch2, CAPACITY_TOL).capacity

    @property
    def rho1c1(self) -> float:
        return self.rho1 * self.c1

    @property
    def rho2c2(self) -> float:
        return self.rho2 * self.c2


# --------------------------------------------------------------------------
# information terms

_AX = {name: i for i, name in enumerate(JOINT_AXES)}


class _Entropies:
    """Memoised marginal entropies of one (S,T,E,U,V,W) tensor."""

    def __init__(self, mass: np.ndarray):
        self.mass = mass
        self.cache: dict[frozenset, float] = {frozenset(): 0.0}

    def __call__(self, names: str) -> float:
        key = frozenset(names)
        h = self.cache.get(key)
        if h is None:
            drop = tuple(i for n, i in _AX.items() if n not in key)
            p = self.mass.sum(axis=drop) if drop else self.mass
            p = p[p > 0]
            h = float(-(p * np.log2(p)).sum())
            self.cache[key] = h
        return h

    def cmi(self, a: str, b: str, c: str = "") -> float:
        return self(a + c) + self(b + c) - self(a + b + c) - self(c)


def info_terms(mass: np.ndarray) -> dict[str, float]:
    """All mutual-information quantities the regions and the codec use.

    Keys spell the quantity, e.g. ``"I(W;S|V,U,T)"``. ``mass`` is an
    (S,T,E,U,V,W) tensor.
    """
    H = _Entropies(np.asarray(mass, dtype=float))
    t = {
        "I(U;S|E)": H.cmi("U", "S", "E"),
        "I(W;S|V,U,T)": H.cmi("W", "S", "VUT"),
        "I(V;S|T,U)": H.cmi("V", "S", "TU"),
        "I(V;T|E,U)": H.cmi("V", "T", "EU"),
        "I(V;T|U)": H.cmi("V", "T", "U"),
        "I(V;E|U)": H.cmi("V", "E", "U"),
        "I(V,W;S|T,U)": H.cmi("VW", "S", "TU"),
        "I(U,E;S)": H.cmi("UE", "S"),
        "I(S;E)": H.cmi("S", "E"),
        "I(U;S)": H.cmi("U", "S"),
        "I(V;S|U)": H.cmi("V", "S", "U"),
        "I(W;S|V,U)": H.cmi("W", "S", "VU"),
    }
    # same quantity, the name used in the key-rate formulas
    t["I(W;S|T,U,V)"] = t["I(W;S|V,U,T)"]
    return t


def _mass(joint: JointDist | np.ndarray) -> np.ndarray:
    if isinstance(joint, JointDist):
        if joint.axes != JOINT_AXES:
            raise ModelError("UNKNOWN_AXIS", f"expected axes {JOINT_AXES}, got {joint.axes}")
        return joint.mass
    return np.asarray(joint, dtype=float)


def _key_rates_from_terms(t: dict[str, float], rho2c2: float) -> tuple[float, float]:
    r_k2 = t["I(V;T|U)"] - t["I(V;E|U)"]
    w_rate, key_from_v = t["I(W;S|T,U,V)"], t["I(V;T|E,U)"]
    if key_from_v >= w_rate:
        r_k1 = 0.0
    else:
        r_k1 = min(rho2c2 - t["I(V;S|T,U)"], w_rate - key_from_v)
    return r_k1, r_k2


def key_rates(joint: JointDist | np.ndarray, rho2c2: float) -> tuple[float, float]:
    """Key rates (R_K1, R_K2) in bits per source symbol.

    ``R_K2 = I(V;T|U) - I(V;E|U)`` is the source-derived key.
    ``R_K1`` is the spare Phase-2 rate spent on encrypting randomness: zero
    when the source key already covers ``I(W;S|T,V,U)``, otherwise
    ``min(rho2c2 - I(V;S|T,U), I(W;S|T,V,U) - I(V;T|E,U))``. R_K1 is only
    negative when the Phase-2 rate constraint is already violated.
    """
    if rho2c2 < 0:
        raise ValueError("rho2c2 must be nonnegative")
    return _key_rates_from_terms(info_terms(_mass(joint)), rho2c2)


def _leakage_from_terms(t: dict[str, float], rho2c2: float) -> tuple[float, float]:
    r_k1, r_k2 = _key_rates_from_terms(t, rho2c2)
    necessary = t["I(U,E;S)"]
    primary = necessary + max(0.0, t["I(W;S|T,U,V)"] - r_k1 - r_k2)
    alt = necessary + max(0.0, t["I(V,W;S|T,U)"] - t["I(V;T|E,U)"] - rho2c2)
    return primary, alt


def leakage_lower_bound(joint: JointDist | np.ndarray, rho2c2: float) -> tuple[float, float]:
    """Leakage bound in its key-rate form and its capacity-tradeoff form.

    The two agree whenever ``rho2c2 >= I(V;S|T,U)``.
    """
    return _leakage_from_terms(info_terms(_mass(joint)), rho2c2)


# --------------------------------------------------------------------------
# reconstructions


@dataclass(frozen=True, eq=False)
class Reconstructions:
    """Symbol-by-symbol decoders ``h1[u, e]`` and ``h2[w, v, t]``.

    ``zero_contexts1``/``zero_contexts2`` list argument tuples of probability
    zero; those map to reconstruction symbol 0.
    """

    h1: np.ndarray
    h2: np.ndarray
    zero_contexts1: tuple[tuple[int, ...], ...] = ()
    zero_contexts2: tuple[tuple[int, ...], ...] = ()


def _best_map(p_s_ctx: np.ndarray, d: np.ndarray):
    # p_s_ctx: (S, *ctx); cost[*ctx, s_hat] = sum_s p(s, ctx) d(s, s_hat)
    cost = np.tensordot(np.moveaxis(p_s_ctx, 0, -1), d, axes=([-1], [0]))
    h = np.argmin(cost, axis=-1)
    dist = float(np.take_along_axis(cost, h[..., None], axis=-1).sum())
    ctx_mass = p_s_ctx.sum(axis=0)
    zeros = tuple(tuple(int(i) for i in z) for z in np.argwhere(ctx_mass <= 0))
    return h, max(dist, 0.0), zeros


def _reconstructions(mass: np.ndarray, d: np.ndarray):
    # (S,T,E,U,V,W) -> p(s,u,e) and p(s,w,v,t)
    p_sue = np.einsum("steuvw->sue", mass)
    p_swvt = np.einsum("steuvw->swvt", mass)
    h1, d1, z1 = _best_map(p_sue, d)
    h2, d2, z2 = _best_map(p_swvt, d)
    return Reconstructions(h1, h2, z1, z2), d1, d2


def optimal_reconstructions(
    joint: JointDist | np.ndarray, dm: DistortionMeasure
) -> tuple[Reconstructions, float, float]:
    """Distortion-minimising decoders and their expected distortions.

    ``h1(u, e)`` minimises ``sum_s P(s|u,e) d(s, s_hat)``, ties to the smallest
    index; ``h2(w, v, t)`` likewise.
    """
    mass = _mass(joint)
    if mass.shape[0] != dm.d.shape[0]:
        raise ModelError("ALPHABET_MISMATCH", "distortion rows do not match |S|")
    return _reconstructions(mass, dm.d)


# --------------------------------------------------------------------------
# region points


@dataclass(frozen=True)
class RegionPoint:
    terms: dict[str, float]
    r_k1: float
    r_k2: float
    leakage_lb: float
    leakage_alt: float
    d1: float
    d2: float
    feasible_r1: bool
    feasible_r2: bool
    slack: dict[str, float]
    rho1c1: float
    rho2c2: float

    def feasible(self, region: str) -> bool:
        return self.feasible_r1 if region == "r1" else self.feasible_r2

    def to_dict(self) -> dict:
        return {
            "terms": dict(self.terms),
            "r_k1": self.r_k1,
            "r_k2": self.r_k2,
            "leakage_lb": self.leakage_lb,
            "leakage_alt": self.leakage_alt,
            "d1": self.d1,
            "d2": self.d2,
            "feasible_r1": self.feasible_r1,
            "feasible_r2": self.feasible_r2,
            "slack": dict(self.slack),
            "rho1c1": self.rho1c1,
            "rho2c2": self.rho2c2,
        }


def _slacks(t: dict[str, float], rho1c1: float, rho2c2: float) -> dict[str, float]:
    # rhs - lhs; a constraint holds when its slack is >= -SLACK_TOL
    return {
        "r1_phase1": rho1c1 - (t["I(U;S|E)"] + t["I(W;S|V,U,T)"]),
        "r1_phase2": rho2c2 - t["I(V;S|T,U)"],
        "r2_phase1": rho1c1 - t["I(U;S|E)"],
        "r2_phase2": rho2c2 - t["I(V;S|T,U)"],
        "r2_sum": rho1c1 + rho2c2 - (t["I(U;S|E)"] + t["I(V,W;S|T,U)"]),
    }


def _point_from_mass(mass: np.ndarray, sc: ScenarioConfig) -> RegionPoint:
    rho1c1, rho2c2 = sc.rho1c1, sc.rho2c2
    t = info_terms(mass)
    r_k1, r_k2 = _key_rates_from_terms(t, rho2c2)
    primary, alt = _leakage_from_terms(t, rho2c2)
    _, d1, d2 = _reconstructions(mass, sc.distortion.d)
    slack = _slacks(t, rho1c1, rho2c2)
    ok = {k: v >= -SLACK_TOL for k, v in slack.items()}
    return RegionPoint(
        terms=t,
        r_k1=r_k1,
        r_k2=r_k2,
        leakage_lb=primary,
        leakage_alt=alt,
        d1=d1,
        d2=d2,
        feasible_r1=ok["r1_phase1"] and ok["r1_phase2"],
        feasible_r2=ok["r2_phase1"] and ok["r2_phase2"] and ok["r2_sum"],
        slack=slack,
        rho1c1=rho1c1,
        rho2c2=rho2c2,
    )


def evaluate_point(aux: AuxChannel, sc: ScenarioConfig) -> RegionPoint:
    """Evaluate ``aux`` against both regions at once."""
    return _point_from_mass(assemble_joint(sc.src, aux).mass, sc)


def evaluate_point_r1(aux: AuxChannel, sc: ScenarioConfig) -> RegionPoint:
    return evaluate_point(aux, sc)


def evaluate_point_r2(aux: AuxChannel, sc: ScenarioConfig) -> RegionPoint:
    return evaluate_point(aux, sc)


@dataclass(frozen=True)
class InclusionReport:
    feasible_r1: bool
    feasible_r2: bool
    slack: dict[str, float]

    @property
    def violation(self) -> bool:
        """True when the point is in the first region but not the second."""
        return self.feasible_r1 and not self.feasible_r2


def check_inclusion(aux: AuxChannel, sc: ScenarioConfig) -> InclusionReport:
    p = evaluate_point(aux, sc)
    return InclusionReport(p.feasible_r1, p.feasible_r2, dict(p.slack))


# --------------------------------------------------------------------------
# search


def cardinality_bounds(n_s: int) -> tuple[int, int, int]:
    """Largest auxiliary alphabets ever needed for a source alphabet of size ``n_s``."""
    n_u = n_s + 3
    n_v = (n_s + 1) * (n_s + 2) + 1
    n_w = n_s * (n_s + 3) * ((n_s + 1) * (n_s + 2) + 1) + 1
    return n_u, n_v, n_w


def default_sizes(n_s: int) -> tuple[int, int, int]:
    return n_s + 1, n_s + 1, n_s + 1


def project_simplex(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, x.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    p = np.maximum(x - theta, 0.0)
    return p / p.sum()


def anchor_kernels(n_s: int, sizes: tuple[int, int, int]) -> dict[str, tuple]:
    """Hand-built aux channels: all constant, or one of U, V, W a copy of S."""
    n_u, n_v, n_w = sizes
    s = np.arange(n_s)

    def det(shape, f, k):
        return CondKernel.deterministic(np.broadcast_to(f, shape), k).rows

    zero_u, zero_v, zero_w = (
        det((n_s,), 0, n_u),
        det((n_u, n_s), 0, n_v),
        det((n_u, n_v, n_s), 0, n_w),
    )
    out = {"constant": (zero_u, zero_v, zero_w)}
    if n_u >= n_s:
        out["u_copies_s"] = (det((n_s,), s, n_u), zero_v, zero_w)
    if n_v >= n_s:
        out["v_copies_s"] = (zero_u, det((n_u, n_s), s, n_v), zero_w)
    if n_w >= n_s:
        out["w_copies_s"] = (zero_u, zero_v, det((n_u, n_v, n_s), s, n_w))
    return out


@dataclass
class _Objective:
    sc: ScenarioConfig
    region: str
    d1_max: float
    d2_max: float
    ste: np.ndarray = field(init=False)

    def __post_init__(self):
        self.ste = self.sc.src.joint_ste()
        self.rho1c1, self.rho2c2 = self.sc.rho1c1, self.sc.rho2c2
        self.d = self.sc.distortion.d

    def mass(self, pu, pv, pw) -> np.ndarray:
        aux = np.einsum("su,usv,uvsw->suvw", pu, pv, pw)
        return np.einsum("ste,suvw->steuvw", self.ste, aux)

    def merit(self, pu, pv, pw) -> tuple[int, float]:
        """(0, leakage) when feasible, else (1, total violation)."""
        mass = self.mass(pu, pv, pw)
        t = info_terms(mass)
        _, d1, d2 = _reconstructions(mass, self.d)
        s = _slacks(t, self.rho1c1, self.rho2c2)
        keys = ("r1_phase1", "r1_phase2") if self.region == "r1" else (
            "r2_phase1", "r2_phase2", "r2_sum")
        viol = [-s[k] for k in keys] + [d1 - self.d1_max, d2 - self.d2_max]
        if all(v <= SLACK_TOL for v in viol):
            return 0, _leakage_from_terms(t, self.rho2c2)[0]
        return 1, float(sum(max(v, 0.0) for v in viol))


def _descend(obj: _Objective, params: list[np.ndarray], eta=0.25, eta_min=1e-3,
             max_sweeps=200) -> tuple[tuple[int, float], list[np.ndarray]]:
    params = [p.copy() for p in params]
    best = obj.merit(*params)
    p_s = obj.sc.src.p_s
    sweeps = 0
    while eta >= eta_min and sweeps < max_sweeps:
        sweeps += 1
        improved = False
        pu, pv, _ = params
        # context masses; rows under zero-mass contexts cannot matter
        ctx = [
            p_s,
            (p_s[:, None] * pu).T,
            np.einsum("s,su,usv->uvs", p_s, pu, pv),
        ]
        for k, arr in enumerate(params):
            for row in np.ndindex(arr.shape[:-1]):
                if ctx[k][row] <= 1e-15:
                    continue
                old = arr[row].copy()
                for j in range(arr.shape[-1]):
                    for sign in (1.0, -1.0):
                        trial = old.copy()
                        trial[j] += sign * eta
                        trial = project_simplex(trial)
                        if np.allclose(trial, old, atol=1e-15):
                            continue
                        arr[row] = trial
                        m = obj.merit(*params)
                        if m < best:
                            best, old = m, trial
                            improved = True
                        else:
                            arr[row] = old
        if not improved:
            eta /= 2
    return best, params


def _random_start(rng: np.random.Generator, n_s: int, sizes, best=None) -> list[np.ndarray]:
    n_u, n_v, n_w = sizes
    shapes = [(n_s, n_u), (n_u, n_s, n_v), (n_u, n_v, n_s, n_w)]
    if best is None:
        return [rng.dirichlet(np.full(sh[-1], 0.5), size=sh[:-1]) for sh in shapes]
    # multiplicative perturbation of the incumbent
    out = []
    for p in best:
        q = (p + 1e-3) * np.exp(rng.normal(0.0, 1.0, p.shape))
        out.append(q / q.sum(axis=-1, keepdims=True))
    return out


def _to_aux(params) -> AuxChannel:
    pu, pv, pw = (p / p.sum(axis=-1, keepdims=True) for p in params)
    return AuxChannel(CondKernel(pu), CondKernel(pv), CondKernel(pw))


def minimize_leakage(
    sc: ScenarioConfig,
    d1_max: float,
    d2_max: float,
    region: str = "r1",
    budget: int = 8,
    seed: int = 0,
    sizes: tuple[int, int, int] | None = None,
    threads: int = 1,
    starts: Sequence[AuxChannel] = (),
) -> tuple[AuxChannel, RegionPoint]:
    """Search for the aux channel with the smallest leakage bound.

    Anchor channels are always scored; then ``budget`` restarts of projected
    coordinate descent run from the best anchor, from random points, and
    from perturbations of the best anchor. Each aux channel in ``starts``
    (alphabets matching ``sizes``) gets one extra descent. The result is
    achievable but not certified optimal.

    Raises :class:`InfeasibleError` (``NO_FEASIBLE_POINT``) when nothing met
    the rate and distortion constraints.
    """
    if region not in REGIONS:
        raise ValueError(f"region must be one of {REGIONS}")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    n_s = sc.src.n_s
    sizes = tuple(sizes) if sizes is not None else default_sizes(n_s)
    bounds = cardinality_bounds(n_s)
    if any(k < 1 or k > b for k, b in zip(sizes, bounds)):
        raise ModelError("BAD_ALPHABET", f"aux sizes {sizes} must lie in [1, {bounds}]")
    cells = n_s * sc.src.n_t * sc.src.n_e * int(np.prod(sizes))
    if cells > MAX_CELLS:
        raise ModelError(
            "TOO_MANY_CELLS",
            f"aux sizes {sizes} give {cells} joint cells (cap {MAX_CELLS}); use smaller sizes",
        )
    obj = _Objective(sc, region, d1_max, d2_max)
    warm = []
    for a in starts:
        if (a.n_u, a.n_v, a.n_w) != sizes or a.n_s != n_s:
            raise ModelError("BAD_ALPHABET", f"warm start alphabets differ from {sizes}")
        warm.append([np.array(k, dtype=float) for k in a.kernel_arrays()])

    anchors = list(anchor_kernels(n_s, sizes).values())
    scored = [(obj.merit(*a), i, list(a)) for i, a in enumerate(anchors)]
    best_anchor = min(scored, key=lambda x: (x[0], x[1]))

    def run(i: int):
        rng = np.random.default_rng([seed, i])
        if i == 0:
            start = [p.copy() for p in best_anchor[2]]
        elif i % 2:
            start = _random_start(rng, n_s, sizes)
        else:
            start = _random_start(rng, n_s, sizes, best=best_anchor[2])
        return _descend(obj, start)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(budget)))
    else:
        results = [run(i) for i in range(budget)]
    results += [_descend(obj, [p.copy() for p in w]) for w in warm]

    candidates = [(m, -1, p) for m, _, p in scored] + [
        (m, i, p) for i, (m, p) in enumerate(results)
    ]
    feasible = [c for c in candidates if c[0][0] == 0]
    if not feasible:
        raise InfeasibleError(
            "NO_FEASIBLE_POINT",
            f"no aux channel met the {region} constraints with d1 <= {d1_max}, d2 <= {d2_max}",
        )
    (_, value), _, params = min(feasible, key=lambda c: (c[0][1], c[1]))
    aux = _to_aux(params)
    point = evaluate_point(aux, sc)
    log.debug("minimize_leakage %s: leakage %.6f over %d restarts", region, value, budget)
    return aux, point


@dataclass(frozen=True)
class FrontierCell:
    d1_max: float
    d2_max: float
    point: RegionPoint | None
    aux: AuxChannel | None
    restarts_used: int

    @property
    def feasible(self) -> bool:
        return self.point is not None


def frontier_sweep(
    sc: ScenarioConfig,
    d1_grid: Sequence[float],
    d2_grid: Sequence[float],
    region: str = "r1",
    budget: int = 8,
    seed: int = 0,
    sizes: tuple[int, int, int] | None = None,
    threads: int = 1,
) -> list[FrontierCell]:
    """Minimum leakage over a grid of distortion caps, row-major in (d1, d2).

    A point meeting smaller caps also meets larger ones, so each cell takes
    the best point found at any cell it dominates.
    """
    d1_grid = sorted(float(x) for x in d1_grid)
    d2_grid = sorted(float(x) for x in d2_grid)
    if not d1_grid or not d2_grid:
        raise ValueError("grids must be nonempty")
    raw: dict[tuple[int, int], tuple] = {}
    for i, a in enumerate(d1_grid):
        for j, b in enumerate(d2_grid):
            try:
                aux, p = minimize_leakage(sc, a, b, region, budget, seed=hash_seed(seed, i, j),
                                          sizes=sizes, threads=threads)
                raw[i, j] = (aux, p)
            except InfeasibleError:
                raw[i, j] = (None, None)
    cells = []
    for i, a in enumerate(d1_grid):
        for j, b in enumerate(d2_grid):
            best = (None, None)
            for ii in range(i + 1):
                for jj in range(j + 1):
                    aux, p = raw[ii, jj]
                    if p is not None and (best[1] is None or p.leakage_lb < best[1].leakage_lb):
                        best = (aux, p)
            cells.append(FrontierCell(a, b, best[1], best[0], budget))
    return cells


def hash_seed(seed: int, *parts: int) -> int:
    """Stable derived seed for a grid cell or restart."""
    return int(np.random.SeedSequence([seed, *parts]).generate_state(1)[0])


FRONTIER_HEADER = ["d1_max", "d2_max", "leakage_lb", "d1", "d2", "feasible", "restarts_used"]


def frontier_rows(cells: Sequence[FrontierCell]) -> list[list[str]]:
    rows = []
    for c in cells:
        if c.point is None:
            rows.append([repr(c.d1_max), repr(c.d2_max), "", "", "", "false", str(c.restarts_used)])
        else:
            p = c.point
            rows.append([repr(c.d1_max), repr(c.d2_max), f"{p.leakage_lb:.12g}",
                         f"{p.d1:.12g}", f"{p.d2:.12g}", "true", str(c.restarts_used)])
    return rows
