"""Finite-alphabet probability calculus.

Joint distributions are dense numpy tensors with one named axis per random
variable. All information quantities are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ModelError

MAX_CELLS = 10**6
STOCHASTIC_TOL = 1e-12
MASS_TOL = 1e-12


def _as_names(vars: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(vars, str):
        return (vars,)
    return tuple(vars)


def validate(mass: np.ndarray, axes: Sequence[str] = ()) -> None:
    """Check nonnegativity and unit total mass.

    Raises :class:`ModelError` with code ``NEGATIVE_MASS`` or
    ``NOT_NORMALIZED``; the message names the first offending cell.
    """
    mass = np.asarray(mass, dtype=float)
    if not np.all(np.isfinite(mass)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(mass))[0])
        raise ModelError("NEGATIVE_MASS", f"non-finite mass at {_cell(axes, bad)}")
    if np.any(mass < 0):
        bad = tuple(int(i) for i in np.argwhere(mass < 0)[0])
        raise ModelError(
            "NEGATIVE_MASS", f"negative mass {mass[bad]:.3g} at {_cell(axes, bad)}"
        )
    total = float(mass.sum())
    if abs(total - 1.0) > MASS_TOL:
        # the cell furthest off in the direction of the error
        flat = int(np.argmax(mass)) if total > 1 else int(np.argmin(mass))
        bad = tuple(int(i) for i in np.unravel_index(flat, mass.shape))
        raise ModelError(
            "NOT_NORMALIZED",
            f"total mass {total!r} differs from 1 (largest deviation near {_cell(axes, bad)})",
        )


def _cell(axes: Sequence[str], idx: tuple[int, ...]) -> str:
    if axes and len(axes) == len(idx):
        return "(" + ", ".join(f"{a}={i}" for a, i in zip(axes, idx)) + ")"
    return str(idx)


def _entropy_of(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


@dataclass(frozen=True, eq=False)
class JointDist:
    """A joint pmf over named finite alphabets.

    ``mass[i0, i1, ...]`` is the probability of the symbol tuple, axis ``k``
    indexing the alphabet called ``axes[k]``.
    """

    axes: tuple[str, ...]
    mass: np.ndarray

    def __post_init__(self):
        axes = tuple(self.axes)
        mass = np.array(self.mass, dtype=float)
        if len(set(axes)) != len(axes):
            raise ModelError("DUPLICATE_AXIS", f"axis names must be unique: {axes}")
        if mass.ndim != len(axes):
            raise ModelError(
                "SHAPE_MISMATCH", f"{len(axes)} axis names for a {mass.ndim}-d tensor"
            )
        if mass.size > MAX_CELLS:
            raise ModelError(
                "TOO_MANY_CELLS", f"{mass.size} cells exceeds the cap of {MAX_CELLS}"
            )
        validate(mass, axes)
        mass.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "mass", mass)

    @property
    def sizes(self) -> dict[str, int]:
        return dict(zip(self.axes, self.mass.shape))

    def _index(self, names: Iterable[str]) -> list[int]:
        out = []
        for n in names:
            if n not in self.axes:
                raise ModelError("UNKNOWN_AXIS", f"no axis named {n!r} in {self.axes}")
            out.append(self.axes.index(n))
        return out

    def marginal(self, vars: str | Iterable[str]) -> np.ndarray:
        """Marginal tensor over ``vars``, axes in the order given."""
        names = _as_names(vars)
        keep = self._index(names)
        drop = tuple(i for i in range(len(self.axes)) if i not in keep)
        m = self.mass.sum(axis=drop) if drop else self.mass
        # remaining axes are in tensor order; permute to requested order
        order = sorted(keep)
        return np.transpose(m, [order.index(i) for i in keep])

    def marginal_dist(self, vars: str | Iterable[str]) -> "JointDist":
        names = _as_names(vars)
        return JointDist(names, self.marginal(names))


def entropy(dist: JointDist, vars: str | Iterable[str]) -> float:
    """Joint entropy H(vars) in bits."""
    names = _as_names(vars)
    if not names:
        raise ModelError("UNKNOWN_AXIS", "entropy needs at least one axis")
    return _entropy_of(dist.marginal(names))


def _disjoint(*groups: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for g in groups:
        if seen & set(g):
            raise ModelError("OVERLAPPING_SETS", f"axis sets overlap on {sorted(seen & set(g))}")
        seen |= set(g)


def _h(dist: JointDist, names: tuple[str, ...]) -> float:
    return _entropy_of(dist.marginal(names)) if names else 0.0


def mutual_info(dist: JointDist, a, b) -> float:
    """I(a; b) in bits."""
    a, b = _as_names(a), _as_names(b)
    dist._index(a + b)
    _disjoint(a, b)
    return _h(dist, a) + _h(dist, b) - _h(dist, a + b)


def cond_mutual_info(dist: JointDist, a, b, c=()) -> float:
    """I(a; b | c) in bits; an empty ``c`` gives plain mutual information."""
    a, b, c = _as_names(a), _as_names(b), _as_names(c)
    dist._index(a + b + c)
    _disjoint(a, b, c)
    if not c:
        return mutual_info(dist, a, b)
    return _h(dist, a + c) + _h(dist, b + c) - _h(dist, a + b + c) - _h(dist, c)


@dataclass(frozen=True, eq=False)
class CondKernel:
    """Conditional pmf P(out | in_1, ..., in_k).

    ``rows`` has shape ``(*input_sizes, output_size)``; every slice along the
    last axis is a probability vector.
    """

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim < 2:
            raise ModelError("SHAPE_MISMATCH", "a kernel needs at least one input axis")
        if np.any(rows < 0) or not np.all(np.isfinite(rows)):
            bad = tuple(int(i) for i in np.argwhere(~(rows >= 0))[0])
            raise ModelError("NEGATIVE_MASS", f"kernel entry {bad} is negative or not finite")
        sums = rows.sum(axis=-1)
        off = np.abs(sums - 1.0)
        if np.any(off > STOCHASTIC_TOL):
            bad = tuple(int(i) for i in np.argwhere(off > STOCHASTIC_TOL)[0])
            raise ModelError(
                "NOT_NORMALIZED", f"kernel row {bad} sums to {sums[bad]!r}, not 1"
            )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def input_sizes(self) -> tuple[int, ...]:
        return self.rows.shape[:-1]

    @property
    def output_size(self) -> int:
        return self.rows.shape[-1]

    @classmethod
    def deterministic(cls, f: np.ndarray, output_size: int) -> "CondKernel":
        """Kernel putting all mass on ``f[inputs]``."""
        f = np.asarray(f, dtype=int)
        rows = np.zeros(f.shape + (output_size,))
        np.put_along_axis(rows, f[..., None], 1.0, axis=-1)
        return cls(rows)

    @classmethod
    def constant(cls, input_sizes: Sequence[int], output_size: int = 1) -> "CondKernel":
        return cls.deterministic(np.zeros(tuple(input_sizes), dtype=int), output_size)


@dataclass(frozen=True, eq=False)
class SourceModel:
    """Degraded source triple: P_S, then T from S, then E from T.

    The factorisation makes S - T - E a Markov chain by construction.
    """

    p_s: np.ndarray
    t_given_s: CondKernel
    e_given_t: CondKernel

    def __post_init__(self):
        p_s = np.array(self.p_s, dtype=float)
        if p_s.ndim != 1:
            raise ModelError("SHAPE_MISMATCH", "p_s must be a vector")
        validate(p_s, ("S",))
        p_s.setflags(write=False)
        object.__setattr__(self, "p_s", p_s)
        if not isinstance(self.t_given_s, CondKernel):
            object.__setattr__(self, "t_given_s", CondKernel(self.t_given_s))
        if not isinstance(self.e_given_t, CondKernel):
            object.__setattr__(self, "e_given_t", CondKernel(self.e_given_t))
        if self.t_given_s.input_sizes != (p_s.size,):
            raise ModelError(
                "ALPHABET_MISMATCH",
                f"t_given_s expects inputs {self.t_given_s.input_sizes}, |S| = {p_s.size}",
            )
        if self.e_given_t.input_sizes != (self.t_given_s.output_size,):
            raise ModelError(
                "ALPHABET_MISMATCH",
                f"e_given_t expects inputs {self.e_given_t.input_sizes}, "
                f"|T| = {self.t_given_s.output_size}",
            )

    @property
    def n_s(self) -> int:
        return self.p_s.size

    @property
    def n_t(self) -> int:
        return self.t_given_s.output_size

    @property
    def n_e(self) -> int:
        return self.e_given_t.output_size

    def joint_ste(self) -> np.ndarray:
        return np.einsum("s,st,te->ste", self.p_s, self.t_given_s.rows, self.e_given_t.rows)

    def joint(self) -> JointDist:
        return JointDist(("S", "T", "E"), self.joint_ste())


@dataclass(frozen=True, eq=False)
class AuxChannel:
    """Auxiliary test channel P_{U|S} P_{V|U,S} P_{W|U,V,S}."""

    u_given_s: CondKernel
    v_given_us: CondKernel
    w_given_uvs: CondKernel

    def __post_init__(self):
        for name in ("u_given_s", "v_given_us", "w_given_uvs"):
            k = getattr(self, name)
            if not isinstance(k, CondKernel):
                object.__setattr__(self, name, CondKernel(k))
        n_s = self.u_given_s.input_sizes[0] if len(self.u_given_s.input_sizes) == 1 else None
        n_u, n_v = self.n_u, self.n_v
        if n_s is None:
            raise ModelError("ALPHABET_MISMATCH", "u_given_s must have exactly one input axis")
        if self.v_given_us.input_sizes != (n_u, n_s):
            raise ModelError(
                "ALPHABET_MISMATCH",
                f"v_given_us inputs {self.v_given_us.input_sizes} != (|U|, |S|) = {(n_u, n_s)}",
            )
        if self.w_given_uvs.input_sizes != (n_u, n_v, n_s):
            raise ModelError(
                "ALPHABET_MISMATCH",
                f"w_given_uvs inputs {self.w_given_uvs.input_sizes} != "
                f"(|U|, |V|, |S|) = {(n_u, n_v, n_s)}",
            )

    @property
    def n_s(self) -> int:
        return self.u_given_s.input_sizes[0]

    @property
    def n_u(self) -> int:
        return self.u_given_s.output_size

    @property
    def n_v(self) -> int:
        return self.v_given_us.output_size

    @property
    def n_w(self) -> int:
        return self.w_given_uvs.output_size

    def kernel_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.u_given_s.rows, self.v_given_us.rows, self.w_given_uvs.rows


JOINT_AXES = ("S", "T", "E", "U", "V", "W")


def joint_tensor(src: SourceModel, pu: np.ndarray, pv: np.ndarray, pw: np.ndarray) -> np.ndarray:
    """Unvalidated (S,T,E,U,V,W) tensor; the optimiser's hot path."""
    aux_part = np.einsum("su,usv,uvsw->suvw", pu, pv, pw)
    return np.einsum("ste,suvw->steuvw", src.joint_ste(), aux_part)


def assemble_joint(src: SourceModel, aux: AuxChannel) -> JointDist:
    """Joint law of (S,T,E,U,V,W) under P_{UVW|S} P_{STE}."""
    if aux.n_s != src.n_s:
        raise ModelError(
            "ALPHABET_MISMATCH", f"aux channel is over |S| = {aux.n_s}, source has {src.n_s}"
        )
    cells = src.n_s * src.n_t * src.n_e * aux.n_u * aux.n_v * aux.n_w
    if cells > MAX_CELLS:
        raise ModelError("TOO_MANY_CELLS", f"{cells} cells exceeds the cap of {MAX_CELLS}")
    return JointDist(JOINT_AXES, joint_tensor(src, *aux.kernel_arrays()))


def sample_iid(src: SourceModel, n: int, seed) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw ``n`` i.i.d. triples (s, t, e); deterministic given ``seed``."""
    if n < 1:
        raise ModelError("BAD_LENGTH", "n must be at least 1")
    rng = np.random.default_rng(seed)
    p = src.joint_ste()
    flat = rng.choice(p.size, size=n, p=p.ravel() / p.sum())
    s, t, e = np.unravel_index(flat, p.shape)
    return s.astype(np.int64), t.astype(np.int64), e.astype(np.int64)
