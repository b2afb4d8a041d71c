"""Discrete memoryless channels: capacity and simulation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ModelError
from .prob import STOCHASTIC_TOL

MAX_ITER = 10**5


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic transition matrix ``transition[x, y] = P(y | x)``."""

    transition: np.ndarray

    def __post_init__(self):
        w = np.array(self.transition, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ModelError("SHAPE_MISMATCH", "transition must be a nonempty matrix")
        if np.any(~(w >= 0)):
            raise ModelError("NEGATIVE_MASS", "transition entries must be nonnegative")
        off = np.abs(w.sum(axis=1) - 1.0)
        if np.any(off > STOCHASTIC_TOL):
            row = int(np.argmax(off))
            raise ModelError("NOT_NORMALIZED", f"row {row} sums to {w[row].sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "transition", w)

    @property
    def n_in(self) -> int:
        return self.transition.shape[0]

    @property
    def n_out(self) -> int:
        return self.transition.shape[1]


def bsc(p: float) -> Channel:
    return Channel([[1 - p, p], [p, 1 - p]])


def identity(k: int = 2) -> Channel:
    return Channel(np.eye(k))


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    input_dist: np.ndarray
    iterations: int
    gap: float


def _row_divergences(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    """D(W(.|x) || q) in bits for every input x."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(w > 0, w / q[None, :], 1.0)
        return np.where(w > 0, w * np.log2(ratio), 0.0).sum(axis=1)


def capacity(ch: Channel, tol: float = 1e-9, max_iter: int = MAX_ITER) -> CapacityResult:
    """Blahut-Arimoto iteration from the uniform input distribution.

    Stops once ``max_x D(W(.|x)||q) - I(r; W)`` drops to ``tol``; both
    bracket the true capacity, so the lower value returned is within ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = ch.transition
    r = np.full(ch.n_in, 1.0 / ch.n_in)
    for it in range(1, max_iter + 1):
        q = r @ w
        d = _row_divergences(w, q)
        lower = float(r @ d)
        upper = float(d.max())
        gap = upper - lower
        if gap <= tol:
            return CapacityResult(max(lower, 0.0), r, it, max(gap, 0.0))
        r = r * np.exp2(d)
        r /= r.sum()
    raise ConvergenceError(
        "NO_CONVERGENCE", f"gap {gap:.3g} still above tol {tol:.3g} after {max_iter} iterations"
    )


def transmit(ch: Channel, x: np.ndarray, seed) -> np.ndarray:
    """Pass the word ``x`` through the channel, one independent use per symbol."""
    x = np.asarray(x, dtype=np.int64)
    if x.size and (x.min() < 0 or x.max() >= ch.n_in):
        raise ModelError("SYMBOL_OUT_OF_RANGE", f"input symbols must lie in [0, {ch.n_in})")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(ch.transition, axis=1)
    u = rng.random(x.shape)
    # y = number of cumulative breakpoints at or below u
    y = (u[..., None] >= cum[x]).sum(axis=-1)
    return np.minimum(y, ch.n_out - 1)
