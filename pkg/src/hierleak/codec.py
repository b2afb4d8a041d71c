"""Monte Carlo implementation of the two-phase layered binning scheme.

Codebook layout
---------------
* ``u`` words, binned into ``N_U`` bins; the bin index goes out in Phase 1.
* for each ``u`` word, ``v`` words binned into ``N_V`` bins; the bin index
  goes out in Phase 2 and the within-bin index feeds the key table ``kappa``.
* for each ``(u, v)`` pair, ``w`` words binned into ``N_W`` bins. The W bin
  index is split into ``b1`` (one-time padded with the key) and ``b2``
  (sent in the clear), both in Phase 1.

Bins are assigned round robin, so word ``j`` (0-based) sits in bin
``j % N + 1`` at within-bin position ``j // N + 1``. All indices handed
around are 1-based.

Typicality is additive and conditional, which stays usable at small n: a
candidate word is typical given its context word when every pair count is
within ``delta * n`` of ``P(x|c)`` times the context's own count, and pairs
of conditional probability zero never occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import dmc
from .errors import ModelError, ResourceError
from .prob import AuxChannel, assemble_joint
from .region import (
    Reconstructions,
    ScenarioConfig,
    evaluate_point,
    info_terms,
    key_rates,
    optimal_reconstructions,
)

IDEAL_PIPE = "ideal_pipe"
RANDOM_CODE = "random_code"
CHANNEL_MODES = (IDEAL_PIPE, RANDOM_CODE)
MAX_WORDS = 2**24
TYPICALITY_EPS = 1e-12


@dataclass(frozen=True)
class SimParams:
    n: int
    delta: float = 0.21
    channel_mode: str = IDEAL_PIPE
    seed: int = 0
    max_words: int = MAX_WORDS

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("BAD_LENGTH", "n must be at least 1")
        if not 0 < self.delta < 1:
            raise ModelError("BAD_DELTA", "delta must lie in (0, 1)")
        if self.channel_mode not in CHANNEL_MODES:
            raise ModelError("BAD_MODE", f"channel_mode must be one of {CHANNEL_MODES}")


# --------------------------------------------------------------------------
# index arithmetic


def book_size(n: int, exponent: float) -> int:
    """ceil(2^(n * exponent)), with tiny negative exponents read as zero."""
    return max(1, math.ceil(2.0 ** (n * max(exponent, 0.0)) - 1e-9))


def bin_of(j: np.ndarray | int, n_bins: int):
    """1-based bin of 0-based word index ``j``."""
    return j % n_bins + 1


def within_bin(j: np.ndarray | int, n_bins: int):
    """1-based position of word ``j`` inside its bin."""
    return j // n_bins + 1


def bin_members(b: int, n_bins: int, n_words: int) -> np.ndarray:
    """0-based word indices in 1-based bin ``b``."""
    return np.arange(b - 1, n_words, n_bins)


def otp_encrypt(b1: int, k: int, n_k: int) -> int:
    """``b1 (+) k`` on [1..n_k]."""
    return (b1 + k - 2) % n_k + 1


def otp_decrypt(c1: int, k: int, n_k: int) -> int:
    """Inverse of :func:`otp_encrypt`."""
    return (c1 - k) % n_k + 1


def combine_key(l22: int, k2: int, n_k2: int) -> int:
    """Pack the Phase-2 randomisation index and the source key into [1..N_K1*N_K2]."""
    return (l22 - 1) * n_k2 + k2


def split_w_bin(b: int, n_k: int) -> tuple[int, int]:
    """W bin index to the padded part b1 in [1..n_k] and the clear part b2."""
    return (b - 1) % n_k + 1, (b - 1) // n_k + 1


def join_w_bin(b1: int, b2: int, n_k: int) -> int:
    return (b2 - 1) * n_k + b1


# --------------------------------------------------------------------------
# typicality


@dataclass(frozen=True, eq=False)
class _Table:
    """Joint pmf ``p[x, c]`` of a candidate symbol x and a context symbol c."""

    p: np.ndarray

    @property
    def k(self) -> int:
        return self.p.shape[0]

    @property
    def c(self) -> int:
        return self.p.shape[1]

    def counts(self, words: np.ndarray, ctx: np.ndarray) -> np.ndarray:
        """Joint type counts, shape (m, k, c), of each word against ``ctx``."""
        words = np.atleast_2d(words)
        m, n = words.shape
        flat = (np.arange(m)[:, None] * self.k + words) * self.c + ctx[None, :]
        return np.bincount(flat.ravel(), minlength=m * self.k * self.c).reshape(m, self.k, self.c)

    @cached_property
    def cond(self) -> np.ndarray:
        """P(x | c); columns of zero mass are all zero."""
        pc = self.p.sum(axis=0, keepdims=True)
        return np.divide(self.p, pc, out=np.zeros_like(self.p), where=pc > 0)

    def typical(self, words: np.ndarray, ctx: np.ndarray, delta: float) -> np.ndarray:
        """Conditional typicality of each word given the observed context.

        The joint type is compared with ``P(x|c)`` times the context's own
        type, so an unusual context alone never rejects a candidate.
        Contexts of zero probability constrain nothing.
        """
        n = ctx.shape[0]
        cnt = self.counts(words, ctx)
        n_c = np.bincount(ctx, minlength=self.c)
        expected = self.cond * n_c[None, :]
        live = (self.p.sum(axis=0) > 0)[None, None, :]
        close = np.abs(cnt - expected[None]) / n <= delta + TYPICALITY_EPS
        absent = (cnt == 0) | (self.cond[None] > 0)
        return np.all((close & absent) | ~live, axis=(1, 2))

    def loglik(self, words: np.ndarray, ctx: np.ndarray) -> np.ndarray:
        """sum_i log P(x_i, c_i); -inf when a zero-probability tuple occurs."""
        cnt = self.counts(words, ctx)
        with np.errstate(divide="ignore"):
            logp = np.log2(self.p)
        impossible = np.any((cnt > 0) & (self.p[None] == 0), axis=(1, 2))
        ll = np.where(cnt > 0, cnt * np.where(np.isfinite(logp), logp, 0.0)[None], 0.0)
        out = ll.sum(axis=(1, 2))
        out[impossible] = -np.inf
        return out


def _select(table: _Table, words: np.ndarray, ctx: np.ndarray, delta: float,
            candidates: np.ndarray | None = None) -> tuple[int, int]:
    """Pick a word from ``words[candidates]``.

    Returns ``(index into words, number of typical candidates)``. The first
    typical candidate wins; with none typical, the most likely candidate is
    used (first on ties).
    """
    if candidates is None:
        candidates = np.arange(words.shape[0])
    if candidates.size == 0:
        return -1, 0
    sub = words[candidates]
    typ = np.flatnonzero(table.typical(sub, ctx, delta))
    if typ.size:
        return int(candidates[typ[0]]), int(typ.size)
    return int(candidates[int(np.argmax(table.loglik(sub, ctx)))]), 0


def _decode(table: _Table, words: np.ndarray, ctx: np.ndarray, delta: float,
            candidates: np.ndarray) -> tuple[int, bool]:
    """Unique-typicality decoding inside ``candidates``.

    Returns ``(index into words, ok)``. With zero or several typical
    candidates the most likely typical one (or, failing that, the most likely
    candidate overall) is returned and ``ok`` is False.
    """
    if candidates.size == 0:
        return -1, False
    sub = words[candidates]
    typ = table.typical(sub, ctx, delta)
    n_typ = int(typ.sum())
    if n_typ == 1:
        return int(candidates[np.flatnonzero(typ)[0]]), True
    ll = table.loglik(sub, ctx)
    if n_typ > 1:
        ll = np.where(typ, ll, -np.inf)
    return int(candidates[int(np.argmax(ll))]), False


# --------------------------------------------------------------------------
# codebooks


def _cond(p_joint: np.ndarray) -> np.ndarray:
    """Normalise the last axis; rows of zero mass become uniform."""
    s = p_joint.sum(axis=-1, keepdims=True)
    k = p_joint.shape[-1]
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(s > 0, p_joint / np.where(s > 0, s, 1.0), 1.0 / k)


def _draw(rng: np.random.Generator, cond_rows: np.ndarray, m: int) -> np.ndarray:
    """``m`` words; ``cond_rows`` has shape (n, k), one pmf per position."""
    n, k = cond_rows.shape
    cum = np.cumsum(cond_rows, axis=1)
    u = rng.random((m, n))
    x = (u[..., None] >= cum[None, :, :]).sum(axis=-1)
    return np.minimum(x, k - 1).astype(np.int16)


@dataclass(frozen=True)
class BookSizes:
    n_u_words: int
    n_u_bins: int
    n_v_words: int
    n_v_bins: int
    n_w_words: int
    n_w_bins: int
    n_k1: int
    n_k2: int
    n_b2: int

    @property
    def n_k(self) -> int:
        return self.n_k1 * self.n_k2

    @property
    def phase1_card(self) -> int:
        return self.n_u_bins * self.n_k * self.n_b2

    @property
    def phase2_card(self) -> int:
        return self.n_v_bins * self.n_k1

    def total_words(self, random_code: bool = False) -> int:
        total = self.n_u_words * (1 + self.n_v_words * (1 + self.n_w_words))
        if random_code:
            total += self.phase1_card + self.phase2_card
        return total

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__} | {
            "n_k": self.n_k, "phase1_card": self.phase1_card, "phase2_card": self.phase2_card}


def book_sizes(terms: dict[str, float], r_k1: float, r_k2: float, n: int, delta: float) -> BookSizes:
    """Codebook, bin and key cardinalities for blocklength ``n``.

    Bin counts are capped at the number of words so every bin is nonempty.
    ``b2`` gets just enough range that ``(b1, b2)`` recovers the W bin.
    """
    nu = book_size(n, terms["I(U;S)"] + delta)
    nv = book_size(n, terms["I(V;S|U)"] + 2 * delta)
    nw = book_size(n, terms["I(W;S|V,U)"] + 2 * delta)
    bu = min(book_size(n, terms["I(U;S|E)"] + 2 * delta), nu)
    bv = min(book_size(n, terms["I(V;S|T,U)"] + 2 * delta), nv)
    bw = min(book_size(n, terms["I(W;S|T,U,V)"] + 2 * delta), nw)
    k1 = book_size(n, max(r_k1, 0.0))
    k2 = book_size(n, max(r_k2, 0.0))
    b2 = -(-bw // (k1 * k2))
    return BookSizes(nu, bu, nv, bv, nw, bw, k1, k2, b2)


class CodebookSet:
    """Layered random codebooks, bin maps and the key table for one scheme.

    ``v`` and ``w`` sub-books and key-table rows are generated on first use
    from seeds derived from ``(seed, parent indices)``, so the set behaves as
    if fully drawn up front while only touching what encoding needs.
    """

    def __init__(self, aux: AuxChannel, sc: ScenarioConfig, sp: SimParams):
        self.aux, self.sc, self.sp = aux, sc, sp
        n = sp.n
        self.n = n
        self.n1 = math.ceil(sc.rho1 * n - 1e-9)
        self.n2 = math.ceil(sc.rho2 * n - 1e-9)
        joint = assemble_joint(sc.src, aux)
        m = joint.mass  # (S,T,E,U,V,W)
        self.terms = info_terms(m)
        r_k1, r_k2 = key_rates(joint, sc.rho2c2)
        self.r_k1, self.r_k2 = max(r_k1, 0.0), max(r_k2, 0.0)
        self.sizes = book_sizes(self.terms, self.r_k1, self.r_k2, n, sp.delta)
        random_code = sp.channel_mode == RANDOM_CODE
        total = self.sizes.total_words(random_code)
        if total > sp.max_words:
            raise ResourceError(
                "SIZE_EXPLOSION",
                f"{total} codewords at n={n} exceeds the cap of {sp.max_words}; "
                f"try n <= {max_feasible_n(self.terms, self.r_k1, self.r_k2, sp, random_code)} "
                f"or a smaller delta",
                suggestion={"max_n": max_feasible_n(self.terms, self.r_k1, self.r_k2, sp, random_code)},
            )
        self.recon, self.region_d1, self.region_d2 = optimal_reconstructions(m, sc.distortion)
        nS, nT, nE, nU, nV, nW = m.shape
        self.shape = m.shape
        p_us = np.einsum("steuvw->us", m)
        p_uvs = np.einsum("steuvw->uvs", m)
        p_uvws = np.einsum("steuvw->uvws", m)
        p_ue = np.einsum("steuvw->ue", m)
        p_uvt = np.einsum("steuvw->uvt", m)
        p_uvwt = np.einsum("steuvw->uvwt", m)
        # candidate symbol first, flattened context second
        self.enc_u = _Table(p_us)
        self.enc_v = _Table(np.moveaxis(p_uvs, 1, 0).reshape(nV, nU * nS))
        self.enc_w = _Table(np.moveaxis(p_uvws, 2, 0).reshape(nW, nU * nV * nS))
        self.dec_u = _Table(p_ue)
        self.dec_v = _Table(np.moveaxis(p_uvt, 1, 0).reshape(nV, nU * nT))
        self.dec_w = _Table(np.moveaxis(p_uvwt, 2, 0).reshape(nW, nU * nV * nT))
        self.p_u = p_us.sum(axis=1)
        self.p_v_u = _cond(p_uvs.sum(axis=2))
        self.p_w_uv = _cond(p_uvws.sum(axis=3))

        rng = np.random.default_rng([sp.seed, 1])
        self.u_book = _draw(rng, np.broadcast_to(self.p_u, (n, nU)), self.sizes.n_u_words)
        self._v: dict[int, np.ndarray] = {}
        self._w: dict[tuple[int, int], np.ndarray] = {}
        self._kappa: dict[tuple[int, int], np.ndarray] = {}
        self.per_bin_v = -(-self.sizes.n_v_words // self.sizes.n_v_bins)

        self.x1_book = self.x2_book = None
        self.c1_cap = sc.c1
        self.c2_cap = sc.c2
        if random_code:
            cap1 = dmc.capacity(sc.ch1)
            cap2 = dmc.capacity(sc.ch2)
            self.px1, self.px2 = cap1.input_dist, cap2.input_dist
            rng = np.random.default_rng([sp.seed, 5])
            self.x1_book = _draw(rng, np.broadcast_to(self.px1, (self.n1, sc.ch1.n_in)),
                                 self.sizes.phase1_card)
            self.x2_book = _draw(rng, np.broadcast_to(self.px2, (self.n2, sc.ch2.n_in)),
                                 self.sizes.phase2_card)
            self.ch1_table = _Table(self.px1[:, None] * sc.ch1.transition)
            self.ch2_table = _Table(self.px2[:, None] * sc.ch2.transition)

    # lazily drawn sub-books ------------------------------------------------

    def v_book(self, u_idx: int) -> np.ndarray:
        book = self._v.get(u_idx)
        if book is None:
            rng = np.random.default_rng([self.sp.seed, 2, u_idx])
            book = _draw(rng, self.p_v_u[self.u_book[u_idx]], self.sizes.n_v_words)
            self._v[u_idx] = book
        return book

    def w_book(self, u_idx: int, v_idx: int) -> np.ndarray:
        key = (u_idx, v_idx)
        book = self._w.get(key)
        if book is None:
            rng = np.random.default_rng([self.sp.seed, 3, u_idx, v_idx])
            u, v = self.u_book[u_idx], self.v_book(u_idx)[v_idx]
            book = _draw(rng, self.p_w_uv[u, v], self.sizes.n_w_words)
            self._w[key] = book
        return book

    def kappa(self, u_idx: int, v_bin: int) -> np.ndarray:
        """Key table for one (u word, v bin): within-bin position -> [1..N_K2]."""
        key = (u_idx, v_bin)
        tab = self._kappa.get(key)
        if tab is None:
            rng = np.random.default_rng([self.sp.seed, 4, u_idx, v_bin])
            tab = rng.integers(1, self.sizes.n_k2 + 1, size=self.per_bin_v)
            self._kappa[key] = tab
        return tab

    def pipe_limits(self) -> tuple[float, float]:
        """Bits each ideal pipe carries: capacity plus the delta and ceiling overhead."""
        slack = 4 * self.sp.delta * self.n + 3
        return self.n1 * self.c1_cap + slack, self.n2 * self.c2_cap + slack


def max_feasible_n(terms, r_k1, r_k2, sp: SimParams, random_code=False) -> int:
    n = sp.n
    while n > 1 and book_sizes(terms, r_k1, r_k2, n, sp.delta).total_words(random_code) > sp.max_words:
        n -= 1
    return n


def build_codebooks(aux: AuxChannel, sc: ScenarioConfig, sp: SimParams) -> CodebookSet:
    """Draw the codebook set; raises ``SIZE_EXPLOSION`` past ``sp.max_words``."""
    return CodebookSet(aux, sc, sp)


# --------------------------------------------------------------------------
# encoding and decoding


@dataclass(frozen=True)
class Indices:
    """Deterministic part of the encoder output for one source word."""

    u: int
    v: int
    w: int
    l11: int
    v_bin: int
    l_v: int
    k2: int
    w_bin: int
    b1: int
    b2: int
    enc_err: bool


@dataclass(frozen=True)
class Payload1:
    l11: int
    c1: int
    b2: int

    def flat(self, sizes: BookSizes) -> int:
        return ((self.l11 - 1) * sizes.n_k + (self.c1 - 1)) * sizes.n_b2 + (self.b2 - 1)

    @classmethod
    def unflat(cls, idx: int, sizes: BookSizes) -> "Payload1":
        b2 = idx % sizes.n_b2 + 1
        rest = idx // sizes.n_b2
        return cls(rest // sizes.n_k + 1, rest % sizes.n_k + 1, b2)


@dataclass(frozen=True)
class Payload2:
    l21: int
    l22: int

    def flat(self, sizes: BookSizes) -> int:
        return (self.l21 - 1) * sizes.n_k1 + (self.l22 - 1)

    @classmethod
    def unflat(cls, idx: int, sizes: BookSizes) -> "Payload2":
        return cls(idx // sizes.n_k1 + 1, idx % sizes.n_k1 + 1)


def encode_indices(s: np.ndarray, cb: CodebookSet) -> Indices:
    """Typicality encoding of ``s``: first typical u, then v, then w."""
    s = np.asarray(s, dtype=np.int64)
    nS = cb.shape[0]
    nU, nV = cb.shape[3], cb.shape[4]
    delta = cb.sp.delta
    ui, n_typ_u = _select(cb.enc_u, cb.u_book, s, delta)
    u = cb.u_book[ui].astype(np.int64)
    vbook = cb.v_book(ui)
    vi, n_typ_v = _select(cb.enc_v, vbook, u * nS + s, delta)
    v = vbook[vi].astype(np.int64)
    wi, n_typ_w = _select(cb.enc_w, cb.w_book(ui, vi), (u * nV + v) * nS + s, delta)
    sz = cb.sizes
    v_bin, l_v = int(bin_of(vi, sz.n_v_bins)), int(within_bin(vi, sz.n_v_bins))
    k2 = int(cb.kappa(ui, v_bin)[l_v - 1])
    w_bin = int(bin_of(wi, sz.n_w_bins))
    b1, b2 = split_w_bin(w_bin, sz.n_k)
    return Indices(
        u=ui, v=vi, w=wi,
        l11=int(bin_of(ui, sz.n_u_bins)),
        v_bin=v_bin, l_v=l_v, k2=k2, w_bin=w_bin, b1=b1, b2=b2,
        enc_err=min(n_typ_u, n_typ_v, n_typ_w) == 0,
    )


def payloads(idx: Indices, l22: int, cb: CodebookSet) -> tuple[Payload1, Payload2]:
    sz = cb.sizes
    k = combine_key(l22, idx.k2, sz.n_k2)
    return Payload1(idx.l11, otp_encrypt(idx.b1, k, sz.n_k), idx.b2), Payload2(idx.v_bin, l22)


@dataclass
class TrialRecord:
    s: np.ndarray
    t: np.ndarray
    e: np.ndarray
    indices: Indices | None = None
    l22: int = 1
    payload1: Payload1 | None = None
    payload2: Payload2 | None = None
    x1: np.ndarray | None = None
    y1: np.ndarray | None = None
    x2: np.ndarray | None = None
    y2: np.ndarray | None = None
    s_hat1: np.ndarray | None = None
    s_hat2: np.ndarray | None = None
    enc_err: bool = False
    overflow1: bool = False
    overflow2: bool = False
    dec1_err: bool = False
    dec2_err: bool = False
    u_hat: int = -1
    v_hat: int = -1
    w_hat: int = -1
    d1: float = float("nan")
    d2: float = float("nan")


def encode(s: np.ndarray, cb: CodebookSet, sp: SimParams | None = None, rng=None):
    """Full encoder: indices, fresh Phase-2 randomisation index, one-time pad.

    Returns ``(payload1, payload2, record)``.
    """
    rng = np.random.default_rng(rng)
    idx = encode_indices(s, cb)
    l22 = int(rng.integers(1, cb.sizes.n_k1 + 1))
    p1, p2 = payloads(idx, l22, cb)
    rec = TrialRecord(np.asarray(s), None, None, indices=idx, l22=l22,
                      payload1=p1, payload2=p2, enc_err=idx.enc_err)
    return p1, p2, rec


@dataclass(frozen=True)
class Phase1State:
    u_hat: int
    c1: int
    b2: int


def decode_phase1(p1: Payload1, e: np.ndarray, cb: CodebookSet) -> tuple[np.ndarray, Phase1State, bool]:
    """Recover the u word from its bin and E; the padded W index is held back.

    Returns ``(s_hat1, held state, ok)``.
    """
    e = np.asarray(e, dtype=np.int64)
    sz = cb.sizes
    members = bin_members(p1.l11, sz.n_u_bins, sz.n_u_words)
    ui, ok = _decode(cb.dec_u, cb.u_book, e, cb.sp.delta, members)
    if ui < 0:
        ui, ok = 0, False
    s_hat = cb.recon.h1[cb.u_book[ui].astype(np.int64), e]
    return s_hat, Phase1State(ui, p1.c1, p1.b2), ok


def decode_phase2(p2: Payload2, t: np.ndarray, state: Phase1State, cb: CodebookSet,
                  key_override: int | None = None) -> tuple[np.ndarray, int, int, bool]:
    """Decode v from its bin and T, derive the key, unpad, then decode w.

    ``key_override`` replaces the derived source key (for wrong-key tests).
    Returns ``(s_hat2, v index, w index, ok)``.
    """
    t = np.asarray(t, dtype=np.int64)
    sz = cb.sizes
    nT = cb.shape[1]
    nV = cb.shape[4]
    delta = cb.sp.delta
    ui = state.u_hat
    u = cb.u_book[ui].astype(np.int64)
    vbook = cb.v_book(ui)
    members = bin_members(p2.l21, sz.n_v_bins, sz.n_v_words)
    vi, ok_v = _decode(cb.dec_v, vbook, u * nT + t, delta, members)
    if vi < 0:
        vi, ok_v = 0, False
    l_v = int(within_bin(vi, sz.n_v_bins))
    k2 = int(cb.kappa(ui, p2.l21)[l_v - 1]) if key_override is None else key_override
    b1 = otp_decrypt(state.c1, combine_key(p2.l22, k2, sz.n_k2), sz.n_k)
    w_bin = join_w_bin(b1, state.b2, sz.n_k)
    v = vbook[vi].astype(np.int64)
    wbook = cb.w_book(ui, vi)
    members = bin_members(w_bin, sz.n_w_bins, sz.n_w_words) if w_bin <= sz.n_w_bins else np.array([], int)
    wi, ok_w = _decode(cb.dec_w, wbook, (u * nV + v) * nT + t, delta, members)
    if wi < 0:
        wi, ok_w = 0, False
    s_hat = cb.recon.h2[wbook[wi].astype(np.int64), v, t]
    return s_hat, vi, wi, ok_v and ok_w


def _channel_decode(table: _Table, book: np.ndarray, y: np.ndarray, delta: float) -> tuple[int, bool]:
    return _decode(table, book, y.astype(np.int64), delta, np.arange(book.shape[0]))


def _mean_distortion(d: np.ndarray, s: np.ndarray, s_hat: np.ndarray) -> float:
    return float(d[s, s_hat].mean())


def run_trial(cb: CodebookSet, trial_seed) -> TrialRecord:
    """One source block through both phases."""
    from .prob import sample_iid

    sc, sp, sz = cb.sc, cb.sp, cb.sizes
    rng = np.random.default_rng(trial_seed)
    s, t, e = sample_iid(sc.src, cb.n, rng)
    p1, p2, rec = encode(s, cb, rng=rng)
    rec.t, rec.e = t, e
    lim1, lim2 = cb.pipe_limits()
    if sp.channel_mode == IDEAL_PIPE:
        rec.overflow1 = math.log2(sz.phase1_card) > lim1 + 1e-9
        rec.overflow2 = math.log2(sz.phase2_card) > lim2 + 1e-9
        # an overflowing pipe delivers nothing usable
        r1 = Payload1(1, 1, 1) if rec.overflow1 else p1
        r2 = Payload2(1, 1) if rec.overflow2 else p2
        ch_ok1 = ch_ok2 = True
    else:
        rec.x1 = cb.x1_book[p1.flat(sz)]
        rec.y1 = dmc.transmit(sc.ch1, rec.x1, rng)
        j1, ch_ok1 = _channel_decode(cb.ch1_table, cb.x1_book, rec.y1, sp.delta)
        r1 = Payload1.unflat(j1, sz)
        rec.x2 = cb.x2_book[p2.flat(sz)]
        rec.y2 = dmc.transmit(sc.ch2, rec.x2, rng)
        j2, ch_ok2 = _channel_decode(cb.ch2_table, cb.x2_book, rec.y2, sp.delta)
        r2 = Payload2.unflat(j2, sz)
    s_hat1, state, ok1 = decode_phase1(r1, e, cb)
    s_hat2, vi, wi, ok2 = decode_phase2(r2, t, state, cb)
    d = sc.distortion.d
    rec.s_hat1, rec.s_hat2 = s_hat1, s_hat2
    rec.u_hat, rec.v_hat, rec.w_hat = state.u_hat, vi, wi
    rec.dec1_err = not (ok1 and ch_ok1) or rec.overflow1
    rec.dec2_err = not (ok2 and ch_ok2) or rec.overflow2
    rec.d1 = _mean_distortion(d, s, s_hat1)
    rec.d2 = _mean_distortion(d, s, s_hat2)
    return rec


TRIAL_HEADER = ["trial", "enc_err", "dec1_err", "dec2_err", "d1", "d2"]


@dataclass
class ExperimentResult:
    summary: dict
    rows: list[list] = field(default_factory=list)


def run_experiment(aux: AuxChannel, sc: ScenarioConfig, sp: SimParams, trials: int,
                   oracle: bool = False, keep_rows: bool = True) -> ExperimentResult:
    """Monte Carlo run of ``trials`` independent blocks over one codebook draw."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cb = build_codebooks(aux, sc, sp)
    recs = [run_trial(cb, [sp.seed, 7, i]) for i in range(trials)]
    d1 = np.array([r.d1 for r in recs])
    d2 = np.array([r.d2 for r in recs])
    point = evaluate_point(aux, sc)
    summary = {
        "n": sp.n,
        "n1": cb.n1,
        "n2": cb.n2,
        "delta": sp.delta,
        "channel_mode": sp.channel_mode,
        "seed": sp.seed,
        "trials": trials,
        "d1": float(np.sum(d1) / trials),
        "d2": float(np.sum(d2) / trials),
        "enc_err_rate": float(np.mean([r.enc_err for r in recs])),
        "dec1_err_rate": float(np.mean([r.dec1_err for r in recs])),
        "dec2_err_rate": float(np.mean([r.dec2_err for r in recs])),
        "overflow1_rate": float(np.mean([r.overflow1 for r in recs])),
        "overflow2_rate": float(np.mean([r.overflow2 for r in recs])),
        "region_d1": point.d1,
        "region_d2": point.d2,
        "leakage_bound": point.leakage_lb,
        "r_k1": cb.r_k1,
        "r_k2": cb.r_k2,
        "sizes": cb.sizes.to_dict(),
    }
    if oracle:
        from .oracle import exact_leakage, secure_index
        from .errors import ResourceError as _RE

        try:
            summary["leakage_exact"] = exact_leakage(cb, sc, sp)
            summary["secure_index"] = secure_index(cb, sc, sp)
        except _RE as exc:
            summary["oracle_skipped"] = str(exc)
    rows = []
    if keep_rows:
        rows = [[i, int(r.enc_err), int(r.dec1_err), int(r.dec2_err), r.d1, r.d2]
                for i, r in enumerate(recs)]
    return ExperimentResult(summary, rows)
