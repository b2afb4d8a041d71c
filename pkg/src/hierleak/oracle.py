"""Brute-force verifiers, independent of the fast evaluation paths.

Everything here sums over explicit outcomes; nothing is reused from the
entropy decompositions in :mod:`hierleak.prob` or :mod:`hierleak.region`.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .codec import IDEAL_PIPE, CodebookSet, SimParams, encode_indices, payloads
from .errors import ModelError, ResourceError
from .prob import JointDist
from .region import ScenarioConfig

MAX_STATES = 2**26


@dataclass(frozen=True)
class EnumerationBudget:
    max_states: int = MAX_STATES

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be positive")

    def check(self, states: int, what: str) -> None:
        if states > self.max_states:
            raise ResourceError(
                "BUDGET_EXCEEDED",
                f"{what} needs {states} states, budget is {self.max_states}",
            )


def brute_mi(joint: JointDist, a, b, c=(), budget: EnumerationBudget | None = None) -> float:
    """I(a; b | c) as sum_cells p log2 [p(a,b,c) p(c) / (p(a,c) p(b,c))].

    Marginals are accumulated cell by cell in dictionaries.
    """
    budget = budget or EnumerationBudget()
    a, b, c = (tuple([x]) if isinstance(x, str) else tuple(x) for x in (a, b, c))
    for name in a + b + c:
        if name not in joint.axes:
            raise ModelError("UNKNOWN_AXIS", f"no axis named {name!r}")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ModelError("OVERLAPPING_SETS", "axis sets must be disjoint")
    budget.check(joint.mass.size, "brute_mi")
    pos = {name: i for i, name in enumerate(joint.axes)}
    abc = defaultdict(float)
    ac = defaultdict(float)
    bc = defaultdict(float)
    cc = defaultdict(float)
    mass = joint.mass
    for cell in itertools.product(*(range(k) for k in mass.shape)):
        p = float(mass[cell])
        if p == 0.0:
            continue
        ka = tuple(cell[pos[x]] for x in a)
        kb = tuple(cell[pos[x]] for x in b)
        kc = tuple(cell[pos[x]] for x in c)
        abc[ka, kb, kc] += p
        ac[ka, kc] += p
        bc[kb, kc] += p
        cc[kc] += p
    total = 0.0
    for (ka, kb, kc), p in abc.items():
        total += p * math.log2(p * cc[kc] / (ac[ka, kc] * bc[kb, kc]))
    return total


def _words(k: int, n: int) -> np.ndarray:
    return np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64).reshape(-1, n)


def _word_probs(p: np.ndarray, words: np.ndarray) -> np.ndarray:
    return np.prod(p[words], axis=1)


def _source_tables(sc: ScenarioConfig, n: int):
    src = sc.src
    s_words = _words(src.n_s, n)
    e_words = _words(src.n_e, n)
    p_se1 = np.einsum("ste->se", src.joint_ste())
    # P(s^n, e^n) = prod_i p(s_i, e_i)
    p_se = np.ones((s_words.shape[0], e_words.shape[0]))
    for i in range(n):
        p_se *= p_se1[s_words[:, i][:, None], e_words[:, i][None, :]]
    return s_words, e_words, p_se


def _mi_from_joint(p: np.ndarray, a_axes: tuple[int, ...]) -> float:
    """I(A; rest) of a dense joint, A the listed axes: sum p log p/(p_A p_rest)."""
    rest = tuple(i for i in range(p.ndim) if i not in a_axes)
    pa = p.sum(axis=rest, keepdims=True)
    pr = p.sum(axis=a_axes, keepdims=True)
    nz = p > 0
    ratio = p[nz] / (pa * pr)[nz]
    return float((p[nz] * np.log2(ratio)).sum())


def phase1_output_law(cb: CodebookSet, s_words: np.ndarray, budget: EnumerationBudget):
    """P(y1 | s^n) for every source word, as a (|S|^n, |Y1|) matrix.

    In ideal-pipe mode the output alphabet is the flattened payload index;
    otherwise it is every channel output word of length n1.
    """
    sz = cb.sizes
    n_k1 = sz.n_k1
    enc = [encode_indices(s, cb) for s in s_words]
    if cb.sp.channel_mode == IDEAL_PIPE:
        n_y = sz.phase1_card
        budget.check(s_words.shape[0] * n_y, "phase-1 output law")
        law = np.zeros((s_words.shape[0], n_y))
        for i, idx in enumerate(enc):
            for l22 in range(1, n_k1 + 1):
                p1, _ = payloads(idx, l22, cb)
                law[i, p1.flat(sz)] += 1.0 / n_k1
        return law, enc
    ch = cb.sc.ch1
    y_words = _words(ch.n_out, cb.n1)
    budget.check(s_words.shape[0] * y_words.shape[0], "phase-1 output law")
    # P(y^n1 | x word) for every codeword
    w = ch.transition
    px = np.ones((cb.x1_book.shape[0], y_words.shape[0]))
    xb = cb.x1_book.astype(np.int64)
    for i in range(cb.n1):
        px *= w[xb[:, i][:, None], y_words[:, i][None, :]]
    law = np.zeros((s_words.shape[0], y_words.shape[0]))
    for i, idx in enumerate(enc):
        for l22 in range(1, n_k1 + 1):
            p1, _ = payloads(idx, l22, cb)
            law[i] += px[p1.flat(sz)] / n_k1
    return law, enc


def exact_leakage(cb: CodebookSet, sc: ScenarioConfig, sp: SimParams,
                  budget: EnumerationBudget | None = None) -> float:
    """(1/n) I(S^n; Y1, E^n) for the realised codebook, by enumeration.

    Sums over source and side-information words, the encoder's Phase-2
    randomisation index and (in random-code mode) the Phase-1 channel.
    """
    budget = budget or EnumerationBudget()
    n = cb.n
    n_sw = sc.src.n_s ** n
    n_ew = sc.src.n_e ** n
    budget.check(n_sw * n_ew, "source enumeration")
    s_words, e_words, p_se = _source_tables(sc, n)
    law, _ = phase1_output_law(cb, s_words, budget)
    budget.check(p_se.size * law.shape[1], "exact leakage")
    joint = p_se[:, :, None] * law[:, None, :]
    return _mi_from_joint(joint, (0,)) / n


def source_side_info_leakage(sc: ScenarioConfig, n: int) -> float:
    """(1/n) I(S^n; E^n) by enumeration."""
    _, _, p_se = _source_tables(sc, n)
    return _mi_from_joint(p_se, (0,)) / n


def secure_index(cb: CodebookSet, sc: ScenarioConfig, sp: SimParams,
                 budget: EnumerationBudget | None = None) -> float:
    """log2 N_K2 - H(kappa(L) | E^n, U^n, b(W^n)) in bits, by enumeration.

    The conditioning is everything the Phase-1 receiver could hold besides
    the ciphertext: its side information, the u word and the plaintext W bin.
    """
    budget = budget or EnumerationBudget()
    n = cb.n
    n_k2 = cb.sizes.n_k2
    if n_k2 == 1:
        return 0.0
    budget.check(sc.src.n_s ** n * sc.src.n_e ** n, "secure index")
    s_words, e_words, p_se = _source_tables(sc, n)
    enc = [encode_indices(s, cb) for s in s_words]
    # group source words by (u, W bin, key) and accumulate P(e, u, bin, key)
    ctx_ids: dict[tuple[int, int], int] = {}
    rows = []
    for i, idx in enumerate(enc):
        c = ctx_ids.setdefault((idx.u, idx.w_bin), len(ctx_ids))
        rows.append((i, c, idx.k2 - 1))
    p = np.zeros((e_words.shape[0], len(ctx_ids), n_k2))
    for i, c, k in rows:
        p[:, c, k] += p_se[i]
    pk_ctx = p.sum(axis=2, keepdims=True)
    nz = p > 0
    h_cond = float(-(p[nz] * np.log2(p[nz] / np.broadcast_to(pk_ctx, p.shape)[nz])).sum())
    return max(0.0, math.log2(n_k2) - h_cond)


def leakage_report(cb: CodebookSet, sc: ScenarioConfig, sp: SimParams, bound: float,
                   budget: EnumerationBudget | None = None) -> dict:
    exact = exact_leakage(cb, sc, sp, budget)
    return {"leakage_exact": exact, "leakage_bound": bound, "gap": exact - bound,
            "n": sp.n, "seed": sp.seed}
