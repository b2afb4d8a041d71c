import time

import numpy as np
import pytest

from conftest import h2
from hierleak import dmc
from hierleak.errors import ConvergenceError, ModelError


@pytest.mark.parametrize("p", [0.0, 0.05, 0.11, 0.3, 0.5])
def test_bsc_capacity(p):
    res = dmc.capacity(dmc.bsc(p))
    assert res.capacity == pytest.approx(1 - h2(p), abs=1e-6)


def test_identity_capacity():
    assert dmc.capacity(dmc.identity(4)).capacity == pytest.approx(2.0, abs=1e-9)


def test_z_channel_capacity():
    # Z channel with crossover q: C = log2(1 + (1-q) q^(q/(1-q)))
    q = 0.3
    ch = dmc.Channel([[1, 0], [q, 1 - q]])
    expected = np.log2(1 + (1 - q) * q ** (q / (1 - q)))
    assert dmc.capacity(ch, tol=1e-10).capacity == pytest.approx(expected, abs=1e-8)


def test_capacity_invariant_to_output_permutation():
    w = np.array([[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]])
    a = dmc.capacity(dmc.Channel(w)).capacity
    b = dmc.capacity(dmc.Channel(w[:, [2, 0, 1]])).capacity
    c = dmc.capacity(dmc.Channel(w[[1, 0]])).capacity
    assert a == pytest.approx(b, abs=1e-8) and a == pytest.approx(c, abs=1e-8)


def test_no_convergence():
    ch = dmc.Channel([[1, 0], [0.3, 0.7]])
    with pytest.raises(ConvergenceError, match="NO_CONVERGENCE"):
        dmc.capacity(ch, tol=1e-14, max_iter=3)


def test_capacity_fast():
    t0 = time.perf_counter()
    dmc.capacity(dmc.bsc(0.11))
    assert time.perf_counter() - t0 < 1.0


def test_channel_rejects_bad_rows():
    with pytest.raises(ModelError):
        dmc.Channel([[0.5, 0.4]])


def test_transmit_statistics_and_range():
    ch = dmc.bsc(0.2)
    x = np.zeros(100_000, dtype=int)
    y = dmc.transmit(ch, x, seed=1)
    assert y.mean() == pytest.approx(0.2, abs=0.005)
    np.testing.assert_array_equal(dmc.transmit(dmc.identity(3), [0, 2, 1], 0), [0, 2, 1])
    with pytest.raises(ModelError, match="SYMBOL_OUT_OF_RANGE"):
        dmc.transmit(ch, [2], 0)
