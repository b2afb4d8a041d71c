import math

import numpy as np
import pytest
from scipy import stats

from hierleak import codec, dmc, prob, scenarios
from hierleak.codec import SimParams
from hierleak.errors import ModelError, ResourceError


def noiseless_setup(n=6):
    sc = scenarios.dsbs_scenario(0.0, 0.0)
    aux = scenarios.aux_from_maps(2, u="s", v="s", w="s")
    return codec.build_codebooks(aux, sc, SimParams(n=n))


@pytest.mark.parametrize("n_k", [1, 2, 3, 5, 64, 257, 1024])
def test_otp_involution_exhaustive(n_k):
    b = np.arange(1, n_k + 1)[:, None]
    k = np.arange(1, n_k + 1)[None, :]
    c = codec.otp_encrypt(b, k, n_k)
    assert c.min() == 1 and c.max() == n_k
    np.testing.assert_array_equal(codec.otp_decrypt(c, k, n_k), np.broadcast_to(b, c.shape))
    # for a fixed key the pad permutes the plaintexts
    assert all(len(set(col)) == n_k for col in c.T[: min(n_k, 8)])


def test_otp_key_one_is_identity():
    assert [codec.otp_encrypt(b, 1, 7) for b in range(1, 8)] == list(range(1, 8))


def test_ciphertext_uniform_for_skewed_plaintext():
    rng = np.random.default_rng(0)
    n_k = 16
    b1 = rng.choice(np.arange(1, n_k + 1), size=10_000, p=np.r_[0.7, np.full(15, 0.02)])
    k = rng.integers(1, n_k + 1, size=b1.size)
    c = codec.otp_encrypt(b1, k, n_k)
    counts = np.bincount(c, minlength=n_k + 1)[1:]
    assert stats.chisquare(counts).pvalue > 0.01


def test_bin_maps_cover_every_word_once():
    for n_words, n_bins in [(10, 3), (7, 7), (1, 1), (100, 13)]:
        seen = np.concatenate([codec.bin_members(b, n_bins, n_words) for b in range(1, n_bins + 1)])
        np.testing.assert_array_equal(np.sort(seen), np.arange(n_words))
        j = np.arange(n_words)
        bins = codec.bin_of(j, n_bins)
        assert set(bins) == set(range(1, n_bins + 1))  # surjective
        pos = codec.within_bin(j, n_bins)
        assert len(set(zip(bins, pos))) == n_words  # (bin, position) identifies the word


def test_w_bin_split_round_trip():
    for n_k in (1, 3, 8):
        for b in range(1, 40):
            b1, b2 = codec.split_w_bin(b, n_k)
            assert 1 <= b1 <= n_k
            assert codec.join_w_bin(b1, b2, n_k) == b


def test_combine_key_is_bijective():
    keys = {codec.combine_key(l, k, 5) for l in range(1, 4) for k in range(1, 6)}
    assert keys == set(range(1, 16))


def test_book_size_rounding():
    assert codec.book_size(10, 0.0) == 1
    assert codec.book_size(10, -1e-15) == 1
    assert codec.book_size(4, 0.5) == 4
    assert codec.book_size(3, 0.5) == math.ceil(2 ** 1.5)


def test_sim_params_validation():
    with pytest.raises(ModelError):
        SimParams(n=0)
    with pytest.raises(ModelError):
        SimParams(n=4, delta=1.5)
    with pytest.raises(ModelError):
        SimParams(n=4, channel_mode="telepathy")


def test_noiseless_end_to_end():
    cb = noiseless_setup(6)
    exact = 0
    typical = 0
    for i in range(200):
        rec = codec.run_trial(cb, [5, i])
        if rec.enc_err:
            continue
        typical += 1
        exact += np.array_equal(rec.s_hat1, rec.s) and np.array_equal(rec.s_hat2, rec.s)
    assert typical > 100 and exact == typical


def test_wrong_key_picks_another_w_word():
    sc = scenarios.dsbs_scenario()
    cb = codec.build_codebooks(scenarios.anchor_aux("v"), sc, SimParams(n=8))
    sz = cb.sizes
    assert sz.n_k2 > 1 and sz.n_w_bins > sz.n_k
    rng = np.random.default_rng(2)
    for _ in range(50):
        s, t, e = prob.sample_iid(sc.src, 8, rng)
        p1, p2, rec = codec.encode(s, cb, rng=rng)
        _, state, _ = codec.decode_phase1(p1, e, cb)
        *_, w_good, _ = codec.decode_phase2(p2, t, state, cb, key_override=rec.indices.k2)
        wrong = rec.indices.k2 % sz.n_k2 + 1
        *_, w_bad, _ = codec.decode_phase2(p2, t, state, cb, key_override=wrong)
        assert w_bad != w_good


def test_wrong_key_changes_unpadded_bin():
    c1 = codec.otp_encrypt(3, 5, 8)
    assert codec.otp_decrypt(c1, 5, 8) == 3
    assert all(codec.otp_decrypt(c1, k, 8) != 3 for k in range(1, 9) if k != 5)


def test_determinism():
    sc = scenarios.dsbs_scenario()
    aux = scenarios.anchor_aux("v")
    a = codec.run_experiment(aux, sc, SimParams(n=6, seed=3), 50)
    b = codec.run_experiment(aux, sc, SimParams(n=6, seed=3), 50)
    assert a.summary == b.summary and a.rows == b.rows
    c = codec.run_experiment(aux, sc, SimParams(n=6, seed=4), 50)
    assert c.rows != a.rows


def test_constant_aux_has_no_errors():
    sc = scenarios.dsbs_scenario()
    res = codec.run_experiment(scenarios.anchor_aux("constant"), sc, SimParams(n=8), 100)
    s = res.summary
    assert s["enc_err_rate"] == s["dec1_err_rate"] == s["dec2_err_rate"] == 0.0
    assert s["d1"] == pytest.approx(0.18, abs=0.05)


def test_size_explosion_suggests_n():
    sc = scenarios.dsbs_scenario()
    with pytest.raises(ResourceError) as ei:
        codec.build_codebooks(scenarios.anchor_aux("v"), sc, SimParams(n=80))
    assert ei.value.code == "SIZE_EXPLOSION"
    n_max = ei.value.suggestion["max_n"]
    assert 1 <= n_max < 80
    codec.build_codebooks(scenarios.anchor_aux("v"), sc, SimParams(n=n_max))


def test_random_code_mode_noiseless_channels():
    sc = scenarios.dsbs_scenario()
    sp = SimParams(n=4, channel_mode=codec.RANDOM_CODE)
    res = codec.run_experiment(scenarios.anchor_aux("u"), sc, sp, 50)
    assert res.summary["channel_mode"] == codec.RANDOM_CODE
    assert 0.0 <= res.summary["d1"] <= 0.5


def test_random_code_noisy_channel_runs():
    sc = scenarios.dsbs_scenario(ch1=dmc.bsc(0.01), ch2=dmc.bsc(0.01), rho1=2.0, rho2=2.0)
    res = codec.run_experiment(scenarios.anchor_aux("constant"), sc,
                               SimParams(n=3, channel_mode=codec.RANDOM_CODE), 30)
    assert res.summary["trials"] == 30


def test_anchor_distortions_near_region_values():
    sc = scenarios.dsbs_scenario()
    res = codec.run_experiment(scenarios.anchor_aux("v"), sc, SimParams(n=8), 1000)
    s = res.summary
    assert s["d2"] <= s["d1"] + 0.02
    assert s["d1"] == pytest.approx(0.18, abs=0.03)
