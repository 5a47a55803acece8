import math

import numpy as np
import pytest

from isidetect.channel import add_awgn, build_channel, gram_coefficients, transmit_noiseless
from isidetect.detect_mp import (MIN_SUM, MSA_RAW, SPA_NORMALIZED, SUM_PRODUCT, MpConfig,
                                 MpDetector, check_update, init_llrs, mp_detect,
                                 run_message_passing)
from isidetect.ldpc import build_encoder, generate_regular
from isidetect.ml import viterbi_ml
from isidetect.tanner import build_pr_graph

EPR4 = [1, 1, -1, -1]


def test_min_sum_rule():
    assert check_update([2.0, -3.0], MIN_SUM) == -2.0
    assert check_update([-2.0, -3.0, 5.0], MIN_SUM) == 2.0


def test_sum_product_saturated_passes_through():
    assert check_update([50.0, 0.7], SUM_PRODUCT) == pytest.approx(0.7, abs=1e-12)
    assert check_update([-50.0, 0.7], SUM_PRODUCT) == pytest.approx(-0.7, abs=1e-12)


def test_sum_product_matches_probability_domain():
    a, b = 0.8, -1.3
    pa, pb = 1 / (1 + math.exp(-a)), 1 / (1 + math.exp(-b))  # P(bit = 0)
    p_even = pa * pb + (1 - pa) * (1 - pb)
    assert check_update([a, b], SUM_PRODUCT) == pytest.approx(math.log(p_even / (1 - p_even)),
                                                              abs=1e-12)


def test_llr_scaling():
    ch = build_channel(EPR4)
    n = 6
    lam = gram_coefficients(ch, n)
    q = np.arange(n, dtype=float)
    raw = init_llrs(q, lam)
    np.testing.assert_array_equal(raw.info, q)
    spa = init_llrs(q, lam, 1.0, SPA_NORMALIZED)
    np.testing.assert_allclose(spa.info, 2 * q)
    g = build_pr_graph(lam, n)
    expect = {1: -2.0, 2: 4.0, 3: 2.0}
    np.testing.assert_allclose(spa.state, [expect[c.j] for c in g.pr_checks])
    with pytest.raises(ValueError):
        init_llrs(q, lam, 0.0, SPA_NORMALIZED)


def test_memoryless_spa_llr_is_2r_over_sigma2():
    ch = build_channel([1])
    lam = gram_coefficients(ch, 3)
    r = np.array([0.2, -1.0, 0.4])
    np.testing.assert_allclose(init_llrs(r, lam, 0.5, SPA_NORMALIZED).info, r * 8.0)


def test_zero_iterations_is_channel_decision():
    ch = build_channel([1, 0.5])
    lam = gram_coefficients(ch, 5)
    g = build_pr_graph(lam, 5)
    llrs = init_llrs(np.array([1.0, -2.0, 0.0, 3.0, -0.1]), lam, graph=g)
    out = run_message_passing(g, llrs, MpConfig(max_iters=0))
    assert out.hard_bits.tolist() == [0, 1, 0, 0, 1]


def test_memory_one_min_sum_is_ml():
    rng = np.random.default_rng(2)
    for _ in range(100):
        taps = [1.0, rng.uniform(-1.5, 1.5)]
        ch = build_channel(taps)
        bits = rng.integers(0, 2, 16)
        r = add_awgn(transmit_noiseless(bits, ch), rng.uniform(0.3, 1.5), rng)
        out = mp_detect(r, ch, cfg=MpConfig(MIN_SUM, max_iters=100))
        np.testing.assert_array_equal(out.hard_bits, viterbi_ml(r, ch))


def test_min_sum_scale_invariance():
    rng = np.random.default_rng(9)
    ch = build_channel(EPR4)
    lam = gram_coefficients(ch, 12)
    g = build_pr_graph(lam, 12)
    llrs = init_llrs(rng.normal(size=12), lam, graph=g)
    a = run_message_passing(g, llrs, MpConfig(MIN_SUM, max_iters=20))
    b = run_message_passing(g, llrs.scaled(7.5), MpConfig(MIN_SUM, max_iters=20))
    np.testing.assert_array_equal(a.hard_bits, b.hard_bits)


def test_coded_syndrome_stop():
    H = generate_regular(40, 3, 4, seed=2)
    enc = build_encoder(H)
    ch = build_channel([1, 0, -1])
    word = enc.encode(np.random.default_rng(0).integers(0, 2, enc.k))
    r = transmit_noiseless(word, ch)
    for algo in (MIN_SUM, SUM_PRODUCT):
        out = MpDetector(ch, 40, H, MpConfig(algo)).detect(r, 0.5)
        np.testing.assert_array_equal(out.hard_bits, word)
        assert out.converged


def test_sum_product_needs_sigma():
    ch = build_channel([1, 0.5])
    with pytest.raises(ValueError):
        mp_detect(np.zeros(5), ch, cfg=MpConfig(SUM_PRODUCT))


def test_llr_length_check():
    g = build_pr_graph(gram_coefficients(build_channel([1, 1]), 4), 4)
    with pytest.raises(ValueError):
        run_message_passing(g, np.zeros(3))


def test_zero_total_llr_ties_to_zero():
    g = build_pr_graph(gram_coefficients(build_channel([1]), 3), 3)
    out = run_message_passing(g, np.zeros(3), MpConfig(max_iters=5))
    assert out.hard_bits.tolist() == [0, 0, 0]
