import numpy as np
import pytest

from isidetect.channel import (Channel, InvalidChannelError, add_awgn, autocorrelation,
                               build_channel, convolution_matrix, gram_coefficients,
                               gram_matrix, matched_filter, modulate, parse_taps,
                               transmit_noiseless)
from oracles import conv_matrix, lambdas, matched, received


def test_build_rejects_bad_taps():
    with pytest.raises(InvalidChannelError):
        build_channel([])
    with pytest.raises(InvalidChannelError):
        build_channel([0.0, 1.0])


def test_parse_taps():
    assert parse_taps("1, 1,-1 -1").taps == (1.0, 1.0, -1.0, -1.0)
    assert parse_taps("1,0,-1").memory == 2


def test_modulate_map():
    assert modulate([0, 1, 1]).tolist() == [1.0, -1.0, -1.0]


def test_transmit_all_zero_epr4():
    ch = build_channel([1, 1, -1, -1])
    y = transmit_noiseless(np.zeros(5, dtype=int), ch)
    np.testing.assert_allclose(y, [1, 2, 1, 0, 0, -1, -2, -1])


@pytest.mark.parametrize("taps", [[1.0], [1, -1, -0.5, -0.5], [0.3, -1.2, 0.7]])
def test_transmit_matches_oracle(taps):
    rng = np.random.default_rng(3)
    bits = rng.integers(0, 2, 11)
    ch = build_channel(taps)
    np.testing.assert_allclose(transmit_noiseless(bits, ch), received(bits, taps))
    np.testing.assert_allclose(convolution_matrix(ch, 11), conv_matrix(taps, 11))


def test_awgn_seeded_and_zero_sigma():
    y = np.arange(6.0)
    np.testing.assert_array_equal(add_awgn(y, 0.3, 7), add_awgn(y, 0.3, 7))
    np.testing.assert_array_equal(add_awgn(y, 0.0, 7), y)
    with pytest.raises(ValueError):
        add_awgn(y, -1.0)


def test_matched_filter_matches_oracle():
    rng = np.random.default_rng(5)
    taps = [1, 0.5, -0.25]
    r = rng.normal(size=12)
    np.testing.assert_allclose(matched_filter(r, build_channel(taps)), matched(r, taps))


def test_matched_filter_length_check():
    with pytest.raises(ValueError):
        matched_filter(np.zeros(2), build_channel([1, 1, 1]))


@pytest.mark.parametrize("taps,expected", [
    ([1, 1, -1, -1], [-4, -1, 2, 1]),
    ([1, 0, -1], [-2, 0, 1]),
    ([1, -1, -0.5, -0.5], [-2.5, 0.25, 0, 0.5]),
])
def test_autocorrelation_values(taps, expected):
    np.testing.assert_allclose(autocorrelation(build_channel(taps)), expected, atol=1e-15)


def test_gram_coefficients_match_gram_matrix():
    taps = [0.8, -0.4, 0.3, 0.2]
    ch = build_channel(taps)
    n = 9
    P = conv_matrix(taps, n).T @ conv_matrix(taps, n)
    lam = gram_coefficients(ch, n)
    np.testing.assert_allclose(lam.gram(), P, atol=1e-12)
    np.testing.assert_allclose(gram_matrix(ch, n), P, atol=1e-12)
    np.testing.assert_allclose(lam.stationary, lambdas(taps), atol=1e-12)


def test_truncated_coefficients_only_shrink_the_tail():
    ch = build_channel([1, 1, -1, -1])
    lam = gram_coefficients(ch, 6, tail=False)
    full = gram_coefficients(ch, 6)
    # last position keeps only h_0 h_2 at shift 2
    assert lam.get(6, 2) == 1.0 and full.get(6, 2) == 2.0
    assert lam.get(3, 2) == full.get(3, 2)


def test_channel_is_hashable_value():
    assert Channel((1.0, 2.0)) == build_channel([1, 2])
    assert build_channel([1, 2]).energy == 5.0
