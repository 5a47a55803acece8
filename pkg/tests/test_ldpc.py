import numpy as np
import pytest

from isidetect.ldpc import (AlistError, ParityCheckMatrix, build_encoder, codebook, encode,
                            generate_regular, load_alist, parse_alist, save_alist,
                            syndrome_check, write_alist)

SMALL = "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n"


def test_parse_smallest_code():
    H = parse_alist(SMALL)
    assert (H.n, H.m) == (2, 1)
    assert list(H.rows[0]) == [0, 1]


def test_round_trip(tmp_path):
    H = generate_regular(24, 3, 6, seed=2)
    assert parse_alist(write_alist(H)).rows == H.rows
    path = tmp_path / "c.alist"
    save_alist(H, path)
    assert load_alist(path).to_dense().tolist() == H.to_dense().tolist()


@pytest.mark.parametrize("text", [
    "2 1\n1 2\n1 1\n2\n1\n1\n1 1\n",       # row list disagrees with column list
    "2 1\n1 2\n1 1\n1\n1\n1\n1 2\n",       # degree sums differ
    "2 1\n1 2\n1 1\n2\n1\n3\n1 2\n",       # index out of range
    "2\n",                                  # truncated header
])
def test_parse_errors(text):
    with pytest.raises(AlistError):
        parse_alist(text)


def test_generate_regular_shape():
    H = generate_regular(200, 3, 4, seed=1)
    assert H.m == 150 and H.design_rate == 0.25
    D = H.to_dense()
    assert set(D.sum(axis=0)) == {3} and set(D.sum(axis=1)) == {4}


def test_generate_forced_pairs():
    H = generate_regular(4, 1, 2, seed=0)
    assert H.m == 2
    assert sorted(sum((list(r) for r in H.rows), [])) == [0, 1, 2, 3]


def test_generate_rejects_bad_degrees():
    with pytest.raises(ValueError):
        generate_regular(5, 3, 4)


def test_generate_is_seeded():
    assert generate_regular(40, 3, 4, seed=9).rows == generate_regular(40, 3, 4, seed=9).rows


def test_encode_repetition():
    enc = build_encoder(parse_alist(SMALL))
    assert enc.k == 1
    assert encode([1], enc).tolist() == [1, 1]
    assert encode([0], enc).tolist() == [0, 0]


def test_encoder_syndrome_and_linearity():
    H = generate_regular(60, 3, 6, seed=4)
    enc = build_encoder(H)
    rng = np.random.default_rng(0)
    assert not encode(np.zeros(enc.k, dtype=int), enc).any()
    for _ in range(100):
        a, b = rng.integers(0, 2, enc.k), rng.integers(0, 2, enc.k)
        ca, cb = encode(a, enc), encode(b, enc)
        assert syndrome_check(ca, H)
        assert np.array_equal(encode(a ^ b, enc), ca ^ cb)


def test_rank_deficient_code_rate():
    # two identical rows: rank 1
    H = ParityCheckMatrix(4, ((0, 1, 2, 3), (0, 1, 2, 3)))
    enc = build_encoder(H)
    assert enc.k == 3
    assert len(codebook(H)) == 8


def test_syndrome_check():
    H = parse_alist(SMALL)
    assert syndrome_check([0, 0], H)
    assert not syndrome_check([1, 0], H)


def test_codebook_matches_bruteforce():
    H = generate_regular(12, 2, 4, seed=3)
    D = H.to_dense()
    brute = {w for w in range(1 << 12)
             if not (D @ np.array([(w >> (11 - i)) & 1 for i in range(12)]) % 2).any()}
    words = {int("".join(map(str, c)), 2) for c in codebook(H)}
    assert words == brute


def test_matrix_validation():
    with pytest.raises(ValueError):
        ParityCheckMatrix(3, ((0, 0),))
    with pytest.raises(ValueError):
        ParityCheckMatrix(3, ((0, 5),))
