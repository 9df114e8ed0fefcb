import random

import pytest

from masc import booth
from masc.booth import (bmux4_theta, compress32, compress42, encode_digit, imul_model, neg, pp4, pp4p,
                        stage_checks, sum_pp4, sum_pp4p, sum_simple, theta)
from masc.interp import Interpreter
from masc.numeric import bits


def test_theta_examples():
    assert theta(0, 5) == 1 and theta(1, 5) == 1
    assert theta(0, 0b100 >> 1) == -2  # slice {y1, y0, y-1} = 100
    assert all(theta(i, 0) == 0 for i in range(10))


def test_digit_recomposition_exhaustive():
    for m in range(1, 5):
        for y in range(2 ** (2 * m - 1)):
            assert sum(4**i * theta(i, y) for i in range(m)) == y


def test_bmux4():
    assert bmux4_theta(0, 5, 4) == 0
    assert bmux4_theta(1, 1, 2) == 1
    # n-bit complement is 2^n - 1 - x
    assert bmux4_theta(-1, 1, 2) == 2
    assert bmux4_theta(-1, 0, 2) == 3
    assert bmux4_theta(2, 3, 4) == 6 and bmux4_theta(-2, 3, 4) == 2**4 - 1 - 6


def test_neg():
    assert neg(3, 0) == 0 and neg(1, 5) == 0 and neg(0, 2) == 1


def test_pp4_examples():
    assert pp4(0, 1, 1, 1, 2) == 0b1101
    assert (1 << 2) + sum_pp4(1, 1, 1, 2) == 17 == 2**4 + 1
    assert bits(sum_pp4p(2, 5, 2, 3), 3 + 4 - 1, 0) == 10
    assert all(bits(sum_pp4p(0, y, 2, 3), 6, 0) == 0 for y in range(8))
    # zero digit at i != 0: only the frame bits remain
    assert theta(1, 1) == 0 and neg(0, 1) == 0
    assert pp4(1, 3, 1, 2, 3) == 0b11 << 3 + 2


def test_pp4p_relation():
    rng = random.Random(9)
    for _ in range(500):
        n, m = rng.randint(2, 40), rng.randint(1, 20)
        x, y = rng.getrandbits(n - 1), rng.getrandbits(2 * m - 1)
        assert pp4p(0, x, y, m, n) - pp4(0, x, y, m, n) == 2**n
        assert all(pp4p(i, x, y, m, n) == pp4(i, x, y, m, n) for i in range(1, m))


def test_pp4_rejects_bad_params():
    with pytest.raises(ValueError):
        pp4(2, 1, 1, 2, 3)
    with pytest.raises(ValueError):
        pp4(0, 4, 1, 2, 3)  # x is not an (n-1)-bit vector


def test_identity_grid():
    for n in range(2, 6):
        for m in range(1, 4):
            for x in range(2 ** (n - 1)):
                for y in range(2 ** (2 * m - 1)):
                    assert 2**n + sum_pp4(x, y, m, n) == 2 ** (n + 2 * m) + x * y
                    assert bits(sum_pp4p(x, y, m, n), n + 2 * m - 1, 0) == x * y


def test_compressors():
    assert compress32(12345, 0, 0) == (12345, 0)
    assert compress32(1, 1, 1) == (1, 2)
    rng = random.Random(2)
    for _ in range(2000):
        a, b, c, d = (rng.getrandbits(64) for _ in range(4))
        s, k = compress42(a, b, c, d)
        assert (s + k) % 2**64 == (a + b + c + d) % 2**64
    with pytest.raises(ValueError):
        compress32(2**64, 0, 0)


def test_sum_simple():
    assert sum_simple([2**63, 2**63, 5]) == 5
    assert sum_simple([1, 2, 3], 2) == 3


def test_encode_digit():
    assert [encode_digit(t) for t in (-2, -1, 0, 1, 2)] == [6, 5, 0, 1, 2]


def test_model_encode_matches_theory():
    it = Interpreter(imul_model())
    for s in range(8):
        assert it.run("Encode", [s]) == encode_digit(s_theta(s))


def s_theta(slice3):
    # digit of a 3-bit slice {y[2i+1], y[2i], y[2i-1]}
    return (slice3 & 1) + (slice3 >> 1 & 1) - 2 * (slice3 >> 2)


def test_model_stages():
    rng = random.Random(11)
    it = Interpreter(imul_model())
    for a, b in [(0, 0), (2**32 - 1, 2**32 - 1), (2**31, 3)] + [(rng.getrandbits(32), rng.getrandbits(32))
                                                                for _ in range(20)]:
        assert all(stage_checks(a, b, it).values()), (a, b)


def test_model_parameters():
    assert (booth.N_IMUL, booth.M_IMUL) == (33, 17)
    assert set(imul_model().functions) >= {"Encode", "Booth", "PartialProducts", "Align", "Compress42",
                                           "Compress32", "Sum", "Imul"}
