from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from masc.numeric import (EMPTY_ARRAY, ArrayValue, ag, as_, bitn, bits, cat, convert, fl,
                          if1, interpret_raw, intval, lognot, logcmp, mod, setbitn, setbits, sf, si, uf, ui)

ints = st.integers(min_value=-(2**80), max_value=2**80)


def test_fl():
    assert fl(Fraction(-7, 2)) == -4
    assert fl(Fraction(7, 2)) == 3
    assert fl(-3) == -3


def test_bits_examples():
    assert bits(0b110110, 4, 2) == 0b101
    assert bits(-1, 7, 0) == 255
    assert bits(5, 1, 2) == 0  # empty range
    assert bitn(-2, 0) == 0 and bitn(-2, 70) == 1


@given(ints, st.integers(0, 90), st.integers(0, 90))
def test_bits_range(x, i, j):
    v = bits(x, i, j)
    assert 0 <= v < 2 ** max(i - j + 1, 0) or v == 0


@given(ints, st.integers(0, 90), st.integers(1, 90))
def test_bits_decomposition(x, i, j):
    if j > i:
        i, j = j, i
    assert x % 2 ** (i + 1) == bits(x, i, j) * 2**j + bits(x, j - 1, 0)


@given(st.integers(0, 2**64 - 1), st.integers(1, 64), st.data())
def test_setbits_roundtrip(x, w, data):
    x = bits(x, w - 1, 0)
    i = data.draw(st.integers(0, w - 1))
    j = data.draw(st.integers(0, i))
    y = data.draw(st.integers(0, 2**70))
    z = setbits(x, w, i, j, y)
    assert bits(z, i, j) == bits(y, i - j, 0)
    assert bits(z, w - 1, i + 1) == bits(x, w - 1, i + 1)
    assert bits(z, j - 1, 0) == bits(x, j - 1, 0)
    assert setbits(z, w, i, j, bits(x, i, j)) == x


def test_setbits_rejects_bad_slice():
    with pytest.raises(ValueError):
        setbits(0, 4, 4, 0, 1)
    assert setbitn(0, 8, 3, 1) == 8


def test_cat():
    assert cat((1, 1), (0, 2), (3, 2)) == 0b10011
    assert cat((0b111, 2), (1, 1)) == 0b111
    with pytest.raises(ValueError):
        cat((1, 1))


def test_intval_exhaustive():
    for w in range(1, 9):
        for x in range(2**w):
            v = intval(w, x)
            assert -(2 ** (w - 1)) <= v < 2 ** (w - 1)
            assert (v - x) % 2**w == 0


def test_complement_identity_exhaustive():
    for n in range(1, 9):
        for x in range(2**n):
            assert bits(lognot(x), n - 1, 0) == 2**n - 1 - x


def _formats(n):
    yield ui(n)
    yield si(n)
    for m in range(1, n + 1):
        yield uf(n, m)
        yield sf(n, m)


def test_convert_interpret_roundtrip_exhaustive():
    for n in range(1, 9):
        for f in _formats(n):
            for r in range(2**n):
                assert convert(interpret_raw(r, f), f) == r, (f, r)


def test_register_examples():
    f = sf(8, 2)
    raw = convert(-145, f)
    assert raw == 192
    assert interpret_raw(raw, f) == -1
    assert convert(300, ui(8)) == 44
    assert interpret_raw(0b1000_0000, si(8)) == -128
    assert interpret_raw(0b1100, uf(4, 2)) == 3


def test_logic_helpers():
    assert logcmp("<", 1, 2) == 1 and logcmp("==", 2, 3) == 0
    assert if1(0, "a", "b") == "b" and if1(Fraction(1, 2), "a", "b") == "a"
    assert mod(-7, 3) == 2 and mod(7, -3) == 1
    with pytest.raises(ZeroDivisionError):
        mod(1, 0)


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(-5, 5)), max_size=10), st.integers(0, 20),
       st.integers(0, 20), st.integers(-5, 5))
def test_array_laws(writes, i, j, v):
    a = EMPTY_ARRAY
    for k, x in writes:
        a = as_(k, x, a)
    assert ag(i, as_(i, v, a)) == v
    if i != j:
        assert ag(j, as_(i, v, a)) == ag(j, a)
    assert as_(i, ag(i, a), a) == a
    assert as_(i, v, as_(i, 0, a)) == as_(i, v, a)


def test_array_default_and_equality():
    assert ag(3, EMPTY_ARRAY) == 0
    assert as_(1, 0, EMPTY_ARRAY) == EMPTY_ARRAY
    assert ArrayValue.from_list([1, 0, 2]).to_list(4) == [1, 0, 2, 0]
