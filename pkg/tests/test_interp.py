from fractions import Fraction

import pytest

from masc.errors import AssertionFailure
from masc.frontend import load
from masc.interp import Interpreter, RunOptions, run


def ev(src, fn, *args, **kw):
    return run(load(src), fn, list(args), **kw)


def test_paper_examples(models):
    assert run(models["divide"], "Divide", [23, 5]) == (4, 3)
    assert run(models["divide"], "DivideCaller", [23, 5]) == (4, 3)
    assert run(models["sf8i2"], "Sf8i2Example", []) == 255
    assert run(models["foo"], "foo", [1, 2, 3]) == 10
    assert run(models["baz"], "baz", [1, 2, 3]) == 10
    assert run(models["imul"], "Encode", [4]) == 6
    assert run(models["imul"], "Imul", [3, 5]) == 15


def test_divide_by_zero_asserts(models):
    with pytest.raises(AssertionFailure) as ei:
        run(models["divide"], "Divide", [7, 0])
    assert ei.value.function == "Divide"


def test_arrays_are_values(models):
    a, b = list(range(8)), [10] * 8
    ra, rb = run(models["sum8"], "Sum8Caller", [a, b])
    assert ra.to_list(8) == a
    assert rb.to_list(8) == [x + 10 for x in a]


def test_register_truncation_and_signedness():
    src = "ui8 f(uint x) { ui8 y = x; return y + 1; }  si4 g(int x) { si4 y = x; return y; }  int h(si4 y) { return y; }"
    assert ev(src, "f", 255) == 0
    assert ev(src, "g", -1) == 15  # raw
    assert ev(src, "h", 0b1111) == -1


def test_fixed_point_arithmetic():
    src = "sf16i8 f(uf8i4 a, sf8i4 b) { sf16i8 r = a * b; return r; }"
    # 1/2 * -1/2 with 8 fractional bits
    assert ev(src, "f", Fraction(1, 2), Fraction(-1, 2)) == 2**16 - 64


def test_operators():
    src = """int f(int a, int b) { return a % b; }
             uint s(uint a) { return (a << 3) >> 1; }
             uint c(uint a, uint b) { return a > b ? a - b : b - a; }
             bool l(uint a) { return a > 3 && !(a == 5) || a == 0; }
             ui8 n(ui8 a) { return ~a; }
             ui8 k(ui8 a) { ui8 r = 0; r[7:4] = a[3:0]; r[0] = 1; return r; }"""
    assert ev(src, "f", -7, 3) == 2  # nonnegative remainder
    assert ev(src, "s", 5) == 20
    assert ev(src, "c", 3, 10) == 7
    assert [ev(src, "l", x) for x in (0, 4, 5)] == [1, 1, 0]
    assert ev(src, "n", 0b1010_0101) == 0b0101_1010
    assert ev(src, "k", 0x0B) == 0xB1


def test_switch_and_tuples():
    src = """<uint, uint> sw(uint x) { uint a = 0, b = 0;
               switch (x) { case 0: case 1: a = 1; break; case 2: b = 2; break; default: a = 9; b = 9; }
               return <a, b>; }
             uint use(uint x) { uint p, q; <p, q> = sw(x); return p * 10 + q; }"""
    assert [ev(src, "sw", x) for x in range(4)] == [(1, 0), (1, 0), (0, 2), (9, 9)]
    assert ev(src, "use", 3) == 99


def test_trace_and_lint():
    seen = []
    opts = RunOptions(lint64=True, trace=lambda f, v, x: seen.append((f, v, x)))
    out = ev("uint f(uint x) { uint y = x * x; return y; }", "f", 2**40, options=opts)
    assert out == 2**80
    assert ("f", "y", 2**80) in seen
    assert any(d.rule == "64-bit-lint" for d in opts.diagnostics)


def test_out_of_bounds_read_warns_and_write_fails():
    opts = RunOptions()
    cp = load("uint r(uint a[4], uint i) { return a[i]; }  uint[4] w(uint a[4], uint i) { a[i] = 1; return a; }")
    it = Interpreter(cp, opts)
    assert it.run("r", [[1, 2, 3, 4], 9]) == 0
    assert any(d.rule == "array-bounds" for d in opts.diagnostics)
    with pytest.raises(Exception):
        it.run("w", [[0] * 4, 4])


def test_wrong_arity():
    with pytest.raises(Exception):
        ev("uint f(uint x) { return x; }", "f")
