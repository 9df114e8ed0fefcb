"""Radix-4 Booth partial-product theory and the bundled multiplier model.

``x`` is the multiplicand (an ``n-1``-bit vector) and ``y`` the multiplier
(a ``2m-1``-bit vector).  The multiplier is split into ``m`` overlapping
3-bit slices, each giving a signed digit ``theta`` in ``[-2, 2]`` with
``sum(4**i * theta(i, y)) == y``.  The functions here are direct
transcriptions of the definitions, meant as oracles for the MASC model.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .numeric import bitn, bits, cat, lognot

MASK64 = (1 << 64) - 1
N_IMUL, M_IMUL = 33, 17


def _check_params(x: int, y: int, m: int, n: int) -> None:
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if not 0 <= x < 1 << (n - 1):
        raise ValueError(f"x must be an {n - 1}-bit vector")
    if not 0 <= y < 1 << (2 * m - 1):
        raise ValueError(f"y must be a {2 * m - 1}-bit vector")


def theta(i: int, y: int) -> int:
    if i < 0:
        raise ValueError("digit index must be nonnegative")
    return bitn(y, 2 * i - 1) + bitn(y, 2 * i) - 2 * bitn(y, 2 * i + 1)


def neg(i: int, y: int) -> int:
    return 1 if theta(i, y) < 0 else 0


def bmux4_theta(t: int, x: int, n: int) -> int:
    """The 5:1 multiplexer output for digit value ``t``."""
    if t == 0:
        return 0
    v = x if abs(t) == 1 else 2 * x
    return bits(lognot(v), n - 1, 0) if t < 0 else v


def bmux4(i: int, x: int, y: int, n: int) -> int:
    return bmux4_theta(theta(i, y), x, n)


def encode_digit(t: int) -> int:
    """3-bit sign/magnitude encoding of a Booth digit."""
    if not -2 <= t <= 2:
        raise ValueError(f"not a Booth digit: {t}")
    return (4 if t < 0 else 0) | abs(t)


def _fields(*fs) -> int:
    """Concatenate (value, width) fields, dropping zero-width ones."""
    fs = [f for f in fs if f[1] > 0]
    return cat(*fs) if len(fs) > 1 else bits(fs[0][0], fs[0][1] - 1, 0)


def pp4(i: int, x: int, y: int, m: int, n: int) -> int:
    _check_params(x, y, m, n)
    if not 0 <= i < m:
        raise ValueError(f"partial product index {i} out of range for m={m}")
    b = bmux4(i, x, y, n)
    ni = neg(i, y)
    if i == 0:
        return _fields((0, 2 * (m - 1)), (1, 1), (1 - ni, 1), (b, n))
    return _fields((0, 2 * (m - i - 1)), (1, 1), (1 - ni, 1), (b, n), (0, 1),
                   (neg(i - 1, y), 1), (0, 2 * (i - 1)))


def pp4p(i: int, x: int, y: int, m: int, n: int) -> int:
    """``pp4`` with the sign extension of row 0 folded in: ``{~neg0, neg0, neg0, B0}``."""
    if i != 0:
        return pp4(i, x, y, m, n)
    return pp4(0, x, y, m, n) + (1 << n)


def sum_pp4(x: int, y: int, m: int, n: int) -> int:
    return sum(pp4(i, x, y, m, n) for i in range(m))


def sum_pp4p(x: int, y: int, m: int, n: int) -> int:
    return sum(pp4p(i, x, y, m, n) for i in range(m))


def _check64(*xs: int) -> None:
    for v in xs:
        if not 0 <= v <= MASK64:
            raise ValueError(f"{v} is not a 64-bit value")


def compress32(a: int, b: int, c: int) -> tuple[int, int]:
    """3:2 compressor: (sum, carry) with sum + carry == a + b + c (mod 2^64)."""
    _check64(a, b, c)
    return a ^ b ^ c, ((a & b | a & c | b & c) << 1) & MASK64


def compress42(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    _check64(a, b, c, d)
    s1, c1 = compress32(a, b, c)
    return compress32(s1, c1, d)


def sum_simple(values, k: int | None = None) -> int:
    """64-bit sum of the first ``k`` values."""
    vals = list(values)
    if k is not None:
        vals = vals[:k]
    out = 0
    for v in vals:
        out = (out + v) & MASK64
    return out


# -- the MASC model ------------------------------------------------------------------


def imul_source() -> str:
    return resources.files("masc.models").joinpath("imul.masc").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def imul_model():
    """The checked multiplier program."""
    from .frontend import load

    return load(imul_source())


def stage_checks(s1: int, s2: int, interp=None) -> dict[str, bool]:
    """Compare each pipeline stage of the model against the theory for one operand pair."""
    from .interp import Interpreter

    it = interp or Interpreter(imul_model())
    n, m = N_IMUL, M_IMUL
    bds = it.run("Booth", [s1])
    pps = it.run("PartialProducts", [bds, s2])
    tble = it.run("Align", [bds, pps])
    entries = [tble.get(k) for k in range(m)]
    return {
        "booth": all(bds.get(k) == encode_digit(theta(k, s1)) for k in range(m)),
        "partial-products": all(pps.get(k) == bmux4(k, s2, s1, n) for k in range(m)),
        "align": all(entries[k] == bits(pp4p(k, s2, s1, m, n), 63, 0) for k in range(m)),
        "sum": it.run("Sum", [tble]) == sum_simple(entries),
        "imul": it.run("Imul", [s1, s2]) == s1 * s2,
    }
