"""Exact arithmetic and the bit-vector / register primitives.

Integers are Python ints and rationals are :class:`fractions.Fraction`, so
nothing here can overflow or round.  Every function is pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Union

Number = Union[int, Fraction]


def fl(x: Number) -> int:
    """Greatest integer not exceeding ``x``."""
    if isinstance(x, int):
        return x
    return math.floor(x)


def bits(x: int, i: int, j: int) -> int:
    """The slice ``x[i:j]``; total, with 0 for empty or negative ranges."""
    if i < j or i < 0:
        return 0
    if j < 0:
        # floor(x / 2^j) is x * 2^-j here
        return (x << -j) & ((1 << (i - j + 1)) - 1)
    return (x >> j) & ((1 << (i - j + 1)) - 1)


def bitn(x: int, i: int) -> int:
    if i < 0:
        return 0
    return (x >> i) & 1


def _check_slice(w: int, i: int, j: int) -> None:
    if not (w > i >= j >= 0):
        raise ValueError(f"bad slice {i}:{j} for width {w}")


def setbits(x: int, w: int, i: int, j: int, y: int) -> int:
    """Replace slice ``i:j`` of the ``w``-bit vector ``x`` by ``y``."""
    _check_slice(w, i, j)
    return (bits(x, w - 1, i + 1) << (i + 1)) | (bits(y, i - j, 0) << j) | bits(x, j - 1, 0)


def setbitn(x: int, w: int, i: int, y: int) -> int:
    return setbits(x, w, i, i, y)


def cat(*pairs: tuple[int, int]) -> int:
    """Concatenate ``(x, width)`` slices, most significant first."""
    if len(pairs) < 2:
        raise ValueError("cat needs at least two fields")
    out = 0
    for x, w in pairs:
        if w <= 0:
            raise ValueError(f"nonpositive field width {w}")
        out = (out << w) | bits(x, w - 1, 0)
    return out


def intval(w: int, x: int) -> int:
    """Signed integer represented by the ``w``-bit vector ``x``."""
    if not 0 <= x < (1 << w):
        raise ValueError(f"{x} is not a {w}-bit vector")
    return x - (1 << w) if x >> (w - 1) else x


def lognot(x: int) -> int:
    """Bitwise complement at the integer level; slice it to get ``~x[n-1:0]``."""
    return -1 - x


_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def logcmp(op: str, x: Number, y: Number) -> int:
    return 1 if _CMP[op](x, y) else 0


def if1(x: Number, y: Any, z: Any) -> Any:
    return z if x == 0 else y


def mod(x: Number, y: Number) -> Number:
    """Nonnegative remainder: ``0 <= mod(x, y) < |y|``."""
    if y == 0:
        raise ZeroDivisionError("mod by zero")
    return x % abs(y)


# -- arrays ------------------------------------------------------------------


class ArrayValue:
    """Immutable index -> value map with a default.

    Arrays and structs share this representation (struct keys are field
    names).  Entries equal to the default are never stored, so equality is
    plain map equality and an empty array compares equal to its default.
    """

    __slots__ = ("_entries", "default")

    def __init__(self, entries: Mapping[Any, Any] | Iterable[tuple[Any, Any]] = (), default: Any = 0):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self._entries = {k: v for k, v in items if not _eq_default(v, default)}
        self.default = default

    @classmethod
    def from_list(cls, values: Iterable[Any], default: Any = 0) -> "ArrayValue":
        return cls(enumerate(values), default)

    def get(self, key: Any) -> Any:
        return self._entries.get(key, self.default)

    def set(self, key: Any, value: Any) -> "ArrayValue":
        new = ArrayValue.__new__(ArrayValue)
        new.default = self.default
        d = dict(self._entries)
        if _eq_default(value, self.default):
            d.pop(key, None)
        else:
            d[key] = value
        new._entries = d
        return new

    def items(self):
        return self._entries.items()

    def to_list(self, size: int) -> list:
        return [self.get(i) for i in range(size)]

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ArrayValue):
            return self._entries == other._entries and self.default == other.default
        if isinstance(other, int) and not isinstance(other, bool):
            return not self._entries and self.default == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self._entries:
            return hash(self.default)
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {v!r}" for k, v in sorted(self._entries.items(), key=lambda kv: str(kv[0])))
        return f"ArrayValue({{{body}}})"


def _eq_default(v: Any, default: Any) -> bool:
    if isinstance(v, ArrayValue):
        return not v._entries
    return v == default and not isinstance(default, ArrayValue)


EMPTY_ARRAY = ArrayValue()


def _as_array(a: Any) -> ArrayValue:
    if isinstance(a, ArrayValue):
        return a
    if a == 0 or a is None:
        # an unwritten nested element reads back as the default, i.e. empty
        return EMPTY_ARRAY
    raise TypeError(f"not an array: {a!r}")


def ag(i: Any, a: Any) -> Any:
    """Value of array ``a`` at index ``i``."""
    return _as_array(a).get(i)


def as_(i: Any, x: Any, a: Any) -> ArrayValue:
    """Array ``a`` with index ``i`` set to ``x``."""
    return _as_array(a).set(i, x)


# -- register formats ----------------------------------------------------------


class Kind(enum.Enum):
    UINT = "uint"
    INT = "int"
    UI = "ui"
    SI = "si"
    UF = "uf"
    SF = "sf"


@dataclass(frozen=True)
class RegisterFormat:
    kind: Kind
    width: int | None = None
    int_bits: int | None = None

    def __post_init__(self):
        k = self.kind
        if k in (Kind.UINT, Kind.INT):
            if self.width is not None or self.int_bits is not None:
                raise ValueError(f"{k.value} takes no width")
        elif k in (Kind.UI, Kind.SI):
            if self.width is None or self.width < 1 or self.int_bits is not None:
                raise ValueError(f"{k.value} needs a width n >= 1")
        else:
            n, m = self.width, self.int_bits
            if n is None or m is None or not n >= m > 0:
                raise ValueError(f"{k.value} needs n >= m > 0, got n={n} m={m}")

    @property
    def is_register(self) -> bool:
        return self.kind not in (Kind.UINT, Kind.INT)

    @property
    def signed(self) -> bool:
        return self.kind in (Kind.INT, Kind.SI, Kind.SF)

    @property
    def frac_bits(self) -> int:
        if self.kind in (Kind.UF, Kind.SF):
            return self.width - self.int_bits
        return 0

    def __str__(self) -> str:
        k = self.kind
        if k in (Kind.UINT, Kind.INT):
            return k.value
        if k in (Kind.UI, Kind.SI):
            return f"{k.value}{self.width}"
        return f"{k.value}{self.width}i{self.int_bits}"


UINT = RegisterFormat(Kind.UINT)
INT = RegisterFormat(Kind.INT)


def ui(n: int) -> RegisterFormat:
    return RegisterFormat(Kind.UI, n)


def si(n: int) -> RegisterFormat:
    return RegisterFormat(Kind.SI, n)


def uf(n: int, m: int) -> RegisterFormat:
    return RegisterFormat(Kind.UF, n, m)


def sf(n: int, m: int) -> RegisterFormat:
    return RegisterFormat(Kind.SF, n, m)


@dataclass(frozen=True)
class RawRegister:
    raw: int
    format: RegisterFormat

    def __post_init__(self):
        if not self.format.is_register:
            raise ValueError(f"{self.format} is not a register format")
        if not 0 <= self.raw < (1 << self.format.width):
            raise ValueError(f"raw value {self.raw} out of range for {self.format}")

    @property
    def value(self) -> Number:
        return interpret(self)


def convert(v: Number, f: RegisterFormat) -> int:
    """Value stored when ``v`` is assigned to a variable of format ``f``.

    For register formats this is the raw value.
    """
    k = f.kind
    if k in (Kind.UINT, Kind.INT):
        return fl(v)
    if k in (Kind.UI, Kind.SI):
        return fl(v) % (1 << f.width)
    return fl(v * (1 << f.frac_bits)) % (1 << f.width)


def interpret_raw(raw: int, f: RegisterFormat) -> Number:
    k = f.kind
    if k in (Kind.UINT, Kind.INT):
        return raw
    if not 0 <= raw < (1 << f.width):
        raise ValueError(f"raw value {raw} out of range for {f}")
    if k is Kind.UI:
        return raw
    if k is Kind.SI:
        return intval(f.width, raw)
    num = intval(f.width, raw) if k is Kind.SF else raw
    q = Fraction(num, 1 << f.frac_bits)
    return q.numerator if q.denominator == 1 else q


def interpret(r: RawRegister) -> Number:
    return interpret_raw(r.raw, r.format)
