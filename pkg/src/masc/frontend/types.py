"""Resolved MASC types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..numeric import INT, UINT, Kind, RegisterFormat, ui


@dataclass(frozen=True)
class BoolT:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class NumT:
    """uint, int or a register type."""

    fmt: RegisterFormat

    def __str__(self) -> str:
        return str(self.fmt)


@dataclass(frozen=True)
class RatT:
    """Result of arithmetic that may not be an integer (fixed-point operands)."""

    def __str__(self) -> str:
        return "rational"


@dataclass(frozen=True)
class EnumT:
    name: str
    members: tuple[tuple[str, int], ...]

    def __str__(self) -> str:
        return f"enum {self.name}"


@dataclass(frozen=True)
class ArrayT:
    elem: "Type"
    size: int

    def __str__(self) -> str:
        return f"{self.elem}[{self.size}]"


@dataclass(frozen=True)
class StructT:
    name: str
    fields: tuple[tuple[str, "Type"], ...]

    def field_type(self, name: str):
        for n, t in self.fields:
            if n == name:
                return t
        return None

    def __str__(self) -> str:
        return f"struct {self.name}"


@dataclass(frozen=True)
class TupleT:
    types: tuple["Type", ...]

    def __str__(self) -> str:
        return "<" + ", ".join(map(str, self.types)) + ">"


Type = Union[BoolT, NumT, RatT, EnumT, ArrayT, StructT, TupleT]

BOOL_T = BoolT()
INT_T = NumT(INT)
UINT_T = NumT(UINT)
RAT_T = RatT()


def builtin_type(name: str) -> Type:
    import re

    if name == "bool":
        return BOOL_T
    if name == "uint":
        return UINT_T
    if name == "int":
        return INT_T
    m = re.match(r"^(ui|si)([0-9]+)$", name)
    if m:
        kind = Kind.UI if m.group(1) == "ui" else Kind.SI
        return NumT(RegisterFormat(kind, int(m.group(2))))
    m = re.match(r"^(uf|sf)([0-9]+)i([0-9]+)$", name)
    if m:
        kind = Kind.UF if m.group(1) == "uf" else Kind.SF
        return NumT(RegisterFormat(kind, int(m.group(2)), int(m.group(3))))
    raise KeyError(name)


def is_register(t) -> bool:
    return isinstance(t, NumT) and t.fmt.is_register


def is_numeric(t) -> bool:
    return isinstance(t, (BoolT, NumT, RatT, EnumT))


def is_integral(t) -> bool:
    if isinstance(t, (BoolT, EnumT)):
        return True
    if isinstance(t, NumT):
        return t.fmt.frac_bits == 0
    return False


def is_aggregate(t) -> bool:
    return isinstance(t, (ArrayT, StructT))


def reg_width(t: NumT) -> int:
    return t.fmt.width


def bitwise_result(a: NumT, b: NumT) -> NumT:
    return NumT(ui(max(a.fmt.width, b.fmt.width)))
