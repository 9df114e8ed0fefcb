"""MASC syntax tree.

Nodes compare structurally; source positions ride along but are excluded
from equality so that a printed-and-reparsed program equals the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import Pos


def _pos():
    return field(default=None, compare=False, repr=False, kw_only=True)


# -- type expressions (unresolved) ---------------------------------------------


@dataclass
class TypeName:
    name: str
    pos: Optional[Pos] = _pos()


@dataclass
class ArrayTypeExpr:
    elem: "TypeExpr"
    size: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class StructTypeExpr:
    name: Optional[str]
    fields: Optional[list[tuple["TypeExpr", str]]]  # None: reference to a declared struct
    pos: Optional[Pos] = _pos()


@dataclass
class EnumTypeExpr:
    name: Optional[str]
    members: Optional[list[tuple[str, Optional["Expr"]]]]
    pos: Optional[Pos] = _pos()


@dataclass
class TupleTypeExpr:
    types: list["TypeExpr"]
    pos: Optional[Pos] = _pos()


TypeExpr = Union[TypeName, ArrayTypeExpr, StructTypeExpr, EnumTypeExpr, TupleTypeExpr]


# -- expressions ---------------------------------------------------------------


@dataclass
class IntLit:
    value: int
    pos: Optional[Pos] = _pos()


@dataclass
class BoolLit:
    value: bool
    pos: Optional[Pos] = _pos()


@dataclass
class Name:
    id: str
    pos: Optional[Pos] = _pos()


@dataclass
class Unary:
    op: str  # '-', '+', '!', '~'
    operand: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Cond:
    test: "Expr"
    then: "Expr"
    orelse: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Index:
    """``base[index]``: array element or register bit, depending on ``base``."""

    base: "Expr"
    index: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Subrange:
    base: "Expr"
    hi: "Expr"
    lo: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Field:
    base: "Expr"
    name: str
    pos: Optional[Pos] = _pos()


@dataclass
class Call:
    name: str
    args: list["Expr"]
    pos: Optional[Pos] = _pos()


@dataclass
class InitList:
    items: list[Union["Expr", "InitList"]]
    pos: Optional[Pos] = _pos()


Expr = Union[IntLit, BoolLit, Name, Unary, Binary, Cond, Index, Subrange, Field, Call]


# -- statements ----------------------------------------------------------------


@dataclass
class Directive:
    """``// MASC: <bound> iterations`` preceding a loop."""

    bound: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class Declarator:
    name: str
    dims: list[Expr]
    init: Union[Expr, InitList, None]
    pos: Optional[Pos] = _pos()


@dataclass
class VarDecl:
    type: TypeExpr
    declarators: list[Declarator]
    const: bool = False
    pos: Optional[Pos] = _pos()


@dataclass
class TypeDecl:
    """``typedef T name;`` or a tagged ``struct``/``enum`` declaration."""

    name: str
    type: TypeExpr
    typedef: bool = True
    pos: Optional[Pos] = _pos()


@dataclass
class Block:
    stmts: list["Stmt"]
    pos: Optional[Pos] = _pos()


@dataclass
class Assign:
    target: Expr
    value: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class MvAssign:
    targets: list[Expr]
    call: Call
    pos: Optional[Pos] = _pos()


@dataclass
class If:
    cond: Expr
    then: "Stmt"
    orelse: Optional["Stmt"]
    pos: Optional[Pos] = _pos()


@dataclass
class For:
    init: Union[VarDecl, Assign]
    test: Expr
    update: Assign
    body: "Stmt"
    directive: Optional[Directive] = None
    pos: Optional[Pos] = _pos()


@dataclass
class While:
    cond: Expr
    body: "Stmt"
    directive: Optional[Directive] = None
    pos: Optional[Pos] = _pos()


@dataclass
class SwitchArm:
    labels: list[Expr]  # empty for a bare default
    default: bool
    body: list["Stmt"]
    breaks: bool  # arm ended with `break`
    pos: Optional[Pos] = _pos()


@dataclass
class Switch:
    subject: Expr
    arms: list[SwitchArm]
    pos: Optional[Pos] = _pos()


@dataclass
class Break:
    pos: Optional[Pos] = _pos()


@dataclass
class Continue:
    pos: Optional[Pos] = _pos()


@dataclass
class Assert:
    expr: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class Return:
    values: list[Expr]
    tuple: bool = False  # written as `return <...>`
    pos: Optional[Pos] = _pos()


@dataclass
class ExprStmt:
    expr: Expr
    pos: Optional[Pos] = _pos()


Stmt = Union[VarDecl, TypeDecl, Block, Assign, MvAssign, If, For, While, Switch,
             Break, Continue, Assert, Return, ExprStmt]


# -- top level -------------------------------------------------------------------


@dataclass
class Param:
    type: TypeExpr
    name: str
    pos: Optional[Pos] = _pos()


@dataclass
class FunctionDef:
    name: str
    params: list[Param]
    return_type: TypeExpr
    body: Block
    pos: Optional[Pos] = _pos()


@dataclass
class Program:
    items: list[Union[TypeDecl, VarDecl, FunctionDef]]

    @property
    def typedefs(self) -> list[TypeDecl]:
        return [it for it in self.items if isinstance(it, TypeDecl)]

    @property
    def constants(self) -> list[VarDecl]:
        return [it for it in self.items if isinstance(it, VarDecl)]

    @property
    def functions(self) -> list[FunctionDef]:
        return [it for it in self.items if isinstance(it, FunctionDef)]

    def function(self, name: str) -> FunctionDef:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)


def walk_exprs(e):
    """Yield ``e`` and all of its subexpressions, pre-order."""
    yield e
    if isinstance(e, Unary):
        yield from walk_exprs(e.operand)
    elif isinstance(e, Binary):
        yield from walk_exprs(e.left)
        yield from walk_exprs(e.right)
    elif isinstance(e, Cond):
        yield from walk_exprs(e.test)
        yield from walk_exprs(e.then)
        yield from walk_exprs(e.orelse)
    elif isinstance(e, Index):
        yield from walk_exprs(e.base)
        yield from walk_exprs(e.index)
    elif isinstance(e, Subrange):
        yield from walk_exprs(e.base)
        yield from walk_exprs(e.hi)
        yield from walk_exprs(e.lo)
    elif isinstance(e, Field):
        yield from walk_exprs(e.base)
    elif isinstance(e, Call):
        for a in e.args:
            yield from walk_exprs(a)
    elif isinstance(e, InitList):
        for a in e.items:
            yield from walk_exprs(a)
