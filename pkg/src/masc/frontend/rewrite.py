"""Bounded-iteration rewrite of ``while`` and non-compliant ``for`` loops.

A loop preceded by ``// MASC: <bound> iterations`` becomes a compliant
``for`` loop over a fresh counter.  The original test is kept as the second
conjunct, so the rewritten loop behaves identically whenever the bound is
large enough.
"""

from __future__ import annotations

import copy
from dataclasses import replace

from ..errors import CheckError, Diagnostic
from . import ast as A
from .checker import assigned_names, check_program


def rewrite_bounded_loops(program: A.Program) -> A.Program:
    """Return a program in which every directed loop is a compliant ``for`` loop.

    Raises :class:`CheckError` for a ``while`` loop without a directive or a
    bound that reads a variable assigned in the loop.  Compliant ``for``
    loops are left alone, directive or not.
    """
    cp = check_program(program, allow_while=True)
    rw = _Rewriter(set(cp.loops))
    items = [rw.function(it) if isinstance(it, A.FunctionDef) else it for it in program.items]
    if rw.diagnostics:
        raise CheckError(rw.diagnostics)
    return A.Program(items)


class _Rewriter:
    def __init__(self, compliant: set[int]):
        self.compliant = compliant
        self.diagnostics: list[Diagnostic] = []
        self.used: set[str] = set()

    def function(self, f: A.FunctionDef) -> A.FunctionDef:
        self.used = {n.upper() for n in _names_in(f)}
        body = self.block(f.body)
        if body is f.body:
            return f
        return replace(f, body=body)

    def fresh(self) -> str:
        k = 0
        while True:
            name = "_i" if k == 0 else f"_i{k}"
            if name.upper() not in self.used:
                self.used.add(name.upper())
                return name
            k += 1

    def block(self, b: A.Block) -> A.Block:
        stmts = [self.stmt(s) for s in b.stmts]
        if all(x is y for x, y in zip(stmts, b.stmts)):
            return b
        return replace(b, stmts=stmts)

    def branch(self, s):
        return self.block(s) if isinstance(s, A.Block) else self.stmt(s)

    def stmt(self, s):
        if isinstance(s, A.Block):
            return self.block(s)
        if isinstance(s, A.If):
            then = self.branch(s.then)
            orelse = self.branch(s.orelse) if s.orelse is not None else None
            if then is s.then and orelse is s.orelse:
                return s
            return replace(s, then=then, orelse=orelse)
        if isinstance(s, A.Switch):
            arms = [replace(a, body=[self.stmt(x) for x in a.body]) for a in s.arms]
            return replace(s, arms=arms)
        if isinstance(s, A.While):
            body = self.branch(s.body)
            if s.directive is None:
                self.diagnostics.append(Diagnostic(
                    "while loop needs a preceding '// MASC: <bound> iterations' directive", s.pos, "while-loop"))
                return s
            if not self.bound_ok(s.directive, s):
                return s
            return self.counted(s.directive, s.cond, _as_block(body), s)
        if isinstance(s, A.For):
            body = self.branch(s.body)
            if id(s) in self.compliant or s.directive is None:
                # a non-compliant loop without a directive is left for the checker to report
                return s if body is s.body else replace(s, body=body)
            if not self.bound_ok(s.directive, s):
                return s
            inner = _as_block(body)
            inner = replace(inner, stmts=list(inner.stmts) + [s.update])
            loop = self.counted(s.directive, s.test, inner, s)
            return A.Block([s.init, loop], pos=s.pos)
        return s

    def bound_ok(self, d: A.Directive, loop) -> bool:
        written = assigned_names(loop)
        bad = sorted({n.id for n in A.walk_exprs(d.bound) if isinstance(n, A.Name)} & written)
        if bad:
            self.diagnostics.append(Diagnostic(
                f"iteration bound reads {', '.join(bad)}, which the loop assigns", d.pos, "directive"))
            return False
        return True

    def counted(self, d: A.Directive, test, body: A.Block, loop) -> A.For:
        pos = loop.pos
        i = self.fresh()
        init = A.VarDecl(A.TypeName("uint", pos=pos), [A.Declarator(i, [], A.IntLit(0, pos=pos), pos=pos)], pos=pos)
        cmp = A.Binary("<", A.Name(i, pos=pos), copy.deepcopy(d.bound), pos=pos)
        update = A.Assign(A.Name(i, pos=pos), A.Binary("+", A.Name(i, pos=pos), A.IntLit(1, pos=pos), pos=pos),
                          pos=pos)
        return A.For(init, A.Binary("&&", cmp, test, pos=pos), update, body, None, pos=pos)


def _as_block(s) -> A.Block:
    return s if isinstance(s, A.Block) else A.Block([s], pos=s.pos)


def _names_in(f: A.FunctionDef) -> set[str]:
    out = {p.name for p in f.params}
    stack = [f.body]
    while stack:
        x = stack.pop()
        if isinstance(x, list):
            stack.extend(x)
        elif isinstance(x, A.Name):
            out.add(x.id)
        elif isinstance(x, A.Declarator):
            out.add(x.name)
            stack.append(x.init)
        elif hasattr(x, "__dataclass_fields__"):
            stack.extend(getattr(x, k) for k in x.__dataclass_fields__ if k != "pos")
    return out
