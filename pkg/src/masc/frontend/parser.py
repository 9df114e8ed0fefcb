"""Recursive-descent parser for MASC concrete syntax."""

from __future__ import annotations

import copy
import re
from typing import Optional

from ..errors import Diagnostic, ParseError, Pos
from . import ast as A
from .lexer import Token, tokenize

BUILTIN_TYPE_RE = re.compile(r"^(?:bool|uint|int|(?:ui|si)[1-9][0-9]*|(?:uf|sf)[1-9][0-9]*i[1-9][0-9]*)$")

_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "%", "/"),
]
_SHIFT_LEVEL = 7
_COMPOUND = {"+=": "+", "-=": "-", "*=": "*", "%=": "%", "<<=": "<<", ">>=": ">>",
             "&=": "&", "|=": "|", "^=": "^"}


def is_builtin_type(name: str) -> bool:
    return bool(BUILTIN_TYPE_RE.match(name))


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.type_scopes: list[set[str]] = [set()]

    # -- token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str, kind: Optional[str] = None) -> bool:
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "eof"

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def at_kw(self, *kws: str) -> bool:
        return self.tok.kind == "keyword" and self.tok.text in kws

    def error(self, msg: str, tok: Optional[Token] = None, rule: str = "syntax"):
        t = tok or self.tok
        raise ParseError([Diagnostic(msg, t.pos, rule)])

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            found = self.tok.text or "end of input"
            self.error(f"expected '{op}', found '{found}'")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            self.error(f"expected identifier, found '{found}'")
        return self.advance()

    # -- type names ------------------------------------------------------------

    def is_type_name(self, name: str) -> bool:
        return is_builtin_type(name) or any(name in s for s in self.type_scopes)

    def declare_type(self, name: str) -> None:
        self.type_scopes[-1].add(name)

    def at_type_start(self) -> bool:
        t = self.tok
        if t.kind == "keyword" and t.text in ("struct", "enum", "const"):
            return True
        return t.kind == "ident" and self.is_type_name(t.text)

    def parse_base_type(self) -> A.TypeExpr:
        t = self.tok
        if self.at_kw("struct"):
            self.advance()
            tag = self.advance().text if self.tok.kind == "ident" else None
            fields = None
            if self.at_op("{"):
                self.advance()
                fields = []
                while not self.at_op("}"):
                    ftype = self.parse_type()
                    while True:
                        fname = self.expect_ident()
                        dims = self.parse_dims()
                        fields.append((_wrap_dims(ftype, dims), fname.text))
                        if self.at_op(","):
                            self.advance()
                            continue
                        break
                    self.expect_op(";")
                self.advance()
            elif tag is None:
                self.error("expected struct tag or body")
            if tag is not None and fields is not None:
                self.declare_type(tag)
            return A.StructTypeExpr(tag, fields, pos=t.pos)
        if self.at_kw("enum"):
            self.advance()
            tag = self.advance().text if self.tok.kind == "ident" else None
            members = None
            if self.at_op("{"):
                self.advance()
                members = []
                while not self.at_op("}"):
                    m = self.expect_ident()
                    val = None
                    if self.at_op("="):
                        self.advance()
                        val = self.parse_cond()
                    members.append((m.text, val))
                    if self.at_op(","):
                        self.advance()
                    elif not self.at_op("}"):
                        self.error("expected ',' or '}' in enum")
                self.advance()
            elif tag is None:
                self.error("expected enum tag or body")
            if tag is not None and members is not None:
                self.declare_type(tag)
            return A.EnumTypeExpr(tag, members, pos=t.pos)
        if t.kind == "ident" and self.is_type_name(t.text):
            self.advance()
            return A.TypeName(t.text, pos=t.pos)
        if t.kind == "ident" and t.text.startswith("sc_"):
            self.error(f"SystemC type '{t.text}' is not MASC; declare register types like ui8 or sf16i4",
                       rule="systemc")
        self.error(f"unknown type name '{t.text}'", rule="unknown-type")

    def parse_type(self) -> A.TypeExpr:
        ty = self.parse_base_type()
        self.reject_ref_or_pointer()
        return _wrap_dims(ty, self.parse_dims())

    def reject_ref_or_pointer(self) -> None:
        if self.at_op("&", "&&"):
            self.error("reference types are not permitted", rule="reference")
        if self.at_op("*"):
            self.error("pointer types are not permitted", rule="pointer")

    def parse_dims(self) -> list[A.Expr]:
        dims = []
        while self.at_op("["):
            self.advance()
            dims.append(self.parse_expr())
            self.expect_op("]")
        return dims

    # -- top level -------------------------------------------------------------

    def parse_program(self) -> A.Program:
        items = []
        if self.tok.kind == "eof":
            self.error("empty program: expected at least one definition", rule="empty")
        while self.tok.kind != "eof":
            items.append(self.parse_top_item())
        return A.Program(items)

    def parse_top_item(self):
        t = self.tok
        if t.kind == "directive":
            self.error("iteration directive must immediately precede a loop", rule="directive")
        if self.at_kw("typedef"):
            return self.parse_typedef()
        if self.at_kw("struct", "enum") and self.peek().kind == "ident" and self.peek(2).text == "{":
            return self.parse_tagged_decl()
        if self.at_kw("const"):
            return self.parse_var_decl()
        if self.at_op("<"):
            rtype = self.parse_tuple_type()
            name = self.expect_ident()
            return self.parse_function_rest(rtype, name, t.pos)
        if self.at_type_start():
            rtype = self.parse_type()
            name = self.expect_ident()
            if self.at_op("("):
                return self.parse_function_rest(rtype, name, t.pos)
            self.error("global variables are not permitted; declare a const", name, rule="global-variable")
        if t.kind == "ident" and self.peek().text == "(":
            self.error(f"unknown return type '{t.text}'", rule="unknown-type")
        self.error(f"unexpected '{t.text}' at top level")

    def parse_tuple_type(self) -> A.TupleTypeExpr:
        lt = self.expect_op("<")
        types = [self.parse_type()]
        while self.at_op(","):
            self.advance()
            types.append(self.parse_type())
        self.expect_op(">")
        return A.TupleTypeExpr(types, pos=lt.pos)

    def parse_function_rest(self, rtype, name: Token, pos: Pos) -> A.FunctionDef:
        self.expect_op("(")
        params = []
        if not self.at_op(")"):
            while True:
                params.append(self.parse_param())
                if self.at_op(","):
                    self.advance()
                    continue
                break
        self.expect_op(")")
        if not self.at_op("{"):
            self.error("expected function body")
        body = self.parse_block()
        return A.FunctionDef(name.text, params, rtype, body, pos=pos)

    def parse_param(self) -> A.Param:
        t = self.tok
        if t.kind == "ident" and not self.is_type_name(t.text) and self.peek().kind == "ident" \
                and self.is_type_name(self.peek().text):
            self.error(f"parameter syntax is 'type name'; write '{self.peek().text} {t.text}'",
                       rule="param-order")
        ptype = self.parse_type()
        self.reject_ref_or_pointer()
        name = self.expect_ident()
        dims = self.parse_dims()
        return A.Param(_wrap_dims(ptype, dims), name.text, pos=t.pos)

    def parse_typedef(self) -> A.TypeDecl:
        t = self.advance()
        ty = self.parse_type()
        name = self.expect_ident()
        dims = self.parse_dims()
        self.expect_op(";")
        self.declare_type(name.text)
        return A.TypeDecl(name.text, _wrap_dims(ty, dims), True, pos=t.pos)

    def parse_tagged_decl(self) -> A.TypeDecl:
        t = self.tok
        ty = self.parse_base_type()
        self.expect_op(";")
        return A.TypeDecl(ty.name, ty, False, pos=t.pos)

    # -- statements ------------------------------------------------------------

    def parse_block(self) -> A.Block:
        lb = self.expect_op("{")
        self.type_scopes.append(set())
        stmts = []
        while not self.at_op("}"):
            if self.tok.kind == "eof":
                self.error("unterminated block", lb)
            s = self.parse_stmt()
            if s is not None:
                stmts.append(s)
        self.advance()
        self.type_scopes.pop()
        return A.Block(stmts, pos=lb.pos)

    def parse_directive(self) -> A.Directive:
        t = self.advance()
        sub = Parser(tokenize(t.text))
        sub.type_scopes = self.type_scopes
        try:
            bound = sub.parse_expr()
            if sub.tok.kind != "eof":
                sub.error("trailing text in directive bound")
        except ParseError as e:
            raise ParseError([Diagnostic(f"bad directive bound: {d.message}", t.pos, "directive")
                              for d in e.diagnostics]) from None
        _reposition(bound, t.pos)
        return A.Directive(bound, pos=t.pos)

    def parse_stmt(self):
        t = self.tok
        if t.kind == "directive":
            d = self.parse_directive()
            if self.at_kw("for"):
                return self.parse_for(d)
            if self.at_kw("while"):
                return self.parse_while(d)
            self.error("iteration directive must immediately precede a loop", t, rule="directive")
        if self.at_op("{"):
            return self.parse_block()
        if self.at_op(";"):
            self.advance()
            return None
        if t.kind == "keyword":
            kw = t.text
            if kw == "if":
                return self.parse_if()
            if kw == "for":
                return self.parse_for(None)
            if kw == "while":
                return self.parse_while(None)
            if kw == "do":
                self.error("do-while loops are not supported", rule="do-while")
            if kw == "switch":
                return self.parse_switch()
            if kw == "return":
                return self.parse_return()
            if kw == "assert":
                self.advance()
                self.expect_op("(")
                e = self.parse_expr()
                self.expect_op(")")
                self.expect_op(";")
                return A.Assert(e, pos=t.pos)
            if kw == "break":
                self.advance()
                self.expect_op(";")
                return A.Break(pos=t.pos)
            if kw == "continue":
                self.advance()
                self.expect_op(";")
                return A.Continue(pos=t.pos)
            if kw == "typedef":
                return self.parse_typedef()
            if kw in ("struct", "enum") and self.peek().kind == "ident" and self.peek(2).text == "{":
                return self.parse_tagged_decl()
            if kw in ("case", "default"):
                self.error(f"'{kw}' outside of switch")
        if self.at_op("<"):
            return self.parse_mv_assign()
        if self.at_type_start():
            return self.parse_var_decl()
        s = self.parse_simple_stmt()
        self.expect_op(";")
        return s

    def parse_var_decl(self, need_semi: bool = True) -> A.VarDecl:
        t = self.tok
        const = False
        if self.at_kw("const"):
            self.advance()
            const = True
        ty = self.parse_type()
        self.reject_ref_or_pointer()
        decls = []
        while True:
            name = self.expect_ident()
            dims = self.parse_dims()
            init = None
            if self.at_op("="):
                self.advance()
                init = self.parse_init()
            decls.append(A.Declarator(name.text, dims, init, pos=name.pos))
            if self.at_op(","):
                self.advance()
                continue
            break
        if need_semi:
            self.expect_op(";")
        return A.VarDecl(ty, decls, const, pos=t.pos)

    def parse_init(self):
        if self.at_op("{"):
            lb = self.advance()
            items = []
            while not self.at_op("}"):
                items.append(self.parse_init())
                if self.at_op(","):
                    self.advance()
                elif not self.at_op("}"):
                    self.error("expected ',' or '}' in initializer")
            self.advance()
            return A.InitList(items, pos=lb.pos)
        return self.parse_expr()

    def parse_simple_stmt(self):
        """Assignment, compound assignment or increment, without the ';'."""
        t = self.tok
        if self.at_op("++", "--"):
            op = self.advance().text
            target = self.parse_postfix()
            return A.Assign(target, A.Binary(op[0], copy.deepcopy(target), A.IntLit(1, pos=t.pos), pos=t.pos),
                            pos=t.pos)
        lhs = self.parse_expr()
        if self.at_op("="):
            self.advance()
            return A.Assign(lhs, self.parse_expr(), pos=t.pos)
        if self.tok.kind == "op" and self.tok.text in _COMPOUND:
            op = _COMPOUND[self.advance().text]
            rhs = self.parse_expr()
            return A.Assign(lhs, A.Binary(op, copy.deepcopy(lhs), rhs, pos=t.pos), pos=t.pos)
        if self.at_op("/="):
            self.error("the division operator is not permitted in MASC", rule="division")
        if self.at_op("++", "--"):
            op = self.advance().text
            return A.Assign(lhs, A.Binary(op[0], copy.deepcopy(lhs), A.IntLit(1, pos=t.pos), pos=t.pos),
                            pos=t.pos)
        return A.ExprStmt(lhs, pos=t.pos)

    def parse_mv_assign(self) -> A.MvAssign:
        lt = self.expect_op("<")
        targets = [self.parse_postfix()]
        while self.at_op(","):
            self.advance()
            targets.append(self.parse_postfix())
        self.expect_op(">")
        self.expect_op("=")
        call = self.parse_postfix()
        if not isinstance(call, A.Call):
            self.error("the right side of a multiple-value assignment must be a function call", lt)
        self.expect_op(";")
        return A.MvAssign(targets, call, pos=lt.pos)

    def parse_if(self) -> A.If:
        t = self.advance()
        self.expect_op("(")
        cond = self.parse_expr()
        self.expect_op(")")
        then = self.parse_branch()
        orelse = None
        if self.at_kw("else"):
            self.advance()
            orelse = self.parse_branch()
        return A.If(cond, then, orelse, pos=t.pos)

    def parse_branch(self):
        s = self.parse_stmt()
        if s is None:
            return A.Block([], pos=self.tok.pos)
        return s

    def parse_for(self, directive) -> A.For:
        t = self.advance()
        self.expect_op("(")
        self.type_scopes.append(set())
        if self.at_type_start():
            init = self.parse_var_decl(need_semi=False)
        else:
            init = self.parse_simple_stmt()
        self.expect_op(";")
        test = self.parse_expr()
        self.expect_op(";")
        update = self.parse_simple_stmt()
        self.expect_op(")")
        body = self.parse_branch()
        self.type_scopes.pop()
        return A.For(init, test, update, body, directive, pos=t.pos)

    def parse_while(self, directive) -> A.While:
        t = self.advance()
        self.expect_op("(")
        cond = self.parse_expr()
        self.expect_op(")")
        body = self.parse_branch()
        return A.While(cond, body, directive, pos=t.pos)

    def parse_switch(self) -> A.Switch:
        t = self.advance()
        self.expect_op("(")
        subject = self.parse_expr()
        self.expect_op(")")
        self.expect_op("{")
        arms = []
        while not self.at_op("}"):
            if not self.at_kw("case", "default"):
                self.error("expected 'case' or 'default' in switch")
            arm_pos = self.tok.pos
            labels, default = [], False
            while self.at_kw("case", "default"):
                if self.advance().text == "case":
                    labels.append(self.parse_cond())
                else:
                    default = True
                self.expect_op(":")
            body = []
            while not self.at_kw("case", "default") and not self.at_op("}"):
                if self.tok.kind == "eof":
                    self.error("unterminated switch", t)
                s = self.parse_stmt()
                if s is not None:
                    body.append(s)
            breaks = bool(body) and isinstance(body[-1], A.Break)
            if breaks:
                body.pop()
            arms.append(A.SwitchArm(labels, default, body, breaks, pos=arm_pos))
        self.advance()
        return A.Switch(subject, arms, pos=t.pos)

    def parse_return(self) -> A.Return:
        t = self.advance()
        if self.at_op(";"):
            self.error("a MASC function must return a value", t, rule="return")
        if self.at_op("<"):
            self.advance()
            vals = [self.parse_binary(_SHIFT_LEVEL)]
            while self.at_op(","):
                self.advance()
                vals.append(self.parse_binary(_SHIFT_LEVEL))
            self.expect_op(">")
            self.expect_op(";")
            return A.Return(vals, True, pos=t.pos)
        e = self.parse_expr()
        self.expect_op(";")
        return A.Return([e], False, pos=t.pos)

    # -- expressions -----------------------------------------------------------

    def parse_expr(self) -> A.Expr:
        return self.parse_cond()

    def parse_cond(self) -> A.Expr:
        c = self.parse_binary(0)
        if self.at_op("?"):
            q = self.advance()
            then = self.parse_expr()
            self.expect_op(":")
            orelse = self.parse_cond()
            return A.Cond(c, then, orelse, pos=q.pos)
        return c

    def parse_binary(self, level: int) -> A.Expr:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.advance()
            if op.text == "/":
                self.error("the division operator is not permitted in MASC", op, rule="division")
            right = self.parse_binary(level + 1)
            left = A.Binary(op.text, left, right, pos=op.pos)
        return left

    def parse_unary(self) -> A.Expr:
        t = self.tok
        if self.at_op("-", "+", "!", "~"):
            self.advance()
            return A.Unary(t.text, self.parse_unary(), pos=t.pos)
        if self.at_op("&"):
            self.error("address-of and references are not permitted", rule="reference")
        if self.at_op("*"):
            self.error("pointer dereference is not permitted", rule="pointer")
        if self.at_op("++", "--"):
            self.error("increment/decrement is only allowed as a statement", rule="side-effect")
        return self.parse_postfix()

    def parse_postfix(self) -> A.Expr:
        e = self.parse_primary()
        while True:
            t = self.tok
            if self.at_op("["):
                self.advance()
                hi = self.parse_expr()
                if self.at_op(":"):
                    self.advance()
                    lo = self.parse_expr()
                    self.expect_op("]")
                    e = A.Subrange(e, hi, lo, pos=t.pos)
                else:
                    self.expect_op("]")
                    e = A.Index(e, hi, pos=t.pos)
            elif self.at_op("."):
                self.advance()
                name = self.expect_ident()
                if self.at_op("("):
                    self.error(f"method calls ('.{name.text}(...)') are not MASC syntax", rule="systemc")
                e = A.Field(e, name.text, pos=t.pos)
            elif self.at_op("->"):
                self.error("pointer member access is not permitted", rule="pointer")
            elif self.at_op("(") and isinstance(e, A.Name):
                self.advance()
                args = []
                if not self.at_op(")"):
                    while True:
                        args.append(self.parse_expr())
                        if self.at_op(","):
                            self.advance()
                            continue
                        break
                self.expect_op(")")
                e = A.Call(e.id, args, pos=e.pos)
            else:
                return e

    def parse_primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(t.value, pos=t.pos)
        if self.at_kw("true", "false"):
            self.advance()
            return A.BoolLit(t.text == "true", pos=t.pos)
        if t.kind == "ident":
            if self.is_type_name(t.text) and self.peek().text == "(":
                self.error("type conversions by constructor are not supported; assign to a variable instead",
                           rule="cast")
            self.advance()
            return A.Name(t.text, pos=t.pos)
        if self.at_op("("):
            nxt = self.peek()
            if nxt.kind == "ident" and self.is_type_name(nxt.text) and self.peek(2).text == ")":
                self.error("casts are not supported; assign to a variable of the target type", rule="cast")
            self.advance()
            e = self.parse_expr()
            self.expect_op(")")
            return e
        found = t.text or "end of input"
        self.error(f"expected an expression, found '{found}'")


def _wrap_dims(ty: A.TypeExpr, dims: list[A.Expr]) -> A.TypeExpr:
    for d in reversed(dims):
        ty = A.ArrayTypeExpr(ty, d, pos=getattr(d, "pos", None))
    return ty


def _reposition(e, pos: Pos) -> None:
    for sub in A.walk_exprs(e):
        sub.pos = pos


def parse(source: str) -> A.Program:
    """Parse MASC source text; raises :class:`ParseError` with line/column."""
    return Parser(tokenize(source)).parse_program()


def parse_statement(source: str, type_names: tuple[str, ...] = ()) -> A.Stmt:
    p = Parser(tokenize(source))
    p.type_scopes[0].update(type_names)
    s = p.parse_stmt()
    if p.tok.kind != "eof":
        p.error("trailing input after statement")
    return s


def parse_expression(source: str) -> A.Expr:
    p = Parser(tokenize(source))
    e = p.parse_expr()
    if p.tok.kind != "eof":
        p.error("trailing input after expression")
    return e
