"""Static semantics: name resolution, typing and the MASC control restrictions.

The checker never stops at the first problem. It always produces a
:class:`CheckedProgram` with whatever type information it could derive,
alongside the full list of diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..errors import CheckError, Diagnostic, Pos
from ..numeric import Kind, convert, fl, interpret_raw, mod
from . import ast as A
from .types import (BOOL_T, INT_T, RAT_T, UINT_T, ArrayT, BoolT, EnumT, NumT, StructT, TupleT, Type,
                    bitwise_result, builtin_type, is_aggregate, is_integral, is_numeric, is_register)

# Symbols with a fixed meaning in the emitted S-expressions and the IR.
RESERVED = frozenset("""
    T NIL ASSERT IN-FUNCTION LET LET* MV MV-LET MV-NTH IF IF1 AND OR NOT DEFUN DEFUNC DECLARE XARGS
    BLOCK ASSIGN MV-ASSIGN ARRAY RETURN FOR SWITCH DEFAULT LIST QUOTE BITS BITN SETBITS SETBITN CAT
    FL INTVAL AG AS MOD EXPT NFIX INTEGERP LOGAND LOGIOR LOGXOR LOGNOT LOGAND1 LOGIOR1 LOGNOT1
    LOG< LOG<= LOG> LOG>= LOG= LOG<>
""".split())

MAX_TUPLE = 4


@dataclass(eq=False)
class Var:
    """A declared variable, parameter or global constant."""

    name: str
    type: Type
    kind: str  # 'param', 'local' or 'global'
    const: bool = False
    pos: Optional[Pos] = None

    def __repr__(self) -> str:
        return f"Var({self.name}: {self.type})"


@dataclass(eq=False)
class EnumConst:
    name: str
    value: int
    type: EnumT


Symbol = Union[Var, EnumConst]


@dataclass
class LoopInfo:
    var: Var
    op: str  # comparison of the loop variable against its limit
    limit: A.Expr
    step: int


@dataclass
class FuncSig:
    name: str
    params: list[Var]
    ret: Type
    node: A.FunctionDef


@dataclass
class CheckedProgram:
    program: A.Program
    diagnostics: list[Diagnostic] = field(default_factory=list)
    functions: dict[str, FuncSig] = field(default_factory=dict)
    constants: dict[str, Var] = field(default_factory=dict)
    const_inits: dict[str, object] = field(default_factory=dict)
    const_values: dict[str, object] = field(default_factory=dict)
    expr_types: dict[int, Type] = field(default_factory=dict)
    refs: dict[int, Symbol] = field(default_factory=dict)
    decl_vars: dict[int, Var] = field(default_factory=dict)
    loops: dict[int, LoopInfo] = field(default_factory=dict)
    labels: dict[int, list[int]] = field(default_factory=dict)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if not d.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors

    def type_of(self, e) -> Type:
        return self.expr_types[id(e)]

    def ref(self, name: A.Name) -> Symbol:
        return self.refs[id(name)]

    def var_of(self, decl) -> Var:
        return self.decl_vars[id(decl)]

    def function_names(self) -> list[str]:
        return list(self.functions)


class _Abort(Exception):
    """Raised to abandon checking of the current expression after a type error."""


Assigned = Optional[frozenset]  # None: control cannot reach this point


class _Checker:
    def __init__(self, program: A.Program, allow_while: bool):
        self.cp = CheckedProgram(program)
        self.allow_while = allow_while
        self.type_scopes: list[dict[str, Type]] = [{}]
        self.scopes: list[dict[str, tuple[str, Symbol]]] = [{}]  # keyed by upper-case name
        self.fn: Optional[str] = None
        self.loop_depth = 0
        self.assigned: frozenset = frozenset()

    # -- diagnostics -------------------------------------------------------------

    def error(self, msg: str, node=None, rule: str = "check") -> None:
        self.cp.diagnostics.append(Diagnostic(msg, getattr(node, "pos", None), rule))

    def warn(self, msg: str, node=None, rule: str = "check") -> None:
        self.cp.diagnostics.append(Diagnostic(msg, getattr(node, "pos", None), rule, "warning"))

    def fail(self, msg: str, node=None, rule: str = "type"):
        self.error(msg, node, rule)
        raise _Abort()

    # -- scopes -------------------------------------------------------------------

    def push(self) -> None:
        self.scopes.append({})
        self.type_scopes.append({})

    def pop(self) -> None:
        self.scopes.pop()
        self.type_scopes.pop()

    def declare(self, name: str, sym: Symbol, node) -> None:
        key = name.upper()
        if key in RESERVED:
            self.error(f"'{name}' is a reserved name", node, "reserved-name")
        for scope in reversed(self.scopes):
            if key in scope:
                other = scope[key][0]
                if other == name:
                    self.error(f"'{name}' shadows or redeclares an existing name", node, "shadowing")
                else:
                    self.error(f"'{name}' differs only in case from '{other}'", node, "case-collision")
                break
        self.scopes[-1][key] = (name, sym)

    def lookup(self, name: str) -> Optional[Symbol]:
        key = name.upper()
        for scope in reversed(self.scopes):
            if key in scope:
                found, sym = scope[key]
                return sym if found == name else None
        return None

    def lookup_type(self, name: str) -> Optional[Type]:
        for scope in reversed(self.type_scopes):
            if name in scope:
                return scope[name]
        return None

    # -- types --------------------------------------------------------------------

    def resolve(self, t: A.TypeExpr) -> Type:
        if isinstance(t, A.TypeName):
            found = self.lookup_type(t.name)
            if found is not None:
                return found
            try:
                return builtin_type(t.name)
            except (KeyError, ValueError) as e:
                self.fail(f"unknown or invalid type '{t.name}'" + (f": {e}" if isinstance(e, ValueError) else ""),
                          t, "unknown-type")
        if isinstance(t, A.ArrayTypeExpr):
            elem = self.resolve(t.elem)
            size = self.const_int(t.size, "array size")
            if size is None or size <= 0:
                self.fail("array size must be a positive constant", t, "array-size")
            return ArrayT(elem, size)
        if isinstance(t, A.StructTypeExpr):
            if t.fields is None:
                found = self.lookup_type(f"struct {t.name}")
                if found is None:
                    self.fail(f"unknown struct '{t.name}'", t, "unknown-type")
                return found
            names = set()
            fields = []
            for ft, fname in t.fields:
                # field keys are case-insensitive once emitted
                if fname.upper() in names:
                    self.error(f"duplicate field '{fname}'", t, "struct")
                names.add(fname.upper())
                fields.append((fname, self.resolve(ft)))
            st = StructT(t.name or "<anonymous>", tuple(fields))
            if t.name:
                self.type_scopes[-1][f"struct {t.name}"] = st
            return st
        if isinstance(t, A.EnumTypeExpr):
            if t.members is None:
                found = self.lookup_type(f"enum {t.name}")
                if found is None:
                    self.fail(f"unknown enum '{t.name}'", t, "unknown-type")
                return found
            members = []
            nxt = 0
            for mname, mval in t.members:
                if mval is not None:
                    v = self.const_int(mval, "enumerator value")
                    nxt = 0 if v is None else v
                members.append((mname, nxt))
                nxt += 1
            et = EnumT(t.name or "<anonymous>", tuple(members))
            for mname, v in members:
                self.declare(mname, EnumConst(mname, v, et), t)
            if t.name:
                self.type_scopes[-1][f"enum {t.name}"] = et
            return et
        if isinstance(t, A.TupleTypeExpr):
            types = tuple(self.resolve(x) for x in t.types)
            if not 2 <= len(types) <= MAX_TUPLE:
                self.fail(f"a multiple-value type has between 2 and {MAX_TUPLE} components", t, "tuple")
            if any(isinstance(x, TupleT) for x in types):
                self.fail("multiple-value types do not nest", t, "tuple")
            return TupleT(types)
        raise TypeError(t)

    def type_decl(self, d: A.TypeDecl) -> None:
        try:
            ty = self.resolve(d.type)
        except _Abort:
            return
        if d.typedef:
            if isinstance(ty, TupleT):
                self.error("multiple-value types may only be function return types", d, "tuple")
            self.type_scopes[-1][d.name] = ty

    # -- constant evaluation ------------------------------------------------------

    def const_value(self, e):
        """Value of a compile-time constant expression, or None."""
        if isinstance(e, A.IntLit):
            return e.value
        if isinstance(e, A.BoolLit):
            return int(e.value)
        if isinstance(e, A.Name):
            sym = self.lookup(e.id)
            if isinstance(sym, EnumConst):
                return sym.value
            if isinstance(sym, Var) and sym.kind == "global":
                return self.cp.const_values.get(sym.name)
            return None
        if isinstance(e, A.Unary):
            v = self.const_value(e.operand)
            if v is None:
                return None
            if e.op == "-":
                return -v
            if e.op == "+":
                return v
            if e.op == "!":
                return int(v == 0)
            return None
        if isinstance(e, A.Binary):
            a = self.const_value(e.left)
            if e.op == "&&" and a == 0:
                return 0
            if e.op == "||" and a not in (0, None):
                return 1
            b = self.const_value(e.right)
            if a is None or b is None:
                return None
            op = e.op
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "%":
                return mod(a, b) if b != 0 and is_int(a) and is_int(b) else None
            if op in ("<<", ">>"):
                if not is_int(b) or b < 0:
                    return None
                r = Fraction(a) * 2 ** b if op == "<<" else Fraction(a) / 2 ** b
                if op == ">>" and is_int(a):
                    r = fl(r)
                return r.numerator if isinstance(r, Fraction) and r.denominator == 1 else r
            cmp = {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b, "==": a == b, "!=": a != b,
                   "&&": a != 0 and b != 0, "||": a != 0 or b != 0}
            if op in cmp:
                return int(cmp[op])
            return None
        if isinstance(e, A.Cond):
            t = self.const_value(e.test)
            if t is None:
                return None
            return self.const_value(e.then if t != 0 else e.orelse)
        return None

    def const_int(self, e, what: str) -> Optional[int]:
        v = self.const_value(e)
        if v is None or not is_int(v):
            self.error(f"{what} must be an integer constant expression", e, "constant")
            return None
        return int(v)

    # -- program ------------------------------------------------------------------

    def run(self) -> CheckedProgram:
        for item in self.cp.program.items:
            if isinstance(item, A.TypeDecl):
                self.type_decl(item)
            elif isinstance(item, A.VarDecl):
                self.global_const(item)
            else:
                self.function(item)
        return self.cp

    def global_const(self, d: A.VarDecl) -> None:
        if not d.const:
            self.error("global variables are not permitted; declare a const", d, "global-variable")
        for decl in d.declarators:
            try:
                ty = self.decl_type(d.type, decl)
            except _Abort:
                continue
            v = Var(decl.name, ty, "global", True, decl.pos)
            self.declare(decl.name, v, decl)
            self.cp.decl_vars[id(decl)] = v
            self.cp.constants[decl.name] = v
            if decl.init is None:
                self.error(f"constant '{decl.name}' needs an initializer", decl, "const")
                continue
            try:
                self.check_init(decl.init, ty, decl)
            except _Abort:
                continue
            self.cp.const_inits[decl.name] = decl.init
            if is_numeric(ty) and not isinstance(decl.init, A.InitList):
                val = self.const_value(decl.init)
                if val is None:
                    self.error(f"initializer of constant '{decl.name}' is not a constant expression",
                               decl, "constant")
                else:
                    self.cp.const_values[decl.name] = store_value(val, ty)

    def decl_type(self, texpr: A.TypeExpr, decl: A.Declarator) -> Type:
        ty = self.resolve(texpr)
        for d in reversed(decl.dims):
            size = self.const_int(d, "array size")
            if size is None or size <= 0:
                self.fail("array size must be a positive constant", decl, "array-size")
            ty = ArrayT(ty, size)
        if isinstance(ty, TupleT):
            self.fail("multiple-value types may only be function return types", decl, "tuple")
        return ty

    def function(self, f: A.FunctionDef) -> None:
        if f.name.upper() in RESERVED:
            self.error(f"'{f.name}' is a reserved name", f, "reserved-name")
        for other in self.cp.functions:
            if other.upper() == f.name.upper():
                self.error(f"function '{f.name}' is already defined" if other == f.name
                           else f"function '{f.name}' differs only in case from '{other}'", f, "duplicate-function")
        self.fn = f.name
        self.push()
        params = []
        try:
            ret = self.resolve(f.return_type)
        except _Abort:
            ret = INT_T
        for p in f.params:
            try:
                pt = self.resolve(p.type)
            except _Abort:
                pt = INT_T
            if isinstance(pt, TupleT):
                self.error("parameters may not have a multiple-value type", p, "tuple")
            v = Var(p.name, pt, "param", False, p.pos)
            self.declare(p.name, v, p)
            self.cp.decl_vars[id(p)] = v
            params.append(v)
        sig = FuncSig(f.name, params, ret, f)
        self.assigned = frozenset(params)
        self.loop_depth = 0
        self.current_ret = ret
        self.check_block_stmts(f.body.stmts, frozenset(params), new_scope=False)
        self.pop()
        self.check_returns(f)
        self.cp.functions.setdefault(f.name, sig)
        self.fn = None

    # -- return placement ---------------------------------------------------------

    def check_returns(self, f: A.FunctionDef) -> None:
        for s, ctx in _returns_in_bad_context(f.body.stmts):
            self.error(f"return may not occur inside a {ctx}", s, "return-placement")
        problem = _well_formed(f.body.stmts)
        if problem is not None:
            node, why = problem
            self.error(f"body of '{f.name}' is not well-formed with respect to return statements: {why}",
                       node or f, "return-placement")

    # -- statements ---------------------------------------------------------------

    def check_block_stmts(self, stmts, assigned: Assigned, new_scope: bool = True) -> Assigned:
        if new_scope:
            self.push()
        try:
            for s in stmts:
                if assigned is None:
                    assigned = frozenset()  # unreachable code: check it anyway
                assigned = self.check_stmt(s, assigned)
        finally:
            if new_scope:
                self.pop()
        return assigned

    def check_branch(self, s, assigned: frozenset) -> Assigned:
        if isinstance(s, A.Block):
            return self.check_block_stmts(s.stmts, assigned)
        return self.check_block_stmts([s], assigned)

    def check_stmt(self, s, assigned: frozenset) -> Assigned:
        self.assigned = assigned
        try:
            return self._check_stmt(s, assigned)
        except _Abort:
            return assigned

    def _check_stmt(self, s, assigned: frozenset) -> Assigned:
        if isinstance(s, A.Block):
            return self.check_block_stmts(s.stmts, assigned)
        if isinstance(s, A.VarDecl):
            return self.local_decl(s, assigned)
        if isinstance(s, A.TypeDecl):
            self.type_decl(s)
            return assigned
        if isinstance(s, A.Assign):
            return self.assign(s, assigned)
        if isinstance(s, A.MvAssign):
            return self.mv_assign(s, assigned)
        if isinstance(s, A.If):
            self.condition(s.cond)
            a1 = self.check_branch(s.then, assigned)
            a2 = self.check_branch(s.orelse, assigned) if s.orelse is not None else assigned
            return _meet(a1, a2)
        if isinstance(s, A.For):
            return self.for_loop(s, assigned)
        if isinstance(s, A.While):
            if not self.allow_while:
                if s.directive is None:
                    self.error("while loops need a preceding '// MASC: <bound> iterations' directive",
                               s, "while-loop")
                else:
                    self.error("while loop has not been rewritten to a bounded for loop", s, "while-loop")
            self.condition(s.cond)
            self.loop_depth += 1
            try:
                self.check_branch(s.body, assigned)
            finally:
                self.loop_depth -= 1
            return assigned
        if isinstance(s, A.Switch):
            return self.switch(s, assigned)
        if isinstance(s, A.Break):
            if self.loop_depth:
                self.error("break may not occur in a for loop", s, "break")
            else:
                self.error("break may only end a switch arm", s, "break")
            return assigned
        if isinstance(s, A.Continue):
            self.error("continue is not permitted", s, "continue")
            return assigned
        if isinstance(s, A.Assert):
            self.condition(s.expr)
            v = self.const_value(s.expr)
            return None if v == 0 else assigned
        if isinstance(s, A.Return):
            self.ret(s)
            return None
        if isinstance(s, A.ExprStmt):
            self.error("expression statements have no effect; only assignments are allowed", s, "statement")
            return assigned
        raise TypeError(s)

    def local_decl(self, d: A.VarDecl, assigned: frozenset) -> frozenset:
        for decl in d.declarators:
            try:
                ty = self.decl_type(d.type, decl)
            except _Abort:
                continue
            if decl.init is not None:
                try:
                    self.check_init(decl.init, ty, decl)
                except _Abort:
                    pass
            elif d.const:
                self.error(f"constant '{decl.name}' needs an initializer", decl, "const")
            v = Var(decl.name, ty, "local", d.const, decl.pos)
            self.declare(decl.name, v, decl)
            self.cp.decl_vars[id(decl)] = v
            if decl.init is not None or is_aggregate(ty):
                assigned = assigned | {v}
                self.assigned = assigned
        return assigned

    def check_init(self, init, ty: Type, node) -> None:
        if isinstance(init, A.InitList):
            if isinstance(ty, ArrayT):
                if len(init.items) > ty.size:
                    self.fail(f"too many initializers for array of size {ty.size}", init, "initializer")
                for it in init.items:
                    self.check_init(it, ty.elem, node)
            elif isinstance(ty, StructT):
                if len(init.items) > len(ty.fields):
                    self.fail("too many initializers for struct", init, "initializer")
                for it, (_, ft) in zip(init.items, ty.fields):
                    self.check_init(it, ft, node)
            else:
                self.fail("brace initializer for a non-aggregate", init, "initializer")
            return
        t = self.expr(init)
        if not assignable(ty, t):
            self.fail(f"cannot initialize {ty} from {t}", init, "type")

    def assign(self, s: A.Assign, assigned: frozenset) -> frozenset:
        ttype, root = self.lvalue(s.target)
        vtype = self.expr(s.value)
        if not assignable(ttype, vtype):
            self.fail(f"cannot assign {vtype} to {ttype}", s, "type")
        if isinstance(s.target, A.Name):
            return assigned | {root}
        return assigned

    def lvalue(self, e) -> tuple[Type, Var]:
        """Type of an assignment target and its root variable."""
        if isinstance(e, A.Name):
            sym = self.lookup(e.id)
            if not isinstance(sym, Var):
                self.fail(f"'{e.id}' is not a variable", e, "assignment")
            if sym.const:
                self.fail(f"cannot assign to constant '{e.id}'", e, "assignment")
            self.cp.refs[id(e)] = sym
            self.cp.expr_types[id(e)] = sym.type
            return sym.type, sym
        if isinstance(e, A.Index):
            bt, root = self.lvalue(e.base)
            self.index_expr(e.index)
            if isinstance(bt, ArrayT):
                t = bt.elem
            elif is_register(bt):
                self.require_read(root, e)
                self.check_bit_index(e.index, bt)
                t = BOOL_T
            else:
                self.fail(f"cannot index a value of type {bt}", e, "index")
            self.cp.expr_types[id(e)] = t
            return t, root
        if isinstance(e, A.Subrange):
            bt, root = self.lvalue(e.base)
            if not is_register(bt):
                self.fail("subrange assignment requires a register", e, "register-op")
            self.require_read(root, e)
            self.index_expr(e.hi)
            self.index_expr(e.lo)
            self.check_subrange(e, bt)
            self.cp.expr_types[id(e)] = INT_T
            return INT_T, root
        if isinstance(e, A.Field):
            bt, root = self.lvalue(e.base)
            if not isinstance(bt, StructT) or bt.field_type(e.name) is None:
                self.fail(f"no field '{e.name}' in {bt}", e, "field")
            t = bt.field_type(e.name)
            self.cp.expr_types[id(e)] = t
            return t, root
        self.fail("invalid assignment target", e, "assignment")

    def require_read(self, v: Var, node) -> None:
        if v.kind != "global" and v not in self.assigned:
            self.error(f"variable '{v.name}' may be read before it is initialized", node, "uninitialized")

    def mv_assign(self, s: A.MvAssign, assigned: frozenset) -> frozenset:
        ct = self.call(s.call, allow_tuple=True)
        if not isinstance(ct, TupleT):
            self.fail(f"'{s.call.name}' does not return multiple values", s, "mv-assign")
        if len(ct.types) != len(s.targets):
            self.fail(f"'{s.call.name}' returns {len(ct.types)} values but {len(s.targets)} targets are given",
                      s, "mv-assign")
        roots = []
        plain = set()
        for tgt, ty in zip(s.targets, ct.types):
            tt, root = self.lvalue(tgt)
            if not assignable(tt, ty):
                self.error(f"cannot assign {ty} to {tt}", tgt, "type")
            if isinstance(tgt, A.Name):
                if root in plain:
                    self.error(f"'{tgt.id}' appears twice as a target", tgt, "mv-assign")
                plain.add(root)
            roots.append(root)
        names = {r.name for r in roots}
        for tgt in s.targets:
            for sub in _index_parts(tgt):
                for n in A.walk_exprs(sub):
                    if isinstance(n, A.Name) and n.id in names:
                        self.error("target index expressions may not read assignment targets", n, "mv-assign")
        return assigned | plain

    def ret(self, s: A.Return) -> None:
        rt = self.current_ret
        if s.tuple:
            if not isinstance(rt, TupleT):
                self.fail(f"'{self.fn}' returns a single value", s, "return")
            if len(s.values) != len(rt.types):
                self.fail(f"'{self.fn}' returns {len(rt.types)} values", s, "return")
            for v, t in zip(s.values, rt.types):
                vt = self.expr(v)
                if not assignable(t, vt):
                    self.error(f"cannot return {vt} as {t}", v, "type")
        else:
            if isinstance(rt, TupleT):
                self.fail(f"'{self.fn}' returns multiple values; write 'return <...>'", s, "return")
            vt = self.expr(s.values[0])
            if not assignable(rt, vt):
                self.fail(f"cannot return {vt} as {rt}", s, "type")

    def switch(self, s: A.Switch, assigned: frozenset) -> Assigned:
        st = self.expr(s.subject)
        if not is_integral(st):
            self.error("switch subject must be an integer", s.subject, "switch")
        seen = set()
        has_default = False
        result: Assigned = None
        for k, arm in enumerate(s.arms):
            vals = []
            for lab in arm.labels:
                v = self.const_int(lab, "case label")
                if v is None:
                    continue
                if v in seen:
                    self.error(f"duplicate case label {v}", lab, "switch")
                seen.add(v)
                vals.append(v)
            self.cp.labels[id(arm)] = vals
            if arm.default:
                if has_default:
                    self.error("more than one default arm", arm, "switch")
                has_default = True
            last = k == len(s.arms) - 1
            out = self.check_block_stmts(arm.body, assigned)
            if not last and not arm.breaks and out is not None:
                self.error("switch arm must end with break (no fall-through)", arm, "switch")
            result = _meet(result, out)
        if not has_default:
            result = _meet(result, assigned)
        return result

    def for_loop(self, s: A.For, assigned: frozenset) -> frozenset:
        self.push()
        try:
            if isinstance(s.init, A.VarDecl):
                a = self.local_decl(s.init, assigned)
            else:
                a = self.check_stmt(s.init, assigned)
            self.assigned = a
            self.condition(s.test)
            self.loop_depth += 1
            try:
                self.check_stmt(s.update, a)
                self.check_branch(s.body, a)
            finally:
                self.loop_depth -= 1
            self.loop_shape(s)
        finally:
            self.pop()
        return a

    def loop_shape(self, s: A.For) -> None:
        init = s.init
        if isinstance(init, A.VarDecl):
            if len(init.declarators) != 1 or init.declarators[0].init is None or init.declarators[0].dims:
                self.error("loop init must initialize a single integer variable", init, "loop-init")
                return
            var = self.cp.decl_vars.get(id(init.declarators[0]))
        elif isinstance(init, A.Assign) and isinstance(init.target, A.Name):
            var = self.cp.refs.get(id(init.target))
        else:
            self.error("loop init must initialize a single integer variable", init or s, "loop-init")
            return
        if var is None:
            return
        if not (isinstance(var.type, NumT) and var.type.fmt.kind in (Kind.UINT, Kind.INT)):
            self.error(f"loop variable '{var.name}' must be int or uint", init, "loop-init")
            return
        cmp = s.test
        while isinstance(cmp, A.Binary) and cmp.op == "&&":
            cmp = cmp.left
        if not (isinstance(cmp, A.Binary) and cmp.op in ("<", "<=", ">", ">=")
                and isinstance(cmp.left, A.Name) and cmp.left.id == var.name):
            self.error(f"loop test must begin with a comparison '{var.name} op limit'", s.test, "loop-test")
            return
        limit = cmp.right
        if any(isinstance(n, A.Name) and n.id == var.name for n in A.walk_exprs(limit)):
            self.error("loop limit may not depend on the loop variable", limit, "loop-test")
            return
        lt = self.cp.expr_types.get(id(limit))
        if lt is not None and not is_integral(lt):
            self.error("loop limit must be an integer", limit, "loop-test")
            return
        step = self.loop_step(s.update, var)
        if step is None:
            return
        if (cmp.op in ("<", "<=")) != (step > 0):
            self.error("loop update moves away from the limit", s.update, "loop-update")
            return
        body_writes = assigned_names(s.body)
        if var.name in body_writes:
            self.error(f"loop variable '{var.name}' may not be modified in the loop body", s.body, "loop-variable")
            return
        touched = sorted({n.id for n in A.walk_exprs(limit) if isinstance(n, A.Name)} & body_writes)
        if touched:
            self.warn(f"loop limit reads {', '.join(touched)}, which the loop body assigns; "
                      "the derived measure may not decrease", limit, "measure")
        self.cp.loops[id(s)] = LoopInfo(var, cmp.op, limit, step)

    def loop_step(self, u, var: Var) -> Optional[int]:
        bad = "loop update must add or subtract a nonzero constant to the loop variable"
        if not (isinstance(u, A.Assign) and isinstance(u.target, A.Name) and u.target.id == var.name
                and isinstance(u.value, A.Binary) and u.value.op in ("+", "-")):
            self.error(bad, u, "loop-update")
            return None
        v = u.value
        if isinstance(v.left, A.Name) and v.left.id == var.name:
            k = self.const_value(v.right)
            sign = 1 if v.op == "+" else -1
        elif v.op == "+" and isinstance(v.right, A.Name) and v.right.id == var.name:
            k = self.const_value(v.left)
            sign = 1
        else:
            self.error(bad, u, "loop-update")
            return None
        if k is None or not is_int(k) or k == 0:
            self.error(bad, u, "loop-update")
            return None
        return sign * int(k)

    # -- expressions --------------------------------------------------------------

    def condition(self, e) -> None:
        try:
            t = self.expr(e)
        except _Abort:
            return
        if not is_numeric(t):
            self.error(f"condition must be numeric, not {t}", e, "type")

    def index_expr(self, e) -> None:
        t = self.expr(e)
        if not is_integral(t):
            self.fail("index must be an integer", e, "index")

    def check_bit_index(self, e, bt: NumT) -> None:
        v = self.const_value(e)
        if v is not None and not 0 <= v < bt.fmt.width:
            self.error(f"bit index {v} out of range for {bt}", e, "subrange")

    def check_subrange(self, e: A.Subrange, bt: NumT) -> None:
        hi, lo = self.const_value(e.hi), self.const_value(e.lo)
        if hi is not None and lo is not None and not 0 <= lo <= hi < bt.fmt.width:
            self.error(f"subrange [{hi}:{lo}] out of range for {bt}", e, "subrange")

    def expr(self, e) -> Type:
        t = self._expr(e)
        self.cp.expr_types[id(e)] = t
        return t

    def _expr(self, e) -> Type:
        if isinstance(e, A.IntLit):
            return INT_T
        if isinstance(e, A.BoolLit):
            return BOOL_T
        if isinstance(e, A.Name):
            sym = self.lookup(e.id)
            if sym is None:
                if e.id in self.cp.functions:
                    self.fail(f"function '{e.id}' used as a value", e, "name")
                self.fail(f"undeclared name '{e.id}'", e, "undeclared")
            self.cp.refs[id(e)] = sym
            if isinstance(sym, EnumConst):
                return sym.type
            self.require_read(sym, e)
            return sym.type
        if isinstance(e, A.InitList):
            self.fail("brace initializers are only allowed in declarations", e, "initializer")
        if isinstance(e, A.Unary):
            t = self.expr(e.operand)
            if e.op == "!":
                self.numeric(t, e)
                return BOOL_T
            if e.op == "~":
                if not is_register(t):
                    self.fail("'~' applies only to registers", e, "register-op")
                return INT_T
            self.numeric(t, e)
            return INT_T if is_integral(t) else RAT_T
        if isinstance(e, A.Binary):
            return self.binary(e)
        if isinstance(e, A.Cond):
            self.condition(e.test)
            a, b = self.expr(e.then), self.expr(e.orelse)
            if a == b:
                return a
            if is_numeric(a) and is_numeric(b):
                return INT_T if is_integral(a) and is_integral(b) else RAT_T
            self.fail(f"incompatible branches {a} and {b}", e, "type")
        if isinstance(e, A.Index):
            bt = self.expr(e.base)
            self.index_expr(e.index)
            if isinstance(bt, ArrayT):
                v = self.const_value(e.index)
                if v is not None and not 0 <= v < bt.size:
                    self.warn(f"index {v} is outside the declared size {bt.size}", e, "array-bounds")
                return bt.elem
            if is_register(bt):
                self.check_bit_index(e.index, bt)
                return BOOL_T
            self.fail(f"cannot index a value of type {bt}", e, "register-op")
        if isinstance(e, A.Subrange):
            bt = self.expr(e.base)
            if not is_register(bt):
                self.fail("subranges apply only to registers", e, "register-op")
            self.index_expr(e.hi)
            self.index_expr(e.lo)
            self.check_subrange(e, bt)
            return UINT_T
        if isinstance(e, A.Field):
            bt = self.expr(e.base)
            if not isinstance(bt, StructT) or bt.field_type(e.name) is None:
                self.fail(f"no field '{e.name}' in {bt}", e, "field")
            return bt.field_type(e.name)
        if isinstance(e, A.Call):
            return self.call(e)
        raise TypeError(e)

    def numeric(self, t, node) -> None:
        if not is_numeric(t):
            self.fail(f"numeric operand expected, not {t}", node, "type")

    def binary(self, e: A.Binary) -> Type:
        a, b = self.expr(e.left), self.expr(e.right)
        op = e.op
        if op in ("&", "|", "^"):
            if not (is_register(a) and is_register(b)):
                self.fail(f"'{op}' applies only to registers", e, "register-op")
            return bitwise_result(a, b)
        self.numeric(a, e.left)
        self.numeric(b, e.right)
        if op in ("&&", "||", "<", "<=", ">", ">=", "==", "!="):
            return BOOL_T
        if op == "%":
            if not (is_integral(a) and is_integral(b)):
                self.fail("'%' requires integer operands", e, "type")
            return INT_T
        if op in ("<<", ">>"):
            if not is_integral(b):
                self.fail("shift amount must be an integer", e, "type")
            v = self.const_value(e.right)
            if v is not None and v < 0:
                self.error("shift amount must be nonnegative", e, "type")
            return INT_T if is_integral(a) else RAT_T
        if op in ("+", "-", "*"):
            return INT_T if is_integral(a) and is_integral(b) else RAT_T
        self.fail(f"unsupported operator '{op}'", e, "type")

    def call(self, e: A.Call, allow_tuple: bool = False) -> Type:
        sig = self.cp.functions.get(e.name)
        if sig is None:
            if e.name == self.fn:
                self.fail(f"recursive call to '{e.name}' is not permitted", e, "recursion")
            self.fail(f"call to undefined function '{e.name}' (functions must be defined before use)",
                      e, "undeclared")
        if len(e.args) != len(sig.params):
            self.fail(f"'{e.name}' takes {len(sig.params)} arguments, {len(e.args)} given", e, "arity")
        for arg, p in zip(e.args, sig.params):
            at = self.expr(arg)
            if not assignable(p.type, at):
                self.error(f"argument '{p.name}' of '{e.name}' expects {p.type}, not {at}", arg, "type")
        if isinstance(sig.ret, TupleT) and not allow_tuple:
            self.fail(f"'{e.name}' returns multiple values; use '<...> = {e.name}(...)'", e, "mv-assign")
        return sig.ret


# -- helpers --------------------------------------------------------------------


def is_int(v) -> bool:
    return isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)


def store_value(v, ty: Type):
    """Interpreted value of ``v`` after assignment to a variable of type ``ty``."""
    if isinstance(ty, NumT):
        raw = convert(v, ty.fmt)
        return interpret_raw(raw, ty.fmt) if ty.fmt.is_register else raw
    if isinstance(ty, BoolT):
        return int(v != 0)
    return fl(v)


def assignable(dst: Type, src: Type) -> bool:
    if isinstance(dst, TupleT) or isinstance(src, TupleT):
        return False
    if is_numeric(dst):
        return is_numeric(src)
    return dst == src


def _meet(a: Assigned, b: Assigned) -> Assigned:
    if a is None:
        return b
    if b is None:
        return a
    return a & b


def _index_parts(e):
    while not isinstance(e, A.Name):
        if isinstance(e, A.Index):
            yield e.index
        elif isinstance(e, A.Subrange):
            yield e.hi
            yield e.lo
        e = e.base


def lvalue_root(e) -> Optional[str]:
    while isinstance(e, (A.Index, A.Subrange, A.Field)):
        e = e.base
    return e.id if isinstance(e, A.Name) else None


def child_stmts(s) -> list:
    if isinstance(s, A.Block):
        return list(s.stmts)
    if isinstance(s, A.If):
        return [s.then] + ([s.orelse] if s.orelse is not None else [])
    if isinstance(s, A.For):
        return [s.init, s.update, s.body]
    if isinstance(s, A.While):
        return [s.body]
    if isinstance(s, A.Switch):
        return [x for arm in s.arms for x in arm.body]
    return []


def walk_stmts(s):
    yield s
    for c in child_stmts(s):
        yield from walk_stmts(c)


def assigned_names(s) -> set[str]:
    """Names of variables assigned anywhere within ``s``."""
    out = set()
    for x in walk_stmts(s):
        if isinstance(x, A.Assign):
            out.add(lvalue_root(x.target))
        elif isinstance(x, A.MvAssign):
            out.update(lvalue_root(t) for t in x.targets)
    out.discard(None)
    return out


def _contains_return(s) -> bool:
    return any(isinstance(x, A.Return) for x in walk_stmts(s))


def _returns_in_bad_context(stmts, ctx: Optional[str] = None):
    for s in stmts:
        if isinstance(s, A.Return) and ctx:
            yield s, ctx
        inner = ctx
        if isinstance(s, (A.For, A.While)):
            inner = "loop"
        elif isinstance(s, A.Switch):
            inner = inner or "switch"
        yield from _returns_in_bad_context(child_stmts(s), inner)


def _branch_stmts(s) -> list:
    return s.stmts if isinstance(s, A.Block) else [s]


def _well_formed(stmts, node=None):
    """None if well-formed, else (node, reason)."""
    if not stmts:
        return node, "empty block"
    for s in stmts[:-1]:
        if _contains_return(s):
            return s, "only the final statement may contain a return"
    last = stmts[-1]
    if isinstance(last, A.Return):
        return None
    if isinstance(last, A.If) and last.orelse is not None:
        return _well_formed(_branch_stmts(last.then), last) or _well_formed(_branch_stmts(last.orelse), last)
    if isinstance(last, A.If):
        return last, "a final if statement needs an else branch"
    return last, "the final statement must be a return or an if/else"


def check_program(program: A.Program, allow_while: bool = False) -> CheckedProgram:
    """Check ``program`` and return its analysis; inspect ``.diagnostics`` for problems."""
    return _Checker(program, allow_while).run()


def check(program: A.Program) -> list[Diagnostic]:
    """Diagnostics for ``program``; an empty list means it is accepted (warnings aside)."""
    return [d for d in check_program(program).diagnostics if d.is_error]


def require_ok(cp: CheckedProgram) -> CheckedProgram:
    if not cp.ok:
        raise CheckError(cp.errors)
    return cp
