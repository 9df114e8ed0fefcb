"""Emit the S-expression form of a checked MASC program.

Types do not survive into the S-expressions; they shape the terms instead.
Reads of signed or fixed-point registers become INTVAL/EXPT arithmetic and
stores wrap their value in BITS (and FL where the value may be fractional).
"""

from __future__ import annotations

from typing import Optional

from .errors import TranslationError
from .frontend import ast as A
from .frontend.checker import CheckedProgram, EnumConst, require_ok
from .frontend.types import ArrayT, BoolT, EnumT, NumT, TupleT, Type, is_aggregate, is_integral, is_register
from .numeric import Kind
from .sexpr import NIL, Symbol

S = Symbol

_ARITH = {"+": "+", "-": "-", "*": "*"}
_CMP = {"<": "LOG<", "<=": "LOG<=", ">": "LOG>", ">=": "LOG>=", "==": "LOG=", "!=": "LOG<>"}
_BITWISE = {"&": "LOGAND", "|": "LOGIOR", "^": "LOGXOR"}


def name_sym(name: str) -> Symbol:
    return S(name.upper())


def field_key(name: str) -> Symbol:
    return S(":" + name.upper())


def expt2(k) -> list:
    return [S("EXPT"), 2, k]


def _is_bits_within(term, n: int) -> bool:
    """True for (BITS x i j) with literal indices whose width is at most ``n``."""
    return (isinstance(term, list) and len(term) == 4 and term[0] == "BITS" and isinstance(term[2], int)
            and isinstance(term[3], int) and 0 <= term[3] <= term[2] and term[2] - term[3] + 1 <= n)


class Emitter:
    def __init__(self, cp: CheckedProgram):
        self.cp = cp
        self.fn: Optional[str] = None
        self.mv_count = 0

    def ty(self, e) -> Type:
        return self.cp.expr_types[id(e)]

    # -- conversions -----------------------------------------------------------

    def store(self, term, src: Type, dst: Type):
        """Storage value of ``dst`` for a term whose value has type ``src``."""
        if isinstance(dst, NumT):
            f = dst.fmt
            if not f.is_register:
                return term if is_integral(src) else [S("FL"), term]
            hi = f.width - 1
            if f.frac_bits:
                scaled = [S("*"), term, expt2(f.frac_bits)]
                if not is_integral(src):
                    scaled = [S("FL"), scaled]
                return [S("BITS"), scaled, hi, 0]
            if is_integral(src):
                if _is_bits_within(term, f.width):
                    return term
                if isinstance(src, NumT) and src.fmt.kind is Kind.UI and src.fmt.width <= f.width:
                    return term
                if isinstance(src, BoolT):
                    return term
                return [S("BITS"), term, hi, 0]
            return [S("BITS"), [S("FL"), term], hi, 0]
        if isinstance(dst, BoolT):
            if isinstance(src, BoolT):
                return term
            return [S("LOG<>"), term, 0]
        if isinstance(dst, EnumT):
            return term if is_integral(src) else [S("FL"), term]
        return term

    def load(self, term, t: Type):
        """Interpreted value of a storage term of type ``t``."""
        if isinstance(t, NumT) and t.fmt.is_register:
            f = t.fmt
            if f.kind in (Kind.SI, Kind.SF):
                term = [S("INTVAL"), f.width, term]
            if f.frac_bits:
                term = [S("/"), term, expt2(f.frac_bits)]
        return term

    # -- terms -----------------------------------------------------------------

    def storage(self, e):
        if isinstance(e, A.Name):
            sym = self.cp.refs[id(e)]
            if isinstance(sym, EnumConst):
                return sym.value
            if sym.kind == "global":
                return [name_sym(sym.name)]
            return name_sym(sym.name)
        if isinstance(e, A.Index) and isinstance(self.ty(e.base), ArrayT):
            return [S("AG"), self.term(e.index), self.storage(e.base)]
        if isinstance(e, A.Field):
            return [S("AG"), field_key(e.name), self.storage(e.base)]
        if isinstance(e, A.Call):
            return self.call(e)
        t = self.ty(e)
        if isinstance(e, A.Cond) and self.ty(e.then) == t and self.ty(e.orelse) == t:
            return [S("IF1"), self.term(e.test), self.storage(e.then), self.storage(e.orelse)]
        return self.store(self.term(e), t, t)

    def value_for(self, e, dst: Type):
        src = self.ty(e)
        if src == dst and (is_register(dst) or is_aggregate(dst)):
            return self.storage(e)
        return self.store(self.term(e), src, dst)

    def call(self, e: A.Call):
        sig = self.cp.functions[e.name]
        return [name_sym(e.name)] + [self.value_for(a, p.type) for a, p in zip(e.args, sig.params)]

    def term(self, e):
        t = self.ty(e)
        if isinstance(e, A.IntLit):
            return e.value
        if isinstance(e, A.BoolLit):
            return 1 if e.value else 0
        if isinstance(e, (A.Name, A.Field, A.Call)) or (isinstance(e, A.Index) and isinstance(self.ty(e.base), ArrayT)):
            return self.load(self.storage(e), t)
        if isinstance(e, A.Unary):
            if e.op == "-":
                x = self.term(e.operand)
                return -x if isinstance(x, int) else [S("-"), x]
            if e.op == "+":
                return self.term(e.operand)
            if e.op == "!":
                return [S("LOGNOT1"), self.term(e.operand)]
            return [S("LOGNOT"), self.storage(e.operand)]
        if isinstance(e, A.Binary):
            op = e.op
            if op in _BITWISE:
                return [S(_BITWISE[op]), self.storage(e.left), self.storage(e.right)]
            a, b = self.term(e.left), self.term(e.right)
            if op in _ARITH:
                return [S(op), a, b]
            if op in _CMP:
                return [S(_CMP[op]), a, b]
            if op == "&&":
                return [S("LOGAND1"), a, b]
            if op == "||":
                return [S("LOGIOR1"), a, b]
            if op == "%":
                return [S("MOD"), a, b]
            if op == "<<":
                return [S("*"), a, expt2(b)]
            if op == ">>":
                q = [S("/"), a, expt2(b)]
                return [S("FL"), q] if is_integral(self.ty(e.left)) else q
        if isinstance(e, A.Cond):
            return [S("IF1"), self.term(e.test), self.term(e.then), self.term(e.orelse)]
        if isinstance(e, A.Index):
            return [S("BITN"), self.storage(e.base), self.term(e.index)]
        if isinstance(e, A.Subrange):
            return [S("BITS"), self.storage(e.base), self.term(e.hi), self.term(e.lo)]
        raise TranslationError(f"cannot emit expression {type(e).__name__}")

    def init_term(self, init, ty: Type):
        if isinstance(init, A.InitList):
            if isinstance(ty, ArrayT):
                pairs = [(k, self.init_term(it, ty.elem)) for k, it in enumerate(init.items)]
            else:
                pairs = [(field_key(fn), self.init_term(it, ft)) for it, (fn, ft) in zip(init.items, ty.fields)]
            out = NIL
            for k, v in reversed(pairs):
                out = [S("AS"), k, v, out]
            return out
        return self.value_for(init, ty)

    # -- statements ------------------------------------------------------------

    def update(self, target, new):
        """(var, term) so that ``(ASSIGN var term)`` stores ``new`` into ``target``."""
        if isinstance(target, A.Name):
            return name_sym(target.id), new
        base = target.base
        bt = self.ty(base)
        if isinstance(target, A.Index) and isinstance(bt, ArrayT):
            return self.update(base, [S("AS"), self.term(target.index), new, self.storage(base)])
        if isinstance(target, A.Field):
            return self.update(base, [S("AS"), field_key(target.name), new, self.storage(base)])
        w = bt.fmt.width
        if isinstance(target, A.Index):
            return self.update(base, [S("SETBITN"), self.storage(base), w, self.term(target.index), new])
        return self.update(base, [S("SETBITS"), self.storage(base), w, self.term(target.hi), self.term(target.lo), new])

    def slice_value(self, term, src: Type):
        return term if is_integral(src) else [S("FL"), term]

    def is_slice_target(self, t) -> bool:
        return isinstance(t, A.Subrange) or (isinstance(t, A.Index) and not isinstance(self.ty(t.base), ArrayT))

    def assign(self, target, src_term, src: Type, from_storage: bool):
        if self.is_slice_target(target):
            val = self.load(src_term, src) if from_storage else src_term
            new = self.slice_value(val, src)
        else:
            tt = self.ty(target)
            if from_storage and src == tt:
                new = src_term
            else:
                val = self.load(src_term, src) if from_storage else src_term
                new = self.store(val, src, tt)
        var, term = self.update(target, new)
        return [S("ASSIGN"), var, term]

    def block(self, s) -> list:
        stmts = s.stmts if isinstance(s, A.Block) else [s]
        return [S("BLOCK")] + [x for x in (self.stmt(y) for y in stmts) if x is not None]

    def declare(self, decl: A.Declarator):
        v = self.cp.decl_vars[id(decl)]
        head = S("ARRAY") if is_aggregate(v.type) else S("DECLARE")
        out = [head, name_sym(v.name)]
        if decl.init is not None:
            out.append(self.init_term(decl.init, v.type))
        return out

    def stmt(self, s):
        if isinstance(s, A.Block):
            return self.block(s)
        if isinstance(s, A.VarDecl):
            ds = [self.declare(d) for d in s.declarators]
            return ds[0] if len(ds) == 1 else [S("LIST")] + ds
        if isinstance(s, A.TypeDecl):
            return None
        if isinstance(s, A.Assign):
            tgt = s.target
            if self.is_slice_target(tgt):
                return self.assign(tgt, self.term(s.value), self.ty(s.value), False)
            tt = self.ty(tgt)
            var, term = self.update(tgt, self.value_for(s.value, tt))
            return [S("ASSIGN"), var, term]
        if isinstance(s, A.MvAssign):
            return self.mv_assign(s)
        if isinstance(s, A.If):
            right = NIL if s.orelse is None else self.block(s.orelse)
            return [S("IF"), self.term(s.cond), self.block(s.then), right]
        if isinstance(s, A.For):
            init = self.stmt(s.init)
            if init and init[0] == "LIST":
                raise TranslationError("loop init declares more than one variable")
            return [S("FOR"), [init, self.term(s.test), self.stmt(s.update)], self.block(s.body)]
        if isinstance(s, A.Switch):
            out = [S("SWITCH"), self.term(s.subject)]
            for arm in s.arms:
                labels = self.cp.labels.get(id(arm), [])
                if arm.default:
                    lab = S("DEFAULT")
                elif len(labels) == 1:
                    lab = labels[0]
                else:
                    lab = list(labels)
                out.append([lab] + [x for x in (self.stmt(y) for y in arm.body) if x is not None])
            return out
        if isinstance(s, A.Assert):
            return [S("ASSERT"), name_sym(self.fn), self.term(s.expr)]
        if isinstance(s, A.Return):
            ret = self.cp.functions[self.fn].ret
            if isinstance(ret, TupleT):
                return [S("RETURN"), [S("MV")] + [self.value_for(v, t) for v, t in zip(s.values, ret.types)]]
            return [S("RETURN"), self.value_for(s.values[0], ret)]
        raise TranslationError(f"cannot emit {type(s).__name__} statement")

    def mv_assign(self, s: A.MvAssign):
        sig = self.cp.functions[s.call.name]
        call = self.call(s.call)
        direct = all(isinstance(t, A.Name) and self.ty(t) == ct for t, ct in zip(s.targets, sig.ret.types))
        if direct:
            return [S("MV-ASSIGN"), [name_sym(t.id) for t in s.targets], call]
        temps = [S(f"MV%{k}") for k in range(len(s.targets))]
        out = [S("BLOCK")] + [[S("DECLARE"), tmp] for tmp in temps]
        out.append([S("MV-ASSIGN"), temps, call])
        for tmp, tgt, ct in zip(temps, s.targets, sig.ret.types):
            out.append(self.assign(tgt, tmp, ct, True))
        return out

    # -- top level -------------------------------------------------------------

    def function(self, f: A.FunctionDef):
        self.fn = f.name
        sig = self.cp.functions[f.name]
        out = [S("DEFUNC"), name_sym(f.name), [name_sym(p.name) for p in sig.params], self.block(f.body)]
        self.fn = None
        return out

    def constant(self, name: str):
        var = self.cp.constants[name]
        init = self.cp.const_inits[name]
        return [S("DEFUNC"), name_sym(name), [], [S("BLOCK"), [S("RETURN"), self.init_term(init, var.type)]]]

    def program(self) -> list:
        out = []
        for it in self.cp.program.items:
            if isinstance(it, A.FunctionDef):
                out.append(self.function(it))
            elif isinstance(it, A.VarDecl):
                out.extend(self.constant(d.name) for d in it.declarators if d.name in self.cp.const_inits)
        return out


def emit_program(cp: CheckedProgram) -> list:
    """One (DEFUNC ...) form per function, constants first-class as 0-ary DEFUNCs."""
    require_ok(cp)
    return Emitter(cp).program()


def emit_statement(cp: CheckedProgram, fn: str, stmt) -> list:
    """S-expression for a single statement of function ``fn``."""
    em = Emitter(cp)
    em.fn = fn
    return em.stmt(stmt)
