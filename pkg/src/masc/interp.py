"""Reference semantics for checked MASC programs.

Each MASC function is compiled to a Python function over exact integers and
fractions; the generated code is a direct transliteration of the statement
forms, so it *is* the operational semantics rather than an optimization of it.

Storage conventions: register variables (and register array elements) hold
raw values; ``uint``/``int``/``bool``/enum variables hold integers; arrays and
structs hold :class:`ArrayValue`.  Function results are returned in storage
form, which is why register results come back raw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from .errors import AssertionFailure, Diagnostic, MascRuntimeError
from .frontend import ast as A
from .frontend.checker import CheckedProgram, EnumConst, require_ok
from .frontend.types import (ArrayT, BoolT, EnumT, NumT, StructT, TupleT, Type, is_aggregate, is_integral,
                             is_register)
from .numeric import EMPTY_ARRAY, ArrayValue, Kind, convert, fl, interpret_raw, setbits

LINT_LIMIT = 1 << 64


@dataclass
class RunOptions:
    lint64: bool = False  # warn when a uint/int value leaves the 64-bit range
    trace: Optional[Callable[[str, str, Any], None]] = None  # (function, variable, stored value)
    check_ranges: bool = False  # assert register stores are in range (testing aid)
    diagnostics: list[Diagnostic] = field(default_factory=list)


# -- runtime helpers referenced by generated code ------------------------------------


def _fl(x):
    return x if isinstance(x, int) else math.floor(x)


def _norm(q):
    return q.numerator if isinstance(q, Fraction) and q.denominator == 1 else q


def _fx(num, f):
    return _norm(Fraction(num, 1 << f))


def _shl(a, k):
    if k < 0:
        raise MascRuntimeError(f"negative shift amount {k}")
    return a << k if isinstance(a, int) else _norm(a * (1 << k))


def _shr(a, k):
    if k < 0:
        raise MascRuntimeError(f"negative shift amount {k}")
    return a >> k if isinstance(a, int) else _norm(Fraction(a) / (1 << k))


def _mod(a, b):
    if b == 0:
        raise MascRuntimeError("'%' by zero")
    return a % abs(b)


def _bitn(x, i, w):
    if not 0 <= i < w:
        raise MascRuntimeError(f"bit index {i} out of range for width {w}")
    return (x >> i) & 1


def _bits(x, i, j, w):
    if not 0 <= j <= i < w:
        raise MascRuntimeError(f"subrange [{i}:{j}] out of range for width {w}")
    return (x >> j) & ((1 << (i - j + 1)) - 1)


def _setbits(x, w, i, j, y):
    if not 0 <= j <= i < w:
        raise MascRuntimeError(f"subrange [{i}:{j}] out of range for width {w}")
    return setbits(x, w, i, j, _fl(y))


def _as_arr(a):
    if isinstance(a, ArrayValue):
        return a
    return EMPTY_ARRAY


class _Runtime:
    """Per-interpreter services that generated code calls back into."""

    def __init__(self, opts: RunOptions):
        self.opts = opts

    def oob_read(self, fn: str, i, size: int, pos) -> None:
        self.opts.diagnostics.append(Diagnostic(
            f"read of index {i} outside declared size {size} in {fn}; returning 0", pos,
            "array-bounds", "warning"))

    def lint(self, fn: str, name: str, v) -> None:
        if not -LINT_LIMIT < v < LINT_LIMIT:
            self.opts.diagnostics.append(Diagnostic(
                f"value of '{name}' in {fn} exceeds 64 bits", None, "64-bit-lint", "warning"))


def _make_ag(rt: _Runtime):
    def ag(a, i, size, fn, pos):
        if not 0 <= i < size:
            rt.oob_read(fn, i, size, pos)
        return a._entries.get(i, a.default)
    return ag


def _as(a, i, v, size):
    if not 0 <= i < size:
        raise MascRuntimeError(f"write of index {i} outside declared size {size}")
    return a.set(i, v)


def _assert_fail(fn, pos):
    raise AssertionFailure(fn, pos)


def _chk(v, n):
    if not 0 <= v < (1 << n):
        raise AssertionError(f"register store {v} out of range for width {n}")
    return v


def _mkarr(items):
    return ArrayValue(items)


# -- code generation ---------------------------------------------------------------


def _mask(n: int) -> int:
    return (1 << n) - 1


class _FunctionCompiler:
    def __init__(self, cp: CheckedProgram, fn: A.FunctionDef, opts: RunOptions, consts: list):
        self.cp = cp
        self.fn = fn
        self.opts = opts
        self.lines: list[str] = []
        self.tmp = 0
        self.consts = consts  # shared table for positions and other Python objects

    # -- helpers --------------------------------------------------------------------

    def const(self, obj) -> str:
        self.consts.append(obj)
        return f"_K[{len(self.consts) - 1}]"

    def fresh(self, stem: str) -> str:
        self.tmp += 1
        return f"_{stem}{self.tmp}"

    def emit(self, depth: int, text: str) -> None:
        self.lines.append("    " * depth + text)

    def ty(self, e) -> Type:
        return self.cp.expr_types[id(e)]

    def var(self, sym) -> str:
        if sym.kind == "global":
            return f"g_{sym.name}"
        return f"v_{sym.name}"

    # -- storage conversion -----------------------------------------------------------

    def store(self, code: str, src: Type, dst: Type) -> str:
        """Python expression converting the value ``code`` (of type ``src``) to storage of ``dst``."""
        if isinstance(dst, NumT):
            f = dst.fmt
            integral = is_integral(src)
            if not f.is_register:
                return code if integral else f"_fl({code})"
            m = _mask(f.width)
            if f.frac_bits:
                return f"(_fl(({code}) * {1 << f.frac_bits}) & {m})"
            if integral:
                if isinstance(src, NumT) and src.fmt.kind in (Kind.UI,) and src.fmt.width <= f.width:
                    return code
                return f"(({code}) & {m})"
            return f"(_fl({code}) & {m})"
        if isinstance(dst, BoolT):
            if isinstance(src, BoolT):
                return code
            return f"(1 if ({code}) else 0)"
        if isinstance(dst, EnumT):
            return code if is_integral(src) else f"_fl({code})"
        return code

    def load(self, code: str, t: Type) -> str:
        """Interpreted value from storage ``code`` of type ``t``."""
        if isinstance(t, NumT) and t.fmt.is_register:
            f = t.fmt
            if f.kind is Kind.UI:
                return code
            if f.kind is Kind.SI:
                return f"_intval({f.width}, {code})"
            if f.kind is Kind.UF:
                return f"_fx({code}, {f.frac_bits})"
            return f"_fx(_intval({f.width}, {code}), {f.frac_bits})"
        return code

    # -- expressions ------------------------------------------------------------------

    def storage(self, e) -> str:
        """Storage form of a variable-like expression (raw for registers)."""
        if isinstance(e, A.Name):
            sym = self.cp.refs[id(e)]
            if isinstance(sym, EnumConst):
                return str(sym.value)
            return self.var(sym)
        if isinstance(e, A.Index):
            bt = self.ty(e.base)
            if isinstance(bt, ArrayT):
                code = (f"_ag({self.storage(e.base)}, {self.val(e.index)}, {bt.size}, "
                        f"{self.fn.name!r}, {self.const(e.pos)})")
                return f"_as_arr({code})" if is_aggregate(bt.elem) else code
        if isinstance(e, A.Field):
            code = f"{self.storage(e.base)}.get({e.name.upper()!r})"
            return f"_as_arr({code})" if is_aggregate(self.ty(e)) else code
        if isinstance(e, A.Call):
            return self.call(e)
        if isinstance(e, A.Cond):
            t = self.ty(e)
            if self.ty(e.then) == t and self.ty(e.orelse) == t:
                return f"({self.storage(e.then)} if {self.cond(e.test)} else {self.storage(e.orelse)})"
        t = self.ty(e)
        return self.store(self.val(e), t, t)

    def raw(self, e) -> str:
        t = self.ty(e)
        assert is_register(t)
        return self.storage(e)

    def call(self, e: A.Call) -> str:
        sig = self.cp.functions[e.name]
        args = []
        for a, p in zip(e.args, sig.params):
            at = self.ty(a)
            if at == p.type and (is_register(at) or is_aggregate(at)):
                args.append(self.storage(a))
            else:
                args.append(self.store(self.val(a), at, p.type))
        return f"f_{e.name}({', '.join(args)})"

    def cond(self, e) -> str:
        """Python truth value of ``e``."""
        if isinstance(e, A.Binary) and e.op in _PY_CMP:
            return f"({self.val(e.left)} {_PY_CMP[e.op]} {self.val(e.right)})"
        if isinstance(e, A.Binary) and e.op in ("&&", "||"):
            op = "and" if e.op == "&&" else "or"
            return f"({self.cond(e.left)} {op} {self.cond(e.right)})"
        if isinstance(e, A.Unary) and e.op == "!":
            return f"(not {self.cond(e.operand)})"
        if isinstance(e, A.BoolLit):
            return "True" if e.value else "False"
        return f"({self.val(e)} != 0)"

    def val(self, e) -> str:
        t = self.ty(e)
        if isinstance(e, A.IntLit):
            return str(e.value) if e.value >= 0 else f"({e.value})"
        if isinstance(e, A.BoolLit):
            return "1" if e.value else "0"
        if isinstance(e, (A.Name, A.Field, A.Call)) or (isinstance(e, A.Index) and isinstance(self.ty(e.base), ArrayT)):
            return self.load(self.storage(e), t)
        if isinstance(e, A.Unary):
            if e.op == "-":
                return f"(-{self.val(e.operand)})"
            if e.op == "+":
                return self.val(e.operand)
            if e.op == "!":
                return f"(0 if {self.cond(e.operand)} else 1)"
            return f"(-1 - {self.raw(e.operand)})"
        if isinstance(e, A.Binary):
            op = e.op
            if op in ("&", "|", "^"):
                return f"({self.raw(e.left)} {op} {self.raw(e.right)})"
            if op in _PY_CMP or op in ("&&", "||"):
                return f"(1 if {self.cond(e)} else 0)"
            a, b = self.val(e.left), self.val(e.right)
            if op in ("+", "-", "*"):
                return f"({a} {op} {b})"
            if op == "%":
                return f"_mod({a}, {b})"
            if op in ("<<", ">>"):
                k = _literal(e.right)
                if k is not None and is_integral(self.ty(e.left)):
                    return f"({a} {op} {k})"
                return f"{'_shl' if op == '<<' else '_shr'}({a}, {b})"
        if isinstance(e, A.Cond):
            return f"({self.val(e.then)} if {self.cond(e.test)} else {self.val(e.orelse)})"
        if isinstance(e, A.Index):
            bt = self.ty(e.base)
            x = self.raw(e.base)
            k = _literal(e.index)
            if k is not None and 0 <= k < bt.fmt.width:
                return f"(({x} >> {k}) & 1)"
            return f"_bitn({x}, {self.val(e.index)}, {bt.fmt.width})"
        if isinstance(e, A.Subrange):
            bt = self.ty(e.base)
            x = self.raw(e.base)
            hi, lo = _literal(e.hi), _literal(e.lo)
            if hi is not None and lo is not None and 0 <= lo <= hi < bt.fmt.width:
                return f"(({x} >> {lo}) & {_mask(hi - lo + 1)})"
            return f"_bits({x}, {self.val(e.hi)}, {self.val(e.lo)}, {bt.fmt.width})"
        if isinstance(e, A.InitList):
            raise MascRuntimeError("brace initializer outside a declaration")
        raise TypeError(e)

    def init_value(self, init, ty: Type) -> str:
        if isinstance(init, A.InitList):
            if isinstance(ty, ArrayT):
                items = [f"({k}, {self.init_value(it, ty.elem)})" for k, it in enumerate(init.items)]
            else:
                items = [f"({fname.upper()!r}, {self.init_value(it, ft)})"
                         for it, (fname, ft) in zip(init.items, ty.fields)]
            return f"_mkarr([{', '.join(items)}])"
        src = self.ty(init)
        if src == ty and (is_register(ty) or is_aggregate(ty)):
            return self.storage(init)
        return self.store(self.val(init), src, ty)

    # -- statements -----------------------------------------------------------------

    def after_store(self, d: int, name: str, t: Type) -> None:
        if self.opts.check_ranges and is_register(t):
            self.emit(d, f"_chk({name}, {t.fmt.width})")
        if self.opts.lint64 and isinstance(t, NumT) and not t.fmt.is_register:
            self.emit(d, f"_rt.lint({self.fn.name!r}, {name[2:]!r}, {name})")
        if self.opts.trace is not None:
            self.emit(d, f"_trace({self.fn.name!r}, {name[2:]!r}, {name})")

    def assign_to(self, d: int, target, new: str) -> None:
        """Emit code storing storage value ``new`` into ``target``."""
        if isinstance(target, A.Name):
            sym = self.cp.refs[id(target)]
            name = self.var(sym)
            self.emit(d, f"{name} = {new}")
            self.after_store(d, name, sym.type)
            return
        base = target.base
        bt = self.ty(base)
        if isinstance(target, A.Index) and isinstance(bt, ArrayT):
            self.assign_to(d, base, f"_as({self.storage(base)}, {self.val(target.index)}, {new}, {bt.size})")
        elif isinstance(target, A.Index):
            w = bt.fmt.width
            i = self.val(target.index)
            self.assign_to(d, base, f"_setbits({self.raw(base)}, {w}, {i}, {i}, {new})")
        elif isinstance(target, A.Subrange):
            w = bt.fmt.width
            self.assign_to(d, base, f"_setbits({self.raw(base)}, {w}, {self.val(target.hi)}, "
                                    f"{self.val(target.lo)}, {new})")
        elif isinstance(target, A.Field):
            self.assign_to(d, base, f"{self.storage(base)}.set({target.name.upper()!r}, {new})")
        else:
            raise TypeError(target)

    def target_store(self, target, value_code: str, src: Type) -> str:
        """Storage value for ``target`` from a value of type ``src``."""
        tt = self.ty(target)
        if isinstance(target, (A.Subrange,)) or (isinstance(target, A.Index) and not isinstance(self.ty(target.base), ArrayT)):
            return value_code if is_integral(src) else f"_fl({value_code})"
        return self.store(value_code, src, tt)

    def value_for(self, e, dst: Type) -> str:
        src = self.ty(e)
        if src == dst and (is_register(dst) or is_aggregate(dst)):
            return self.storage(e)
        return self.store(self.val(e), src, dst)

    def block(self, stmts, d: int) -> None:
        n = len(self.lines)
        for s in stmts:
            self.stmt(s, d)
        if len(self.lines) == n:
            self.emit(d, "pass")

    def branch(self, s, d: int) -> None:
        self.block(s.stmts if isinstance(s, A.Block) else [s], d)

    def stmt(self, s, d: int) -> None:
        if isinstance(s, A.Block):
            self.block(s.stmts, d) if s.stmts else None
        elif isinstance(s, A.VarDecl):
            for decl in s.declarators:
                v = self.cp.decl_vars[id(decl)]
                name = self.var(v)
                if decl.init is not None:
                    self.emit(d, f"{name} = {self.init_value(decl.init, v.type)}")
                    self.after_store(d, name, v.type)
                elif is_aggregate(v.type):
                    self.emit(d, f"{name} = _EMPTY")
                else:
                    self.emit(d, f"{name} = 0")
        elif isinstance(s, A.TypeDecl):
            pass
        elif isinstance(s, A.Assign):
            tgt = s.target
            if isinstance(tgt, A.Name):
                new = self.value_for(s.value, self.ty(tgt))
            elif isinstance(tgt, A.Index) and isinstance(self.ty(tgt.base), ArrayT) or isinstance(tgt, A.Field):
                new = self.value_for(s.value, self.ty(tgt))
            else:
                new = self.target_store(tgt, self.val(s.value), self.ty(s.value))
            self.assign_to(d, tgt, new)
        elif isinstance(s, A.MvAssign):
            sig = self.cp.functions[s.call.name]
            temps = [self.fresh("mv") for _ in s.targets]
            self.emit(d, f"{', '.join(temps)} = {self.call(s.call)}")
            for tmp, tgt, ct in zip(temps, s.targets, sig.ret.types):
                tt = self.ty(tgt)
                if tt == ct and not isinstance(tgt, A.Subrange) and not (
                        isinstance(tgt, A.Index) and not isinstance(self.ty(tgt.base), ArrayT)):
                    new = tmp
                else:
                    new = self.target_store(tgt, self.load(tmp, ct), ct)
                self.assign_to(d, tgt, new)
        elif isinstance(s, A.If):
            self.emit(d, f"if {self.cond(s.cond)}:")
            self.branch(s.then, d + 1)
            if s.orelse is not None:
                self.emit(d, "else:")
                self.branch(s.orelse, d + 1)
        elif isinstance(s, A.For):
            self.for_loop(s, d)
        elif isinstance(s, A.While):
            self.emit(d, f"while {self.cond(s.cond)}:")
            self.branch(s.body, d + 1)
        elif isinstance(s, A.Switch):
            subj = self.fresh("sw")
            self.emit(d, f"{subj} = {self.val(s.subject)}")
            first = True
            default = None
            for arm in s.arms:
                labels = self.cp.labels.get(id(arm), [])
                if arm.default:
                    default = arm
                    continue
                if not labels:
                    continue
                test = f"{subj} == {labels[0]}" if len(labels) == 1 else f"{subj} in {tuple(labels)!r}"
                self.emit(d, f"{'if' if first else 'elif'} {test}:")
                self.block(arm.body, d + 1)
                first = False
            if default is not None:
                if first:
                    self.block(default.body, d)
                else:
                    self.emit(d, "else:")
                    self.block(default.body, d + 1)
        elif isinstance(s, A.Assert):
            self.emit(d, f"if not {self.cond(s.expr)}:")
            self.emit(d + 1, f"_assert_fail({self.fn.name!r}, {self.const(s.pos)})")
        elif isinstance(s, A.Return):
            ret = self.cp.functions[self.fn.name].ret
            if isinstance(ret, TupleT):
                vals = [self.value_for(v, t) for v, t in zip(s.values, ret.types)]
                self.emit(d, f"return ({', '.join(vals)})")
            else:
                self.emit(d, f"return {self.value_for(s.values[0], ret)}")
        elif isinstance(s, (A.Break, A.Continue, A.ExprStmt)):
            raise MascRuntimeError(f"cannot execute {type(s).__name__} statement")
        else:
            raise TypeError(s)

    def for_loop(self, s: A.For, d: int) -> None:
        info = self.cp.loops.get(id(s))
        self.stmt(s.init, d)
        if info is not None and isinstance(s.init, A.VarDecl) and s.test is self._cmp_of(s):
            limit_names = {n.id for n in A.walk_exprs(info.limit) if isinstance(n, A.Name)}
            from .frontend.checker import assigned_names
            if not limit_names & assigned_names(s.body):
                v = self.var(info.var)
                lim = self.val(info.limit)
                if not is_integral(self.ty(info.limit)):
                    lim = f"_fl({lim})"
                end = {"<": lim, "<=": f"{lim} + 1", ">": lim, ">=": f"{lim} - 1"}[info.op]
                self.emit(d, f"for {v} in range({v}, {end}, {info.step}):")
                self.after_store(d + 1, v, info.var.type)
                self.branch(s.body, d + 1)
                return
        self.emit(d, f"while {self.cond(s.test)}:")
        self.branch(s.body, d + 1)
        self.stmt(s.update, d + 1)

    @staticmethod
    def _cmp_of(s: A.For):
        return s.test if isinstance(s.test, A.Binary) and s.test.op != "&&" else None

    def compile(self) -> str:
        sig = self.cp.functions[self.fn.name]
        params = ", ".join(self.var(p) for p in sig.params)
        self.emit(0, f"def f_{self.fn.name}({params}):")
        for p in sig.params:
            self.after_store(1, self.var(p), p.type)
        self.block(self.fn.body.stmts, 1)
        return "\n".join(self.lines)


_PY_CMP = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "==": "==", "!=": "!="}


def _literal(e) -> Optional[int]:
    if isinstance(e, A.IntLit):
        return e.value
    return None


def _intval(w, x):
    return x - (1 << w) if x >> (w - 1) else x


class Interpreter:
    """Executes a checked program.

    >>> from masc.frontend import load
    >>> Interpreter(load("uint f(uint x) { return x + 1; }")).run("f", [41])
    42
    """

    def __init__(self, cp: CheckedProgram, options: Optional[RunOptions] = None, *, allow_errors: bool = False):
        if not allow_errors:
            require_ok(cp)
        self.cp = cp
        self.options = options or RunOptions()
        self._rt = _Runtime(self.options)
        self.source = ""
        self._ns: dict[str, Any] = {}
        self._build()

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return self.options.diagnostics

    def _build(self) -> None:
        consts: list = []
        ns: dict[str, Any] = {
            "_fl": _fl, "_fx": _fx, "_shl": _shl, "_shr": _shr, "_mod": _mod, "_bitn": _bitn, "_bits": _bits,
            "_setbits": _setbits, "_as_arr": _as_arr, "_ag": _make_ag(self._rt), "_as": _as,
            "_assert_fail": _assert_fail, "_chk": _chk, "_mkarr": _mkarr, "_intval": _intval,
            "_EMPTY": EMPTY_ARRAY, "_K": consts, "_rt": self._rt, "_trace": self.options.trace,
        }
        chunks = []
        for fdef in self.cp.program.functions:
            if fdef.name not in self.cp.functions or self.cp.functions[fdef.name].node is not fdef:
                continue
            chunks.append(_FunctionCompiler(self.cp, fdef, self.options, consts).compile())
        self.source = "\n\n".join(chunks) + "\n"
        exec(compile(self.source, "<masc>", "exec"), ns)
        # global constants, in declaration order
        for name, var in self.cp.constants.items():
            init = self.cp.const_inits.get(name)
            if init is None:
                continue
            fc = _FunctionCompiler(self.cp, _DUMMY_FN, self.options, consts)
            ns[f"g_{name}"] = eval(compile(fc.init_value(init, var.type), "<masc-const>", "eval"), ns)
        self._ns = ns

    def function(self, name: str) -> Callable:
        try:
            return self._ns[f"f_{name}"]
        except KeyError:
            raise MascRuntimeError(f"no function named '{name}'") from None

    def call(self, name: str, storage_args: Sequence[Any]):
        """Call with arguments already in storage form (raw for registers)."""
        f = self.function(name)
        sig = self.cp.functions[name]
        if len(storage_args) != len(sig.params):
            raise MascRuntimeError(f"'{name}' takes {len(sig.params)} arguments, {len(storage_args)} given")
        try:
            return f(*storage_args)
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise MascRuntimeError(f"runtime error in {name}: {e}") from e

    def run(self, name: str, args: Sequence[Any]):
        """Run ``name`` on ordinary values; register results come back raw.

        Arguments are converted to the parameter formats as by assignment.
        Arrays may be given as lists (nested for multidimensional arrays) or
        :class:`ArrayValue`; structs as dicts or :class:`ArrayValue`.
        """
        sig = self.cp.functions.get(name)
        if sig is None:
            raise MascRuntimeError(f"no function named '{name}'")
        if len(args) != len(sig.params):
            raise MascRuntimeError(f"'{name}' takes {len(sig.params)} arguments, {len(args)} given")
        return self.call(name, [to_storage(a, p.type) for a, p in zip(args, sig.params)])


_DUMMY_FN = A.FunctionDef("<const>", [], A.TypeName("int"), A.Block([]))


def to_storage(v, t: Type):
    """Convert a host value to the storage form of type ``t``."""
    if isinstance(t, NumT):
        if isinstance(v, float):
            raise TypeError("floating-point arguments are not accepted; use int or Fraction")
        return convert(v, t.fmt)
    if isinstance(t, BoolT):
        return 1 if v else 0
    if isinstance(t, EnumT):
        return fl(v)
    if isinstance(t, ArrayT):
        if isinstance(v, ArrayValue):
            return ArrayValue([(k, to_storage(x, t.elem)) for k, x in v.items()])
        return ArrayValue([(k, to_storage(x, t.elem)) for k, x in enumerate(v)])
    if isinstance(t, StructT):
        items = v.items() if isinstance(v, (dict, ArrayValue)) else []
        types = {n.upper(): ft for n, ft in t.fields}
        return ArrayValue([(str(k).upper(), to_storage(x, types[str(k).upper()])) for k, x in items])
    raise TypeError(f"cannot pass a value of type {t}")


def from_storage(v, t: Type):
    """Interpreted value of storage ``v`` of type ``t`` (registers only; others unchanged)."""
    if isinstance(t, NumT) and t.fmt.is_register:
        return interpret_raw(v, t.fmt)
    return v


def run(cp: CheckedProgram, fn: str, args: Sequence[Any], options: Optional[RunOptions] = None):
    """One-shot convenience wrapper around :class:`Interpreter`."""
    return Interpreter(cp, options).run(fn, args)
