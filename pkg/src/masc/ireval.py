"""Evaluator for the functional IR.

Terms are compiled once into Python closures over a dict environment.  A
function's self-call in tail position does not grow the Python stack: it
returns a marker that the caller's loop turns into the next iteration, so
loops translated into recursion run in constant stack depth.  A hook can
observe every self-call together with the measure before and after it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from . import numeric as N
from .errors import AssertionFailure, IREvalError
from .sexpr import NIL, T, Symbol, parse_all
from .translate import FuncIR


class _Tail:
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = args


def _falsy(v) -> bool:
    return v is False or v is None or (isinstance(v, N.ArrayValue) and not v._entries)


def _int(x, what):
    if not isinstance(x, int) or isinstance(x, bool):
        raise IREvalError(f"{what}: expected an integer, got {x!r}")
    return x


def _num(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise IREvalError(f"{what}: expected a number, got {x!r}")
    return x


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _div(a, b):
    if b == 0:
        raise IREvalError("division by zero")
    return _norm(Fraction(a) / Fraction(b))


def _expt(b, e):
    _int(e, "EXPT")
    return _norm(Fraction(b) ** e) if e < 0 else b ** e


def _minus(*xs):
    if len(xs) == 1:
        return -xs[0]
    out = xs[0]
    for x in xs[1:]:
        out = out - x
    return _norm(out)


def _plus(*xs):
    out = 0
    for x in xs:
        out = out + x
    return _norm(out)


def _times(*xs):
    out = 1
    for x in xs:
        out = out * x
    return _norm(out)


def _cat(*xs):
    if len(xs) % 2:
        raise IREvalError("CAT takes value/width pairs")
    return N.cat(*zip(xs[0::2], xs[1::2]))


def _nfix(x):
    return x if isinstance(x, int) and not isinstance(x, bool) and x >= 0 else 0


def _cmp(op):
    def f(a, b):
        return N.logcmp(op, _num(a, "comparison"), _num(b, "comparison"))
    return f


def _bcmp(op):
    def f(a, b):
        return bool(N.logcmp(op, _num(a, "comparison"), _num(b, "comparison")))
    return f


def _equal(a, b):
    return a == b


def _mod(a, b):
    return _norm(N.mod(a, b))


def _bits(x, i, j):
    return N.bits(_int(x, "BITS"), _int(i, "BITS"), _int(j, "BITS"))


def _bitn(x, i):
    return N.bitn(_int(x, "BITN"), _int(i, "BITN"))


def _intval(w, x):
    return N.intval(w, _int(x, "INTVAL"))


def _lognot1(x):
    return 1 if x == 0 else 0


# strict primitives: every argument is evaluated
_STRICT: dict[str, Callable] = {
    "+": _plus, "-": _minus, "*": _times, "/": _div,
    "FL": lambda x: N.fl(_num(x, "FL")), "MOD": _mod, "EXPT": _expt,
    "BITS": _bits, "BITN": _bitn, "SETBITS": N.setbits, "SETBITN": N.setbitn,
    "CAT": _cat, "INTVAL": _intval,
    "LOG<": _cmp("<"), "LOG<=": _cmp("<="), "LOG>": _cmp(">"), "LOG>=": _cmp(">="),
    "LOG=": lambda a, b: 1 if a == b else 0, "LOG<>": lambda a, b: 0 if a == b else 1,
    "LOGAND": lambda a, b: a & b, "LOGIOR": lambda a, b: a | b, "LOGXOR": lambda a, b: a ^ b,
    "LOGNOT": N.lognot, "LOGNOT1": _lognot1,
    "<": _bcmp("<"), "<=": _bcmp("<="), ">": _bcmp(">"), ">=": _bcmp(">="),
    "=": _equal, "/=": lambda a, b: a != b, "NOT": _falsy,
    "AG": N.ag, "AS": N.as_, "MV": lambda *xs: tuple(xs), "NFIX": _nfix,
    "INTEGERP": lambda x: isinstance(x, int) and not isinstance(x, bool),
    "1+": lambda x: x + 1, "1-": lambda x: x - 1,
}


@dataclass
class MeasureEvent:
    function: str
    before: object
    after: object

    @property
    def ok(self) -> bool:
        return (isinstance(self.before, int) and isinstance(self.after, int)
                and self.before >= 0 and self.after >= 0 and self.after < self.before)


@dataclass
class MeasureLog:
    """Collects self-call measure observations; ``violations`` are the decreasing-measure failures."""

    events: int = 0
    violations: list[MeasureEvent] = field(default_factory=list)
    keep: int = 20

    def __call__(self, ev: MeasureEvent) -> None:
        self.events += 1
        if not ev.ok and len(self.violations) < self.keep:
            self.violations.append(ev)


class _Fn:
    __slots__ = ("name", "params", "body", "measure", "ir")

    def __init__(self, ir: FuncIR):
        self.ir = ir
        self.name = str(ir.name)
        self.params = [str(p) for p in ir.params]
        self.body = None
        self.measure = None


class IREvaluator:
    """Runs a list of :class:`FuncIR` (or DEFUN forms, or their text)."""

    def __init__(self, defs, measure_hook: Optional[Callable[[MeasureEvent], None]] = None):
        if isinstance(defs, str):
            defs = parse_all(defs)
        self.fns: dict[str, _Fn] = {}
        for d in defs:
            ir = d if isinstance(d, FuncIR) else FuncIR.from_sexpr(d)
            if str(ir.name) in self.fns:
                raise IREvalError(f"duplicate definition of {ir.name}")
            self.fns[str(ir.name)] = _Fn(ir)
        self.measure_hook = measure_hook
        for f in self.fns.values():
            f.body = self._compile(f.ir.body, f.name)
            if f.ir.measure is not None:
                f.measure = self._compile(f.ir.measure, None)

    def names(self) -> list[str]:
        return list(self.fns)

    def call(self, name: str, args: Iterable) -> object:
        f = self.fns.get(str(name).upper()) or self.fns.get(str(name))
        if f is None:
            raise IREvalError(f"undefined function {name}")
        return self._call(f, list(args))

    def _call(self, f: _Fn, args: list):
        if len(args) != len(f.params):
            raise IREvalError(f"{f.name} expects {len(f.params)} arguments, got {len(args)}")
        hook = self.measure_hook if f.measure is not None else None
        while True:
            env = dict(zip(f.params, args))
            r = f.body(env)
            if r.__class__ is not _Tail:
                return r
            if hook is not None:
                hook(MeasureEvent(f.name, f.measure(env), f.measure(dict(zip(f.params, r.args)))))
            args = r.args

    # -- compilation ------------------------------------------------------------

    def _compile(self, t, tail: Optional[str]):
        """Closure env -> value; ``tail`` names the function whose self-calls may be deferred."""
        if isinstance(t, bool):
            raise IREvalError("booleans are not IR terms")
        if isinstance(t, int):
            return lambda env, v=t: v
        if isinstance(t, Symbol):
            if t == T:
                return lambda env: True
            if t == NIL:
                return lambda env: N.EMPTY_ARRAY
            if t.startswith(":"):
                return lambda env, v=str(t[1:]): v
            name = str(t)

            def var(env):
                try:
                    return env[name]
                except KeyError:
                    raise IREvalError(f"unbound variable {name}") from None
            return var
        if not isinstance(t, list) or not t or not isinstance(t[0], Symbol):
            raise IREvalError(f"malformed term {t!r}")
        head = str(t[0])
        args = t[1:]
        c = self._compile

        if head in ("IF", "IF1"):
            if len(args) != 3:
                raise IREvalError(f"{head} takes 3 arguments")
            test, a, b = c(args[0], None), c(args[1], tail), c(args[2], tail)
            if head == "IF":
                return lambda env: b(env) if _falsy(test(env)) else a(env)
            return lambda env: b(env) if test(env) == 0 else a(env)
        if head in ("LET", "LET*"):
            names = [str(v) for v, _ in args[0]]
            terms = [c(x, None) for _, x in args[0]]
            body = c(args[1], tail)
            pairs = list(zip(names, terms))
            if head == "LET":
                def let(env):
                    new = dict(env)
                    for n, f in pairs:
                        new[n] = f(env)
                    return body(new)
                return let

            def letstar(env):
                new = dict(env)
                for n, f in pairs:
                    new[n] = f(new)
                return body(new)
            return letstar
        if head == "MV-LET":
            names = [str(v) for v in args[0]]
            val, body = c(args[1], None), c(args[2], tail)

            def mvlet(env):
                vs = val(env)
                if not isinstance(vs, tuple) or len(vs) != len(names):
                    raise IREvalError(f"MV-LET expected {len(names)} values, got {vs!r}")
                new = dict(env)
                new.update(zip(names, vs))
                return body(new)
            return mvlet
        if head in ("AND", "OR", "LOGAND1", "LOGIOR1"):
            fs = [c(x, None) for x in args]
            if head == "AND":
                def and_(env):
                    v = True
                    for f in fs:
                        v = f(env)
                        if _falsy(v):
                            return False
                    return v
                return and_
            if head == "OR":
                def or_(env):
                    for f in fs:
                        v = f(env)
                        if not _falsy(v):
                            return v
                    return False
                return or_
            x, y = fs
            if head == "LOGAND1":
                return lambda env: 0 if x(env) == 0 else (0 if y(env) == 0 else 1)
            return lambda env: 1 if x(env) != 0 else (0 if y(env) == 0 else 1)
        if head == "IN-FUNCTION":
            fn, test = str(args[0]), c(args[1], None)

            def in_function(env):
                v = test(env)
                if _falsy(v) or v == 0:
                    raise AssertionFailure(fn)
                return True
            return in_function
        fs = [c(x, None) for x in args]
        if head in _STRICT:
            prim = _STRICT[head]

            def apply(env):
                try:
                    return prim(*[f(env) for f in fs])
                except (IREvalError, AssertionFailure):
                    raise
                except (TypeError, ValueError, ZeroDivisionError) as e:
                    raise IREvalError(f"{head}: {e}") from None
            return apply
        if head not in self.fns:
            raise IREvalError(f"undefined function {head}")
        if head == tail:
            return lambda env: _Tail([f(env) for f in fs])
        fns = self.fns
        return lambda env: self._call(fns[head], [f(env) for f in fs])


def eval_ir(defs, name: str, args: Iterable, measure_hook=None):
    return IREvaluator(defs, measure_hook).call(name, args)
