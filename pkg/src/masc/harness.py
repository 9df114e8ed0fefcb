"""Verification harness: differential interpreter-vs-IR runs, Booth grids, multiplier checks.

Everything is driven by a seeded :class:`random.Random`, so a given seed
always yields the same table.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Optional

from . import booth
from .emit import emit_program
from .errors import AssertionFailure, MascError
from .frontend import load
from .frontend.types import ArrayT, BoolT, EnumT, NumT, StructT
from .interp import Interpreter, to_storage
from .ireval import IREvaluator, MeasureLog
from .numeric import ArrayValue, Kind, bits
from .sexpr import parse_all, print_all
from .translate import translate, translate_ast

MODELS = ("divide", "sum8", "foo", "baz", "sf8i2", "imul")

# (model, function) pairs covered by the differential check
TARGETS = (
    ("divide", "Divide"), ("divide", "DivideCaller"),
    ("sum8", "Sum8"), ("sum8", "Sum8Caller"),
    ("foo", "foo"), ("foo", "bar"), ("baz", "baz"),
    ("sf8i2", "Sf8i2Block"), ("sf8i2", "Sf8i2Example"),
    ("imul", "Encode"), ("imul", "Booth"), ("imul", "PartialProducts"), ("imul", "Align"),
    ("imul", "Compress32"), ("imul", "Compress42"), ("imul", "Sum"), ("imul", "Imul"),
)

IMUL_EDGES = (0, 1, 2, 2**31 - 1, 2**31, 2**32 - 1)


def model_source(name: str) -> str:
    return resources.files("masc.models").joinpath(f"{name}.masc").read_text(encoding="utf-8")


def load_model(name: str):
    return load(model_source(name))


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<40} {self.cases:>8}{extra}"


# -- input generation ----------------------------------------------------------------

# small ranges for unbounded integer parameters, keeping loops short
_SMALL = 50
_DOMAINS: dict[tuple[str, str], Callable] = {
    ("divide", "Divide"): lambda r: [r.randint(0, _SMALL), r.randint(0, _SMALL)],
    ("divide", "DivideCaller"): lambda r: [r.randint(0, _SMALL), r.randint(0, _SMALL)],
}
_EXHAUSTIVE: dict[tuple[str, str], Callable[[], Iterable]] = {
    ("divide", "Divide"): lambda: itertools.product(range(13), range(13)),
    ("foo", "foo"): lambda: itertools.product(range(6), repeat=3),
    ("baz", "baz"): lambda: itertools.product(range(-3, 4), repeat=3),
    ("imul", "Encode"): lambda: ([s] for s in range(8)),
    ("sf8i2", "Sf8i2Block"): lambda: itertools.product(range(-128, 128, 17), range(0, 256, 15), [0]),
}


def random_value(t, rng: random.Random):
    """A random host value in the domain of type ``t``."""
    if isinstance(t, BoolT):
        return rng.randint(0, 1)
    if isinstance(t, NumT):
        f = t.fmt
        if f.is_register:
            return rng.getrandbits(f.width)
        if f.kind is Kind.UINT:
            return rng.randint(0, _SMALL)
        if f.kind is Kind.INT:
            return rng.randint(-_SMALL, _SMALL)
        return Fraction(rng.randint(-4 * _SMALL, 4 * _SMALL), 4)  # rational
    if isinstance(t, EnumT):
        return rng.choice(t.members)[1]
    if isinstance(t, ArrayT):
        return ArrayValue.from_list([random_value(t.elem, rng) for _ in range(t.size)])
    if isinstance(t, StructT):
        return ArrayValue([(n.upper(), random_value(ft, rng)) for n, ft in t.fields])
    raise TypeError(f"no generator for {t}")


def _outcome(f: Callable, args):
    try:
        return f(args)
    except AssertionFailure as e:
        return ("assertion", str(e.function).upper())
    except MascError as e:
        return ("error", type(e).__name__)


# -- differential checks ---------------------------------------------------------------


@dataclass
class _Model:
    name: str
    cp: object
    interp: Interpreter
    ir: IREvaluator
    ir_unmerged: IREvaluator
    ir_reparsed: IREvaluator
    measures: MeasureLog


def prepare(name: str) -> _Model:
    cp = load_model(name)
    log = MeasureLog()
    ir = IREvaluator(translate(cp), log)
    unmerged = IREvaluator(translate(cp, merge=False))
    reparsed = IREvaluator(translate_ast(parse_all(print_all(emit_program(cp)))))
    return _Model(name, cp, Interpreter(cp), ir, unmerged, reparsed, log)


def differential(model: _Model, fn: str, rng: random.Random, samples: int = 1000,
                 variants_every: int = 10) -> CheckResult:
    """Interpreter vs IR on random (and, where listed, exhaustive) inputs.

    Every ``variants_every``-th input is also run through the unmerged IR
    and through the IR rebuilt from the printed-and-reparsed AST.
    """
    t0 = time.perf_counter()
    sig = model.cp.functions[fn]
    gen = _DOMAINS.get((model.name, fn))
    inputs: list = []
    ex = _EXHAUSTIVE.get((model.name, fn))
    if ex is not None:
        inputs.extend(list(a) for a in ex())
    for _ in range(samples):
        inputs.append(gen(rng) if gen else [random_value(p.type, rng) for p in sig.params])
    mismatches = []
    for k, host in enumerate(inputs):
        args = [to_storage(a, p.type) for a, p in zip(host, sig.params)]
        want = _outcome(lambda a: model.interp.call(fn, a), args)
        got = [_outcome(lambda a: model.ir.call(fn, a), args)]
        if k % variants_every == 0:
            got.append(_outcome(lambda a: model.ir_unmerged.call(fn, a), args))
            got.append(_outcome(lambda a: model.ir_reparsed.call(fn, a), args))
        if any(g != want for g in got):
            mismatches.append((host, want, got))
    detail = ""
    if mismatches:
        host, want, got = mismatches[0]
        detail = f"{len(mismatches)} mismatches; first {host}: run={want!r} ir={got!r}"
    return CheckResult(f"translate {model.name}:{fn}", not mismatches, len(inputs), detail,
                       time.perf_counter() - t0)


def measure_result(model: _Model) -> CheckResult:
    log = model.measures
    if not log.violations:
        return CheckResult(f"measures {model.name}", True, log.events)
    v = log.violations[0]
    fns = sorted({x.function for x in log.violations})
    return CheckResult(f"measures {model.name}", False, log.events,
                       f"{', '.join(fns)}: measure {v.before} -> {v.after}")


# -- Booth and multiplier ---------------------------------------------------------------


def booth_grid(ns=range(2, 6), ms=range(1, 4)) -> CheckResult:
    t0 = time.perf_counter()
    cases = 0
    bad = []
    for n in ns:
        for m in ms:
            for x in range(1 << (n - 1)):
                for y in range(1 << (2 * m - 1)):
                    cases += 1
                    s = booth.sum_pp4(x, y, m, n)
                    sp = booth.sum_pp4p(x, y, m, n)
                    if (1 << n) + s != (1 << (n + 2 * m)) + x * y or bits(sp, n + 2 * m - 1, 0) != x * y:
                        bad.append((n, m, x, y))
    detail = f"first failure (n, m, x, y) = {bad[0]}" if bad else ""
    return CheckResult("booth identity grid", not bad, cases, detail, time.perf_counter() - t0)


def imul_pairs(rng: random.Random, samples: int) -> Iterable[tuple[int, int]]:
    yield from itertools.product(IMUL_EDGES, repeat=2)
    for _ in range(samples):
        yield rng.getrandbits(32), rng.getrandbits(32)


def imul_end_to_end(rng: random.Random, samples: int, interp: Optional[Interpreter] = None) -> CheckResult:
    t0 = time.perf_counter()
    it = interp or Interpreter(booth.imul_model())
    f = it.function("Imul")
    cases = 0
    bad = []
    for a, b in imul_pairs(rng, samples):
        cases += 1
        if f(a, b) != a * b:
            bad.append((a, b))
    detail = f"first failure {bad[0]}" if bad else ""
    return CheckResult("imul end to end", not bad, cases, detail, time.perf_counter() - t0)


def imul_stages(rng: random.Random, samples: int, interp: Optional[Interpreter] = None) -> CheckResult:
    t0 = time.perf_counter()
    it = interp or Interpreter(booth.imul_model())
    failed: dict[str, tuple] = {}
    cases = 0
    for a, b in itertools.chain(itertools.product(IMUL_EDGES, repeat=2),
                                ((rng.getrandbits(32), rng.getrandbits(32)) for _ in range(samples))):
        cases += 1
        for stage, ok in booth.stage_checks(a, b, it).items():
            if not ok:
                failed.setdefault(stage, (a, b))
    detail = "; ".join(f"{s} fails at {p}" for s, p in failed.items())
    return CheckResult("imul stage lemmas", not failed, cases, detail, time.perf_counter() - t0)


def compressor_contract(rng: random.Random, samples: int = 10000) -> CheckResult:
    bad = 0
    for _ in range(samples):
        a, b, c, d = (rng.getrandbits(64) for _ in range(4))
        s, k = booth.compress42(a, b, c, d)
        s3, k3 = booth.compress32(a, b, c)
        if (s + k - (a + b + c + d)) % 2**64 or (s3 + k3 - (a + b + c)) % 2**64:
            bad += 1
    return CheckResult("compressor mod 2^64 contract", not bad, samples, f"{bad} failures" if bad else "")


# -- the whole table -----------------------------------------------------------------


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> str:
        return "\n".join(r.line() for r in self.results)


def verify(seed: int = 0, samples: int = 1000, imul_samples: int = 10000,
           progress: Optional[Callable[[CheckResult], None]] = None) -> Report:
    """Run every check.  Each check draws from its own generator seeded from ``seed``."""
    report = Report()

    def add(r: CheckResult) -> None:
        report.results.append(r)
        if progress:
            progress(r)

    models = {name: prepare(name) for name in MODELS}
    for name, fn in TARGETS:
        add(differential(models[name], fn, random.Random(f"{seed}:{name}:{fn}"), samples))
    for name in MODELS:
        add(measure_result(models[name]))
    add(booth_grid())
    add(compressor_contract(random.Random(f"{seed}:compress")))
    it = models["imul"].interp
    add(imul_stages(random.Random(f"{seed}:stages"), max(1, imul_samples // 100), it))
    add(imul_end_to_end(random.Random(f"{seed}:imul"), imul_samples, it))
    return report
