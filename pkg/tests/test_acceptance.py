"""Acceptance criteria 1-8.

Each test records one PASS/FAIL line; conftest prints the lines in the
terminal summary.  ``python tests/test_acceptance.py`` runs just these.
"""

from __future__ import annotations

import functools
import random
import sys
import time

import pytest
from golden import GOLDEN_BAZ, GOLDEN_FOO, SF8I2_BLOCK

from masc import booth
from masc.emit import emit_statement
from masc.frontend import check_program, parse
from masc.harness import MODELS, TARGETS, booth_grid, differential, imul_end_to_end, load_model, model_source, prepare
from masc.interp import Interpreter
from masc.ireval import IREvaluator
from masc.numeric import (EMPTY_ARRAY, ag, as_, bits, convert, interpret_raw, intval, lognot, setbits, sf, si, uf,
                          ui)
from masc.sexpr import Symbol, parse_sexpr, print_sexpr, tokens_of
from masc.translate import load_ir, translate

SEED = 2718
RESULTS: list[str] = []


def record(n: int, ok: bool, text: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n}: {text}"
    RESULTS.append(line)


# -- 1 ---------------------------------------------------------------------------------


def test_criterion_1_multiplier():
    t0 = time.perf_counter()
    r = imul_end_to_end(random.Random(SEED), 100_000)
    secs = time.perf_counter() - t0
    ok = r.passed and r.cases == 100_000 + 36 and secs < 120
    record(1, ok, f"Imul(s1, s2) == s1*s2 on {r.cases} pairs in {secs:.1f} s {r.detail}".rstrip())
    assert ok, r.detail


# -- 2 ---------------------------------------------------------------------------------


def test_criterion_2_booth_grid():
    r = booth_grid(range(2, 6), range(1, 4))
    ok = r.passed and r.seconds < 10
    record(2, ok, f"Booth identities exhaustive over {r.cases} (n, m, x, y) in {r.seconds:.2f} s {r.detail}".rstrip())
    assert ok, r.detail


# -- 3 and 8 share the same runs -----------------------------------------------------------


@functools.lru_cache(maxsize=1)
def translation_runs():
    models = {name: prepare(name) for name in MODELS}
    results = [differential(models[name], fn, random.Random(f"{SEED}:{name}:{fn}"), 1000) for name, fn in TARGETS]
    return models, results


def test_criterion_3_translation_soundness():
    _, results = translation_runs()
    bad = [r for r in results if not r.passed]
    cases = sum(r.cases for r in results)
    record(3, not bad, f"evalIR(translate(p)) == run(p) for {len(results)} functions, {cases} inputs"
           + (f"; {bad[0].line()}" if bad else ""))
    assert not bad, [r.line() for r in bad]


def test_criterion_8_measure_validity():
    models, _ = translation_runs()
    events = sum(m.measures.events for m in models.values())
    violations = [v for m in models.values() for v in m.measures.violations]
    fns = sorted({v.function for v in violations})
    detail = f"{events} recursive calls checked"
    if violations:
        v = violations[0]
        detail += f"; measure not decreasing in {', '.join(fns)} (e.g. {v.before} -> {v.after})"
    record(8, not violations, detail)
    assert not violations, detail


# -- 4 ---------------------------------------------------------------------------------


def test_criterion_4_golden_translations():
    problems = []
    foo_cp, baz_cp = load_model("foo"), load_model("baz")
    ours_foo, ours_baz = translate(foo_cp), translate(baz_cp)
    golden_foo = [f for f in ours_foo if f.name == "BAR"] + load_ir(GOLDEN_FOO)
    golden_baz = load_ir(GOLDEN_BAZ)
    for ours, golden in ((ours_foo, golden_foo), (ours_baz, golden_baz)):
        mine = {str(f.name): f for f in ours}
        for g in golden:
            f = mine.get(str(g.name))
            if f is None:
                problems.append(f"missing {g.name}")
                continue
            if f.params != g.params:
                problems.append(f"{g.name} params {f.params} != {g.params}")
            if f.measure != g.measure:
                problems.append(f"{g.name} measure {f.measure} != {g.measure}")
    rng = random.Random(SEED)
    evs = [(IREvaluator(ours_foo), IREvaluator(golden_foo), "FOO", Interpreter(foo_cp), "foo"),
           (IREvaluator(ours_baz), IREvaluator(golden_baz), "BAZ", Interpreter(baz_cp), "baz")]
    runs = 0
    for mine, gold, name, it, fn in evs:
        for _ in range(1000):
            args = [rng.randint(0, 50) for _ in range(3)]
            runs += 1
            a, b, c = mine.call(name, args), gold.call(name, args), it.run(fn, args)
            if not a == b == c:
                problems.append(f"{name}{tuple(args)}: ours {a}, reference {b}, interpreter {c}")
                break
    ok = not problems
    record(4, ok, f"foo/baz translations match reference parameters, measures and {runs} results"
           + (f"; {problems[0]}" if problems else ""))
    assert ok, problems


# -- 5 ---------------------------------------------------------------------------------


def _random_tree(rng: random.Random, depth: int = 0):
    if depth > 4 or rng.random() < 0.3:
        kind = rng.randrange(4)
        if kind == 0:
            return rng.randint(-(2**70), 2**70)
        if kind == 1:
            return Symbol(rng.choice(["LET", "MV-LET", "1+", "LOG<=", ":A", "X", "MV%0", "_I", "NIL", "T"]))
        return Symbol("".join(rng.choice("abXY(|) ;\\-09") for _ in range(rng.randint(1, 5))))
    return [_random_tree(rng, depth + 1) for _ in range(rng.randint(0, 5))]


def test_criterion_5_sexpr_fidelity():
    cp = load_model("sf8i2")
    body = cp.program.items[0].body.stmts
    block = [Symbol("BLOCK")] + [emit_statement(cp, "Sf8i2Example", s) for s in body[:3]]
    golden_ok = tokens_of(block) == tokens_of(parse_sexpr(SF8I2_BLOCK))
    rng = random.Random(SEED)
    bad = 0
    for _ in range(10_000):
        t = _random_tree(rng)
        if parse_sexpr(print_sexpr(t, rng.randint(20, 100))) != t:
            bad += 1
    ok = golden_ok and not bad
    record(5, ok, f"sf8i2 block AST {'matches' if golden_ok else 'differs from'} the reference token for token; "
           f"{10_000 - bad}/10000 random trees round-trip")
    assert ok


# -- 6 ---------------------------------------------------------------------------------


def test_criterion_6_divide():
    rewritten = load_model("divide")
    direct = check_program(parse(model_source("divide")), allow_while=True)
    assert not direct.errors
    it_rw, it_direct = Interpreter(rewritten), Interpreter(direct)
    ir = IREvaluator(translate(rewritten))
    example = it_rw.run("Divide", [23, 5])
    bad = [(m, n) for m in range(1, 51) for n in range(1, 51)
           if not it_rw.run("Divide", [m, n]) == it_direct.run("Divide", [m, n]) == ir.call("DIVIDE", [m, n])]
    ok = example == (4, 3) and not bad
    record(6, ok, f"Divide(23, 5) = {example}; bounded rewrite agrees with the while loop on 2500 pairs"
           + (f"; first disagreement {bad[0]}" if bad else ""))
    assert ok


# -- 7 ---------------------------------------------------------------------------------


def _algebra_failures(rng: random.Random) -> dict[str, int]:
    fails: dict[str, int] = {}

    def check(name, cond):
        if not cond:
            fails[name] = fails.get(name, 0) + 1

    for x in range(-300, 300):
        for i in range(0, 10):
            for j in range(0, i + 1):
                v = bits(x, i, j)
                check("bits range", 0 <= v < 2 ** (i - j + 1))
                check("bits decomposition", x % 2 ** (i + 1) == v * 2**j + bits(x, j - 1, 0))
    for w in range(1, 9):
        for x in range(2**w):
            for i in range(w):
                for j in range(i + 1):
                    y = rng.getrandbits(10)
                    z = setbits(x, w, i, j, y)
                    check("setbits/bits", bits(z, i, j) == bits(y, i - j, 0)
                          and setbits(z, w, i, j, bits(x, i, j)) == x)
            v = intval(w, x)
            check("intval congruence", (v - x) % 2**w == 0 and -(2 ** (w - 1)) <= v < 2 ** (w - 1))
            check("complement", bits(lognot(x), w - 1, 0) == 2**w - 1 - x)
        formats = [ui(w), si(w)] + [f(w, m) for m in range(1, w + 1) for f in (uf, sf)]
        for f in formats:
            for r in range(2**w):
                check("convert/interpret", convert(interpret_raw(r, f), f) == r)
    for _ in range(2000):
        a = EMPTY_ARRAY
        for _ in range(rng.randint(0, 8)):
            a = as_(rng.randint(0, 9), rng.randint(-3, 3), a)
        i, j, v = rng.randint(0, 9), rng.randint(0, 9), rng.randint(-3, 3)
        check("ag/as", ag(i, as_(i, v, a)) == v and as_(i, ag(i, a), a) == a
              and (i == j or ag(j, as_(i, v, a)) == ag(j, a)))
    for _ in range(10_000):
        q = [rng.getrandbits(64) for _ in range(4)]
        s, c = booth.compress42(*q)
        s3, c3 = booth.compress32(*q[:3])
        check("compressors", (s + c - sum(q)) % 2**64 == 0 and (s3 + c3 - sum(q[:3])) % 2**64 == 0)
    return fails


def test_criterion_7_primitive_algebra():
    fails = _algebra_failures(random.Random(SEED))
    ok = not fails
    record(7, ok, "bits, setbits, intval, convert/interpret, complement, ag/as and compressor laws hold"
           if ok else f"failures: {fails}")
    assert ok, fails


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
