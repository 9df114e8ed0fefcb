import random

import pytest
from golden import GOLDEN_BAZ, GOLDEN_FOO, SF8I2_BLOCK

from masc.emit import emit_program, emit_statement
from masc.errors import AssertionFailure, IREvalError, TranslationError
from masc.frontend import load
from masc.interp import Interpreter
from masc.ireval import IREvaluator, MeasureLog, eval_ir
from masc.sexpr import Symbol, parse_all, parse_sexpr, print_all, tokens_of
from masc.translate import FuncIR, load_ir, merge_lets, render, summarize, translate, translate_ast

S = Symbol


def by_name(defs):
    return {str(f.name): f for f in defs}


# -- emitted AST ------------------------------------------------------------------------


def test_sf8i2_block_token_for_token(models):
    cp = models["sf8i2"]
    body = cp.program.items[0].body.stmts
    block = [S("BLOCK")] + [emit_statement(cp, "Sf8i2Example", s) for s in body[:3]]
    assert tokens_of(block) == tokens_of(parse_sexpr(SF8I2_BLOCK))


def test_emitted_ast_roundtrips(models):
    for cp in models.values():
        forms = emit_program(cp)
        assert parse_all(print_all(forms)) == forms


def test_emit_shapes(models):
    foo = by_name_forms(emit_program(models["baz"]))["BAZ"]
    text = print_all([foo])
    assert "(FOR ((DECLARE I 0) (LOGAND1 (LOG< I U) (LOG< U V)) (ASSIGN I (+ I 2)))" in " ".join(text.split())
    assert "(ASSERT BAZ (LOG> V 0))" in text


def by_name_forms(forms):
    return {str(f[1]): f for f in forms}


# -- translation --------------------------------------------------------------------------


def test_foo_matches_printed_translation(models):
    ir = by_name(translate(models["foo"]))["FOO"]
    assert tokens_of(ir.to_sexpr()) == tokens_of(parse_sexpr(GOLDEN_FOO))


def test_baz_matches_printed_translation(models):
    ours = [f.to_sexpr() for f in translate(models["baz"])]
    assert [tokens_of(f) for f in ours] == [tokens_of(f) for f in parse_all(GOLDEN_BAZ)]


def test_baz_measures_and_params(models):
    d = by_name(translate(models["baz"]))
    assert d["BAZ-LOOP-0"].params == ["J", "V", "X", "U"]
    assert d["BAZ-LOOP-1"].params == ["I", "X", "V", "U"]
    assert d["BAZ-LOOP-1"].measure == parse_sexpr("(NFIX (- U I))")
    assert d["BAZ"].measure is None


def test_summarize_if_else_outs(models):
    foo = by_name_forms(emit_program(models["foo"]))["FOO"]
    s = summarize(foo, 3)
    assert s.outs == ["V", "U"]
    assert s.term == parse_sexpr("(IF1 (LOG>= X 0) (MV V (* 2 U)) (MV (* 3 U) U))")
    assert s.ins == ["X", "V", "U"]


@pytest.mark.parametrize("op, measure", [
    ("i < n; i++", "(NFIX (- N I))"),
    ("i <= n; i++", "(NFIX (- (1+ N) I))"),
    ("i > n; i--", "(NFIX (- I N))"),
    ("i >= n; i -= 3", "(NFIX (- I (1- N)))"),
])
def test_measure_shapes(op, measure):
    init = "0" if "<" in op else "20"
    cp = load(f"int f(int n) {{ int s = 0; for (int {'i = ' + init}; {op}) s += i; return s; }}")
    loop = by_name(translate(cp))["F-LOOP-0"]
    assert loop.measure == parse_sexpr(measure)
    log = MeasureLog()
    ev = IREvaluator(translate(cp), log)
    for n in range(-3, 12):
        assert ev.call("F", [n]) == Interpreter(cp).run("f", [n])
    assert log.events > 0 and not log.violations


def test_loops_numbered_inner_first_then_textual():
    cp = load("""uint f(uint n) { uint s = 0;
      for (uint i = 0; i < 3; i++) { for (uint j = 0; j < 2; j++) s++; }
      for (uint k = 0; k < 4; k++) s += k;
      return s; }""")
    d = by_name(translate(cp))
    assert list(d) == ["F-LOOP-0", "F-LOOP-1", "F-LOOP-2", "F"]
    assert d["F-LOOP-0"].loop_var == "J" and d["F-LOOP-1"].loop_var == "I" and d["F-LOOP-2"].loop_var == "K"


def test_nonlocal_loop_variable_is_returned():
    cp = load("uint f(uint n) { uint i = 0, s = 0; for (i = 1; i < n; i++) s += i; return i * 100 + s; }")
    d = by_name(translate(cp))
    assert d["F-LOOP-0"].params[0] == "I" and "I" in flat(d["F-LOOP-0"].body[-1])
    ev = IREvaluator(translate(cp))
    for n in range(6):
        assert ev.call("F", [n]) == Interpreter(cp).run("f", [n])


def flat(x):
    return print_all([x])


def test_merge_flag():
    cp = load("uint f(uint a) { uint b = a + 1; uint c = b * 2; uint d = a + 3; return c + d; }")
    merged = by_name(translate(cp))["F"].body
    plain = by_name(translate(cp, merge=False))["F"].body
    assert merged[0] == "LET*" and len(merged[1]) == 3
    assert plain[0] == "LET" and len(plain[1]) == 1
    assert merge_lets(plain) == merged
    for a in range(5):
        assert eval_ir(translate(cp), "F", [a]) == eval_ir(translate(cp, merge=False), "F", [a])


def test_parallel_let_when_independent():
    cp = load("uint f(uint a) { uint b = a + 1; uint c = a * 2; return b + c; }")
    body = by_name(translate(cp))["F"].body
    assert body[0] == "LET"


def test_mv_assign_into_array_element():
    cp = load("""<uint, uint> two(uint x) { return <x, x + 1>; }
                 uint[2] f(uint x) { uint a[2]; ui4 y; <a[0], y> = two(x); a[1] = y; return a; }""")
    ev = IREvaluator(translate(cp))
    for x in (0, 7, 15, 16):
        assert ev.call("F", [x]) == Interpreter(cp).run("f", [x])


def test_switch_and_constants():
    cp = load("""const uint K = 3;
      uint f(uint x) { uint r = 0; switch (x) { case 0: r = K; break; case 1: case 2: r = 5; break; default: r = x; }
      return r; }""")
    defs = translate(cp)
    assert by_name(defs)["K"].params == []
    ev = IREvaluator(defs)
    assert [ev.call("F", [x]) for x in range(5)] == [3, 5, 5, 3, 4]


def test_assertions_preserved_in_branches():
    cp = load("uint f(uint x) { if (x > 3) { assert(x < 10); } return x; }")
    ev = IREvaluator(translate(cp))
    assert ev.call("F", [5]) == 5
    with pytest.raises(AssertionFailure):
        ev.call("F", [12])


def test_render_and_reload(models):
    defs = translate(models["baz"])
    again = load_ir(render(defs))
    assert [f.to_sexpr() for f in again] == [f.to_sexpr() for f in defs]


def test_translate_errors():
    with pytest.raises(TranslationError):
        translate_ast([[S("DEFUNC"), S("F"), []]])
    with pytest.raises(TranslationError):
        translate_ast(parse_all("(DEFUNC F (X) (BLOCK (ASSIGN X 1)))"))
    with pytest.raises(TranslationError):
        FuncIR.from_sexpr(parse_sexpr("(DEFUN F)"))


# -- the evaluator ------------------------------------------------------------------------


def test_golden_text_agrees_with_interpreter(models):
    rng = random.Random(4)
    foo_defs = translate(models["foo"])
    golden_foo = IREvaluator([f for f in foo_defs if f.name == "BAR"] + load_ir(GOLDEN_FOO))
    golden_baz = IREvaluator(GOLDEN_BAZ)
    for _ in range(200):
        args = [rng.randint(0, 30) for _ in range(3)]
        assert golden_foo.call("FOO", args) == Interpreter(models["foo"]).run("foo", args)
        assert golden_baz.call("BAZ", args) == Interpreter(models["baz"]).run("baz", args)


def test_baz_measure_violation_is_observed(models):
    log = MeasureLog()
    ev = IREvaluator(translate(models["baz"]), log)
    ev.call("BAZ", [2, 1, 1])
    assert log.violations and {v.function for v in log.violations} == {"BAZ-LOOP-1"}


def test_self_calls_do_not_grow_the_stack():
    cp = load("uint f(uint n) { uint s = 0; for (uint i = 0; i < n; i++) s += i; return s; }")
    assert eval_ir(translate(cp), "F", [20000]) == 20000 * 19999 // 2


def test_evaluator_primitives():
    src = """
    (DEFUN P (X) (MV (BITS X 3 0) (BITN X 4) (CAT 1 1 X 2) (INTVAL 4 (BITS X 3 0)) (FL (/ X 3)) (MOD (- X) 5)))
    (DEFUN Q (X) (LET* ((Y (+ X 1)) (Y (* Y 2))) (IF (AND (< X Y) (NOT (= X 3))) Y NIL)))
    (DEFUN R (A) (AG :F (AS :F 7 A)))
    """
    ev = IREvaluator(src)
    assert ev.call("P", [0b11010]) == (0b1010, 1, 0b110, -6, 8, 4)
    assert ev.call("Q", [1]) == 4
    assert ev.call("R", [ev.call("Q", [3])]) == 7  # NIL reads as an empty array


def test_evaluator_errors():
    with pytest.raises(IREvalError):
        eval_ir("(DEFUN F (X) (MV-LET (A B) X A))", "F", [1])
    with pytest.raises(IREvalError):
        eval_ir("(DEFUN F (X) (G X))", "F", [1])
    with pytest.raises(IREvalError):
        eval_ir("(DEFUN F (X) Y)", "F", [1])
    with pytest.raises(IREvalError):
        eval_ir("(DEFUN F (X) X)", "F", [1, 2])
    with pytest.raises(AssertionFailure):
        eval_ir("(DEFUN F (X) (LET ((ASSERT (IN-FUNCTION F (> X 0)))) X))", "F", [0])
