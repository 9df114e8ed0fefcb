import pytest

from masc.errors import CheckError, ParseError
from masc.frontend import ast as A
from masc.frontend import check_program, load, parse, parse_expression, parse_statement, rewrite_bounded_loops, to_source
from masc.harness import MODELS, model_source


def rules(src):
    try:
        cp = check_program(rewrite_bounded_loops(parse(src)))
    except CheckError as e:
        return {d.rule for d in e.diagnostics}
    return {d.rule for d in cp.errors}


def warnings(src):
    return {d.rule for d in check_program(parse(src)).warnings}


# -- parser -----------------------------------------------------------------------------


def test_precedence():
    e = parse_expression("a + b * c << 1 == d & e")
    assert isinstance(e, A.Binary) and e.op == "&"
    assert e.left.op == "==" and e.left.left.op == "<<" and e.left.left.left.op == "+"


def test_conditional_and_subrange():
    e = parse_expression("x > y ? a[3:1] : b[k]")
    assert isinstance(e, A.Cond)
    assert isinstance(e.then, A.Subrange) and isinstance(e.orelse, A.Index)


def test_compound_assignment_desugars():
    s = parse_statement("a[i] += b[i];")
    assert isinstance(s, A.Assign) and isinstance(s.value, A.Binary) and s.value.op == "+"
    s = parse_statement("k--;")
    assert isinstance(s, A.Assign) and s.value.op == "-"


def test_directive_attaches_to_loop():
    prog = parse("uint f(uint n) { uint r = n;\n // MASC: n iterations\n while (r > 0) r = r - 1; return r; }")
    loop = prog.items[0].body.stmts[1]
    assert isinstance(loop, A.While) and loop.directive is not None


def test_switch_arms():
    s = parse_statement("switch (x) { case 1: case 2: y = 1; break; default: y = 0; }")
    assert [len(a.labels) for a in s.arms] == [2, 0]
    assert s.arms[1].default


@pytest.mark.parametrize("src", [
    "uint f( { }",
    "uint f(uint x) { return x }",
    "uint f(uint x) { x = ; }",
    "uint f(uint x) { return 0x; }",
])
def test_syntax_errors(src):
    with pytest.raises(ParseError) as ei:
        parse(src)
    assert ei.value.diagnostics[0].pos is not None


@pytest.mark.parametrize("name", MODELS)
def test_print_parse_roundtrip_models(name):
    prog = parse(model_source(name))
    assert parse(to_source(prog)) == prog


def test_print_parse_roundtrip_expressions():
    for text in ["-(-x)", "(a - (b - c)) * d", "a < b && !(c || d)", "x[3:0] << 2 | y & 1",
                 "f(a, g(b))[2]", "c ? 1 : d ? 2 : 3", "~x[7:0]", "s.f + t.g[1]"]:
        e = parse_expression(text)
        assert parse_expression(to_source(e)) == e, text


# -- checker ----------------------------------------------------------------------------

GOOD_LOOP = "uint f(uint n, uint a[4]) { uint s = 0; for (uint i = 0; i < 4 && !(a[i] == n); i++) s += a[i]; return s; }"


def test_models_check(models):
    assert set(models) == set(MODELS)


def test_compound_loop_test_accepted():
    assert rules(GOOD_LOOP) == set()


@pytest.mark.parametrize("src, rule", [
    ("uint f() { uint s = 0; for (uint i = 0; i < 4; i++) { if (s > 2) break; s++; } return s; }", "break"),
    ("uint f() { uint s = 0; for (uint i = 0; i < 4; i++) { if (s > 2) continue; s++; } return s; }", "continue"),
    ("uint f() { uint s = 0; for (int i = 4; i < 8; i--) s++; return s; }", "loop-update"),
    ("uint f() { uint s = 0; for (uint i = 0; s < 8; i++) s++; return s; }", "loop-test"),
    ("uint f() { uint s = 0; for (uint i = 0; i < 8; i++) i = i + 1; return s; }", "loop-variable"),
    ("uint f(uint x) { uint y; return x + y; }", "uninitialized"),
    ("uint f(uint x) { uint y; if (x > 1) y = 1; return y; }", "uninitialized"),
    ("uint f(uint x) { if (x > 0) { uint x = 2; } return x; }", "shadowing"),
    ("uint f(uint x) { uint X = 1; return x; }", "case-collision"),
    ("uint f(uint x) { return f(x); }", "recursion"),
    ("uint f(uint x) { return g(x); }", "undeclared"),
    ("uint f(uint x) { if (x > 1) return 1; x = 2; return x; }", "return-placement"),
    ("uint f(uint x) { switch (x) { case 1: x = 2; case 2: x = 3; break; } return x; }", "switch"),
    ("uint f(uint x) { switch (x) { case 1: x = 2; break; case 1: x = 3; break; } return x; }", "switch"),
    ("uint f(uint x) { return x[3:0]; }", "register-op"),
    ("ui8 f(ui8 x) { return x[9:0]; }", "subrange"),
    ("uint f(uint x) { while (x > 0) x = x - 1; return x; }", "while-loop"),
    ("struct P { uint a; uint A; }; uint f(uint x) { return x; }", "struct"),
])
def test_rejections(src, rule):
    assert rule in rules(src)


def test_divide_quotient_bound_rejected():
    src = ("uint f(uint m, uint n) { uint q = 0, r = m;\n // MASC: q iterations\n"
           " while (r >= n) { q++; r = r - n; } return q; }")
    with pytest.raises(CheckError):
        load(src)


def test_measure_warning_for_growing_limit():
    assert "measure" in warnings(model_source("baz"))
    assert "measure" not in warnings(model_source("divide"))


def test_rewrite_turns_while_into_bounded_for():
    prog = rewrite_bounded_loops(parse(model_source("divide")))
    text = to_source(prog)
    assert "while" not in text and "_i < m && rem >= n" in text
