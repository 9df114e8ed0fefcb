import pytest
from hypothesis import given, strategies as st

from masc.sexpr import NIL, SExprSyntaxError, Symbol, parse_all, parse_sexpr, print_all, print_sexpr, tokens_of

S = Symbol

symbols = st.one_of(
    st.sampled_from(["LET", "MV-LET", "1+", "LOG<=", ":A", "X", "MV%0", "_I", "NIL"]).map(S),
    st.text(alphabet="abcXYZ(|) \\;-09", min_size=1, max_size=6).map(S),
)
atoms = st.one_of(st.integers(-(2**70), 2**70), symbols)
trees = st.recursive(atoms, lambda kids: st.lists(kids, max_size=6), max_leaves=30)


@given(trees, st.integers(10, 100))
def test_print_parse_roundtrip(t, width):
    assert parse_sexpr(print_sexpr(t, width)) == t


def test_reader_upcases_and_handles_comments():
    assert parse_sexpr("(let ((x 1)) ; comment\n x)") == [S("LET"), [[S("X"), 1]], S("X")]
    assert parse_sexpr("|lower case|") == "lower case"
    assert parse_sexpr("-12") == -12 and parse_sexpr("|12|") == S("12")
    assert parse_sexpr("()") == []


def test_printer_escapes():
    assert print_sexpr([S("foo"), S("A B"), S("7"), 3]) == "(|foo| |A B| |7| 3)"


def test_breaks_long_forms():
    form = [S("DEFUN"), S("F"), [S("X")], [S("+")] + [S("X")] * 40]
    text = print_sexpr(form, 40)
    assert text.startswith("(DEFUN F (X)\n")
    assert all(len(line) <= 40 for line in text.splitlines()[:1])
    assert parse_sexpr(text) == form


@pytest.mark.parametrize("bad", ["(", ")", "(a |b", "'x"])
def test_syntax_errors(bad):
    with pytest.raises(SExprSyntaxError):
        parse_all(bad)


def test_parse_sexpr_requires_one_form():
    with pytest.raises(SExprSyntaxError):
        parse_sexpr("1 2")


def test_tokens_ignore_layout():
    a = parse_sexpr("(A\n   (B  C)\n D)")
    assert tokens_of(a) == ["(", "A", "(", "B", "C", ")", "D", ")"]
    assert print_all([NIL, 1]) == "NIL\n\n1\n"
