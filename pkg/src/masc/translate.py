"""Imperative-to-functional translation of emitted MASC S-expressions.

Each statement of a function body is summarized by the variables it reads
(``ins``), the non-local variables it writes (``outs``) and a term whose
value is the new value of ``outs``.  The body becomes a nest of LET, LET*
and MV-LET bindings, one level per statement, with the final statement's
term at the bottom.  Every ``for`` loop becomes its own recursive function
whose measure is read off the loop test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import TranslationError
from .sexpr import NIL, T, Symbol, parse_all, print_sexpr

S = Symbol

ASSERT = S("ASSERT")
MV = S("MV")
_RECUR = S("%RECUR")  # placeholder for a loop's self-call until its name is known

# Operators of the term language other than user functions.
PRIMITIVES = frozenset(map(S, """
    + - * / FL MOD EXPT BITS BITN SETBITS SETBITN CAT INTVAL
    LOG< LOG<= LOG> LOG>= LOG= LOG<> LOGAND LOGIOR LOGXOR LOGNOT LOGAND1 LOGIOR1 LOGNOT1
    IF1 IF AND OR NOT < <= > >= = /= AG AS MV NFIX INTEGERP 1+ 1- IN-FUNCTION LET LET* MV-LET
""".split()))

_TO_BOOL = {"LOG<": "<", "LOG<=": "<=", "LOG>": ">", "LOG>=": ">=", "LOG=": "=", "LOG<>": "/="}


@dataclass
class StmtSummary:
    ins: list[Symbol]
    outs: list[Symbol]
    term: object


@dataclass
class FuncIR:
    """A translated function: the MASC function itself or one of its loops."""

    name: Symbol
    params: list[Symbol]
    body: object
    measure: object = None
    source: Optional[str] = None  # MASC function this came from
    loop_var: Optional[Symbol] = None

    @property
    def recursive(self) -> bool:
        return self.measure is not None

    def to_sexpr(self) -> list:
        out = [S("DEFUN"), self.name, list(self.params)]
        if self.measure is not None:
            out.append([S("DECLARE"), [S("XARGS"), S(":MEASURE"), self.measure]])
        out.append(self.body)
        return out

    @classmethod
    def from_sexpr(cls, form) -> "FuncIR":
        if not (isinstance(form, list) and len(form) in (4, 5) and form[0] == "DEFUN"):
            raise TranslationError(f"not a DEFUN form: {print_sexpr(form)[:80]}")
        measure = None
        if len(form) == 5:
            decl = form[3]
            try:
                xargs = decl[1]
                measure = xargs[xargs.index(S(":MEASURE")) + 1]
            except (IndexError, ValueError, TypeError):
                raise TranslationError("malformed DECLARE in DEFUN") from None
        return cls(form[1], list(form[2]), form[-1], measure)


# -- term utilities ------------------------------------------------------------------


def is_var(x) -> bool:
    return isinstance(x, Symbol) and x not in (T, NIL) and not x.startswith(":")


def free_vars(term, out: Optional[list] = None, bound: frozenset = frozenset()) -> list:
    """Variables read by ``term``, in order of first occurrence."""
    if out is None:
        out = []
    if is_var(term):
        if term not in bound and term not in out:
            out.append(term)
        return out
    if not isinstance(term, list) or not term:
        return out
    head = term[0]
    if head == "LET":
        for v, t in term[1]:
            free_vars(t, out, bound)
        return free_vars(term[2], out, bound | {v for v, _ in term[1]})
    if head == "LET*":
        b = bound
        for v, t in term[1]:
            free_vars(t, out, b)
            b = b | {v}
        return free_vars(term[2], out, b)
    if head == "MV-LET":
        free_vars(term[2], out, bound)
        return free_vars(term[3], out, bound | set(term[1]))
    if head == "IN-FUNCTION":
        return free_vars(term[2], out, bound)
    for a in term[1:]:
        free_vars(a, out, bound)
    return out


def subst(term, var: Symbol, value):
    """Replace free occurrences of ``var``; only used on binding-free tuples."""
    if term == var and isinstance(term, Symbol):
        return value
    if isinstance(term, list):
        return [subst(t, var, value) for t in term]
    return term


def bool_term(t):
    """Boolean form of a numeric (C-style) condition."""
    if isinstance(t, int):
        return T if t != 0 else NIL
    if isinstance(t, list) and t:
        h = t[0]
        if h in _TO_BOOL:
            return [S(_TO_BOOL[h]), t[1], t[2]]
        if h == "LOGAND1":
            return [S("AND"), bool_term(t[1]), bool_term(t[2])]
        if h == "LOGIOR1":
            return [S("OR"), bool_term(t[1]), bool_term(t[2])]
        if h == "LOGNOT1":
            return [S("NOT"), bool_term(t[1])]
    return [S("NOT"), [S("="), t, 0]]


def tuple_term(outs: list):
    if not outs:
        return NIL
    if len(outs) == 1:
        return outs[0]
    return [MV] + list(outs)


def _is_tuple_of_vars(t) -> bool:
    return is_var(t) or (isinstance(t, list) and t and t[0] == "MV" and all(is_var(x) for x in t[1:]))


def scalar_vars(t, out: list) -> list:
    """Variables in positions that must hold numbers (operands of arithmetic and comparisons)."""
    if not isinstance(t, list) or not t:
        return out
    head = t[0]
    args = t[1:]
    if head not in PRIMITIVES:
        for a in args:
            scalar_vars(a, out)
        return out
    skip = set()
    if head == "AG":
        skip = {1}
    elif head == "AS":
        skip = {1, 2}
    elif head == "IF1":
        skip = {1, 2}
    for k, a in enumerate(args):
        if is_var(a):
            if k not in skip and a not in out:
                out.append(a)
        else:
            scalar_vars(a, out)
    return out


def merge_lets(term):
    """Combine directly nested single-variable LETs into LET or LET* groups."""
    if not isinstance(term, list) or not term:
        return term
    head = term[0]
    if head == "LET" and len(term[1]) == 1:
        group = []
        cur = term
        while isinstance(cur, list) and cur and cur[0] == "LET" and len(cur[1]) == 1:
            v, t = cur[1][0]
            group.append([v, merge_lets(t)])
            cur = cur[2]
        body = merge_lets(cur)
        if len(group) == 1:
            return [S("LET"), group, body]
        names = [v for v, _ in group]
        sequential = len(set(names)) != len(names) or any(
            set(free_vars(t)) & set(names[:k]) for k, (_, t) in enumerate(group))
        return [S("LET*") if sequential else S("LET"), group, body]
    if head in ("LET", "LET*"):
        return [head, [[v, merge_lets(t)] for v, t in term[1]], merge_lets(term[2])]
    if head == "MV-LET":
        return [head, term[1], merge_lets(term[2]), merge_lets(term[3])]
    return [head] + [merge_lets(t) for t in term[1:]]


# -- statement analysis --------------------------------------------------------------


def _stmts(block) -> list:
    if isinstance(block, list) and block and block[0] == "BLOCK":
        return list(block[1:])
    if block == NIL:
        return []
    return [block]


def _flatten(stmts) -> list:
    out = []
    for s in stmts:
        if isinstance(s, list) and s and s[0] == "LIST":
            out.extend(_flatten(s[1:]))
        else:
            out.append(s)
    return out


def _children(s) -> list:
    h = s[0]
    if h in ("BLOCK", "LIST"):
        return list(s[1:])
    if h == "IF":
        return [s[2]] + ([] if s[3] == NIL else [s[3]])
    if h == "FOR":
        return [s[1][0], s[1][2], s[2]]
    if h == "SWITCH":
        return [x for arm in s[2:] for x in arm[1:]]
    return []


def written(s) -> set:
    out = set()
    h = s[0]
    if h == "ASSIGN":
        out.add(s[1])
    elif h == "MV-ASSIGN":
        out.update(s[1])
    for c in _children(s):
        out |= written(c)
    return out


def declared(s) -> set:
    out = set()
    if s[0] in ("DECLARE", "ARRAY"):
        out.add(s[1])
    for c in _children(s):
        out |= declared(c)
    return out


def _has_effects(s) -> bool:
    """Might evaluating ``s`` raise (an assertion here or in a called function)?"""
    def term_calls(t) -> bool:
        if isinstance(t, list) and t:
            if isinstance(t[0], Symbol) and t[0] not in PRIMITIVES:
                return True
            return any(term_calls(x) for x in t[1:])
        return False

    h = s[0]
    if h == "ASSERT":
        return True
    if h in ("ASSIGN", "DECLARE", "ARRAY") and len(s) > 2 and term_calls(s[2]):
        return True
    if h == "MV-ASSIGN":
        return True
    if h == "IF" and term_calls(s[1]):
        return True
    if h == "SWITCH" and term_calls(s[1]):
        return True
    if h == "FOR" and term_calls(s[1][1]):
        return True
    return any(_has_effects(c) for c in _children(s))


def _declaration_order(params, body) -> dict:
    order: dict = {}
    for p in params:
        order.setdefault(p, len(order))

    def walk(s):
        if s[0] in ("DECLARE", "ARRAY"):
            order.setdefault(s[1], len(order))
        for c in _children(s):
            walk(c)

    walk(body)
    return order


# -- translation ---------------------------------------------------------------------


class _FunctionTranslator:
    def __init__(self, defunc, merge: bool):
        if not (isinstance(defunc, list) and len(defunc) == 4 and defunc[0] == "DEFUNC"):
            raise TranslationError("expected (DEFUNC name (args) body)")
        _, self.name, self.params, self.body = defunc
        self.merge = merge
        self.order = _declaration_order(self.params, self.body)
        self.loops: list[FuncIR] = []

    def outs_of(self, s) -> list:
        names = written(s) - declared(s)
        return sorted(names, key=lambda v: -self.order.get(v, -1))

    # statements -> binding frames

    def frames(self, s) -> list:
        h = s[0]
        if h == "DECLARE":
            return [("let", s[1], s[2] if len(s) > 2 else 0)]
        if h == "ARRAY":
            return [("let", s[1], s[2] if len(s) > 2 else NIL)]
        if h == "LIST":
            return [f for x in s[1:] for f in self.frames(x)]
        if h == "ASSIGN":
            return [("let", s[1], s[2])]
        if h == "MV-ASSIGN":
            return [("mv", list(s[1]), s[2])]
        if h == "ASSERT":
            return [("let", ASSERT, [S("IN-FUNCTION"), s[1], bool_term(s[2])])]
        if h in ("BLOCK", "IF", "FOR", "SWITCH"):
            outs = self.outs_of(s)
            term = self.compound(s, outs)
            if not outs:
                return [("let", ASSERT, term)] if _has_effects(s) else []
            if len(outs) == 1:
                return [("let", outs[0], term)]
            return [("mv", outs, term)]
        if h == "RETURN":
            raise TranslationError(f"return before the end of {self.name}")
        raise TranslationError(f"unknown statement {h}")

    def nest(self, stmts, tail):
        frames = [f for s in _flatten(stmts) for f in self.frames(s)]
        if frames and frames[-1][0] == "let" and frames[-1][1] != ASSERT and _is_tuple_of_vars(tail) \
                and frames[-1][1] in free_vars(tail):
            _, v, t = frames.pop()
            tail = subst(tail, v, t)
        for kind, v, t in reversed(frames):
            if kind == "let":
                tail = [S("LET"), [[v, t]], tail]
            else:
                tail = [S("MV-LET"), list(v), t, tail]
        return tail

    def compound(self, s, outs: list):
        h = s[0]
        if h == "BLOCK":
            return self.nest(s[1:], tuple_term(outs))
        if h == "IF":
            right = tuple_term(outs) if s[3] == NIL else self.compound(s[3], outs)
            return [S("IF1"), s[1], self.compound(s[2], outs), right]
        if h == "SWITCH":
            subject = s[1]
            default = tuple_term(outs)
            chain = []
            for arm in s[2:]:
                lab, body = arm[0], arm[1:]
                term = self.nest(body, tuple_term(outs))
                if lab == "DEFAULT":
                    default = term
                else:
                    labels = lab if isinstance(lab, list) else [lab]
                    tests = [[S("LOG="), subject, x] for x in labels]
                    test = tests[0]
                    for t in tests[1:]:
                        test = [S("LOGIOR1"), test, t]
                    chain.append((test, term))
            out = default
            for test, term in reversed(chain):
                out = [S("IF1"), test, term, out]
            return out
        if h == "FOR":
            return self.loop(s, outs)
        # a simple statement in a branch position
        return self.nest([s], tuple_term(outs))

    def final(self, s):
        h = s[0]
        if h == "RETURN":
            return s[1]
        if h == "IF":
            if s[3] == NIL:
                raise TranslationError(f"final if without else in {self.name}")
            return [S("IF1"), s[1], self.final_block(s[2]), self.final_block(s[3])]
        if h == "BLOCK":
            return self.final_block(s)
        raise TranslationError(f"{self.name} does not end in a return")

    def final_block(self, block):
        stmts = _stmts(block)
        if not stmts:
            raise TranslationError(f"empty block in {self.name}")
        return self.nest(stmts[:-1], self.final(stmts[-1]))

    # loops

    def loop(self, s, outs: list):
        (init, test, update), body = s[1], s[2]
        if not (isinstance(init, list) and init[0] in ("DECLARE", "ASSIGN") and len(init) == 3):
            raise TranslationError("loop init must bind a single variable")
        v, init_term = init[1], init[2]
        if not (isinstance(update, list) and update[0] == "ASSIGN" and update[1] == v):
            raise TranslationError("loop update must assign the loop variable")
        measure = _measure(test, v)

        marker = [_RECUR, update[2]]
        body_term = self.nest(_stmts(body), marker)
        reads = free_vars(body_term, free_vars(test))
        extra = [x for x in reads if x != v and x not in outs]
        params = [v] + extra + [x for x in outs if x != v]

        name = S(f"{self.name}-LOOP-{len(self.loops)}")
        recur = [name, update[2]] + params[1:]
        body_term = _replace_marker(body_term, recur)

        guard_vars = [v] + [x for x in scalar_vars(test, []) if x != v]
        guard = [S("AND")] + [[S("INTEGERP"), x] for x in guard_vars] + [bool_term(test)]
        ir_body = [S("IF"), guard, body_term, tuple_term(outs)]
        self.loops.append(FuncIR(name, params, ir_body, measure, str(self.name), v))
        return [name, init_term] + params[1:]

    def run(self) -> list[FuncIR]:
        body = self.final_block(self.body)
        main = FuncIR(self.name, list(self.params), body, None, str(self.name))
        out = self.loops + [main]
        for f in out:
            if self.merge:
                f.body = merge_lets(f.body)
            loose = [x for x in free_vars(f.body) if x not in f.params]
            if loose:
                raise TranslationError(f"{f.name}: unbound variables {', '.join(loose)}")
        return out


def _replace_marker(term, call):
    if isinstance(term, list):
        if term and term[0] == _RECUR:
            return call
        return [_replace_marker(t, call) for t in term]
    return term


def _measure(test, v):
    cmp = test
    while isinstance(cmp, list) and cmp and cmp[0] == "LOGAND1":
        cmp = cmp[1]
    if not (isinstance(cmp, list) and len(cmp) == 3 and cmp[0] in ("LOG<", "LOG<=", "LOG>", "LOG>=")
            and cmp[1] == v):
        raise TranslationError(f"cannot derive a measure: loop test does not compare {v} to a limit")
    lim = cmp[2]
    op = cmp[0]
    if op == "LOG<":
        diff = [S("-"), lim, v]
    elif op == "LOG<=":
        diff = [S("-"), [S("1+"), lim], v]
    elif op == "LOG>":
        diff = [S("-"), v, lim]
    else:
        diff = [S("-"), v, [S("1-"), lim]]
    return [S("NFIX"), diff]


# -- public API ----------------------------------------------------------------------


def translate_ast(forms: Iterable, merge: bool = True) -> list[FuncIR]:
    """Translate (DEFUNC ...) forms; loop functions precede the function that uses them."""
    out: list[FuncIR] = []
    for f in forms:
        out.extend(_FunctionTranslator(f, merge).run())
    return out


def translate(cp, merge: bool = True) -> list[FuncIR]:
    """Translate a checked program (via its emitted S-expressions)."""
    from .emit import emit_program

    return translate_ast(emit_program(cp), merge)


def summarize(defunc, index: int) -> StmtSummary:
    """ins/outs/term of statement ``index`` of a (DEFUNC ...) body."""
    tr = _FunctionTranslator(defunc, merge=False)
    stmts = _stmts(tr.body)
    s = stmts[index]
    h = s[0]
    if h in ("ASSIGN",):
        outs, term = [s[1]], s[2]
    elif h == "MV-ASSIGN":
        outs, term = list(s[1]), s[2]
    elif h in ("DECLARE", "ARRAY"):
        outs, term = [s[1]], s[2] if len(s) > 2 else (0 if h == "DECLARE" else NIL)
    elif h == "RETURN":
        outs, term = [], s[1]
    elif h == "ASSERT":
        outs, term = [], [S("IN-FUNCTION"), s[1], bool_term(s[2])]
    elif h == "LIST":
        outs = [d[1] for d in s[1:]]
        term = tr.nest(list(s[1:]), tuple_term(outs))
    else:
        outs = tr.outs_of(s)
        term = tr.compound(s, outs)
    return StmtSummary(free_vars(term), outs, term)


def render(defs: list[FuncIR]) -> str:
    return "\n\n".join(print_sexpr(f.to_sexpr()) for f in defs) + "\n"


def load_ir(text: str) -> list[FuncIR]:
    return [FuncIR.from_sexpr(f) for f in parse_all(text)]
