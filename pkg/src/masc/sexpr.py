"""S-expressions: symbols, integers and lists, with a reader and a printer.

Unescaped symbols are read in upper case.  Symbols that would not read back
unchanged (lower case, whitespace, delimiters, digits-only) are printed
between vertical bars.
"""

from __future__ import annotations

import re
from typing import Iterator, Union

from .errors import MascError, Pos


class Symbol(str):
    """A Lisp symbol.  Compares equal to the plain string of its name."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"Symbol({str(self)!r})"


SExpr = Union[Symbol, int, list]

NIL = Symbol("NIL")
T = Symbol("T")


def sym(name: str) -> Symbol:
    return Symbol(name)


class SExprSyntaxError(MascError):
    def __init__(self, msg: str, pos: Pos):
        self.pos = pos
        super().__init__(f"{pos}: {msg}")


_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_DELIMS = set("()|;\"'` \t\r\n\f\v")


def _needs_bars(name: str) -> bool:
    if not name or _INT_RE.match(name):
        return True
    if name != name.upper():
        return True
    return any(c in _DELIMS or c == "\\" or not c.isprintable() for c in name)


def atom_text(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not S-expression atoms")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        if _needs_bars(x):
            return "|" + x.replace("\\", "\\\\").replace("|", "\\|") + "|"
        return str(x)
    raise TypeError(f"not an S-expression atom: {x!r}")


def flat(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(flat(e) for e in x) + ")"
    return atom_text(x)


_STICKY = {"DEFUN": 2, "DEFUNC": 2, "LET": 1, "LET*": 1, "MV-LET": 1, "IF": 1, "IF1": 1, "FOR": 1}


def print_sexpr(x, width: int = 80, indent: int = 0) -> str:
    """Render ``x``; lists that do not fit in ``width`` break one element per line."""
    text = flat(x)
    if not isinstance(x, list) or len(text) + indent <= width or not x:
        return text
    if isinstance(x[0], list):
        first, k = print_sexpr(x[0], width, indent + 1), 1
    else:
        # leading atoms share the opening line
        first, k = flat(x[0]), 1
        while k < len(x) and (not isinstance(x[k], list) or not x[k]) \
                and indent + len(first) + len(flat(x[k])) + 2 <= width:
            first += " " + flat(x[k])
            k += 1
        # binding lists, parameter lists and tests stay with their operator
        if k < len(x) and k <= _STICKY.get(x[0], 0) and isinstance(x[k], list) \
                and indent + len(first) + len(flat(x[k])) + 2 <= width:
            first += " " + flat(x[k])
            k += 1
    pad = " " * (indent + 2)
    rest = [pad + print_sexpr(e, width, indent + 2) for e in x[k:]]
    return "(" + first + ("\n" + "\n".join(rest) if rest else "") + ")"


def print_all(forms, width: int = 80) -> str:
    return "\n\n".join(print_sexpr(f, width) for f in forms) + "\n"


def _tokens(text: str) -> Iterator[tuple[str, object, Pos]]:
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        pos = Pos(line, col)
        if c in "()":
            yield c, c, pos
            i, col = i + 1, col + 1
            continue
        # symbol or integer, possibly with |escaped| segments
        buf = []
        escaped = False
        start = i
        while i < n and not (text[i].isspace() or text[i] in "();"):
            ch = text[i]
            if ch == "|":
                escaped = True
                i += 1
                while True:
                    if i >= n:
                        raise SExprSyntaxError("unterminated |symbol|", pos)
                    ch = text[i]
                    if ch == "\\" and i + 1 < n:
                        buf.append(text[i + 1])
                        i += 2
                        continue
                    if ch == "|":
                        i += 1
                        break
                    buf.append(ch)
                    i += 1
                continue
            if ch in "\"'`":
                raise SExprSyntaxError(f"unsupported character {ch!r}", Pos(line, col + i - start))
            buf.append(ch.upper())
            i += 1
        chunk = text[start:i]
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        word = "".join(buf)
        if not escaped and _INT_RE.match(word):
            yield "atom", int(word), pos
        else:
            yield "atom", Symbol(word), pos


def parse_all(text: str) -> list:
    """All top-level forms in ``text``."""
    stack: list[list] = [[]]
    opens: list[Pos] = []
    for kind, value, pos in _tokens(text):
        if kind == "(":
            stack.append([])
            opens.append(pos)
        elif kind == ")":
            if len(stack) == 1:
                raise SExprSyntaxError("unexpected ')'", pos)
            done = stack.pop()
            opens.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(value)
    if len(stack) > 1:
        raise SExprSyntaxError("unclosed '('", opens[-1])
    return stack[0]


def parse_sexpr(text: str) -> SExpr:
    """Exactly one form."""
    forms = parse_all(text)
    if len(forms) != 1:
        raise SExprSyntaxError(f"expected one form, found {len(forms)}", Pos(1, 1))
    return forms[0]


def tokens_of(x) -> list[str]:
    """Token sequence of ``x``; two forms print equivalently iff their token lists match."""
    out = []

    def walk(e):
        if isinstance(e, list):
            out.append("(")
            for s in e:
                walk(s)
            out.append(")")
        else:
            out.append(atom_text(e))

    walk(x)
    return out


def is_symbol(x, name: str | None = None) -> bool:
    return isinstance(x, Symbol) and (name is None or x == name)
