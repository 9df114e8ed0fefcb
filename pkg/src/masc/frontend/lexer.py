from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import Diagnostic, ParseError, Pos

KEYWORDS = {
    "if", "else", "for", "while", "do", "switch", "case", "default", "break",
    "continue", "return", "assert", "typedef", "struct", "enum", "const",
    "true", "false",
}

# longest first
OPERATORS = [
    "<<=", ">>=", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "::",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?", ":",
    ";", ",", ".", "(", ")", "{", "}", "[", "]",
]

DIRECTIVE_RE = re.compile(r"//\s*MASC:\s*(.*?)\s+iterations\s*$")
_NUMBER_RE = re.compile(r"0[xX][0-9a-fA-F]+|0[bB][01]+|[0-9]+")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'keyword', 'int', 'op', 'directive', 'eof'
    text: str
    pos: Pos
    value: int | None = None


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def err(msg: str, rule: str = "syntax"):
        raise ParseError([Diagnostic(msg, Pos(line, col), rule)])

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r\f\v":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            end = source.find("\n", i)
            if end < 0:
                end = n
            text = source[i:end]
            m = DIRECTIVE_RE.match(text)
            if m:
                toks.append(Token("directive", m.group(1), Pos(line, col)))
            elif re.match(r"//\s*MASC:", text):
                err("malformed directive; expected '// MASC: <bound> iterations'", "directive")
            col += end - i
            i = end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                err("unterminated comment")
            chunk = source[i:end + 2]
            nl = chunk.count("\n")
            if nl:
                line += nl
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += len(chunk)
            i = end + 2
            continue
        if c == "#":
            err("preprocessor directives are not supported", "preprocessor")
        if c in "\"'":
            err("string and character literals are not supported", "literal")
        m = _NUMBER_RE.match(source, i)
        if m:
            text = m.group(0)
            if i + len(text) < n and (source[i + len(text)].isalnum() or source[i + len(text)] == "_"):
                err(f"malformed number near {source[i:i + len(text) + 1]!r}")
            toks.append(Token("int", text, Pos(line, col), _int_value(text)))
            i += len(text)
            col += len(text)
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group(0)
            toks.append(Token("keyword" if text in KEYWORDS else "ident", text, Pos(line, col)))
            i += len(text)
            col += len(text)
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                toks.append(Token("op", op, Pos(line, col)))
                i += len(op)
                col += len(op)
                break
        else:
            err(f"unexpected character {c!r}")
    toks.append(Token("eof", "", Pos(line, col)))
    return toks


def _int_value(text: str) -> int:
    if text[:2] in ("0x", "0X"):
        return int(text[2:], 16)
    if text[:2] in ("0b", "0B"):
        return int(text[2:], 2)
    return int(text, 10)
