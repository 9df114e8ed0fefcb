"""Command-line interface: ``masc <command> ...``.

Exit status is 0 on success, 1 when checking or verification fails and 2
for usage or I/O errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .emit import emit_program
from .errors import AssertionFailure, MascError, _DiagnosticsError
from .frontend import check_program, parse, rewrite_bounded_loops
from .frontend.types import ArrayT, NumT, TupleT
from .interp import Interpreter, RunOptions
from .ireval import IREvaluator
from .numeric import ArrayValue, convert
from .sexpr import parse_all, print_all
from .translate import load_ir, render, translate, translate_ast

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


# -- argument literals -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([+-]?\d+(?:/\d+)?))")


def parse_args_literal(text: str) -> list:
    """``"1,-2,3/4,[5,6]"`` -> ``[1, -2, Fraction(3, 4), [5, 6]]``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise _Usage(f"bad argument list near {text[pos:pos + 10]!r}")
        toks.append(m.group(m.lastindex))
        pos = m.end()
    out: list = []
    stack = [out]
    expect_value = True
    for t in toks:
        if t == ",":
            if expect_value:
                raise _Usage("empty argument")
            expect_value = True
        elif t == "[":
            new: list = []
            stack[-1].append(new)
            stack.append(new)
            expect_value = True
        elif t == "]":
            if len(stack) == 1:
                raise _Usage("unbalanced ']'")
            stack.pop()
            expect_value = False
        else:
            num = Fraction(t)
            stack[-1].append(num.numerator if num.denominator == 1 else num)
            expect_value = False
    if len(stack) != 1:
        raise _Usage("unbalanced '['")
    return out


def _to_array(v):
    if isinstance(v, list):
        return ArrayValue.from_list([_to_array(x) for x in v])
    return v


# -- output formatting -------------------------------------------------------------------


def format_value(v, t=None) -> str:
    if isinstance(v, tuple):
        types = t.types if isinstance(t, TupleT) else [None] * len(v)
        return " ".join(format_value(x, ty) for x, ty in zip(v, types))
    if isinstance(v, ArrayValue):
        if isinstance(t, ArrayT):
            return "[" + ", ".join(format_value(x, t.elem) for x in v.to_list(t.size)) + "]"
        keys = [k for k, _ in v.items()]
        if all(isinstance(k, int) and k >= 0 for k in keys):
            size = max(keys, default=-1) + 1
            return "[" + ", ".join(format_value(v.get(k)) for k in range(size)) + "]"
        return "{" + ", ".join(f"{k}: {format_value(x)}" for k, x in v.items()) + "}"
    if v is True:
        return "T"
    if v is False or v is None:
        return "NIL"
    return str(v)


# -- commands ------------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror or e}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise _Usage(f"cannot write {path}: {e.strerror or e}") from None


def _default_out(inp: str, suffix: str) -> str:
    p = Path(inp)
    stem = p.name
    for ext in (".ast.lsp", ".ir.lsp", ".masc", ".lsp"):
        if stem.endswith(ext):
            stem = stem[: -len(ext)]
            break
    return str(p.with_name(stem + suffix))


def _report(path: str, diags) -> None:
    for d in diags:
        print(f"{path}:{d}", file=sys.stderr)


def _load(path: str, *, warnings: bool = False):
    """Parse, rewrite and check; prints diagnostics and returns None on errors."""
    src = _read(path)
    try:
        cp = check_program(rewrite_bounded_loops(parse(src)))
    except _DiagnosticsError as e:
        _report(path, e.diagnostics)
        return None
    if warnings or not cp.ok:
        _report(path, cp.diagnostics if warnings else cp.errors)
    return cp if cp.ok else None


def cmd_parse(ns) -> int:
    try:
        program = parse(_read(ns.input))
    except _DiagnosticsError as e:
        _report(ns.input, e.diagnostics)
        return EXIT_FAIL
    print(f"{ns.input}: ok, {len(program.items)} top-level items")
    return EXIT_OK


def cmd_check(ns) -> int:
    cp = _load(ns.input, warnings=True)
    if cp is None:
        return EXIT_FAIL
    if ns.strict_64bit_lint and cp.warnings:
        return EXIT_FAIL
    print(f"{ns.input}: ok, {len(cp.functions)} functions")
    return EXIT_OK


def _host_args(cp, fn: str, values: list) -> list:
    sig = cp.functions[fn]
    if len(values) != len(sig.params):
        raise _Usage(f"{fn} takes {len(sig.params)} arguments, {len(values)} given")
    out = []
    for v, p in zip(values, sig.params):
        if isinstance(p.type, NumT) and p.type.fmt.is_register and not isinstance(v, list):
            raw = convert(v, p.type.fmt)
            if raw != v:
                print(f"warning: argument {p.name}={v} converted to {p.type} raw value {raw}", file=sys.stderr)
        out.append(_to_array(v))
    return out


def cmd_run(ns) -> int:
    cp = _load(ns.input)
    if cp is None:
        return EXIT_FAIL
    if ns.fn not in cp.functions:
        raise _Usage(f"no function named {ns.fn!r}")
    def trace(fn, var, value):
        print(f"{fn}: {var} = {format_value(value)}", file=sys.stderr)
    opts = RunOptions(lint64=ns.strict_64bit_lint, trace=trace if ns.trace else None)
    it = Interpreter(cp, opts)
    try:
        result = it.run(ns.fn, _host_args(cp, ns.fn, parse_args_literal(ns.args)))
    except MascError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    _report(ns.input, opts.diagnostics)
    print(format_value(result, cp.functions[ns.fn].ret))
    if ns.strict_64bit_lint and any(d.rule == "64-bit-lint" for d in opts.diagnostics):
        return EXIT_FAIL
    return EXIT_OK


def cmd_emit_ast(ns) -> int:
    cp = _load(ns.input)
    if cp is None:
        return EXIT_FAIL
    out = ns.output or _default_out(ns.input, ".ast.lsp")
    _write(out, print_all(emit_program(cp)))
    if out != "-":
        print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def cmd_translate(ns) -> int:
    merge = not ns.no_merge_lets
    try:
        if ns.input.endswith(".lsp"):
            defs = translate_ast(parse_all(_read(ns.input)), merge)
        else:
            cp = _load(ns.input)
            if cp is None:
                return EXIT_FAIL
            defs = translate(cp, merge)
    except MascError as e:
        print(f"{ns.input}: error: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = render(defs)
    out = ns.output or _default_out(ns.input, ".ir.lsp")
    _write(out, text)
    if out != "-":
        print(f"wrote {out}", file=sys.stderr)
        for f in defs:
            params = " ".join(map(str, f.params))
            measure = f"  measure {print_all([f.measure]).strip()}" if f.measure is not None else ""
            print(f"{f.name} ({params}){measure}")
    return EXIT_OK


def cmd_eval_ir(ns) -> int:
    try:
        ev = IREvaluator(load_ir(_read(ns.input)))
        args = [_to_array(v) for v in parse_args_literal(ns.args)]
        result = ev.call(ns.fn, args)
    except AssertionFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except MascError as e:
        print(f"{ns.input}: error: {e}", file=sys.stderr)
        return EXIT_FAIL
    print(format_value(result))
    return EXIT_OK


def cmd_verify(ns) -> int:
    from .harness import verify

    seed = ns.seed
    if seed is None:
        env = os.environ.get("MASC_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise _Usage(f"MASC_SEED is not an integer: {env!r}") from None
    print(f"seed {seed}")
    report = verify(seed, ns.samples, ns.imul_samples, progress=lambda r: print(r.line(), flush=True))
    failed = sum(not r.passed for r in report.results)
    print(f"{len(report.results) - failed} passed, {failed} failed")
    return EXIT_OK if report.ok else EXIT_FAIL


# -- wiring ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="masc", description="MASC modeling language toolchain")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_, *, input_=True):
        sp = sub.add_parser(name, help=help_, description=help_)
        if input_:
            sp.add_argument("input", help="input file")
        sp.set_defaults(func=func)
        return sp

    add("parse", cmd_parse, "parse a .masc file and report syntax errors")
    sp = add("check", cmd_check, "parse and statically check a .masc file")
    sp.add_argument("--strict-64bit-lint", action="store_true", help="treat warnings as failures")
    sp = add("run", cmd_run, "execute a function")
    sp.add_argument("--fn", required=True, help="function to call")
    sp.add_argument("--args", required=True, help="comma-separated integers or p/q rationals; [..] for arrays")
    sp.add_argument("--trace", action="store_true", help="print every variable store to stderr")
    sp.add_argument("--strict-64bit-lint", action="store_true",
                    help="warn when an int/uint value exceeds 64 bits and fail if one does")
    sp = add("emit-ast", cmd_emit_ast, "write the S-expression AST (.ast.lsp)")
    sp.add_argument("-o", "--output", help="output path ('-' for stdout)")
    sp = add("translate", cmd_translate, "translate a .masc or .ast.lsp file to functional IR (.ir.lsp)")
    sp.add_argument("-o", "--output", help="output path ('-' for stdout)")
    sp.add_argument("--no-merge-lets", action="store_true", help="keep one LET per statement")
    sp = add("eval-ir", cmd_eval_ir, "evaluate a function of an .ir.lsp file")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--args", required=True)
    sp = add("verify", cmd_verify, "run the verification harness and print a pass/fail table", input_=False)
    sp.add_argument("--seed", type=int, default=None, help="random seed (default: $MASC_SEED or 0)")
    sp.add_argument("--samples", type=int, default=1000, help="random inputs per translated function")
    sp.add_argument("--imul-samples", type=int, default=10000, help="random operand pairs for Imul")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    # let "--args -1,2" through: argparse would take "-1,2" for an option
    argv, k = [], 0
    while k < len(raw):
        if raw[k] == "--args" and k + 1 < len(raw):
            argv.append(f"--args={raw[k + 1]}")
            k += 2
        else:
            argv.append(raw[k])
            k += 1
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except _Usage as e:
        print(f"masc {ns.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
