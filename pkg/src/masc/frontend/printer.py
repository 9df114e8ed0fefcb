"""MASC source pretty-printer.  ``parse(to_source(p)) == p`` for parsed programs."""

from __future__ import annotations

from . import ast as A

_LEVEL = {
    "||": 0, "&&": 1, "|": 2, "^": 3, "&": 4, "==": 5, "!=": 5,
    "<": 6, "<=": 6, ">": 6, ">=": 6, "<<": 7, ">>": 7,
    "+": 8, "-": 8, "*": 9, "%": 9,
}
_COND, _UNARY, _POSTFIX = -1, 10, 11
_SHIFT = 7


def expr_source(e, ctx: int = _COND) -> str:
    if isinstance(e, A.IntLit):
        s = str(e.value)
        return f"({s})" if e.value < 0 and ctx > _UNARY else s
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.Name):
        return e.id
    if isinstance(e, A.Unary):
        inner = expr_source(e.operand, _UNARY)
        sep = " " if inner[:1] in ("-", "+") and e.op in ("-", "+") else ""
        s = f"{e.op}{sep}{inner}"
        return f"({s})" if ctx > _UNARY else s
    if isinstance(e, A.Binary):
        lv = _LEVEL[e.op]
        s = f"{expr_source(e.left, lv)} {e.op} {expr_source(e.right, lv + 1)}"
        return f"({s})" if lv < ctx else s
    if isinstance(e, A.Cond):
        s = f"{expr_source(e.test, 0)} ? {expr_source(e.then)} : {expr_source(e.orelse)}"
        return f"({s})" if ctx > _COND else s
    if isinstance(e, A.Index):
        return f"{expr_source(e.base, _POSTFIX)}[{expr_source(e.index)}]"
    if isinstance(e, A.Subrange):
        return f"{expr_source(e.base, _POSTFIX)}[{expr_source(e.hi)}:{expr_source(e.lo)}]"
    if isinstance(e, A.Field):
        return f"{expr_source(e.base, _POSTFIX)}.{e.name}"
    if isinstance(e, A.Call):
        return f"{e.name}({', '.join(expr_source(a) for a in e.args)})"
    if isinstance(e, A.InitList):
        return "{" + ", ".join(expr_source(a) for a in e.items) + "}"
    raise TypeError(e)


def type_source(t) -> str:
    if isinstance(t, A.TypeName):
        return t.name
    if isinstance(t, A.ArrayTypeExpr):
        return f"{type_source(t.elem)}[{expr_source(t.size)}]"
    if isinstance(t, A.TupleTypeExpr):
        return "<" + ", ".join(type_source(x) for x in t.types) + ">"
    if isinstance(t, A.StructTypeExpr):
        head = "struct" + (f" {t.name}" if t.name else "")
        if t.fields is None:
            return head
        fields = " ".join(f"{type_source(ft)} {fn};" for ft, fn in t.fields)
        return f"{head} {{ {fields} }}"
    if isinstance(t, A.EnumTypeExpr):
        head = "enum" + (f" {t.name}" if t.name else "")
        if t.members is None:
            return head
        ms = ", ".join(n if v is None else f"{n} = {expr_source(v)}" for n, v in t.members)
        return f"{head} {{ {ms} }}"
    raise TypeError(t)


def _decl(d: A.VarDecl) -> str:
    parts = []
    for x in d.declarators:
        s = x.name + "".join(f"[{expr_source(k)}]" for k in x.dims)
        if x.init is not None:
            s += f" = {expr_source(x.init)}"
        parts.append(s)
    return ("const " if d.const else "") + f"{type_source(d.type)} " + ", ".join(parts)


def _simple(s) -> str:
    if isinstance(s, A.Assign):
        return f"{expr_source(s.target)} = {expr_source(s.value)}"
    if isinstance(s, A.VarDecl):
        return _decl(s)
    if isinstance(s, A.ExprStmt):
        return expr_source(s.expr)
    raise TypeError(s)


class _Printer:
    def __init__(self, indent: str = "  "):
        self.indent = indent
        self.lines: list[str] = []

    def out(self, depth: int, text: str) -> None:
        self.lines.append(self.indent * depth + text)

    def stmt(self, s, d: int) -> None:
        if isinstance(s, A.Block):
            self.out(d, "{")
            for x in s.stmts:
                self.stmt(x, d + 1)
            self.out(d, "}")
        elif isinstance(s, (A.Assign, A.VarDecl, A.ExprStmt)):
            self.out(d, _simple(s) + ";")
        elif isinstance(s, A.TypeDecl):
            if s.typedef:
                self.out(d, f"typedef {type_source(s.type)} {s.name};")
            else:
                self.out(d, f"{type_source(s.type)};")
        elif isinstance(s, A.MvAssign):
            targets = ", ".join(expr_source(t, _POSTFIX) for t in s.targets)
            self.out(d, f"<{targets}> = {expr_source(s.call)};")
        elif isinstance(s, A.If):
            self.out(d, f"if ({expr_source(s.cond)})")
            self.stmt(s.then, d + 1 if not isinstance(s.then, A.Block) else d)
            if s.orelse is not None:
                self.out(d, "else")
                self.stmt(s.orelse, d + 1 if not isinstance(s.orelse, A.Block) else d)
        elif isinstance(s, A.For):
            if s.directive is not None:
                self.out(d, f"// MASC: {expr_source(s.directive.bound)} iterations")
            self.out(d, f"for ({_simple(s.init)}; {expr_source(s.test)}; {_simple(s.update)})")
            self.stmt(s.body, d + 1 if not isinstance(s.body, A.Block) else d)
        elif isinstance(s, A.While):
            if s.directive is not None:
                self.out(d, f"// MASC: {expr_source(s.directive.bound)} iterations")
            self.out(d, f"while ({expr_source(s.cond)})")
            self.stmt(s.body, d + 1 if not isinstance(s.body, A.Block) else d)
        elif isinstance(s, A.Switch):
            self.out(d, f"switch ({expr_source(s.subject)}) {{")
            for arm in s.arms:
                for lab in arm.labels:
                    self.out(d, f"case {expr_source(lab)}:")
                if arm.default:
                    self.out(d, "default:")
                for x in arm.body:
                    self.stmt(x, d + 1)
                if arm.breaks:
                    self.out(d + 1, "break;")
            self.out(d, "}")
        elif isinstance(s, A.Break):
            self.out(d, "break;")
        elif isinstance(s, A.Continue):
            self.out(d, "continue;")
        elif isinstance(s, A.Assert):
            self.out(d, f"assert({expr_source(s.expr)});")
        elif isinstance(s, A.Return):
            if s.tuple:
                self.out(d, "return <" + ", ".join(expr_source(v, _SHIFT) for v in s.values) + ">;")
            else:
                self.out(d, f"return {expr_source(s.values[0])};")
        else:
            raise TypeError(s)

    def item(self, it) -> None:
        if isinstance(it, A.FunctionDef):
            params = ", ".join(_param(p) for p in it.params)
            self.out(0, f"{type_source(it.return_type)} {it.name}({params})")
            self.stmt(it.body, 0)
        else:
            self.stmt(it, 0)


def _param(p: A.Param) -> str:
    dims = []
    t = p.type
    while isinstance(t, A.ArrayTypeExpr):
        dims.append(t.size)
        t = t.elem
    return f"{type_source(t)} {p.name}" + "".join(f"[{expr_source(k)}]" for k in dims)


def to_source(node, indent: str = "  ") -> str:
    """Render a program, function, statement or expression as MASC text."""
    if isinstance(node, A.Program):
        chunks = []
        for it in node.items:
            p = _Printer(indent)
            p.item(it)
            chunks.append("\n".join(p.lines))
        return "\n\n".join(chunks) + "\n"
    if isinstance(node, A.FunctionDef):
        p = _Printer(indent)
        p.item(node)
        return "\n".join(p.lines) + "\n"
    if isinstance(node, (A.TypeName, A.ArrayTypeExpr, A.TupleTypeExpr, A.StructTypeExpr, A.EnumTypeExpr)):
        return type_source(node)
    try:
        return expr_source(node)
    except TypeError:
        p = _Printer(indent)
        p.stmt(node, 0)
        return "\n".join(p.lines) + "\n"
