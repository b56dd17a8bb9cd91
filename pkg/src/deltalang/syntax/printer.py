"""Pretty printer (inverse of the parser) and canonical AST dump."""
from __future__ import annotations

import json

from ..values import dump as dump_value
from .ast import (
    AlphaCall, And, Assign, BoolLit, BoundDecl, Const, Copy, FamilyDecl, FunApp, FunCallAssign,
    FunDecl, If, Not, Or, PredCall, PredDecl, QuantFree, Rel, Return, Seq, SourceSpan, Var,
)

INDENT = "  "


def print_term(t) -> str:
    if isinstance(t, Const):
        return dump_value(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, FunApp):
        return f"{t.name}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


_PREC = {Or: 1, And: 2}


def print_expr(e, level: int = 1) -> str:
    """``level`` is the loosest operator allowed without parentheses (1=or, 2=and, 3=atom)."""
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Rel):
        return f"{e.name}({', '.join(print_term(a) for a in e.args)})"
    if isinstance(e, Not):
        return "not " + print_expr(e.arg, 3)
    if isinstance(e, (And, Or)):
        prec = _PREC[type(e)]
        op = "and" if isinstance(e, And) else "or"
        text = f"{print_expr(e.left, prec)} {op} {print_expr(e.right, prec + 1)}"
        return text if prec >= level else f"({text})"
    raise TypeError(f"not an expression: {e!r}")


def _pred_call(f: PredCall) -> str:
    ins = ", ".join(f.ins)
    outs = ", ".join(f.outs)
    sep = " " if ins else ""
    tail = f" {outs}" if outs else ""
    return f"{f.name}({ins}{sep}->{tail})"


def _names(xs) -> str:
    return ", ".join(xs)


def _io(ins, outs) -> str:
    i = f"in {_names(ins)} " if ins else "in "
    o = f" out {_names(outs)}" if outs else " out"
    return f"({i}->{o})"


def _lines(f, depth: int) -> list:
    pad = INDENT * depth
    if isinstance(f, Seq):
        if not f.items:
            return [pad + "{}"]
        out = [pad + "{"]
        for item in f.items:
            out.extend(_lines(item, depth + 1))
        out.append(pad + "}")
        return out
    if isinstance(f, QuantFree):
        return [pad + print_expr(f.expr) + ";"]
    if isinstance(f, Assign):
        return [pad + f"{f.target} := {print_term(f.term)};"]
    if isinstance(f, FunCallAssign):
        return [pad + f"{f.target} := {f.name}({', '.join(print_term(a) for a in f.args)});"]
    if isinstance(f, PredCall):
        return [pad + _pred_call(f) + ";"]
    if isinstance(f, Return):
        return [pad + "return;"]
    if isinstance(f, AlphaCall):
        return [pad + f"alpha {f.family}({_names(f.args)});"]
    if isinstance(f, Copy):
        head = f"copy ({f.count})"
        if f.bound is not None:
            head += f" bound {f.bound.render()}"
        return _attach(pad + head, f.body, depth)
    if isinstance(f, If):
        if isinstance(f.cond, Seq):
            cond_lines = _lines(f.cond, depth)
            cond_lines[0] = pad + "if (" + cond_lines[0].lstrip()
            cond_lines[-1] = cond_lines[-1] + ")"
            head_lines = cond_lines[:-1]
            last = cond_lines[-1]
        else:
            head_lines = []
            last = pad + f"if ({_cond_text(f.cond)})"
        out = head_lines + _attach(last, f.then, depth)
        if isinstance(f.then, Seq):
            closing = out.pop()
            out.extend(_attach(closing + " else", f.orelse, depth))
        else:
            out.extend(_attach(pad + "else", f.orelse, depth))
        return out
    if isinstance(f, PredDecl):
        return _attach(pad + f"predicate {f.name}{_io(f.ins, f.outs)}", f.body, depth)
    if isinstance(f, FunDecl):
        return _attach(pad + f"function {f.name}({_names(f.params)}) -> {f.ret}", f.body, depth)
    if isinstance(f, FamilyDecl):
        out = [pad + f"family {f.name}{_io(f.ins, f.outs)} bound {f.bound.render()} {{"]
        inner = INDENT * (depth + 1)
        for g, m in zip(f.guards, f.members):
            out.extend(_attach(inner + f"when ({print_expr(g)})", m, depth + 1))
        out.extend(_attach(inner + "otherwise", f.members[-1], depth + 1))
        out.append(pad + "}")
        return out
    raise TypeError(f"not a formula: {f!r}")


def _cond_text(c) -> str:
    if isinstance(c, QuantFree):
        return print_expr(c.expr)
    if isinstance(c, PredCall):
        return _pred_call(c)
    raise TypeError(f"cannot print condition {c!r} inline")


def _attach(head: str, body, depth: int) -> list:
    """Place ``body`` after ``head``: blocks open on the same line, single statements go on the next."""
    if isinstance(body, Seq):
        lines = _lines(body, depth)
        return [head + " " + lines[0].lstrip()] + lines[1:]
    return [head] + _lines(body, depth + 1)


def pretty_print(f) -> str:
    """Render a formula as source text. A top-level Seq is printed as a bare statement list."""
    if isinstance(f, Seq):
        out = []
        for item in f.items:
            out.extend(_lines(item, 0))
        return "\n".join(out) + ("\n" if out else "")
    return "\n".join(_lines(f, 0)) + "\n"


# -- canonical AST dump ---------------------------------------------------------------


def to_data(node, spans: bool = False):
    """Nested plain data for a node; keys come out in a stable order."""
    if isinstance(node, tuple):
        return [to_data(x, spans) for x in node]
    if isinstance(node, Const):
        d = {"node": "Const", "value": dump_value(node.value)}
        if spans and node.span is not None:
            d["span"] = _span_data(node.span)
        return d
    if isinstance(node, BoundDecl):
        return {"C": str(node.C), "p": node.p}
    if hasattr(node, "__dataclass_fields__"):
        d = {"node": type(node).__name__}
        for name in node.__dataclass_fields__:
            if name == "span":
                continue
            d[name] = to_data(getattr(node, name), spans)
        if spans and getattr(node, "span", None) is not None:
            d["span"] = _span_data(node.span)
        return d
    return node


def _span_data(s: SourceSpan) -> dict:
    return {"file": s.file, "line": s.line, "column": s.column, "length": s.length}


def dump_ast(node, spans: bool = False) -> str:
    return json.dumps(to_data(node, spans), indent=2)
