"""Textual form of the IR (see docs/ir.md); ``parse_ir(emit_text(p)) == p``."""
from __future__ import annotations

from ..errors import ParseError, ParseFailed
from ..syntax.ast import And, Const, Not, Or, Var
from ..syntax.lexer import tokenize
from ..syntax.parser import KEYWORDS, Parser
from ..syntax.printer import print_expr, print_term
from .ir import IAssert, IAssign, IBlock, ICall, IFor, IIf, IPred, IReturn, IRFunction, IRProgram, IShadow

INDENT = "  "


def _cond(e, level: int = 1) -> str:
    # like print_expr, but bare variables and constants may appear as operands
    if isinstance(e, (Var, Const)):
        return print_term(e)
    if isinstance(e, Not):
        return "not " + _cond(e.arg, 3)
    if isinstance(e, (And, Or)):
        prec = 1 if isinstance(e, Or) else 2
        op = "or" if isinstance(e, Or) else "and"
        text = f"{_cond(e.left, prec)} {op} {_cond(e.right, prec + 1)}"
        return text if prec >= level else f"({text})"
    return print_expr(e, level)


def _args(xs) -> str:
    return ", ".join(print_term(a) for a in xs)


def _stmt_lines(s, depth: int) -> list:
    pad = INDENT * depth
    if isinstance(s, IAssign):
        return [f"{pad}{s.target} := {print_term(s.term)};"]
    if isinstance(s, (ICall, IPred)):
        kw, name = ("call", s.func) if isinstance(s, ICall) else ("pred", s.name)
        lhs = f"{s.ok} := " if s.ok is not None else ""
        return [f"{pad}{lhs}{kw} {name}({_args(s.args)}) -> ({', '.join(s.outs)});"]
    if isinstance(s, IAssert):
        return [f"{pad}assert {_cond(s.cond)};"]
    if isinstance(s, IReturn):
        return [f"{pad}return {'true' if s.verdict else 'false'};"]
    if isinstance(s, IShadow):
        inner = ", ".join(f"{d} := {src}" for d, src in s.pairs)
        return [f"{pad}shadow ({inner});"]
    if isinstance(s, IFor):
        return [f"{pad}for ({s.count}) {{"] + _block_lines(s.body, depth + 1) + [pad + "}"]
    if isinstance(s, IIf):
        return (
            [f"{pad}if ({_cond(s.cond)}) {{"]
            + _block_lines(s.then, depth + 1)
            + [pad + "} else {"]
            + _block_lines(s.orelse, depth + 1)
            + [pad + "}"]
        )
    raise TypeError(f"not an IR statement: {s!r}")


def _block_lines(b: IBlock, depth: int) -> list:
    out = []
    for s in b.stmts:
        out.extend(_stmt_lines(s, depth))
    return out


def emit_text(ir: IRProgram) -> str:
    lines = []
    for fn in ir.functions:
        lines.append(f"function {fn.name}({', '.join(fn.params)}) -> ({', '.join(fn.outs)}) {{")
        lines.extend(_block_lines(fn.body, 1))
        lines.append("}")
    lines.append("main {")
    lines.extend(_block_lines(ir.main, 1))
    lines.append("}")
    return "\n".join(lines) + "\n"


class _IRParser(Parser):
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks, self.errors = tokenize(text, file, allow_dollar=True)
        self.pos = 0

    def name(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.fail({"identifier"})
        self.advance()
        return t.text

    def names(self, stop: str) -> tuple:
        out = []
        if not self.at(stop):
            out.append(self.name())
            while self.at(","):
                self.advance()
                out.append(self.name())
        return tuple(out)

    def neg(self):
        # a bare variable may stand in boolean position
        t = self.tok
        if t.kind == "ident" and t.text not in KEYWORDS and self.peek().text != "(":
            self.advance()
            return Var(t.text, span=t.span)
        return super().neg()

    def program(self) -> IRProgram:
        if self.errors:
            raise ParseFailed(self.errors)
        fns = []
        while self.at_keyword("function"):
            self.advance()
            name = self.name()
            self.expect("(")
            params = self.names(")")
            self.expect(")")
            self.expect("->")
            self.expect("(")
            outs = self.names(")")
            self.expect(")")
            fns.append(IRFunction(name, params, outs, self.block()))
        if not self.at_keyword("main"):
            self.fail({"'function'", "'main'"})
        self.advance()
        main = self.block()
        if self.tok.kind != "eof":
            self.fail({"end of input"})
        return IRProgram(tuple(fns), main)

    def block(self) -> IBlock:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail({"'}'"})
            stmts.append(self.stmt())
        self.advance()
        return IBlock(tuple(stmts))

    def stmt(self):
        t = self.tok
        if t.kind == "ident" and self.peek().text == ":=":
            target = self.name()
            self.advance()
            if self.tok.kind == "ident" and self.tok.text in ("call", "pred") and self.peek().kind == "ident":
                return self.call(target)
            term = self.term()
            self.expect(";")
            return IAssign(target, term)
        if self.at_keyword("call") or self.at_keyword("pred"):
            return self.call(None)
        if self.at_keyword("assert"):
            self.advance()
            e = self.expr()
            self.expect(";")
            return IAssert(e)
        if self.at_keyword("return"):
            self.advance()
            if not (self.at_keyword("true") or self.at_keyword("false")):
                self.fail({"'true'", "'false'"})
            v = self.advance().text == "true"
            self.expect(";")
            return IReturn(v)
        if self.at_keyword("shadow"):
            self.advance()
            self.expect("(")
            pairs = []
            while not self.at(")"):
                if pairs:
                    self.expect(",")
                d = self.name()
                self.expect(":=")
                pairs.append((d, self.name()))
            self.advance()
            self.expect(";")
            return IShadow(tuple(pairs))
        if self.at_keyword("for"):
            self.advance()
            self.expect("(")
            count = self.name()
            self.expect(")")
            return IFor(count, self.block())
        if self.at_keyword("if"):
            self.advance()
            self.expect("(")
            c = self.expr()
            self.expect(")")
            then = self.block()
            if not self.at_keyword("else"):
                self.fail({"'else'"})
            self.advance()
            return IIf(c, then, self.block())
        self.fail({"statement"})

    def call(self, ok):
        kind = self.advance().text
        name = self.name()
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.term())
            while self.at(","):
                self.advance()
                args.append(self.term())
        self.expect(")")
        self.expect("->")
        self.expect("(")
        outs = self.names(")")
        self.expect(")")
        self.expect(";")
        cls = ICall if kind == "call" else IPred
        return cls(ok, outs, name, tuple(args))


def parse_ir(text: str, file: str = "<ir>") -> IRProgram:
    try:
        return _IRParser(text, file).program()
    except ParseError as exc:
        raise ParseFailed([exc]) from None
