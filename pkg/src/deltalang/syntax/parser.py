"""Recursive-descent parser for the Delta surface syntax.

Grammar (``{...}`` blocks are list-formulas)::

    program  := stmt*
    stmt     := block
              | "copy" "(" IDENT ")" ["bound" bound] stmt
              | "if" "(" cond ")" stmt ["else" stmt]
              | "return" ";"
              | "alpha" IDENT "(" [idents] ")" ";"
              | "predicate" IDENT "(" "in" [idents] "->" "out" [idents] ")" stmt
              | "function" IDENT "(" [idents] ")" "->" IDENT stmt
              | "family" IDENT "(" "in" [idents] "->" "out" [idents] ")" "bound" bound
                    "{" ("when" "(" expr ")" stmt)* "otherwise" stmt "}"
              | IDENT ":=" term ";"
              | expr ";"                      quantifier-free formula or predicate call
    block    := "{" stmt* "}"
    cond     := block | expr
    bound    := "(" INT ["/" INT] "," INT ")"
    expr     := conj ("or" conj)*
    conj     := neg ("and" neg)*
    neg      := "not" neg | "true" | "false" | "(" expr ")"
              | IDENT "(" [terms] ["->" [idents]] ")"
    term     := INT | TEXT | "true" | "false" | "<" [value ("," value)*] ">"
              | IDENT "(" [terms] ")" | IDENT
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import ParseError, ParseFailed
from ..values import ListVal
from .ast import (
    AlphaCall, And, Assign, BoolLit, BoundDecl, Const, Copy, FamilyDecl, FunApp, FunDecl,
    If, Not, Or, PredCall, PredDecl, QuantFree, Rel, Return, Seq, SourceSpan, Var,
)
from .lexer import tokenize

KEYWORDS = frozenset({
    "copy", "bound", "if", "else", "return", "alpha", "predicate", "function", "family",
    "when", "otherwise", "true", "false", "not", "and", "or", "in", "out",
})


class _PredCallMarker:
    """Predicate call found while parsing an expression; only legal at the top."""

    def __init__(self, node):
        self.node = node


class Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.file = file
        self.toks, self.errors = tokenize(text, file)
        self.pos = 0

    # -- token plumbing -------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.pos]

    def peek(self, k: int = 1):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self):
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.text == text

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def fail(self, expected, what=None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        exp = sorted(expected)
        msg = what or f"expected {' or '.join(exp)} but found {found}"
        raise ParseError(msg, t.span, exp)

    def expect(self, text: str):
        if not self.at(text):
            self.fail({repr(text)})
        return self.advance()

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail({"identifier"})
        self.advance()
        return t.text

    def span_from(self, start) -> SourceSpan:
        end = self.toks[self.pos - 1] if self.pos > 0 else start
        s = start.span
        if end.span.line == s.line:
            length = end.span.column + end.span.length - s.column
        else:
            length = s.length
        return SourceSpan(s.file, s.line, s.column, max(length, 0))

    # -- recovery ---------------------------------------------------------------

    def synchronize(self):
        depth = 0
        while self.tok.kind != "eof":
            if self.at("{"):
                depth += 1
            elif self.at("}"):
                if depth == 0:
                    return
                depth -= 1
                if depth == 0:
                    self.advance()
                    return
            elif self.at(";") and depth == 0:
                self.advance()
                return
            self.advance()

    # -- program / statements -----------------------------------------------------

    def program(self) -> Seq:
        start = self.tok
        items = []
        while self.tok.kind != "eof":
            before = self.pos
            try:
                items.append(self.stmt())
            except ParseError as err:
                self.errors.append(err)
                self.synchronize()
                if self.at("}"):
                    self.errors.append(ParseError("unmatched '}'", self.tok.span, {"statement"}))
                    self.advance()
                if self.pos == before:
                    self.advance()
        if self.errors:
            raise ParseFailed(self.errors)
        return Seq(tuple(items), span=self.span_from(start) if items else SourceSpan(self.file, 1, 1, 0))

    def block(self) -> Seq:
        start = self.expect("{")
        items = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail({"'}'"})
            before = self.pos
            try:
                items.append(self.stmt())
            except ParseError as err:
                self.errors.append(err)
                self.synchronize()
                if self.pos == before and not self.at("}"):
                    self.advance()
        self.expect("}")
        return Seq(tuple(items), span=self.span_from(start))

    def stmt(self):
        t = self.tok
        if self.at("{"):
            return self.block()
        if t.kind == "ident":
            kw = t.text
            if kw == "copy":
                return self.copy_stmt()
            if kw == "if":
                return self.if_stmt()
            if kw == "return":
                self.advance()
                self.expect(";")
                return Return(span=self.span_from(t))
            if kw == "alpha":
                self.advance()
                name = self.ident()
                self.expect("(")
                args = self.ident_list(")")
                self.expect(")")
                self.expect(";")
                return AlphaCall(name, tuple(args), span=self.span_from(t))
            if kw == "predicate":
                return self.predicate_decl()
            if kw == "function":
                return self.function_decl()
            if kw == "family":
                return self.family_decl()
            if kw not in KEYWORDS and self.peek().kind == "punct" and self.peek().text == ":=":
                target = self.ident()
                self.expect(":=")
                term = self.term()
                self.expect(";")
                return Assign(target, term, span=self.span_from(t))
        node = self.formula_expr()
        self.expect(";")
        return node

    def formula_expr(self):
        """An expression in statement/condition position: QuantFree or PredCall."""
        start = self.tok
        e = self.expr()
        if isinstance(e, _PredCallMarker):
            return e.node
        return QuantFree(e, span=self.span_from(start))

    def copy_stmt(self):
        start = self.advance()
        self.expect("(")
        count = self.ident()
        self.expect(")")
        bound = None
        if self.at_keyword("bound"):
            self.advance()
            bound = self.bound()
        body = self.stmt()
        return Copy(body, count, bound, span=self.span_from(start))

    def if_stmt(self):
        start = self.advance()
        self.expect("(")
        cond = self.block() if self.at("{") else self.formula_expr()
        self.expect(")")
        then = self.stmt()
        if self.at_keyword("else"):
            self.advance()
            orelse = self.stmt()
        else:
            orelse = Seq((), span=self.span_from(start))
        return If(cond, then, orelse, span=self.span_from(start))

    def bound(self) -> BoundDecl:
        start = self.expect("(")
        num = self.int_lit()
        den = 1
        if self.at("/"):
            self.advance()
            den = self.int_lit()
        self.expect(",")
        p = self.int_lit()
        self.expect(")")
        try:
            return BoundDecl(Fraction(num, den), p)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid bound: {exc}", start.span, {"positive constant"}) from None

    def int_lit(self) -> int:
        t = self.tok
        if t.kind != "int":
            self.fail({"integer"})
        self.advance()
        return t.value

    def ident_list(self, stop: str) -> list:
        names = []
        if self.at(stop):
            return names
        names.append(self.ident())
        while self.at(","):
            self.advance()
            names.append(self.ident())
        return names

    def signature_parens(self):
        self.expect("(")
        if not self.at_keyword("in"):
            self.fail({"'in'"})
        self.advance()
        ins = self.ident_list("->")
        self.expect("->")
        if not self.at_keyword("out"):
            self.fail({"'out'"})
        self.advance()
        outs = self.ident_list(")")
        self.expect(")")
        return tuple(ins), tuple(outs)

    def predicate_decl(self):
        start = self.advance()
        name = self.ident()
        ins, outs = self.signature_parens()
        body = self.stmt()
        return PredDecl(name, ins, outs, body, span=self.span_from(start))

    def function_decl(self):
        start = self.advance()
        name = self.ident()
        self.expect("(")
        params = self.ident_list(")")
        self.expect(")")
        self.expect("->")
        ret = self.ident()
        body = self.stmt()
        return FunDecl(name, tuple(params), ret, body, span=self.span_from(start))

    def family_decl(self):
        start = self.advance()
        name = self.ident()
        ins, outs = self.signature_parens()
        if not self.at_keyword("bound"):
            self.fail({"'bound'"})
        self.advance()
        bound = self.bound()
        self.expect("{")
        guards, members = [], []
        while self.at_keyword("when"):
            self.advance()
            self.expect("(")
            g = self.expr()
            if isinstance(g, _PredCallMarker):
                raise ParseError("family guards must be quantifier-free", g.node.span, {"expression"})
            self.expect(")")
            guards.append(g)
            members.append(self.stmt())
        if not self.at_keyword("otherwise"):
            self.fail({"'when'", "'otherwise'"})
        self.advance()
        members.append(self.stmt())
        self.expect("}")
        return FamilyDecl(name, ins, outs, bound, tuple(guards), tuple(members), span=self.span_from(start))

    # -- quantifier-free expressions ------------------------------------------------

    def expr(self):
        start = self.tok
        left = self.conj()
        while self.at_keyword("or"):
            self.advance()
            right = self.conj()
            self._no_marker(left, right)
            left = Or(left, right, span=self.span_from(start))
        return left

    def conj(self):
        start = self.tok
        left = self.neg()
        while self.at_keyword("and"):
            self.advance()
            right = self.neg()
            self._no_marker(left, right)
            left = And(left, right, span=self.span_from(start))
        return left

    def _no_marker(self, *parts):
        for p in parts:
            if isinstance(p, _PredCallMarker):
                raise ParseError(
                    "predicate calls with '->' cannot be combined with not/and/or", p.node.span, {"relation"}
                )

    def neg(self):
        t = self.tok
        if self.at_keyword("not"):
            self.advance()
            inner = self.neg()
            self._no_marker(inner)
            return Not(inner, span=self.span_from(t))
        if self.at_keyword("true") or self.at_keyword("false"):
            self.advance()
            return BoolLit(t.text == "true", span=t.span)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident" and t.text not in KEYWORDS:
            name = self.ident()
            self.expect("(")
            args = []
            if not self.at(")") and not self.at("->"):
                args.append(self.term())
                while self.at(","):
                    self.advance()
                    args.append(self.term())
            if self.at("->"):
                self.advance()
                outs = self.ident_list(")")
                self.expect(")")
                ins = []
                for a in args:
                    if not isinstance(a, Var):
                        raise ParseError("predicate call inputs must be variables", a.span, {"identifier"})
                    ins.append(a.name)
                return _PredCallMarker(PredCall(name, tuple(ins), tuple(outs), span=self.span_from(t)))
            self.expect(")")
            return Rel(name, tuple(args), span=self.span_from(t))
        self.fail({"relation", "'not'", "'true'", "'false'", "'('"})

    # -- terms ----------------------------------------------------------------------

    def term(self):
        t = self.tok
        if t.kind in ("int", "text"):
            self.advance()
            return Const(t.value, span=t.span)
        if self.at_keyword("true") or self.at_keyword("false"):
            self.advance()
            return Const(t.text == "true", span=t.span)
        if self.at("<"):
            v = self.list_value()
            return Const(v, span=self.span_from(t))
        if t.kind == "ident" and t.text not in KEYWORDS:
            name = self.ident()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.term())
                    while self.at(","):
                        self.advance()
                        args.append(self.term())
                self.expect(")")
                return FunApp(name, tuple(args), span=self.span_from(t))
            return Var(name, span=t.span)
        self.fail({"term"})

    def list_value(self) -> ListVal:
        self.expect("<")
        items = []
        if self.at(">"):
            self.advance()
            return ListVal()
        while True:
            items.append(self.const_value())
            if self.at(","):
                self.advance()
                continue
            self.expect(">")
            return ListVal(items)

    def const_value(self):
        t = self.tok
        if t.kind in ("int", "text"):
            self.advance()
            return t.value
        if self.at_keyword("true") or self.at_keyword("false"):
            self.advance()
            return t.text == "true"
        if self.at("<"):
            return self.list_value()
        self.fail({"constant"})


def parse_program(text: str, file: str = "<input>") -> Seq:
    """Parse a whole program; raises :class:`ParseFailed` listing every recovered error."""
    return Parser(text, file).program()


def parse_formula(text: str, file: str = "<input>"):
    """Parse a single statement (convenience for tests and the REPL-less CLI)."""
    prog = parse_program(text, file)
    if len(prog.items) != 1:
        raise ParseFailed([ParseError("expected exactly one statement", prog.span)])
    return prog.items[0]
