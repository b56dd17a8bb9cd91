"""Abstract syntax for D-terms and D-formulas.

Nodes are frozen dataclasses. Source spans ride along on every node but are
excluded from equality, so two trees compare equal iff they have the same
structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Optional, Union

from ..values import dump, values_equal


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def render(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


def _span():
    return field(default=None, compare=False, repr=False, hash=False)


@dataclass(frozen=True)
class BoundDecl:
    """Declared polynomial bound ``C * size**p``."""

    C: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "C", Fraction(self.C))
        if self.C <= 0:
            raise ValueError("bound constant C must be positive")
        if not isinstance(self.p, int) or self.p < 0:
            raise ValueError("bound degree p must be a natural number")

    def limit(self, size: int) -> Fraction:
        return self.C * Fraction(size) ** self.p

    def render(self) -> str:
        c = str(self.C.numerator) if self.C.denominator == 1 else f"{self.C.numerator}/{self.C.denominator}"
        return f"({c}, {self.p})"


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Const:
    value: object
    span: Optional[SourceSpan] = _span()

    def __eq__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        return values_equal(self.value, other.value)

    def __hash__(self):
        return hash(("Const", dump(self.value)))


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FunApp:
    name: str
    args: tuple
    span: Optional[SourceSpan] = _span()


Term = Union[Const, Var, FunApp]


# -- quantifier-free boolean structure -----------------------------------------


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Not:
    arg: object
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class And:
    left: object
    right: object
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Or:
    left: object
    right: object
    span: Optional[SourceSpan] = _span()


Expr = Union[BoolLit, Rel, Not, And, Or]


# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class QuantFree:
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Assign:
    target: str
    term: Term
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Copy:
    body: object
    count: str
    bound: Optional[BoundDecl] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class If:
    cond: object
    then: object
    orelse: object
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AlphaCall:
    family: str
    args: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PredDecl:
    name: str
    ins: tuple
    outs: tuple
    body: object
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FunDecl:
    name: str
    params: tuple
    ret: str
    body: object
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FamilyDecl:
    """A finite bounded family: ``guards[i]`` selects ``members[i]``; the last member is the fallback."""

    name: str
    ins: tuple
    outs: tuple
    bound: BoundDecl
    guards: tuple
    members: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PredCall:
    name: str
    ins: tuple
    outs: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FunCallAssign:
    target: str
    name: str
    args: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Return:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Seq:
    items: tuple = ()
    span: Optional[SourceSpan] = _span()


Formula = Union[
    QuantFree, Assign, Copy, If, AlphaCall, PredDecl, FunDecl, FamilyDecl,
    PredCall, FunCallAssign, Return, Seq,
]

DECLARATIONS = (PredDecl, FunDecl, FamilyDecl)

TRUE = QuantFree(BoolLit(True))


def is_true_literal(f) -> bool:
    return isinstance(f, QuantFree) and isinstance(f.expr, BoolLit) and f.expr.value is True


def is_simple(t) -> bool:
    return isinstance(t, (Const, Var))


# -- traversal helpers -----------------------------------------------------------


def children(node):
    for f in fields(node):
        v = getattr(node, f.name)
        if isinstance(v, tuple):
            for x in v:
                if hasattr(x, "__dataclass_fields__") and not isinstance(x, (str, BoundDecl)):
                    yield x
        elif hasattr(v, "__dataclass_fields__") and not isinstance(v, (SourceSpan, BoundDecl)):
            yield v


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)


def term_vars(t):
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, FunApp):
        for a in t.args:
            yield from term_vars(a)


def expr_vars(e):
    if isinstance(e, Rel):
        for a in e.args:
            yield from term_vars(a)
    elif isinstance(e, Not):
        yield from expr_vars(e.arg)
    elif isinstance(e, (And, Or)):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)


def written_vars(f) -> list:
    """Variables a formula may bind in the current frame, in first-write order."""
    out: list = []

    def add(n):
        if n not in out:
            out.append(n)

    def go(f):
        if isinstance(f, (Assign, FunCallAssign)):
            add(f.target)
        elif isinstance(f, PredCall):
            for n in f.outs:
                add(n)
        elif isinstance(f, Copy):
            go(f.body)
        elif isinstance(f, If):
            go(f.cond)
            go(f.then)
            go(f.orelse)
        elif isinstance(f, Seq):
            for x in f.items:
                go(x)
        elif isinstance(f, AlphaCall):
            pass  # outputs depend on the family; callers resolve them
    go(f)
    return out


def read_vars(f) -> list:
    """Variables a formula may read from the current frame (declaration bodies excluded)."""
    out: list = []

    def add(n):
        if n not in out:
            out.append(n)

    def go(f):
        if isinstance(f, QuantFree):
            for n in expr_vars(f.expr):
                add(n)
        elif isinstance(f, Assign):
            for n in term_vars(f.term):
                add(n)
        elif isinstance(f, FunCallAssign):
            for a in f.args:
                for n in term_vars(a):
                    add(n)
        elif isinstance(f, PredCall):
            for n in f.ins:
                add(n)
        elif isinstance(f, AlphaCall):
            for n in f.args:
                add(n)
        elif isinstance(f, Copy):
            add(f.count)
            go(f.body)
        elif isinstance(f, If):
            go(f.cond)
            go(f.then)
            go(f.orelse)
        elif isinstance(f, Seq):
            for x in f.items:
                go(x)
    go(f)
    return out


def _rn(mapping, name):
    return mapping.get(name, name)


def rename_term(t, mapping):
    if isinstance(t, Var):
        return replace(t, name=_rn(mapping, t.name))
    if isinstance(t, FunApp):
        return replace(t, args=tuple(rename_term(a, mapping) for a in t.args))
    return t


def rename_expr(e, mapping):
    if isinstance(e, Rel):
        return replace(e, args=tuple(rename_term(a, mapping) for a in e.args))
    if isinstance(e, Not):
        return replace(e, arg=rename_expr(e.arg, mapping))
    if isinstance(e, (And, Or)):
        return replace(e, left=rename_expr(e.left, mapping), right=rename_expr(e.right, mapping))
    return e


def rename_vars(f, mapping: dict):
    """Simultaneously rename frame variables (reads and writes) of a formula.

    Declaration bodies run in their own frames and are left alone.
    """
    if not mapping:
        return f
    if isinstance(f, QuantFree):
        return replace(f, expr=rename_expr(f.expr, mapping))
    if isinstance(f, Assign):
        return replace(f, target=_rn(mapping, f.target), term=rename_term(f.term, mapping))
    if isinstance(f, FunCallAssign):
        return replace(f, target=_rn(mapping, f.target), args=tuple(rename_term(a, mapping) for a in f.args))
    if isinstance(f, PredCall):
        return replace(f, ins=tuple(_rn(mapping, n) for n in f.ins), outs=tuple(_rn(mapping, n) for n in f.outs))
    if isinstance(f, AlphaCall):
        return replace(f, args=tuple(_rn(mapping, n) for n in f.args))
    if isinstance(f, Copy):
        return replace(f, body=rename_vars(f.body, mapping), count=_rn(mapping, f.count))
    if isinstance(f, If):
        return replace(
            f,
            cond=rename_vars(f.cond, mapping),
            then=rename_vars(f.then, mapping),
            orelse=rename_vars(f.orelse, mapping),
        )
    if isinstance(f, Seq):
        return replace(f, items=tuple(rename_vars(x, mapping) for x in f.items))
    return f


def copy_count_vars(f) -> set:
    return {n.count for n in walk(f) if isinstance(n, Copy)}
