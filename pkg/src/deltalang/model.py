"""The base model and the extensible signature.

:func:`builtin_model` returns the starting signature: integer arithmetic,
comparisons, the list operations from :mod:`deltalang.values`, and a couple
of text helpers. D-predicates, D-functions and bounded families are added
with the ``register_*`` functions, each of which returns a new signature.

Every built-in charges the step meter by a cost that is polynomial in the
sizes of its arguments; ``BUILTIN_COST_BOUND`` is the (C0, p0) pair the test
suite holds them to.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping

from . import values as V
from .errors import DeltaTypeError, DivisionByZero, EmptyFamily, Redeclaration, UnboundVariable
from .syntax.ast import (
    And, BoolLit, BoundDecl, Const, FamilyDecl, FunApp, FunDecl, Not, Or, PredDecl, Rel, Var,
)

# steps(builtin(args)) <= C0 * (sum of argument sizes) ** p0
BUILTIN_COST_BOUND = (4, 2)


@dataclass(frozen=True)
class Builtin:
    name: str
    kind: str  # "function", "relation" or "predicate"
    arity: int
    outs: int
    impl: Callable
    doc: str


@dataclass(frozen=True)
class DPredicate:
    decl: PredDecl
    kind: str = "dpredicate"

    @property
    def arity(self):
        return len(self.decl.ins)

    @property
    def outs(self):
        return len(self.decl.outs)


@dataclass(frozen=True)
class DFunction:
    decl: FunDecl
    kind: str = "dfunction"

    @property
    def arity(self):
        return len(self.decl.params)

    @property
    def outs(self):
        return 1


@dataclass(frozen=True)
class FamilyF:
    """Finite bounded family for the alpha operator.

    ``guards[i]`` is a quantifier-free expression over the formal inputs
    ``ins``; the first guard that holds selects ``members[i]``, and the last
    member is chosen when none does, so selection is total.
    """

    ins: tuple
    outs: tuple
    members: tuple
    guards: tuple
    bound: BoundDecl
    kind: str = "family"

    def __post_init__(self):
        if not self.members:
            raise EmptyFamily("a family needs at least one member")
        if len(self.guards) != len(self.members) - 1:
            raise ValueError("a family needs exactly one guard per member except the last")

    @property
    def arity(self):
        return len(self.ins)

    @classmethod
    def from_decl(cls, decl: FamilyDecl) -> "FamilyF":
        return cls(tuple(decl.ins), tuple(decl.outs), tuple(decl.members), tuple(decl.guards), decl.bound)

    def select(self, args, sig: "Signature", meter=None) -> int:
        frame = V.frame_from(zip(self.ins, args))
        lookup = frame_lookup(frame)
        for i, g in enumerate(self.guards):
            if holds(g, lookup, sig, meter):
                return i
        return len(self.members) - 1


class Signature:
    """Immutable symbol table; one namespace for every kind of symbol."""

    __slots__ = ("_symbols",)

    def __init__(self, symbols: Mapping | None = None):
        self._symbols = MappingProxyType(dict(symbols or {}))

    def __contains__(self, name) -> bool:
        return name in self._symbols

    def contains(self, name) -> bool:
        return name in self._symbols

    def get(self, name):
        return self._symbols.get(name)

    def names(self):
        return list(self._symbols)

    def items(self):
        return self._symbols.items()

    def extend(self, name: str, symbol) -> "Signature":
        if name in self._symbols:
            raise Redeclaration(f"symbol {name!r} is already in the signature")
        d = dict(self._symbols)
        d[name] = symbol
        return Signature(d)

    def is_builtin(self, name) -> bool:
        return isinstance(self._symbols.get(name), Builtin)

    def __len__(self):
        return len(self._symbols)


def register_dpredicate(sig: Signature, decl: PredDecl) -> Signature:
    return sig.extend(decl.name, DPredicate(decl))


def register_dfunction(sig: Signature, decl: FunDecl) -> Signature:
    return sig.extend(decl.name, DFunction(decl))


def register_family(sig: Signature, name: str, fam: FamilyF) -> Signature:
    if not fam.members:
        raise EmptyFamily(f"family {name!r} has no members")
    return sig.extend(name, fam)


def register_declaration(sig: Signature, decl) -> Signature:
    if isinstance(decl, PredDecl):
        return register_dpredicate(sig, decl)
    if isinstance(decl, FunDecl):
        return register_dfunction(sig, decl)
    if isinstance(decl, FamilyDecl):
        return register_family(sig, decl.name, FamilyF.from_decl(decl))
    raise TypeError(f"not a declaration: {decl!r}")


# -- built-in implementations ------------------------------------------------------


def _int(v, op):
    if not V.is_int(v):
        raise DeltaTypeError(f"{op}: expected an integer, got {V.type_name(v)}")
    return v


def _text(v, op):
    if not isinstance(v, str):
        raise DeltaTypeError(f"{op}: expected text, got {V.type_name(v)}")
    return v


def _words(n: int) -> int:
    return n.bit_length() // 64 + 1


def _charge(meter, n):
    if meter is not None:
        meter.charge(n)


def _arith(op):
    def impl(args, meter):
        a, b = (_int(x, op.__name__) for x in args)
        _charge(meter, _words(a) + _words(b) - 1)
        return op(a, b)
    return impl


def _tdiv(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def _mul_like(name, op):
    def impl(args, meter):
        a, b = (_int(x, name) for x in args)
        _charge(meter, _words(a) * _words(b))
        return op(a, b)
    return impl


def _add(a, b):
    return a + b


def _sub(a, b):
    return a - b


def _divmod_impl(args, meter):
    a, b = (_int(x, "divmod") for x in args)
    _charge(meter, _words(a) * _words(b))
    if b == 0:
        return False, ()
    q = _tdiv(a, b)
    return True, (q, a - b * q)


def _split_impl(args, meter):
    (l,) = args
    if not isinstance(l, V.ListVal):
        raise DeltaTypeError(f"split: expected a list, got {V.type_name(l)}")
    if not l.items:
        _charge(meter, 1)
        return False, ()
    return True, (V.tail(l, meter), V.head(l, meter))


def _lt(args, meter):
    a, b = (_int(x, "lt") for x in args)
    _charge(meter, min(_words(a), _words(b)))
    return a < b


def _leq(args, meter):
    a, b = (_int(x, "leq") for x in args)
    _charge(meter, min(_words(a), _words(b)))
    return a <= b


def _eq(args, meter):
    a, b = args
    eq, cost = V._eq_cost(a, b)
    _charge(meter, cost)
    return eq


def _length(args, meter):
    (l,) = args
    if not isinstance(l, V.ListVal):
        raise DeltaTypeError(f"length: expected a list, got {V.type_name(l)}")
    _charge(meter, 1)
    return len(l.items)


def _strlen(args, meter):
    (s,) = args
    _charge(meter, 1)
    return len(_text(s, "strlen"))


def _strcat(args, meter):
    a, b = (_text(x, "strcat") for x in args)
    _charge(meter, 1 + len(a) + len(b))
    return a + b


def _nil(args, meter):
    _charge(meter, 1)
    return V.NIL


_BUILTINS = [
    Builtin("add", "function", 2, 1, _arith(_add), "integer sum"),
    Builtin("sub", "function", 2, 1, _arith(_sub), "integer difference"),
    Builtin("mul", "function", 2, 1, _mul_like("mul", lambda a, b: a * b), "integer product"),
    Builtin("div", "function", 2, 1, _mul_like("div", _tdiv), "integer quotient, truncated toward zero"),
    Builtin("mod", "function", 2, 1, _mul_like("mod", lambda a, b: a - b * _tdiv(a, b)),
            "remainder matching div: a - b*div(a, b)"),
    Builtin("nil", "function", 0, 1, _nil, "the empty list"),
    Builtin("head", "function", 1, 1, lambda a, m: V.head(a[0], m), "last element of a list, <> if empty"),
    Builtin("tail", "function", 1, 1, lambda a, m: V.tail(a[0], m), "list without its last element"),
    Builtin("cons", "function", 2, 1, lambda a, m: V.cons(a[0], a[1], m), "append one new last element"),
    Builtin("conc", "function", 2, 1, lambda a, m: V.conc(a[0], a[1], m), "concatenate two lists"),
    Builtin("addValue", "function", 2, 1, lambda a, m: V.add_value(a[0], a[1], m),
            "replace the pair keyed like <x,a> and move it last"),
    Builtin("addValues", "function", 2, 1, lambda a, m: V.add_values(a[0], a[1], m),
            "addValue folded over a list of pairs"),
    Builtin("length", "function", 1, 1, _length, "number of list elements"),
    Builtin("strlen", "function", 1, 1, _strlen, "text length in characters"),
    Builtin("strcat", "function", 2, 1, _strcat, "text concatenation"),
    Builtin("eq", "relation", 2, 0, _eq, "deep structural equality"),
    Builtin("lt", "relation", 2, 0, _lt, "integer less-than"),
    Builtin("leq", "relation", 2, 0, _leq, "integer less-or-equal"),
    Builtin("member", "relation", 2, 0, lambda a, m: V.member(a[0], a[1], m), "x is an element of w"),
    Builtin("prefix", "relation", 2, 0, lambda a, m: V.prefix(a[0], a[1], m), "l is an initial segment of w"),
    Builtin("divmod", "predicate", 2, 2, _divmod_impl, "holds iff b != 0; outputs quotient and remainder"),
    Builtin("split", "predicate", 1, 2, _split_impl, "holds iff l is non-empty; outputs tail and head"),
]

_BASE = Signature({b.name: b for b in _BUILTINS})


def builtin_model() -> Signature:
    return _BASE


def dump_signature(sig: Signature) -> str:
    lines = []
    for name in sorted(sig.names()):
        sym = sig.get(name)
        if isinstance(sym, Builtin):
            shape = f"{sym.arity}" if sym.kind != "predicate" else f"{sym.arity}->{sym.outs}"
            lines.append(f"{sym.kind:<9} {name}/{shape}  {sym.doc}")
        elif isinstance(sym, DPredicate):
            lines.append(f"dpredicate {name}/{sym.arity}->{sym.outs}")
        elif isinstance(sym, DFunction):
            lines.append(f"dfunction {name}/{sym.arity}")
        elif isinstance(sym, FamilyF):
            lines.append(f"family    {name}/{sym.arity}->{len(sym.outs)} bound {sym.bound.render()}")
    c0, p0 = BUILTIN_COST_BOUND
    lines.append(f"cost-bound C0={c0} p0={p0}")
    return "\n".join(lines) + "\n"


# -- truth in the base model ----------------------------------------------------------


def frame_lookup(frame):
    def lookup(name):
        v = V.lookup(frame, name, None)
        if v is None:
            raise UnboundVariable(f"variable {name!r} is not bound in the current frame")
        return v
    return lookup


def call_builtin(sym: Builtin, args, meter=None):
    if len(args) != sym.arity:
        raise DeltaTypeError(f"{sym.name} expects {sym.arity} argument(s), got {len(args)}")
    if meter is not None:
        meter.charge(1)
    return sym.impl(tuple(args), meter)


def term_value(t, lookup, sig: Signature, meter=None):
    """Value of a built-in term; variables are resolved through ``lookup``."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        return lookup(t.name)
    if isinstance(t, FunApp):
        sym = sig.get(t.name)
        if not isinstance(sym, Builtin) or sym.kind != "function":
            raise DeltaTypeError(f"{t.name!r} is not a built-in function")
        args = [term_value(a, lookup, sig, meter) for a in t.args]
        return call_builtin(sym, args, meter)
    raise TypeError(f"not a term: {t!r}")


def holds(e, lookup, sig: Signature, meter=None) -> bool:
    """Truth of a quantifier-free expression; ``and``/``or`` short-circuit left to right."""
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Rel):
        sym = sig.get(e.name)
        if not isinstance(sym, Builtin) or sym.kind != "relation":
            raise DeltaTypeError(f"{e.name!r} is not a built-in relation")
        args = [term_value(a, lookup, sig, meter) for a in e.args]
        return bool(call_builtin(sym, args, meter))
    if isinstance(e, Not):
        return not holds(e.arg, lookup, sig, meter)
    if isinstance(e, And):
        return holds(e.left, lookup, sig, meter) and holds(e.right, lookup, sig, meter)
    if isinstance(e, Or):
        return holds(e.left, lookup, sig, meter) or holds(e.right, lookup, sig, meter)
    raise TypeError(f"not an expression: {e!r}")
