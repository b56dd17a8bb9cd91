"""Bounded imperative IR.

Expressions reuse the Delta term and quantifier-free nodes (``Const``,
``Var``, ``FunApp``, ``Rel``, ``Not``, ``And``, ``Or``, ``BoolLit``); a bare
``Var`` or ``Const`` may also stand in boolean position, where it must hold a
boolean.

Statements are assignment, built-in predicate call, call of an earlier IR
function, ``assert``, bounded ``for`` (trip count read once on entry),
``if``/``else``, ``return true|false`` and ``shadow`` (copy bindings,
including absence, used to implement condition write-discard). There is no
unbounded loop and no recursion, so every IR program terminates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class IAssign:
    target: str
    term: object


@dataclass(frozen=True)
class ICall:
    """Call an IR function. Outputs are bound only if the callee ran ``return true``.

    With ``ok`` set the verdict is stored there; otherwise a false verdict
    makes the current function return false.
    """

    ok: Optional[str]
    outs: tuple
    func: str
    args: tuple


@dataclass(frozen=True)
class IPred:
    """Built-in predicate (or relation, with no outputs); same ``ok`` convention as :class:`ICall`."""

    ok: Optional[str]
    outs: tuple
    name: str
    args: tuple


@dataclass(frozen=True)
class IAssert:
    cond: object


@dataclass(frozen=True)
class IFor:
    count: str
    body: "IBlock"


@dataclass(frozen=True)
class IIf:
    cond: object
    then: "IBlock"
    orelse: "IBlock"


@dataclass(frozen=True)
class IReturn:
    verdict: bool = True


@dataclass(frozen=True)
class IShadow:
    """For each ``(dst, src)``: bind dst to src's value, or unbind dst if src is unbound."""

    pairs: tuple


@dataclass(frozen=True)
class IBlock:
    stmts: tuple = ()


@dataclass(frozen=True)
class IRFunction:
    name: str
    params: tuple
    outs: tuple
    body: IBlock


@dataclass(frozen=True)
class IRProgram:
    functions: tuple = ()
    main: IBlock = IBlock()

    def function(self, name) -> IRFunction:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)
