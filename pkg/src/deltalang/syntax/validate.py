"""Static checks and symbol resolution.

The signature is extended left to right as declarations are met, exactly as
evaluation would extend it, so a body may only mention symbols declared
before it (no recursion). ``y := f(...)`` with a D-function ``f`` is rewritten
to :class:`FunCallAssign`.
"""
from __future__ import annotations

from dataclasses import replace

from ..errors import (
    ArityMismatch, DuplicateName, IllegalSymbol, InvalidCondition, MisplacedDeclaration,
    Redeclaration, ReturnOutsideBody, UndeclaredVariable, UnknownSymbol, ValidationFailed,
)
from ..model import Builtin, DFunction, DPredicate, FamilyF, Signature, register_declaration
from .ast import (
    AlphaCall, And, Assign, BoolLit, Const, Copy, FamilyDecl, FunApp, FunCallAssign, FunDecl,
    If, Not, Or, PredCall, PredDecl, QuantFree, Rel, Return, Seq, Var, expr_vars,
)

_COND_FORMS = (QuantFree, PredCall, Assign, FunCallAssign, Seq)


class _Validator:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.errors: list = []

    def err(self, cls, msg, node):
        self.errors.append(cls(msg, getattr(node, "span", None)))

    # -- top level --------------------------------------------------------------------

    def program(self, prog: Seq, inputs):
        bound = set(inputs) if inputs is not None else None
        items = []
        for item in prog.items:
            if isinstance(item, (PredDecl, FunDecl, FamilyDecl)):
                items.append(self.declaration(item))
            else:
                new, bound = self.formula(item, bound, cond=False)
                items.append(new)
        return replace(prog, items=tuple(items))

    def declaration(self, d):
        if isinstance(d, FamilyDecl):
            new = self.family(d)
        elif isinstance(d, PredDecl):
            self._distinct(d.ins, "input", d)
            self._distinct(d.outs, "output", d)
            body, _ = self.formula(d.body, set(d.ins), cond=False)
            new = replace(d, body=body)
        else:
            self._distinct(d.params, "parameter", d)
            body, _ = self.formula(d.body, set(d.params), cond=False)
            new = replace(d, body=body)
        if d.name in self.sig:
            self.err(Redeclaration, f"{d.name!r} is already declared", d)
        else:
            self.sig = register_declaration(self.sig, new)
        return new

    def family(self, d: FamilyDecl):
        self._distinct(d.ins, "input", d)
        self._distinct(d.outs, "output", d)
        for n in set(d.ins) & set(d.outs):
            self.err(DuplicateName, f"family {d.name!r} uses {n!r} as both input and output", d)
        if not d.members:
            from ..errors import EmptyFamily
            self.err(EmptyFamily, f"family {d.name!r} has no members", d)
        guards = []
        for g in d.guards:
            self.expr(g)
            for n in expr_vars(g):
                if n not in d.ins:
                    self.err(UndeclaredVariable, f"guard of family {d.name!r} reads {n!r}, which is not an input", g)
            guards.append(g)
        members = []
        for m in d.members:
            new, _ = self.formula(m, None, cond=False)
            members.append(new)
        return replace(d, guards=tuple(guards), members=tuple(members))

    def _distinct(self, names, what, node):
        seen = set()
        for n in names:
            if n in seen:
                self.err(DuplicateName, f"duplicate {what} {n!r}", node)
            seen.add(n)

    # -- formulas -------------------------------------------------------------------

    def formula(self, f, bound, cond: bool):
        """Return (resolved formula, definitely-bound variables afterwards or None if unknown)."""
        if isinstance(f, (PredDecl, FunDecl, FamilyDecl)):
            self.err(MisplacedDeclaration, "declarations may only appear at the top level of a program", f)
            return f, bound
        if cond and not isinstance(f, _COND_FORMS):
            if isinstance(f, Return):
                self.err(ReturnOutsideBody, "'return' inside an if-condition has no body to leave", f)
            else:
                self.err(InvalidCondition, f"{type(f).__name__} is not allowed in an if-condition", f)
            return f, bound
        if isinstance(f, Seq):
            items = []
            for item in f.items:
                new, bound = self.formula(item, bound, cond)
                items.append(new)
            return replace(f, items=tuple(items)), bound
        if isinstance(f, QuantFree):
            self.expr(f.expr)
            return f, bound
        if isinstance(f, Assign):
            return self.assign(f), _plus(bound, f.target)
        if isinstance(f, FunCallAssign):
            self.call_args(f.name, f.args, f)
            return f, _plus(bound, f.target)
        if isinstance(f, PredCall):
            self.pred_call(f)
            return f, _plus(bound, *f.outs)
        if isinstance(f, Return):
            return f, bound
        if isinstance(f, AlphaCall):
            sym = self.sig.get(f.family)
            if sym is None:
                self.err(UnknownSymbol, f"unknown family {f.family!r}", f)
            elif not isinstance(sym, FamilyF):
                self.err(IllegalSymbol, f"{f.family!r} is not a family", f)
            elif len(f.args) != sym.arity:
                self.err(ArityMismatch, f"family {f.family!r} takes {sym.arity} argument(s), got {len(f.args)}", f)
            return f, bound
        if isinstance(f, Copy):
            if bound is not None and f.count not in bound:
                self.err(UndeclaredVariable, f"copy count {f.count!r} is not bound before the loop", f)
            body, _ = self.formula(f.body, bound, cond=False)
            return replace(f, body=body), bound
        if isinstance(f, If):
            c, after_cond = self.formula(f.cond, bound, cond=True)
            t, after_then = self.formula(f.then, after_cond, cond=False)
            e, after_else = self.formula(f.orelse, bound, cond=False)
            after = None if after_then is None or after_else is None else after_then & after_else
            return replace(f, cond=c, then=t, orelse=e), after
        raise TypeError(f"not a formula: {f!r}")

    def assign(self, f: Assign):
        t = f.term
        if isinstance(t, FunApp):
            sym = self.sig.get(t.name)
            if isinstance(sym, DFunction):
                self.call_args(t.name, t.args, t)
                return FunCallAssign(f.target, t.name, t.args, span=f.span)
        self.term(t, allow_d=True)
        return f

    def call_args(self, name, args, node):
        sym = self.sig.get(name)
        if sym is None:
            self.err(UnknownSymbol, f"unknown function {name!r}", node)
        elif not isinstance(sym, DFunction):
            self.err(IllegalSymbol, f"{name!r} is not a D-function", node)
        elif len(args) != sym.arity:
            self.err(ArityMismatch, f"{name!r} takes {sym.arity} argument(s), got {len(args)}", node)
        for a in args:
            self.term(a, allow_d=True)

    def pred_call(self, f: PredCall):
        sym = self.sig.get(f.name)
        self._distinct(f.outs, "output", f)
        if sym is None:
            self.err(UnknownSymbol, f"unknown predicate {f.name!r}", f)
            return
        if isinstance(sym, Builtin) and sym.kind in ("predicate", "relation"):
            n_in, n_out = sym.arity, sym.outs
        elif isinstance(sym, DPredicate):
            n_in, n_out = sym.arity, sym.outs
        else:
            self.err(IllegalSymbol, f"{f.name!r} is not a predicate", f)
            return
        if len(f.ins) != n_in or len(f.outs) != n_out:
            self.err(
                ArityMismatch,
                f"{f.name!r} takes {n_in} input(s) and {n_out} output(s), got {len(f.ins)} and {len(f.outs)}",
                f,
            )

    def term(self, t, allow_d: bool):
        if isinstance(t, (Const, Var)):
            return
        sym = self.sig.get(t.name)
        if sym is None:
            self.err(UnknownSymbol, f"unknown function {t.name!r}", t)
        elif isinstance(sym, DFunction):
            if not allow_d:
                self.err(IllegalSymbol, f"D-function {t.name!r} cannot appear in a quantifier-free formula", t)
            elif len(t.args) != sym.arity:
                self.err(ArityMismatch, f"{t.name!r} takes {sym.arity} argument(s), got {len(t.args)}", t)
        elif not (isinstance(sym, Builtin) and sym.kind == "function"):
            self.err(IllegalSymbol, f"{t.name!r} is not a function", t)
        elif len(t.args) != sym.arity:
            self.err(ArityMismatch, f"{t.name!r} takes {sym.arity} argument(s), got {len(t.args)}", t)
        for a in t.args:
            self.term(a, allow_d)

    def expr(self, e):
        if isinstance(e, BoolLit):
            return
        if isinstance(e, Rel):
            sym = self.sig.get(e.name)
            if sym is None:
                self.err(UnknownSymbol, f"unknown relation {e.name!r}", e)
            elif isinstance(sym, DPredicate):
                self.err(
                    IllegalSymbol,
                    f"D-predicate {e.name!r} cannot appear in a quantifier-free formula; call it as {e.name}(... ->)",
                    e,
                )
            elif not (isinstance(sym, Builtin) and sym.kind == "relation"):
                self.err(IllegalSymbol, f"{e.name!r} is not a relation", e)
            elif len(e.args) != sym.arity:
                self.err(ArityMismatch, f"{e.name!r} takes {sym.arity} argument(s), got {len(e.args)}", e)
            for a in e.args:
                self.term(a, allow_d=False)
        elif isinstance(e, Not):
            self.expr(e.arg)
        elif isinstance(e, (And, Or)):
            self.expr(e.left)
            self.expr(e.right)


def _plus(bound, *names):
    if bound is None:
        return None
    return bound | set(names)


def validate(f, sig: Signature, inputs=None):
    """Resolve ``f`` against ``sig``; raise :class:`ValidationFailed` with every error in source order.

    ``inputs`` (names of the initial bindings) enables the copy-count check at
    the top level; inside declarations it always runs.
    """
    return validate_with_signature(f, sig, inputs)[0]


def validate_with_signature(f, sig: Signature, inputs=None):
    v = _Validator(sig)
    prog = f if isinstance(f, Seq) else Seq((f,), span=getattr(f, "span", None))
    resolved = v.program(prog, inputs)
    if v.errors:
        raise ValidationFailed(v.errors)
    if not isinstance(f, Seq):
        resolved = resolved.items[0]
    return resolved, v.sig
