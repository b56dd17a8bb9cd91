"""Truth-checking evaluator for D-formulas over the dynamic model.

The environment trace ``E`` is itself a value: a list of frames, each frame a
list of ``<name, value>`` pairs, with the last frame (``head(E)``) as the
current scope. Every update goes through the list operations of
:mod:`deltalang.values`, so the trace after evaluation is exactly what the
truth-checking rules prescribe.

Calls to D-functions and D-predicates push two frames: a renaming frame of
``<caller variable, callee variable>`` pairs and the argument frame. When the
body finishes with the return marker set, both frames are popped and the
outputs are copied through the renaming into the caller's frame.

Rule numbers attached to trace events:

 1 quantifier-free formula      10 list-formula
 2 copy                         11 return
 3 if                           12 skip after return
 4 alpha call                   13 call completion (pop + write-back)
 5 atomic assignment            14 literal ``true`` elided
 6 D-function call              15 false item stops a list
 7 nested-term assignment       16 predicate / family declaration
 8 built-in predicate           17 function declaration
 9 D-predicate call
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import values as V
from .errors import BoundViolation, DeltaError, DeltaTypeError, MeterExceeded, Redeclaration, UnboundVariable
from .meter import StepMeter
from .model import (
    Builtin, DFunction, DPredicate, FamilyF, Signature, call_builtin, frame_lookup, holds,
    register_declaration, term_value,
)
from .syntax.ast import (
    AlphaCall, Assign, Const, Copy, FamilyDecl, FunApp, FunCallAssign, FunDecl, If, PredCall,
    PredDecl, QuantFree, Return, Seq, Var, is_simple, is_true_literal, read_vars, rename_vars,
    written_vars,
)

RETURN_KEY = "return"
TEMP_PREFIX = "$tmp"


@dataclass(frozen=True)
class EvalOutcome:
    verdict: bool
    trace: V.ListVal
    returned: bool
    steps: int
    signature: Signature


@dataclass(frozen=True)
class RunResult:
    outcome: EvalOutcome
    bindings: tuple  # ((name, value), ...) in frame order, internal names removed

    @property
    def verdict(self) -> bool:
        return self.outcome.verdict

    @property
    def steps(self) -> int:
        return self.outcome.steps

    @property
    def trace(self):
        return self.outcome.trace

    def binding(self, name):
        for n, v in self.bindings:
            if n == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict:
        return dict(self.bindings)


@dataclass
class TraceEvent:
    rule: int
    node: str
    span: Optional[object]
    depth_before: int
    depth_after: int
    set: dict = field(default_factory=dict)
    unset: list = field(default_factory=list)
    steps: int = 0

    def to_json(self) -> dict:
        span = None
        if self.span is not None:
            span = {"file": self.span.file, "line": self.span.line, "column": self.span.column,
                    "length": self.span.length}
        return {
            "rule": self.rule,
            "node": self.node,
            "span": span,
            "depth": [self.depth_before, self.depth_after],
            "set": self.set,
            "unset": self.unset,
            "steps": self.steps,
        }


# -- trace helpers -----------------------------------------------------------------------


def head_frame(E) -> V.ListVal:
    return V.head(E)


def depth(E) -> int:
    return len(E.items)


def is_returned(E) -> bool:
    marker = V.lookup(V.head(E), RETURN_KEY, None) if E.items else None
    return marker is not None and V.values_equal(marker, 1)


def is_internal(name) -> bool:
    return not isinstance(name, str) or name.startswith("$") or name == RETURN_KEY


def visible_bindings(frame) -> tuple:
    return tuple((p.items[0], p.items[1]) for p in frame.items if not is_internal(p.items[0]))


def initial_trace(inputs) -> V.ListVal:
    return V.cons(V.NIL, V.frame_from(_pairs(inputs)))


def _pairs(inputs):
    if inputs is None:
        return []
    if isinstance(inputs, dict):
        return list(inputs.items())
    return list(inputs)


def trace_dump(E) -> str:
    return V.dump(E)


def _frame_text(frame) -> dict:
    out = {}
    for p in frame.items:
        out[V.dump(p.items[0]) if not isinstance(p.items[0], str) else p.items[0]] = V.dump(p.items[1])
    return out


class _Machine:
    def __init__(self, sig: Signature, meter, sink: Optional[Callable] = None):
        self.sig = sig
        self.meter = meter
        self.sink = sink
        self.current = V.NIL
        self._alpha_cache: dict = {}

    # -- bookkeeping -------------------------------------------------------------

    def emit(self, rule: int, node, before, after):
        if self.sink is None:
            return
        fb = _frame_text(V.head(before)) if before.items else {}
        fa = _frame_text(V.head(after)) if after.items else {}
        ev = TraceEvent(
            rule=rule,
            node=type(node).__name__,
            span=getattr(node, "span", None),
            depth_before=depth(before),
            depth_after=depth(after),
            set={k: v for k, v in fa.items() if fb.get(k) != v},
            unset=[k for k in fb if k not in fa],
            steps=self.meter.steps,
        )
        self.sink(ev)

    def update(self, E, pairs):
        """``cons(tail(E), addValues(head(E), pairs))``."""
        self.meter.charge(1)
        E2 = V.cons(V.tail(E), V.add_values(V.head(E), [V.binding(n, v) for n, v in pairs]))
        self.current = E2
        return E2

    def lookup(self, E, name):
        v = V.lookup(V.head(E), name, None) if E.items else None
        if v is None:
            raise UnboundVariable(f"variable {name!r} is not bound in the current frame")
        return v

    def simple_value(self, E, t):
        if isinstance(t, Const):
            return t.value
        return self.lookup(E, t.name)

    # -- dispatch --------------------------------------------------------------------

    def eval(self, f, E):
        self.meter.charge(1)
        try:
            handler = _DISPATCH[type(f)]
        except KeyError:
            raise TypeError(f"not a formula: {f!r}") from None
        try:
            return handler(self, f, E)
        except DeltaError as err:
            if err.span is None:
                err.span = getattr(f, "span", None)
            raise

    def eval_seq(self, f: Seq, E):
        before = E
        for item in f.items:
            if is_returned(E):
                self.emit(12, f, E, E)
                break
            if is_true_literal(item):
                self.meter.charge(1)
                self.emit(14, item, E, E)
                continue
            ok, E = self.eval(item, E)
            if not ok:
                self.emit(15, f, before, E)
                return False, E
        self.emit(10, f, before, E)
        return True, E

    def eval_quantfree(self, f: QuantFree, E):
        frame = V.head(E) if E.items else V.NIL
        ok = holds(f.expr, frame_lookup(frame), self.sig, self.meter)
        self.emit(1, f, E, E)
        return ok, E

    def eval_return(self, f: Return, E):
        E2 = self.update(E, [(RETURN_KEY, 1)])
        self.emit(11, f, E, E2)
        return True, E2

    def eval_copy(self, f: Copy, E):
        n = self.lookup(E, f.count)
        if not V.is_nat(n):
            raise DeltaTypeError(f"copy count {f.count!r} must be a natural number, got {V.dump(n)}")
        before = E
        check = None
        if f.bound is not None:
            from .analysis import assert_copy_bound

            frame = V.head(E)
            ins = [V.lookup(frame, x, None) for x in read_vars(f.body)]
            in_size = sum(V.size(v) for v in ins if v is not None)
            outs = self.outputs_of(f.body)

            def check(E_now):
                fr = V.head(E_now)
                vals = [(x, V.lookup(fr, x, None)) for x in outs]
                assert_copy_bound([(x, v) for x, v in vals if v is not None], in_size, n, f.bound)
        for _ in range(n):
            if is_returned(E):
                break
            ok, E = self.eval(f.body, E)
            if not ok:
                self.emit(2, f, before, E)
                return False, E
            if check is not None:
                check(E)
        self.emit(2, f, before, E)
        return True, E

    def outputs_of(self, body) -> list:
        outs = written_vars(body)
        for node in _alpha_calls(body):
            fam = self.sig.get(node.family)
            if isinstance(fam, FamilyF):
                outs.extend(o for o in fam.outs if o not in outs)
        return outs

    def eval_if(self, f: If, E):
        ok, Ec = self.eval(f.cond, E)
        if ok:
            res, E2 = self.eval(f.then, Ec)
        else:
            res, E2 = self.eval(f.orelse, E)
        self.emit(3, f, E, E2)
        return res, E2

    def eval_alpha(self, f: AlphaCall, E):
        fam = self.sig.get(f.family)
        if not isinstance(fam, FamilyF):
            raise DeltaTypeError(f"{f.family!r} is not a family")
        args = [self.lookup(E, a) for a in f.args]
        idx = fam.select(args, self.sig, self.meter)
        key = (f.family, f.args, idx)
        member = self._alpha_cache.get(key)
        if member is None:
            member = rename_vars(fam.members[idx], dict(zip(fam.ins, f.args)))
            self._alpha_cache[key] = member
        ok, E2 = self.eval(member, E)
        if ok:
            in_size = sum(V.size(a) for a in args)
            limit = fam.bound.limit(in_size)
            frame = V.head(E2)
            for out in fam.outs:
                v = V.lookup(frame, out, None)
                if v is not None and V.size(v) > limit:
                    raise BoundViolation(
                        f"alpha {f.family}: output {out!r} has size {V.size(v)} > bound {float(limit):g}",
                        variable=out, size=V.size(v), bound=limit, span=f.span,
                    )
        self.emit(4, f, E, E2)
        return ok, E2

    # -- assignments -----------------------------------------------------------------

    def eval_assign(self, f: Assign, E):
        return self.assign_term(f.target, f.term, E, f, itertools.count(1))

    def assign_term(self, target, t, E, node, counter):
        if isinstance(t, (Const, Var)):
            v = self.simple_value(E, t)
            E2 = self.update(E, [(target, v)])
            self.emit(5, node, E, E2)
            return True, E2
        sym = self.sig.get(t.name)
        if isinstance(sym, DFunction):
            ok, args, E1 = self.flatten(t.args, E, node, counter)
            if not ok:
                return False, E1
            return self.call_function(target, sym, args, E1, node)
        if not isinstance(sym, Builtin) or sym.kind != "function":
            raise DeltaTypeError(f"{t.name!r} is not a function")
        nested = not all(is_simple(a) for a in t.args)
        ok, args, E1 = self.flatten(t.args, E, node, counter)
        if not ok:
            return False, E1
        value = call_builtin(sym, [self.simple_value(E1, a) for a in args], self.meter)
        E2 = self.update(E1, [(target, value)])
        self.emit(5, node, E1, E2)
        if nested:
            self.emit(7, node, E, E2)
        return True, E2

    def flatten(self, args, E, node, counter):
        """Evaluate compound arguments left to right into fresh temporaries."""
        out = []
        for a in args:
            if is_simple(a):
                out.append(a)
                continue
            tmp = f"{TEMP_PREFIX}{next(counter)}"
            ok, E = self.assign_term(tmp, a, E, node, counter)
            if not ok:
                return False, out, E
            out.append(Var(tmp))
        return True, out, E

    def eval_funcall(self, f: FunCallAssign, E):
        sym = self.sig.get(f.name)
        if not isinstance(sym, DFunction):
            raise DeltaTypeError(f"{f.name!r} is not a D-function")
        ok, args, E1 = self.flatten(f.args, E, f, itertools.count(1))
        if not ok:
            return False, E1
        return self.call_function(f.target, sym, args, E1, f)

    def call_function(self, target, sym: DFunction, args, E, node):
        decl = sym.decl
        values = [self.simple_value(E, a) for a in args]
        ok, E2 = self.call(decl.body, [(target, decl.ret)], list(zip(decl.params, values)), E, node)
        self.emit(6, node, E, E2)
        return ok, E2

    # -- predicates --------------------------------------------------------------------

    def eval_predcall(self, f: PredCall, E):
        sym = self.sig.get(f.name)
        if isinstance(sym, DPredicate):
            decl = sym.decl
            values = [self.lookup(E, a) for a in f.ins]
            ok, E2 = self.call(
                decl.body, list(zip(f.outs, decl.outs)), list(zip(decl.ins, values)), E, f
            )
            self.emit(9, f, E, E2)
            return ok, E2
        if not isinstance(sym, Builtin) or sym.kind not in ("predicate", "relation"):
            raise DeltaTypeError(f"{f.name!r} is not a predicate")
        values = [self.lookup(E, a) for a in f.ins]
        if sym.kind == "relation":
            truth, outs = bool(call_builtin(sym, values, self.meter)), ()
        else:
            truth, outs = call_builtin(sym, values, self.meter)
        E2 = E
        if truth and f.outs:
            E2 = self.update(E, list(zip(f.outs, outs)))
        self.emit(8, f, E, E2)
        return truth, E2

    # -- calls ------------------------------------------------------------------------

    def call(self, body, renaming, arguments, E, node):
        """Push renaming + argument frames, run ``body``, pop, write outputs back on return."""
        self.meter.charge(1)
        ren = V.ListVal(V.binding(c, d) for c, d in renaming)
        E1 = V.cons(V.cons(E, ren), V.frame_from(arguments))
        self.current = E1
        ok, E2 = self.eval(body, E1)
        callee = V.head(E2)
        ren_frame = V.head(V.tail(E2))
        rest = V.tail(V.tail(E2))
        self.meter.charge(1)
        self.current = rest
        if ok and is_returned(E2):
            outs = []
            for pair in ren_frame.items:
                caller_var, callee_var = pair.items
                v = V.lookup(callee, callee_var, None)
                if v is not None:
                    outs.append((caller_var, v))
            E3 = self.update(rest, outs) if outs else rest
            self.emit(13, node, E2, E3)
            return True, E3
        return ok, rest

    # -- declarations -------------------------------------------------------------------

    def eval_decl(self, f, E):
        try:
            self.sig = register_declaration(self.sig, f)
        except Redeclaration:
            return False, E
        self.emit(17 if isinstance(f, FunDecl) else 16, f, E, E)
        return True, E


def _alpha_calls(f):
    from .syntax.ast import walk

    return [n for n in walk(f) if isinstance(n, AlphaCall)]


_DISPATCH = {
    Seq: _Machine.eval_seq,
    QuantFree: _Machine.eval_quantfree,
    Return: _Machine.eval_return,
    Copy: _Machine.eval_copy,
    If: _Machine.eval_if,
    AlphaCall: _Machine.eval_alpha,
    Assign: _Machine.eval_assign,
    FunCallAssign: _Machine.eval_funcall,
    PredCall: _Machine.eval_predcall,
    PredDecl: _Machine.eval_decl,
    FunDecl: _Machine.eval_decl,
    FamilyDecl: _Machine.eval_decl,
}


def eval_formula(f, sig: Signature, E=V.NIL, meter=None, sink=None) -> EvalOutcome:
    """Truth-check ``f`` on the dynamic model with trace ``E``."""
    meter = meter if meter is not None else StepMeter()
    m = _Machine(sig, meter, sink)
    m.current = E
    try:
        ok, E2 = m.eval(f, E)
    except MeterExceeded as exc:
        exc.trace = m.current
        raise
    return EvalOutcome(ok, E2, is_returned(E2), meter.steps, m.sig)


# the public name used throughout the docs
eval = eval_formula  # noqa: A001


def run_program(program, sig: Signature, inputs=None, budget: Optional[int] = None, sink=None) -> RunResult:
    """Install the initial frame from ``inputs`` on an empty trace and evaluate ``program``."""
    meter = StepMeter(budget)
    E = initial_trace(inputs)
    out = eval_formula(program, sig, E, meter, sink)
    frame = V.head(out.trace) if out.trace.items else V.NIL
    return RunResult(out, visible_bindings(frame))
