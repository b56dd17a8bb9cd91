"""Reference interpreter for the IR."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .. import values as V
from ..errors import DeltaTypeError, UnboundVariable
from ..meter import StepMeter
from ..model import Builtin, Signature, builtin_model, call_builtin, holds, term_value
from ..syntax.ast import And, Const, Not, Or, Var
from .ir import IAssert, IAssign, IBlock, ICall, IFor, IIf, IPred, IReturn, IRProgram, IShadow


@dataclass
class IRResult:
    verdict: bool
    bindings: tuple
    steps: int

    def as_dict(self) -> dict:
        return dict(self.bindings)


class _Return(Exception):
    def __init__(self, verdict: bool):
        self.verdict = verdict


class _Interp:
    def __init__(self, ir: IRProgram, meter, sig: Signature):
        self.functions = {f.name: f for f in ir.functions}
        self.meter = meter
        self.sig = sig

    def lookup(self, env):
        def get(name):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(f"variable {name!r} is not bound") from None
        return get

    def value(self, env, t):
        return term_value(t, self.lookup(env), self.sig, self.meter)

    def truth(self, env, e) -> bool:
        if isinstance(e, (Var, Const)):
            v = self.value(env, e)
            if not isinstance(v, bool):
                raise DeltaTypeError(f"condition must be boolean, got {V.type_name(v)}")
            return v
        if isinstance(e, Not):
            return not self.truth(env, e.arg)
        if isinstance(e, And):
            return self.truth(env, e.left) and self.truth(env, e.right)
        if isinstance(e, Or):
            return self.truth(env, e.left) or self.truth(env, e.right)
        return holds(e, self.lookup(env), self.sig, self.meter)

    def block(self, env: dict, b: IBlock) -> None:
        for s in b.stmts:
            self.stmt(env, s)

    def stmt(self, env: dict, s) -> None:
        self.meter.charge(1)
        if isinstance(s, IAssign):
            env[s.target] = self.value(env, s.term)
        elif isinstance(s, IAssert):
            if not self.truth(env, s.cond):
                raise _Return(False)
        elif isinstance(s, IIf):
            self.block(env, s.then if self.truth(env, s.cond) else s.orelse)
        elif isinstance(s, IFor):
            n = self.lookup(env)(s.count)
            if not V.is_nat(n):
                raise DeltaTypeError(f"copy count {s.count!r} must be a natural number, got {V.dump(n)}")
            for _ in range(n):
                self.block(env, s.body)
        elif isinstance(s, IReturn):
            raise _Return(s.verdict)
        elif isinstance(s, IShadow):
            vals = [(d, env.get(src, _UNSET)) for d, src in s.pairs]
            for d, v in vals:
                if v is _UNSET:
                    env.pop(d, None)
                else:
                    env[d] = v
        elif isinstance(s, ICall):
            self.settle(env, s.ok, self.call(env, s))
        elif isinstance(s, IPred):
            self.settle(env, s.ok, self.pred(env, s))
        else:
            raise TypeError(f"not an IR statement: {s!r}")

    def settle(self, env, ok: Optional[str], verdict: bool) -> None:
        if ok is not None:
            env[ok] = verdict
        elif not verdict:
            raise _Return(False)

    def call(self, env, s: ICall) -> bool:
        fn = self.functions.get(s.func)
        if fn is None:
            raise DeltaTypeError(f"{s.func!r} is not an IR function")
        args = [self.value(env, a) for a in s.args]
        if len(args) != len(fn.params):
            raise DeltaTypeError(f"{fn.name} expects {len(fn.params)} argument(s), got {len(args)}")
        self.meter.charge(1)
        inner = dict(zip(fn.params, args))
        try:
            self.block(inner, fn.body)
        except _Return as r:
            if r.verdict:
                for caller, callee in zip(s.outs, fn.outs):
                    if callee in inner:
                        env[caller] = inner[callee]
            return r.verdict
        return True

    def pred(self, env, s: IPred) -> bool:
        sym = self.sig.get(s.name)
        if not isinstance(sym, Builtin) or sym.kind not in ("predicate", "relation"):
            raise DeltaTypeError(f"{s.name!r} is not a built-in predicate")
        args = [self.value(env, a) for a in s.args]
        if sym.kind == "relation":
            return bool(call_builtin(sym, args, self.meter))
        truth, outs = call_builtin(sym, args, self.meter)
        if truth:
            for name, v in zip(s.outs, outs):
                env[name] = v
        return truth


_UNSET = object()


def run_ir(ir: IRProgram, inputs=None, budget: Optional[int] = None, sig: Optional[Signature] = None) -> IRResult:
    """Run ``ir.main`` on ``inputs``; the result lists non-internal bindings in binding order."""
    meter = StepMeter(budget)
    sig = sig if sig is not None else builtin_model()
    env: dict = dict(inputs.items() if isinstance(inputs, dict) else (inputs or ()))
    it = _Interp(ir, meter, sig)
    try:
        it.block(env, ir.main)
        verdict = True
    except _Return as r:
        verdict = r.verdict
    visible = tuple((k, v) for k, v in env.items() if not k.startswith("$"))
    return IRResult(verdict, visible, meter.steps)
