"""Delta -> bounded IR."""
from __future__ import annotations

from ..errors import Unsupported
from ..model import Builtin, DFunction, DPredicate, FamilyF, Signature, register_declaration
from ..syntax.ast import (
    AlphaCall, Assign, Const, Copy, FamilyDecl, FunApp, FunCallAssign, FunDecl, If, PredCall,
    PredDecl, QuantFree, Return, Seq, Var, is_simple, is_true_literal, rename_expr, rename_vars,
    written_vars,
)
from .ir import IAssert, IAssign, IBlock, ICall, IFor, IIf, IPred, IReturn, IRFunction, IRProgram, IShadow


class _Compiler:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.functions: list = []
        self.n = 0

    def fresh(self, prefix: str) -> str:
        self.n += 1
        return f"${prefix}{self.n}"

    # -- steps ------------------------------------------------------------------------
    # A "step" is (statement, fallible). Fallible steps are calls, predicates
    # and asserts; in normal code they propagate failure, in conditions they
    # get an ``ok`` variable that guards the rest of the condition.

    def steps(self, f) -> list:
        if isinstance(f, Seq):
            out = []
            for item in f.items:
                out.extend(self.steps(item))
            return out
        if isinstance(f, QuantFree):
            if is_true_literal(f):
                return []
            return [("assert", f.expr)]
        if isinstance(f, Assign):
            return self.term_steps(f.target, f.term)
        if isinstance(f, FunCallAssign):
            pre, args = self.flatten(f.args)
            return pre + [("call", (f.target,), f.name, tuple(args))]
        if isinstance(f, PredCall):
            sym = self.sig.get(f.name)
            args = tuple(Var(n) for n in f.ins)
            if isinstance(sym, DPredicate):
                return [("call", tuple(f.outs), f.name, args)]
            return [("pred", tuple(f.outs), f.name, args)]
        raise Unsupported(f"{type(f).__name__} cannot be compiled as a step", getattr(f, "span", None))

    def term_steps(self, target, t) -> list:
        if isinstance(t, (Const, Var)):
            return [("plain", IAssign(target, t))]
        pre, args = self.flatten(t.args)
        sym = self.sig.get(t.name)
        if isinstance(sym, DFunction):
            return pre + [("call", (target,), t.name, tuple(args))]
        if not isinstance(sym, Builtin):
            raise Unsupported(f"unknown function {t.name!r}", getattr(t, "span", None))
        return pre + [("plain", IAssign(target, FunApp(t.name, tuple(args))))]

    def flatten(self, args):
        pre, out = [], []
        for a in args:
            if is_simple(a):
                out.append(a)
            else:
                tmp = self.fresh("t")
                pre.extend(self.term_steps(tmp, a))
                out.append(Var(tmp))
        return pre, out

    def realize(self, step, ok=None):
        kind = step[0]
        if kind == "plain":
            return step[1]
        if kind == "assert":
            return IAssert(step[1])
        if kind == "call":
            return ICall(ok, step[1], step[2], step[3])
        if kind == "pred":
            return IPred(ok, step[1], step[2], step[3])
        raise AssertionError(kind)

    # -- normal statements ------------------------------------------------------------

    def block(self, f) -> IBlock:
        return IBlock(tuple(self.stmts(f)))

    def stmts(self, f) -> list:
        if isinstance(f, Seq):
            out = []
            for item in f.items:
                out.extend(self.stmts(item))
            return out
        if isinstance(f, (QuantFree, Assign, FunCallAssign, PredCall)):
            return [self.realize(s) for s in self.steps(f)]
        if isinstance(f, Return):
            return [IReturn(True)]
        if isinstance(f, Copy):
            return [IFor(f.count, self.block(f.body))]
        if isinstance(f, If):
            return self.if_stmt(f)
        if isinstance(f, AlphaCall):
            return self.alpha(f)
        if isinstance(f, (PredDecl, FunDecl)):
            self.declare(f)
            return []
        if isinstance(f, FamilyDecl):
            self.sig = register_declaration(self.sig, f)
            return []
        raise Unsupported(f"cannot compile {type(f).__name__}", getattr(f, "span", None))

    def declare(self, d):
        body = self.block(d.body)
        if isinstance(d, FunDecl):
            fn = IRFunction(d.name, tuple(d.params), (d.ret,), body)
        else:
            fn = IRFunction(d.name, tuple(d.ins), tuple(d.outs), body)
        self.functions.append(fn)
        self.sig = register_declaration(self.sig, d)

    def if_stmt(self, f: If) -> list:
        then = self.block(f.then)
        orelse = self.block(f.orelse)
        if isinstance(f.cond, QuantFree):
            return [IIf(f.cond.expr, then, orelse)]
        # Writes made while checking the condition must survive only on the
        # true branch: run the condition on shadow copies, commit them on true.
        written = written_vars(f.cond)
        ren = {w: self.fresh("s") for w in written}
        flag = self.fresh("c")
        cond_steps = self.steps(rename_vars(f.cond, ren))
        out = []
        if written:
            out.append(IShadow(tuple((ren[w], w) for w in written)))
        out.append(IAssign(flag, Const(False)))
        out.extend(self.chain(cond_steps, flag))
        commit = [IShadow(tuple((w, ren[w]) for w in written))] if written else []
        out.append(IIf(Var(flag), IBlock(tuple(commit) + then.stmts), orelse))
        return out

    def chain(self, steps, flag) -> list:
        if not steps:
            return [IAssign(flag, Const(True))]
        step, rest = steps[0], steps[1:]
        if step[0] == "plain":
            return [step[1]] + self.chain(rest, flag)
        if step[0] == "assert":
            return [IIf(step[1], IBlock(tuple(self.chain(rest, flag))), IBlock())]
        ok = self.fresh("ok")
        return [
            self.realize(step, ok),
            IIf(Var(ok), IBlock(tuple(self.chain(rest, flag))), IBlock()),
        ]

    def alpha(self, f: AlphaCall) -> list:
        fam = self.sig.get(f.family)
        if not isinstance(fam, FamilyF):
            raise Unsupported(f"unknown family {f.family!r}", f.span)
        mapping = dict(zip(fam.ins, f.args))
        members = [self.block(rename_vars(m, mapping)) for m in fam.members]
        result = members[-1]
        for g, m in reversed(list(zip(fam.guards, members[:-1]))):
            result = IBlock((IIf(rename_expr(g, mapping), m, result),))
        return list(result.stmts)


def transpile(program, sig: Signature) -> IRProgram:
    """Compile a validated program; D-functions and D-predicates become IR functions in declaration order."""
    c = _Compiler(sig)
    main = c.block(program)
    return IRProgram(tuple(c.functions), main)
