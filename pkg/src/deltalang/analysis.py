"""Rank computation, bound assertions, metering and bound composition."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import values as V
from .errors import BoundViolation, EvalError, MeterExceeded, UnknownSymbol
from .model import Builtin, DFunction, DPredicate, FamilyF, Signature
from .syntax.ast import (
    AlphaCall, Assign, BoundDecl, Copy, FamilyDecl, FunApp, FunCallAssign, FunDecl, If, PredCall,
    PredDecl, QuantFree, Return, Seq, copy_count_vars, is_simple,
)

# -- rank -----------------------------------------------------------------------------------


@dataclass
class RankResult:
    rank: int
    per_node: dict = field(default_factory=dict)


class _Ranker:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.per_node: dict = {}
        self.decl_rank: dict = {}

    def note(self, node, r: int) -> int:
        self.per_node[node] = r
        return r

    def rank(self, f) -> int:
        if isinstance(f, (QuantFree, Return)):
            return self.note(f, 0)
        if isinstance(f, Assign):
            return self.note(f, self.term_assign(f.term))
        if isinstance(f, FunCallAssign):
            return self.note(f, self.dcall(f.name, f.args))
        if isinstance(f, PredCall):
            sym = self.sig.get(f.name)
            if isinstance(sym, Builtin):
                return self.note(f, 0)
            return self.note(f, self.declaration_rank(f.name) + 1)
        if isinstance(f, Copy):
            return self.note(f, self.rank(f.body) + 1)
        if isinstance(f, If):
            self.rank(f.cond)
            return self.note(f, max(self.rank(f.then), self.rank(f.orelse)) + 1)
        if isinstance(f, AlphaCall):
            fam = self.sig.get(f.family)
            if not isinstance(fam, FamilyF):
                raise UnknownSymbol(f"unknown family {f.family!r}", f.span)
            return self.note(f, max(self.rank(m) for m in fam.members) + 1)
        if isinstance(f, Seq):
            ranks = [self.rank(x) for x in f.items]
            return self.note(f, max(ranks, default=0) + 1)
        if isinstance(f, (PredDecl, FunDecl, FamilyDecl)):
            r = self.decl(f)
            from .model import register_declaration
            if f.name not in self.sig:
                self.sig = register_declaration(self.sig, f)
            return self.note(f, r)
        raise TypeError(f"not a formula: {f!r}")

    def decl(self, d) -> int:
        if isinstance(d, FamilyDecl):
            r = max(self.rank(m) for m in d.members) + 1
        else:
            r = self.rank(d.body) + 1
        self.decl_rank[d.name] = r
        return r

    def declaration_rank(self, name) -> int:
        if name in self.decl_rank:
            return self.decl_rank[name]
        sym = self.sig.get(name)
        if isinstance(sym, (DPredicate, DFunction)):
            inner = _Ranker(self.sig)
            r = inner.rank(sym.decl.body) + 1
            self.decl_rank[name] = r
            return r
        raise UnknownSymbol(f"unknown D-symbol {name!r}")

    def dcall(self, name, args) -> int:
        call = self.declaration_rank(name) + 1
        compound = [a for a in args if not is_simple(a)]
        if not compound:
            return call
        return max([call] + [self.term_assign(a) for a in compound]) + 1

    def term_assign(self, t) -> int:
        """Rank of ``y := t``: atomic for a built-in applied to variables/constants,
        otherwise the rank of the flattened list of temporary assignments."""
        if not isinstance(t, FunApp):
            return 0
        sym = self.sig.get(t.name)
        if isinstance(sym, DFunction):
            return self.dcall(t.name, t.args)
        if sym is None:
            raise UnknownSymbol(f"unknown function {t.name!r}")
        compound = [a for a in t.args if not is_simple(a)]
        if not compound:
            return 0
        return max(self.term_assign(a) for a in compound) + 1


def rank(f, sig: Signature) -> RankResult:
    r = _Ranker(sig)
    top = r.rank(f)
    return RankResult(top, r.per_node)


# -- bounds ---------------------------------------------------------------------------------


def assert_copy_bound(outputs, inputs_size: int, n: int, decl: BoundDecl) -> None:
    """Raise :class:`BoundViolation` unless every output has size <= C*(inputs_size + n)**p."""
    limit = decl.limit(inputs_size + n)
    for name, value in outputs:
        s = V.size(value)
        if s > limit:
            raise BoundViolation(
                f"copy output {name!r} has size {s}, exceeding C*(|x|+n)^p = {_fmt(limit)}",
                variable=name, size=s, bound=limit,
            )


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def compose_bounds(parts: Sequence[BoundDecl], width: int = 1) -> BoundDecl:
    """Conservative bound for running ``parts`` one after another.

    ``width`` is the largest number of outputs any part writes. With S the
    total size of all live bindings (S >= 1), part i grows it to at most
    ``S + width*C_i*S**p_i <= (1 + width*C_i) * S**max(1, p_i)``. Chaining gives
    ``R = prod_i (1 + width*C_i) ** prod_{j>i} q_j`` and ``q = prod_i q_i`` with
    ``q_i = max(1, p_i)``. The degree is then raised to at least ``sum(p_i)`` so
    the result also dominates the additive-degree estimate; this is sound
    because every size is >= 1.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("compose_bounds needs at least one bound")
    if width < 1:
        raise ValueError("width must be >= 1")
    if len(parts) == 1:
        return parts[0]
    R = Fraction(1)
    q = 1
    for b in parts:
        qi = max(1, b.p)
        R = (1 + width * b.C) * R ** qi
        q *= qi
    q = max(q, sum(b.p for b in parts))
    return BoundDecl(R, q)


# -- metering ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Sample:
    input_size: int
    steps: int
    max_output_size: int
    fits: bool


@dataclass
class CostCertificate:
    declared: BoundDecl
    samples: list
    verdict: str  # "fits", "violated" or "invalid"
    violated: Optional[Sample] = None
    error: Optional[str] = None

    @property
    def fits(self) -> bool:
        return self.verdict == "fits"

    def to_json(self) -> dict:
        return {
            "declared": {"C": _fmt(self.declared.C), "p": self.declared.p},
            "samples": [
                {"input_size": s.input_size, "steps": s.steps, "max_output_size": s.max_output_size,
                 "fits": s.fits}
                for s in self.samples
            ],
            "verdict": self.verdict,
            "violated": None if self.violated is None else self.violated.input_size,
            "error": self.error,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def render_text(self) -> str:
        lines = [f"declared C={_fmt(self.declared.C)} p={self.declared.p}"]
        for s in self.samples:
            lines.append(
                f"sample input_size={s.input_size} steps={s.steps} max_output_size={s.max_output_size} "
                f"{'fits' if s.fits else 'VIOLATED'}"
            )
        if self.error:
            lines.append(f"error {self.error}")
        lines.append(f"verdict={self.verdict}")
        return "\n".join(lines) + "\n"


def metered_input_size(program, inputs) -> int:
    """Sum of input sizes, plus the value of every input used directly as a copy count.

    The count of a copy loop enters its bound additively (``|x| + n``), so a
    count supplied as input is charged at its magnitude, not its bit size.
    """
    counts = copy_count_vars(program)
    total = 0
    for name, v in (inputs.items() if isinstance(inputs, dict) else inputs):
        total += V.size(v)
        if name in counts and V.is_nat(v):
            total += v
    return total


def meter_fit(
    program,
    sig: Signature,
    generator: Callable[[int], object],
    sizes: Sequence[int],
    decl: BoundDecl,
) -> CostCertificate:
    """Run ``program`` on ``generator(size)`` for each size and check steps and
    output sizes against ``C * input_size**p``.

    Each run gets the declared bound as its step budget, so a program that
    overruns stops as soon as it does. Metering stops at the first violation.
    """
    from .evaluator import run_program

    samples: list = []
    for size in sizes:
        inputs = generator(size)
        pairs = list(inputs.items()) if isinstance(inputs, dict) else list(inputs)
        in_size = metered_input_size(program, pairs)
        limit = decl.limit(in_size)
        budget = max(1, math.floor(limit))
        input_names = {n for n, _ in pairs}
        try:
            res = run_program(program, sig, pairs, budget=budget)
        except MeterExceeded as exc:
            s = Sample(in_size, exc.steps + 1, 0, False)
            samples.append(s)
            return CostCertificate(decl, samples, "violated", s)
        except BoundViolation as exc:
            s = Sample(in_size, 0, exc.size or 0, False)
            samples.append(s)
            return CostCertificate(decl, samples, "violated", s, f"{exc.kind}: {exc.message}")
        except EvalError as exc:
            return CostCertificate(decl, samples, "invalid", None, f"{exc.kind}: {exc.message}")
        outs = [V.size(v) for n, v in res.bindings if n not in input_names]
        max_out = max(outs, default=0)
        ok = res.steps <= limit and max_out <= limit
        s = Sample(in_size, res.steps, max_out, ok)
        samples.append(s)
        if not ok:
            return CostCertificate(decl, samples, "violated", s)
    return CostCertificate(decl, samples, "fits")
