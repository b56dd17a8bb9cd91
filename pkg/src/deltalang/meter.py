"""Deterministic step meter.

Every evaluator node visit, trace update and built-in operation charges the
meter. Exceeding the budget raises :class:`MeterExceeded` before the charge
is applied, so ``steps`` never goes past ``budget``.
"""
from __future__ import annotations

import os

from .errors import MeterExceeded

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    raw = os.environ.get("DELTA_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    budget = int(raw)
    if budget <= 0:
        raise ValueError("DELTA_BUDGET must be positive")
    return budget


class StepMeter:
    __slots__ = ("budget", "steps")

    def __init__(self, budget: int | None = None):
        self.budget = DEFAULT_BUDGET if budget is None else budget
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        self.steps = 0

    def charge(self, n: int = 1) -> None:
        new = self.steps + n
        if new > self.budget:
            raise MeterExceeded(
                f"step budget exhausted: {new} > {self.budget}", steps=self.steps, budget=self.budget
            )
        self.steps = new

    @property
    def remaining(self) -> int:
        return self.budget - self.steps


class CountingMeter:
    """Unbounded meter; used where only the count matters (tests, cost probes)."""

    __slots__ = ("steps",)

    def __init__(self):
        self.steps = 0

    def charge(self, n: int = 1) -> None:
        self.steps += n
