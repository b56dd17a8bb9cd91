"""Seeded random Delta programs for differential and property tests.

Programs are well-typed by construction (int and list variable pools) and
avoid ``mul`` and self-concatenation so values stay small. Loop counts come
from the inputs ``c0``/``c1`` (0..3) or from a function parameter ``k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

INTS = ("i0", "i1", "i2", "i3")
LISTS = ("l0", "l1")
COUNTS = ("c0", "c1")
FN_INTS = ("a", "r", "t")


@dataclass
class Gen:
    rng: random.Random
    max_depth: int = 4
    functions: list = field(default_factory=list)  # (name, is_predicate)
    ints: tuple = INTS
    lists: tuple = LISTS
    counts: tuple = COUNTS
    allow_return: bool = True

    # -- terms ---------------------------------------------------------------------

    def int_term(self, d: int = 0) -> str:
        r = self.rng.random()
        if d >= 2 or r < 0.4:
            return self.rng.choice(self.ints) if self.rng.random() < 0.7 else str(self.rng.randint(-3, 9))
        if self.lists and r < 0.5:
            return f"length({self.list_term(d + 1)})"
        op = self.rng.choice(("add", "sub", "add"))
        return f"{op}({self.int_term(d + 1)}, {self.int_term(d + 1)})"

    def list_term(self, d: int = 0) -> str:
        r = self.rng.random()
        if d >= 2 or r < 0.4:
            return self.rng.choice(self.lists)
        if r < 0.7:
            return f"cons({self.list_term(d + 1)}, {self.int_term(d + 1)})"
        if r < 0.85:
            return f"tail({self.list_term(d + 1)})"
        return "nil()"

    def int_call_term(self) -> str:
        funs = [n for n, pred in self.functions if not pred]
        if funs and self.rng.random() < 0.5:
            f = self.rng.choice(funs)
            return f"{f}({self.rng.choice(self.counts)}, {self.int_term(1)})"
        return self.int_term()

    def relation(self) -> str:
        r = self.rng.random()
        if self.lists and r < 0.2:
            return f"member({self.int_term(1)}, {self.rng.choice(self.lists)})"
        op = self.rng.choice(("lt", "leq", "eq"))
        return f"{op}({self.int_term(1)}, {self.int_term(1)})"

    def expr(self, d: int = 0) -> str:
        r = self.rng.random()
        if d >= 2 or r < 0.6:
            return self.relation()
        if r < 0.75:
            return f"not {self.relation()}"
        op = self.rng.choice(("and", "or"))
        return f"({self.expr(d + 1)} {op} {self.expr(d + 1)})"

    # -- statements -----------------------------------------------------------------------

    def assign(self) -> str:
        if self.lists and self.rng.random() < 0.3:
            return f"{self.rng.choice(self.lists)} := {self.list_term()};"
        return f"{self.rng.choice(self.ints)} := {self.int_call_term()};"

    def pred_call(self) -> str:
        preds = [n for n, pred in self.functions if pred]
        r = self.rng.random()
        if preds and r < 0.4:
            p = self.rng.choice(preds)
            return f"{p}({self.rng.choice(self.counts)}, {self.rng.choice(self.ints)} -> {self.rng.choice(self.ints)})"
        if self.lists and r < 0.7:
            return f"split({self.rng.choice(self.lists)} -> {self.rng.choice(self.lists)}, {self.rng.choice(self.ints)})"
        x, y, q, m = (self.rng.choice(self.ints) for _ in range(4))
        if q == m:
            m = next(v for v in self.ints if v != q)
        return f"divmod({x}, {y} -> {q}, {m})"

    def cond(self) -> str:
        r = self.rng.random()
        if r < 0.5:
            return self.expr()
        if r < 0.75:
            return self.pred_call()
        items = [self.assign(), f"{self.relation()};"]
        self.rng.shuffle(items)
        return "{ " + " ".join(items) + " }"

    def stmt(self, d: int) -> str:
        r = self.rng.random()
        if d >= self.max_depth or r < 0.35:
            return self.assign()
        if r < 0.39:
            return f"{self.expr()};"
        if r < 0.55:
            return f"{self.pred_call()};"
        if r < 0.7:
            return f"copy ({self.rng.choice(self.counts)}) {self.block(d + 1)}"
        if r < 0.88:
            return f"if ({self.cond()}) {self.block(d + 1)} else {self.block(d + 1)}"
        if r < 0.93 and self.allow_return:
            return "return;"
        return self.block(d + 1)

    def block(self, d: int) -> str:
        n = self.rng.randint(0, 3)
        return "{ " + " ".join(self.stmt(d) for _ in range(n)) + " }"

    def body(self, d: int, n: int) -> str:
        return "\n".join(self.stmt(d) for _ in range(n))


def function_decl(g: Gen, name: str, predicate: bool) -> str:
    inner = Gen(g.rng, max_depth=3, functions=list(g.functions), ints=FN_INTS, lists=(), counts=("k",))
    body = inner.body(1, g.rng.randint(1, 4))
    ret = "return;" if g.rng.random() < 0.85 else ""
    if predicate:
        return f"predicate {name}(in k, a -> out r) {{\nr := 0; t := 0;\n{body}\n{ret}\n}}"
    return f"function {name}(k, a) -> r {{\nr := 0; t := 0;\n{body}\n{ret}\n}}"


def program(seed: int, depth: int = 4, n_functions: int | None = None) -> str:
    """Source text of a random program over inputs i0..i3, l0, l1, c0, c1."""
    rng = random.Random(seed)
    g = Gen(rng, max_depth=depth)
    parts = []
    nf = rng.randint(0, 3) if n_functions is None else n_functions
    for j in range(nf):
        pred = rng.random() < 0.3
        name = f"p{j}" if pred else f"f{j}"
        parts.append(function_decl(g, name, pred))
        g.functions.append((name, pred))
    parts.append(g.body(1, rng.randint(2, 7)))
    return "\n".join(parts) + "\n"


def inputs(seed: int) -> dict:
    from deltalang.values import ListVal

    rng = random.Random(seed ^ 0x5EED)
    env = {v: rng.randint(-4, 12) for v in INTS}
    env.update({v: ListVal(rng.randint(0, 5) for _ in range(rng.randint(0, 4))) for v in LISTS})
    env.update({v: rng.randint(0, 3) for v in COUNTS})
    return env
