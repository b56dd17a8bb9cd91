"""The nine acceptance criteria, one test each; results are summarised at the end of the run."""
from __future__ import annotations

import time
from fractions import Fraction

import pytest

from deltalang.analysis import compose_bounds, rank
from deltalang.evaluator import eval_formula, initial_trace, trace_dump
from deltalang.syntax import BoundDecl, Copy, parse_program, validate

import corpus
import oracles
import progen
from test_analysis import formula, meter
from test_cli import cli_is_deterministic
from test_evaluator import COPY_FIXTURES, RULE_CASES, check_frame_balance, run, unrolled


@pytest.mark.criterion(1, "list operations agree with the reference oracle (size <= 6, < 10 s)")
def test_list_operation_oracle():
    t0 = time.perf_counter()
    counts = oracles.check_list_operations(6)
    elapsed = time.perf_counter() - t0
    print(f"oracle: {counts} in {elapsed:.2f}s")
    assert all(n > 0 for n in counts.values())
    assert elapsed < 10


@pytest.mark.criterion(2, "rule suite 1-17 with full rule coverage")
def test_rule_suite(sig):
    seen = set()
    for number, (src, inputs, verdict, trace) in sorted(RULE_CASES.items()):
        res, rules = run(src, sig, inputs)
        assert res.verdict is verdict, number
        assert trace_dump(res.trace) == trace, number
        assert number in rules, number
        seen.update(rules)
    assert seen == set(range(1, 18))


@pytest.mark.criterion(3, "copy equals its n-fold sequence (10 fixtures, n <= 16)")
def test_copy_unroll(sig):
    assert len(COPY_FIXTURES) == 10
    for src, inputs in COPY_FIXTURES:
        body = validate(parse_program("{ " + src + " }"), sig).items[0]
        for n in range(17):
            E = initial_trace(dict(inputs, n=n))
            a = eval_formula(Copy(body, "n"), sig, E)
            b = eval_formula(unrolled(body, n), sig, E)
            assert (a.verdict, trace_dump(a.trace)) == (b.verdict, trace_dump(b.trace)), (src, n)


@pytest.mark.criterion(4, "frame balance over 1000 seeded programs")
def test_frame_balance(sig):
    calls = sum(check_frame_balance(sig, seed) for seed in range(1000))
    print(f"frame balance: {calls} call events checked")
    assert calls > 1000


@pytest.mark.criterion(5, "rank regression (12 fixtures)")
def test_rank_regression(sig):
    assert len(corpus.RANK_FIXTURES) == 12
    got = [(name, rank(formula(src, sig), sig).rank) for name, src, _ in corpus.RANK_FIXTURES]
    assert got == [(name, r) for name, _, r in corpus.RANK_FIXTURES]


@pytest.mark.criterion(6, "metering: fixtures fit at 8/16/32/64, doubling violated (< 60 s)")
def test_metering(sig):
    t0 = time.perf_counter()
    sizes = [8, 16, 32, 64]
    for fixture in corpus.METER_FIXTURES:
        cert = meter(sig, fixture, sizes)
        assert cert.verdict == "fits", (fixture[0], cert.render_text())
        assert len(cert.samples) == len(sizes) and all(s.fits for s in cert.samples)
    assert meter(sig, corpus.DOUBLING, sizes).verdict == "violated"
    elapsed = time.perf_counter() - t0
    print(f"metering: {elapsed:.2f}s")
    assert elapsed < 60


@pytest.mark.criterion(7, "composed bounds dominate chains of length <= 4 and the pair reference")
def test_compose_soundness():
    corpus.check_members()
    chains, runs, worst = corpus.check_chains(max_len=4)
    print(f"chains: {chains} chains, {runs} runs, worst ratio {worst:.3f}")
    assert worst <= 1
    for C in range(1, 5):
        for p in range(3):
            for n in (1, 2, 3):
                b = BoundDecl(Fraction(C), p)
                out = compose_bounds([b, b], width=n)
                for s in range(1, 9):
                    assert out.limit(s) >= n * C * C * s ** (2 * p), (C, p, n, s)


@pytest.mark.criterion(8, "transpiler differential: corpus plus 500 random programs, steps <= 4x")
def test_transpiler_differential(sig):
    cases = [(p.name, prog, inputs) for p, prog, inputs in corpus.corpus_programs()]
    assert cases
    for seed in range(500):
        inp = progen.inputs(seed)
        cases.append((f"seed {seed}", validate(parse_program(progen.program(seed, depth=4)), sig, list(inp)), inp))
    worst = 0.0
    for name, prog, inputs in cases:
        ev, got = corpus.differential(prog, inputs, sig)
        assert corpus.same_outcome(ev, got), (name, ev, got)
        if not isinstance(ev, str):
            assert got.steps <= 4 * ev.steps, name
            worst = max(worst, got.steps / max(ev.steps, 1))
    print(f"differential: {len(cases)} programs, worst step ratio {worst:.2f}")


@pytest.mark.criterion(9, "CLI output is byte-identical across repeated runs")
def test_cli_determinism(fixtures_dir):
    assert cli_is_deterministic(fixtures_dir)
