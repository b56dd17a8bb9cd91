from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltalang import values as V
from deltalang.analysis import assert_copy_bound, compose_bounds, meter_fit, metered_input_size, rank
from deltalang.errors import BoundViolation, UnknownSymbol
from deltalang.evaluator import run_program
from deltalang.model import builtin_model
from deltalang.syntax import Assign, BoundDecl, Const, Copy, FunApp, If, QuantFree, Rel, Seq, Var, parse_program, validate

import corpus


def formula(src, sig):
    prog = validate(parse_program(src), sig)
    return prog.items[0] if len(prog.items) == 1 else prog


@pytest.mark.parametrize("name,src,expected", corpus.RANK_FIXTURES, ids=[f[0] for f in corpus.RANK_FIXTURES])
def test_rank_fixture(sig, name, src, expected):
    assert rank(formula(src, sig), sig).rank == expected


def test_rank_of_ast_example(sig):
    atomic = Assign("y", Const(1))
    f = Seq((atomic, If(QuantFree(Rel("lt", (Var("x"), Const(1)))), atomic, Copy(atomic, "n"))))
    res = rank(f, sig)
    assert res.rank == 3
    assert res.per_node[f.items[1]] == 2


def test_rank_atomic_and_if(sig):
    assert rank(Assign("y", FunApp("add", (Var("x"), Const(1)))), sig).rank == 0
    assert rank(If(QuantFree(Rel("lt", (Var("x"), Const(1)))), Assign("y", Const(1)), Assign("y", Const(2))), sig).rank == 1


def test_rank_seq_exceeds_items(sig):
    f = formula("{ x := 1; copy (n) { x := add(x, 1); } if (lt(x, 2)) {} else {} }", sig)
    res = rank(f, sig)
    assert all(res.rank > res.per_node[item] for item in f.items)


def test_rank_unknown_symbol(sig):
    with pytest.raises(UnknownSymbol):
        rank(Assign("y", FunApp("nope", ())), sig)


def test_rank_file_fixture(sig, fixtures_dir):
    prog = validate(parse_program((fixtures_dir / "prog.delta").read_text()), sig)
    assert rank(prog, sig).rank == 3


# -- copy bound ----------------------------------------------------------------------------


def test_increment_stays_within_bound(sig):
    prog = validate(parse_program("copy (n) bound (2, 1) y := add(y, 1);"), sig, ["n", "y"])
    for n in range(17):
        assert run_program(prog, sig, {"n": n, "y": 0}).binding("y") == n


def test_assert_copy_bound_direct():
    decl = BoundDecl(Fraction(2), 1)
    assert_copy_bound([("y", 5)], inputs_size=2, n=0, decl=decl)  # 4 <= 2*(2+0)
    with pytest.raises(BoundViolation) as ei:
        assert_copy_bound([("y", 1 << 10)], inputs_size=2, n=1, decl=decl)
    assert (ei.value.variable, ei.value.size, ei.value.bound) == ("y", 12, 6)
    assert_copy_bound([], inputs_size=0, n=0, decl=decl)


def doubling_crossover(n, C=2, p=1, start_size=3):
    """First iteration k whose output size 1 + 2**(k+1) exceeds C*(start_size + n)**p, or None."""
    limit = C * (start_size + n) ** p
    for k in range(1, n + 1):
        if 1 + 2 ** (k + 1) > limit:
            return k
    return None


def test_list_doubling_violates_at_crossover(sig):
    prog = validate(parse_program("l := <1>; copy (n) bound (2, 1) l := conc(l, l);"), sig, ["n"])
    for n in range(17):
        k = doubling_crossover(n)
        if k is None:
            res = run_program(prog, sig, {"n": n})
            assert len(res.binding("l")) == 2 ** n
        else:
            with pytest.raises(BoundViolation) as ei:
                run_program(prog, sig, {"n": n})
            assert ei.value.size == 1 + 2 ** (k + 1)
    assert [doubling_crossover(n) for n in (2, 3, 10)] == [None, 3, 4]


def test_integer_doubling_stays_within_bit_size_bound(sig):
    # y doubles but its size grows by one bit per iteration, so (2, 1) holds
    prog = validate(parse_program("copy (n) bound (2, 1) y := add(y, y);"), sig, ["n", "y"])
    for n in range(17):
        assert run_program(prog, sig, {"n": n, "y": 1}).binding("y") == 2 ** n


def test_empty_loop_is_vacuous(sig):
    prog = validate(parse_program("l := <1>; copy (n) bound (1, 0) l := conc(l, l);"), sig, ["n"])
    assert run_program(prog, sig, {"n": 0}).verdict


# -- metering ------------------------------------------------------------------------------


def meter(sig, fixture, sizes):
    name, src, spec, decl = fixture
    prog = validate(parse_program(src), sig, list(spec))
    return meter_fit(prog, sig, corpus.generator(spec), sizes, decl)


def test_linear_sum_fits(sig):
    cert = meter(sig, corpus.METER_FIXTURES[0], [8, 16, 32])
    assert cert.verdict == "fits"
    steps = [s.steps for s in cert.samples]
    assert steps == sorted(steps)
    for s in cert.samples:
        assert s.steps <= 10 * s.input_size ** 2 and s.max_output_size <= 10 * s.input_size ** 2


def test_doubling_violates(sig):
    cert = meter(sig, corpus.DOUBLING, [8, 16, 32, 64])
    assert cert.verdict == "violated"
    assert cert.violated is cert.samples[-1] and not cert.violated.fits


def test_constant_program_fits(sig):
    prog = validate(parse_program("y := add(2, 3);"), sig)
    steps = run_program(prog, sig).steps
    cert = meter_fit(prog, sig, lambda size: [], [1, 5, 50], BoundDecl(Fraction(steps), 0))
    assert cert.verdict == "fits"


def test_invalid_certificate(sig):
    prog = validate(parse_program("y := head(x);"), sig, ["x"])
    cert = meter_fit(prog, sig, lambda size: [("x", size)], [4], BoundDecl(Fraction(10), 1))
    assert cert.verdict == "invalid" and "DeltaTypeError" in cert.error


def test_metered_input_size_counts_copy_counts(sig):
    prog = validate(parse_program("copy (n) y := 1;"), sig, ["n"])
    assert metered_input_size(prog, [("n", 8)]) == V.size(8) + 8
    assert metered_input_size(prog, [("m", 8)]) == V.size(8)


def test_certificate_rendering_is_stable(sig):
    a = meter(sig, corpus.METER_FIXTURES[1], [4, 8])
    b = meter(sig, corpus.METER_FIXTURES[1], [4, 8])
    assert a.render_json() == b.render_json()
    data = json.loads(a.render_json())
    assert list(data) == sorted(data)
    assert a.render_text().endswith("verdict=fits\n")


# -- composition ---------------------------------------------------------------------------


def test_compose_single():
    b = BoundDecl(Fraction(3), 2)
    assert compose_bounds([b]) == b


@pytest.mark.parametrize("C", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [0, 1, 2])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_compose_pair_dominates_reference(C, p, n):
    b = BoundDecl(Fraction(C), p)
    out = compose_bounds([b, b], width=n)
    assert out.p >= 2 * p
    assert out.C >= n * C * C
    for s in range(1, 9):
        assert out.limit(s) >= n * C * C * s ** (2 * p)


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(0, 2)), min_size=1, max_size=4))
def test_compose_is_monotone_in_parts(parts):
    bounds = [BoundDecl(Fraction(c), p) for c, p in parts]
    whole = compose_bounds(bounds)
    if len(bounds) > 1:
        prefix = compose_bounds(bounds[:-1])
        for s in range(1, 9):
            assert whole.limit(s) >= prefix.limit(s)


def test_compose_rejects_bad_input():
    with pytest.raises(ValueError):
        compose_bounds([])
    with pytest.raises(ValueError):
        compose_bounds([BoundDecl(Fraction(1), 1)], width=0)


def test_chain_members_respect_their_bounds():
    corpus.check_members()


def test_pair_chains_within_composed_bound():
    chains, runs, worst = corpus.check_chains(max_len=2)
    assert chains == 6 + 36 + 5 + 25 and worst <= 1
