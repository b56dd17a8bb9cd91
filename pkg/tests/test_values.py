from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltalang import values as V
from deltalang.errors import ArgumentError, DeltaTypeError, ValueSyntaxError
from deltalang.meter import CountingMeter
from deltalang.values import ListVal, lst

import oracles

atoms = st.one_of(
    st.integers(min_value=-(10**30), max_value=10**30),
    st.booleans(),
    st.text(max_size=8),
)
values = st.recursive(atoms, lambda inner: st.lists(inner, max_size=5).map(ListVal), max_leaves=25)
small = st.recursive(st.sampled_from([0, 1]), lambda inner: st.lists(inner, max_size=4).map(ListVal), max_leaves=12)


def P(obj):
    return V.from_python(obj)


class TestExamples:
    def test_nil(self):
        assert V.nil() == ListVal()
        assert V.size(V.nil()) == 1
        assert V.conc(V.nil(), V.nil()) == V.NIL

    def test_head(self):
        assert V.head(lst(1, 2, 3)) == 3
        assert V.head(V.NIL) == V.NIL
        assert V.head(P([[1, 2]])) == lst(1, 2)

    def test_tail(self):
        assert V.tail(lst(1, 2, 3)) == lst(1, 2)
        assert V.tail(V.NIL) == V.NIL
        l = lst(7)
        assert V.conc(V.tail(l), lst(V.head(l))) == lst(7)

    def test_cons(self):
        assert V.cons(lst(1, 2), lst(3, 4)) == P([1, 2, [3, 4]])
        assert V.cons(V.NIL, 5) == lst(5)

    def test_conc(self):
        assert V.conc(lst(1, 2), lst(3, 4)) == lst(1, 2, 3, 4)
        l = lst(1, "a", True)
        assert V.conc(V.NIL, l) == l
        assert V.conc(l, V.NIL) == l

    def test_member(self):
        assert V.member(2, lst(1, 2, 3))
        assert not V.member(V.NIL, V.NIL)
        assert V.member(lst(1, 2), P([[1, 2]]))

    def test_prefix(self):
        assert V.prefix(lst(1, 2), lst(1, 2, 3))
        assert V.prefix(V.NIL, lst(9))
        assert not V.prefix(lst(1, 3), lst(1, 2, 3))

    def test_add_value(self):
        frame = P([["x", 1], ["y", 2]])
        assert V.add_value(frame, P(["x", 3])) == P([["y", 2], ["x", 3]])
        assert V.add_value(V.NIL, P(["x", 1])) == P([["x", 1]])

    def test_add_values(self):
        assert V.add_values(P([["x", 1]]), [P(["x", 2]), P(["y", 3])]) == P([["x", 2], ["y", 3]])
        l = P([["q", 0]])
        assert V.add_values(l, []) == l
        assert V.add_values(V.NIL, [P(["a", 1]), P(["b", 2])]) == P([["a", 1], ["b", 2]])

    def test_add_values_rejects_duplicate_keys(self):
        with pytest.raises(ArgumentError):
            V.add_values(V.NIL, [P(["a", 1]), P(["a", 2])])


class TestStrictness:
    def test_bool_is_not_int(self):
        assert lst(True) != lst(1)
        assert not V.member(1, lst(True))
        assert not V.values_equal(0, False)

    def test_non_list_arguments(self):
        for op in (V.head, V.tail):
            with pytest.raises(DeltaTypeError):
                op(3)
        with pytest.raises(DeltaTypeError):
            V.conc(lst(1), "x")
        with pytest.raises(DeltaTypeError):
            V.add_value(lst(1), P(["x", 1]))
        with pytest.raises(DeltaTypeError):
            V.add_value(V.NIL, lst(1, 2, 3))

    def test_size_measure(self):
        assert V.size(0) == 1
        assert V.size(1) == 2
        assert V.size(255) == 9
        assert V.size(-4) == 4
        assert V.size(True) == 1
        assert V.size("abc") == 4
        assert V.size(lst(1, lst())) == 4


class TestOracle:
    def test_enumeration_counts(self):
        # sizes 1..3: {0, <>}, {1, <0>, <<>>}, 7 values of size 3
        assert len(oracles.all_values(1)) == 2
        assert len(oracles.all_values(2)) == 5
        assert len(oracles.all_values(3)) == 12

    @given(small, small)
    def test_size_of_conc(self, a, b):
        if isinstance(a, ListVal) and isinstance(b, ListVal):
            assert V.size(V.conc(a, b)) == V.size(a) + V.size(b) - 1

    def test_size_of_conc_exhaustive(self):
        ls = [oracles.to_val(v) for v in oracles.lists_only(oracles.all_values(6))]
        for a in ls[:200]:
            for b in ls[:200]:
                assert V.size(V.conc(a, b)) == V.size(a) + V.size(b) - 1

    def test_add_value_against_reference_frames_up_to_four(self):
        keys = ["x", "y", "z", "w"]
        import itertools

        for n in range(5):
            for ks in itertools.permutations(keys, n):
                frame = tuple((k, i) for i, k in enumerate(ks))
                for k in keys:
                    p = (k, 99)
                    got = oracles.from_val(V.add_value(oracles.to_val(frame), oracles.to_val(p)))
                    assert got == oracles.ref_add_value(frame, p)


class TestProperties:
    @given(values, values)
    def test_head_of_cons(self, l, x):
        if isinstance(l, ListVal):
            assert V.values_equal(V.head(V.cons(l, x)), x)
            assert V.tail(V.cons(l, x)) == l

    @given(st.lists(values, max_size=4).map(ListVal), values, values)
    def test_add_value_last_write_wins(self, l, a, b):
        frame = V.frame_from([(f"k{i}", v) for i, v in enumerate(l.items)])
        once = V.add_value(V.add_value(frame, lst("x", a)), lst("x", b))
        assert once == V.add_value(frame, lst("x", b))

    @given(values)
    def test_dump_parse_round_trip(self, v):
        text = V.dump(v)
        assert V.values_equal(V.parse_value(text), v)
        assert V.dump(V.parse_value(text)) == text

    @given(st.lists(values, max_size=5).map(ListVal), st.lists(values, max_size=5).map(ListVal))
    def test_prefix_of_conc(self, a, b):
        assert V.prefix(a, V.conc(a, b))

    @settings(max_examples=50)
    @given(st.lists(small, max_size=6).map(ListVal), small)
    def test_metered_ops_charge(self, l, x):
        m = CountingMeter()
        V.member(x, l, m)
        assert m.steps >= 1 + (0 if not l.items else 1)


class TestText:
    def test_canonical_forms(self):
        assert V.dump(P([1, [True, False], "a\"b\\\n"])) == '<1,<true,false>,"a\\"b\\\\\\n">'
        assert V.dump("\x01") == '"\\u0001"'
        assert V.parse_value(' < 1 , -2 , < > > ') == P([1, -2, []])
        assert V.parse_value('"\\u00e9"') == "é"

    @pytest.mark.parametrize("bad", ["<1,", "<1 2>", "tru", '"abc', "1x", "-", '"\\q"', ""])
    def test_malformed(self, bad):
        with pytest.raises(ValueSyntaxError):
            V.parse_value(bad)

    def test_frames(self):
        frame = V.frame_from([("x", 1), ("y", 2), ("x", 3)])
        assert frame == P([["y", 2], ["x", 3]])
        assert V.lookup(frame, "x") == 3
        assert V.lookup(frame, "z", None) is None
