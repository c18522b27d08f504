from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    concat_by_split,
    cyclic_additive_size,
    expressions_from_witnesses,
    lang,
    powers_mod,
    recurrence_values,
    span_combinations,
    words,
    Expr,
)
from recset import (
    Indexed,
    IntMod,
    Limits,
    RecurrenceSpec,
    Sym,
    VecMod,
    apply_operation,
    build_cyclic_group,
    build_identity_closure,
    build_recurrence,
    build_regular_sets,
    build_span,
    order_of,
    saturate,
    trunc_star,
    witness_of,
)
from recset.errors import (
    BadAlphabet,
    DimensionMismatch,
    EmptyBase,
    InvalidSpec,
    NotAUnit,
    OutOfUniverse,
    ValueOverflow,
)
from recset.instances import trunc, trunc_concat, trunc_union


class TestIdentity:
    def test_symbols(self):
        r = saturate(build_identity_closure([Sym("p"), Sym("q")]))
        assert r.elements == {Sym("p"), Sym("q")}
        assert len(r.strata) == 1

    def test_single(self):
        assert saturate(build_identity_closure([Sym("p")])).elements == {Sym("p")}

    def test_residues(self):
        r = saturate(build_identity_closure([IntMod(0, 3), IntMod(2, 3)]))
        assert r.strata == ((IntMod(0, 3), IntMod(2, 3)),)

    def test_empty(self):
        with pytest.raises(EmptyBase):
            build_identity_closure([])


class TestCyclic:
    def test_additive_z5(self):
        r = saturate(build_cyclic_group(5, 1, "additive"))
        assert [[e.value for e in s] for s in r.strata] == [[1], [2], [3, 4], [0]]

    def test_multiplicative_7_2(self):
        r = saturate(build_cyclic_group(7, 2, "multiplicative"))
        assert {e.value for e in r.elements} == powers_mod(2, 7) == {1, 2, 4}

    def test_not_a_unit(self):
        with pytest.raises(NotAUnit):
            build_cyclic_group(6, 2, "multiplicative")

    def test_identity_emerges(self):
        # Only the generator is seeded; the neutral element still appears.
        for m in range(2, 15):
            for g in range(1, m):
                if gcd(g, m) == 1:
                    r = saturate(build_cyclic_group(m, g, "multiplicative"))
                    assert IntMod(1, m) in r
                assert IntMod(0, m) in saturate(build_cyclic_group(m, g))

    @pytest.mark.parametrize("m", range(2, 21))
    def test_additive_size(self, m):
        for g in range(m):
            assert len(saturate(build_cyclic_group(m, g))) == cyclic_additive_size(g, m)


class TestRecurrence:
    def test_fibonacci(self):
        r = saturate(build_recurrence(RecurrenceSpec(2, [1, 1], 0, [1, 1], 10)))
        got = [e.value for e in r.sorted_elements()]
        assert got == recurrence_values([1, 1], 0, [1, 1], 10)
        assert got == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
        assert [e.position for e in r.sorted_elements()] == list(range(1, 11))

    def test_geometric(self):
        r = saturate(build_recurrence(RecurrenceSpec(1, [2], 0, [3], 4)))
        assert [e.value for e in r.sorted_elements()] == recurrence_values([2], 0, [3], 4) == [3, 6, 12, 24]

    def test_horizon_equals_k(self):
        r = saturate(build_recurrence(RecurrenceSpec(2, [1, 1], 0, [1, 1], 2)))
        assert r.strata == ((Indexed(1, 1), Indexed(2, 1)),)
        assert r.termination == "fixpoint"

    def test_invalid(self):
        with pytest.raises(InvalidSpec):
            RecurrenceSpec(2, [1], 0, [1, 1], 5)
        with pytest.raises(InvalidSpec):
            RecurrenceSpec(2, [1, 1], 0, [1, 1], 1)

    def test_overflow_is_an_error(self):
        with pytest.raises(ValueOverflow):
            saturate(build_recurrence(RecurrenceSpec(1, [10], 0, [1], 30)))

    @given(
        st.integers(1, 3).flatmap(
            lambda k: st.tuples(
                st.just(k),
                st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                st.integers(-5, 5),
                st.lists(st.integers(-5, 5), min_size=k, max_size=k),
                st.integers(k, 30),
            )
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_order_law(self, params):
        k, coeffs, constant, initial, horizon = params
        try:
            recurrence_values(coeffs, constant, initial, horizon)
            r = saturate(build_recurrence(RecurrenceSpec(k, coeffs, constant, initial, horizon)))
        except ValueOverflow:
            return
        values = recurrence_values(coeffs, constant, initial, horizon)
        assert [(e.position, e.value) for e in r.sorted_elements()] == list(
            zip(range(1, horizon + 1), values)
        )
        for e in r.elements:
            n = e.position
            assert order_of(r, e) == (1 if n <= k else n - k + 1)


class TestSpan:
    def test_z6(self):
        r = saturate(build_span(6, 1, [[2]]))
        assert r.elements == {VecMod((v,), 6) for v in (0, 2, 4)}

    def test_z2_squared(self):
        r = saturate(build_span(2, 2, [[1, 0], [0, 1]]))
        assert len(r) == 4

    def test_zero(self):
        assert saturate(build_span(5, 1, [[0]])).elements == {VecMod((0,), 5)}

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            build_span(5, 2, [[1]])

    def test_ops_layout(self):
        inst = build_span(4, 1, [[1]])
        assert [op.name for op in inst.ops] == ["add", "scale_0", "scale_1", "scale_2", "scale_3"]

    @pytest.mark.parametrize("m", range(2, 7))
    @pytest.mark.parametrize("d", [1, 2])
    def test_oracle_equivalence(self, m, d):
        vectors = [list(v.coords) for v in build_span(m, d, [[0] * d]).universe.elements()]
        gen_sets = [[v] for v in vectors] + [list(p) for p in combinations(vectors, 2)]
        for gens in gen_sets:
            got = {v.coords for v in saturate(build_span(m, d, gens)).elements}
            assert got == span_combinations(m, [tuple(g) for g in gens]), gens


class TestTruncStar:
    def test_a(self):
        assert trunc_star(lang(["a"], 2)) == lang(["", "a", "aa"], 2)

    def test_empty(self):
        assert trunc_star(lang([], 5)) == lang([""], 5)

    def test_eps(self):
        assert trunc_star(lang([""], 5)) == lang([""], 5)

    def test_mixed_lengths(self):
        got = trunc_star(lang(["a", "bb"], 3))
        assert set(got.strings) == {"", "a", "aa", "aaa", "bb", "abb", "bba"}


class TestRegularSets:
    def test_union_in_m2(self):
        r = saturate(build_regular_sets("ab", 2, Limits(max_order=3)))
        assert order_of(r, lang(["a", "b"], 2)) == 2

    def test_concat_in_m2(self):
        r = saturate(build_regular_sets("ab", 2, Limits(max_order=3)))
        assert order_of(r, lang(["ab"], 2)) == 2

    def test_base(self):
        inst = build_regular_sets("ab", 2)
        assert set(inst.base) == {lang([], 2), lang([""], 2), lang(["a"], 2), lang(["b"], 2)}

    def test_zero_length_rejected(self):
        with pytest.raises(OutOfUniverse):
            build_regular_sets("a", 0)

    @pytest.mark.parametrize("alphabet", [[], ["a", "a"], ["ab"], ["{"]])
    def test_bad_alphabet(self, alphabet):
        with pytest.raises(BadAlphabet):
            build_regular_sets(alphabet, 2)

    def test_witnesses_replay(self):
        r = saturate(build_regular_sets("ab", 3, Limits(max_order=3)))
        for e in r.elements:
            w = witness_of(r, e)
            if not w.is_base:
                assert apply_operation(r.instance.ops[w.op_id], w.args) == e


# -- truncation homomorphism ----------------------------------------------------------

finite_langs = st.frozensets(st.text(alphabet="ab", max_size=5), max_size=6)


@given(finite_langs, finite_langs, st.integers(1, 4))
@settings(max_examples=200, deadline=None)
def test_truncation_laws_random(p, q, L):
    tp, tq = lang(trunc(p, L), L), lang(trunc(q, L), L)
    assert lang(trunc(p | q, L), L) == trunc_union(tp, tq)
    assert lang(trunc({x + y for x in p for y in q}, L), L) == trunc_concat(tp, tq)
    star_oracle = Expr("star", Expr("lit", p)).language("ab", L)
    assert lang(star_oracle, L) == trunc_star(tp)


def test_saturated_elements_match_untruncated_expressions():
    r = saturate(build_regular_sets("ab", 3, Limits(max_order=3)))
    exprs = expressions_from_witnesses(r)
    for e, expr in exprs.items():
        assert expr.language("ab", 3) == frozenset(e.strings)


def test_concat_by_split_oracle_agrees():
    cands = words("ab", 3)
    p, q = frozenset(["", "a"]), frozenset(["b", "ab"])
    assert concat_by_split(p, q, cands) == {"b", "ab", "aab"}
