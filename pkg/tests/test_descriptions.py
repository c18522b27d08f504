import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import z5
from recset import (
    IntMod,
    Limits,
    apply_operation,
    build_cyclic_group,
    build_regular_sets,
    build_span,
    extract_description,
    order_of,
    pad_description,
    saturate,
    validate_description,
)
from recset.descriptions import Description
from recset.errors import DescriptionTooLong, InvalidInput, NotInM
from strategies import modular_instances


def seq(*values):
    return tuple(z5(v) for v in values)


class TestExtract:
    def test_paper_style(self, z5_result):
        d = extract_description(z5_result, z5(3), "paper")
        assert d.seq == seq(1, 1, 1, 2, 3)
        assert d.length == 5
        assert d.target == z5(3)

    def test_compact_style(self, z5_result):
        d = extract_description(z5_result, z5(3), "compact")
        assert d.seq == seq(1, 2, 3)
        assert d.length == 3

    @pytest.mark.parametrize("style", ["paper", "compact"])
    def test_base_element(self, z5_result, style):
        assert extract_description(z5_result, z5(1), style).seq == seq(1)

    def test_not_in_m(self):
        r = saturate(build_cyclic_group(6, 2))
        with pytest.raises(NotInM):
            extract_description(r, IntMod(1, 6))

    def test_too_long(self, z5_result):
        with pytest.raises(DescriptionTooLong):
            extract_description(z5_result, z5(3), "paper", max_length=4)

    def test_unknown_style(self, z5_result):
        with pytest.raises(InvalidInput):
            extract_description(z5_result, z5(3), "shortest")


class TestValidate:
    def test_valid(self, z5_instance):
        assert validate_description(z5_instance, seq(1, 2, 3), z5(3)).valid

    def test_missing_base_first(self, z5_instance):
        r = validate_description(z5_instance, seq(2, 3), z5(3))
        assert not r.valid
        assert r.index == 1

    def test_wrong_target(self, z5_instance):
        r = validate_description(z5_instance, seq(1, 2, 3), z5(4))
        assert not r.valid
        assert r.index == 3

    def test_gap_in_middle(self, z5_instance):
        # 4 = 2 + 2 needs 2 earlier; 0 is not reachable from {1} in one step.
        r = validate_description(z5_instance, seq(1, 0), z5(0))
        assert (r.valid, r.index) == (False, 2)

    def test_repeated_entries_allowed(self, z5_instance):
        assert validate_description(z5_instance, seq(1, 1, 2, 2, 4), z5(4)).valid

    def test_empty(self, z5_instance):
        assert not validate_description(z5_instance, (), z5(1)).valid


class TestPad:
    def test_pad_two(self, z5_instance):
        d = pad_description(Description(seq(1, 2, 3)), 2, z5_instance)
        assert d.seq == seq(1, 1, 1, 2, 3)
        assert d.length == 5

    def test_pad_zero(self, z5_instance):
        assert pad_description(Description(seq(1)), 0, z5_instance).seq == seq(1)

    def test_pad_five_revalidates(self, z5_instance):
        d = pad_description(Description(seq(1, 2, 3)), 5, z5_instance)
        assert d.length == 8
        assert validate_description(z5_instance, d.seq, z5(3)).valid

    def test_pad_invalid_rejected(self, z5_instance):
        with pytest.raises(InvalidInput):
            pad_description(Description(seq(2, 3)), 1, z5_instance)


def random_description(instance, rng, steps):
    """Grow a sequence by base picks or operation images of earlier entries."""
    out = [rng.choice(instance.base)]
    for _ in range(steps):
        if rng.random() < 0.2:
            out.append(rng.choice(instance.base))
            continue
        op = rng.choice(instance.ops)
        args = tuple(rng.choice(out) for _ in range(op.arity))
        r = apply_operation(op, args)
        if r is not None:
            out.append(r)
    return out


SUITE = [
    lambda: build_cyclic_group(5, 1),
    lambda: build_cyclic_group(7, 3, "multiplicative"),
    lambda: build_span(6, 1, [[2]]),
    lambda: build_span(4, 2, [[1, 2], [2, 0]]),
    lambda: build_regular_sets("ab", 2, Limits(max_order=3)),
]


@pytest.mark.parametrize("make", SUITE)
def test_soundness_every_element(make):
    inst = make()
    r = saturate(inst)
    for e in r.sorted_elements():
        paper = extract_description(r, e, "paper")
        compact = extract_description(r, e, "compact")
        assert validate_description(inst, paper.seq, e).valid
        assert validate_description(inst, compact.seq, e).valid
        assert order_of(r, e) <= compact.length <= paper.length


@pytest.mark.parametrize("make", SUITE[:4])
def test_completeness_random_descriptions(make):
    inst = make()
    r = saturate(inst)
    assert r.reached_fixpoint
    rng = random.Random(7)
    for _ in range(30):
        d = random_description(inst, rng, rng.randint(0, 12))
        assert validate_description(inst, d, d[-1]).valid
        assert d[-1] in r


@given(modular_instances(), st.integers(0, 6))
@settings(max_examples=40, deadline=None)
def test_padding_law(inst, h):
    r = saturate(inst)
    for e in r.sorted_elements()[:5]:
        d = extract_description(r, e, "compact")
        padded = pad_description(d, h, inst)
        assert padded.length == d.length + h
        assert validate_description(inst, padded.seq, e).valid
