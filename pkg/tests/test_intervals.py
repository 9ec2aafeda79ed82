"""Exact interval algebra: construction, set operations, carving, JSON."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cakecut.intervals import (
    EMPTY,
    FULL,
    IntervalSet,
    format_fraction,
    interval,
    to_fraction,
    valuation,
)

F = Fraction
DENOM = 32


@st.composite
def interval_sets(draw, max_pieces=4):
    """Canonical sets with endpoints on the 1/32 lattice."""
    pieces = draw(st.integers(0, max_pieces))
    points = sorted(draw(st.sets(st.integers(0, DENOM), min_size=2 * pieces, max_size=2 * pieces)))
    return IntervalSet(
        [(F(points[2 * i], DENOM), F(points[2 * i + 1], DENOM)) for i in range(pieces)]
    )


# -- rational coercion -------------------------------------------------------

def test_to_fraction_accepts_int_str_fraction():
    assert to_fraction(1) == F(1)
    assert to_fraction("3/4") == F(3, 4)
    assert to_fraction("0.25") == F(1, 4)
    assert to_fraction(F(2, 5)) == F(2, 5)


def test_to_fraction_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)
    with pytest.raises(ValueError):
        to_fraction("one half")
    with pytest.raises(ValueError):
        to_fraction("1/0")


def test_format_fraction_keeps_denominator():
    assert format_fraction(F(1, 2)) == "1/2"
    assert format_fraction(F(3)) == "3/1"
    assert format_fraction(F(0)) == "0/1"


# -- construction is normalization -------------------------------------------

def test_adjacent_intervals_merge():
    assert IntervalSet([(0, "1/2"), ("1/2", 1)]) == FULL


def test_overlapping_intervals_merge():
    got = IntervalSet([(0, "1/3"), ("1/4", "1/2")])
    assert got.intervals == ((F(0), F(1, 2)),)


def test_unsorted_input_is_sorted():
    got = IntervalSet([("1/2", "3/4"), (0, "1/4")])
    assert got.intervals == ((F(0), F(1, 4)), (F(1, 2), F(3, 4)))


def test_empty_pairs_are_dropped():
    assert IntervalSet([("1/3", "1/3")]) == EMPTY
    assert EMPTY.is_empty()
    assert not EMPTY


def test_reversed_endpoints_rejected():
    with pytest.raises(ValueError):
        IntervalSet([("1/4", "1/8")])


def test_endpoints_outside_unit_cake_rejected():
    with pytest.raises(ValueError):
        IntervalSet([("-1/2", "1/4")])
    with pytest.raises(ValueError):
        IntervalSet([("1/2", "3/2")])


def test_float_endpoints_rejected():
    with pytest.raises(TypeError):
        IntervalSet([(0.0, 0.5)])


# -- queries ------------------------------------------------------------------

def test_measure_examples():
    assert FULL.measure == F(1)
    assert EMPTY.measure == F(0)
    assert IntervalSet([(0, "1/4"), ("1/2", 1)]).measure == F(3, 4)


def test_issubset():
    assert interval(0, "1/4").issubset(interval(0, "1/2"))
    assert not interval(0, "1/2").issubset(interval(0, "1/4"))
    assert EMPTY.issubset(EMPTY)
    assert EMPTY.issubset(FULL)
    assert not FULL.issubset(EMPTY)
    # spanning a gap in the cover fails even when measures fit
    gap = IntervalSet([(0, "1/4"), ("1/2", 1)])
    assert not interval("1/8", "5/8").issubset(gap)
    assert interval("1/16", "3/16").issubset(gap)


# -- boolean algebra ----------------------------------------------------------

def test_intersect_example():
    got = interval(0, "3/5") & interval("1/2", 1)
    assert got.intervals == ((F(1, 2), F(3, 5)),)
    assert got.measure == F(1, 10)


def test_complement_example():
    got = interval("1/4", "1/2").complement()
    assert got.intervals == ((F(0), F(1, 4)), (F(1, 2), F(1)))
    assert EMPTY.complement() == FULL
    assert FULL.complement() == EMPTY


def test_union_merges_across_both_operands():
    left = IntervalSet([(0, "1/8"), ("1/4", "3/8")])
    right = interval("1/8", "1/4")
    assert (left | right).intervals == ((F(0), F(3, 8)),)


def test_difference_examples():
    assert (FULL - interval("1/3", "2/3")).measure == F(2, 3)
    assert (FULL - FULL) == EMPTY
    assert (EMPTY - FULL) == EMPTY
    # one long cut spanning two pieces
    pieces = IntervalSet([(0, "1/4"), ("1/2", "3/4")])
    cut = interval("1/8", "5/8")
    assert (pieces - cut).intervals == ((F(0), F(1, 8)), (F(5, 8), F(3, 4)))


def test_symmetric_difference():
    got = interval(0, "1/2") ^ interval("1/4", "3/4")
    assert got.intervals == ((F(0), F(1, 4)), (F(1, 2), F(3, 4)))


# -- carving -------------------------------------------------------------------

def test_take_from_left_prefix_by_measure():
    s = IntervalSet([(0, "1/4"), ("1/2", 1)])
    assert s.take_from_left("1/2").intervals == ((F(0), F(1, 4)), (F(1, 2), F(3, 4)))
    assert s.take_from_left(0) == EMPTY
    assert s.take_from_left(s.measure) == s


def test_take_from_right_suffix_by_measure():
    s = IntervalSet([(0, "1/4"), ("1/2", 1)])
    assert s.take_from_right("1/4").intervals == ((F(3, 4), F(1)),)
    # a take spanning the gap keeps pieces in sorted order
    assert s.take_from_right("5/8").intervals == ((F(1, 8), F(1, 4)), (F(1, 2), F(1)))


def test_take_amount_out_of_range():
    s = interval(0, "1/2")
    with pytest.raises(ValueError):
        s.take_from_left("3/4")
    with pytest.raises(ValueError):
        s.take_from_right("-1/8")


# -- valuation ------------------------------------------------------------------

def test_valuation_examples():
    assert valuation(FULL, interval(0, "1/2")) == F(1, 2)
    assert valuation(interval(0, "1/2"), interval(0, "1/2")) == F(1)
    assert valuation(interval(0, "3/5"), interval("1/2", 1)) == F(1, 6)


def test_valuation_rejects_zero_measure_demand():
    with pytest.raises(ValueError):
        valuation(EMPTY, FULL)


# -- serialization ----------------------------------------------------------------

def test_json_round_trip():
    s = IntervalSet([(0, "1/3"), ("1/2", "7/8")])
    assert IntervalSet.from_json(s.to_json()) == s
    assert s.to_json() == {"intervals": [["0/1", "1/3"], ["1/2", "7/8"]]}


def test_from_json_integer_shorthand():
    assert IntervalSet.from_json({"intervals": [[0, 1]]}) == FULL


def test_from_json_rejects_bad_shapes():
    for bad in (
        [],
        {"pieces": []},
        {"intervals": "nope"},
        {"intervals": [["1/2"]]},
        {"intervals": [[0.0, 0.5]]},
        {"intervals": [["1/2", "1/4"]]},
    ):
        with pytest.raises(ValueError):
            IntervalSet.from_json(bad)


def test_repr_is_readable():
    assert repr(EMPTY) == "IntervalSet(empty)"
    assert repr(interval(0, "1/2")) == "IntervalSet([0, 1/2))"


# -- algebraic properties ----------------------------------------------------------

@given(interval_sets())
def test_canonicalization_idempotent(s):
    assert IntervalSet(s.intervals) == s


@given(interval_sets(), interval_sets())
def test_inclusion_exclusion(s, t):
    assert s.measure + t.measure == (s | t).measure + (s & t).measure


@given(interval_sets(), interval_sets())
def test_de_morgan(s, t):
    assert (s | t).complement() == s.complement() & t.complement()
    assert (s & t).complement() == s.complement() | t.complement()


@given(interval_sets(), interval_sets())
def test_difference_is_intersection_with_complement(s, t):
    assert s - t == s & t.complement()


@given(interval_sets(), interval_sets())
def test_union_contains_both_operands(s, t):
    u = s | t
    assert s.issubset(u) and t.issubset(u)
    assert (s & t).issubset(s)


@given(interval_sets(), st.integers(0, 16))
def test_take_from_left_measure_exact(s, numerator):
    m = s.measure * F(numerator, 16)
    taken = s.take_from_left(m)
    assert taken.measure == m
    assert taken.issubset(s)


@given(interval_sets(), st.integers(0, 16))
def test_take_from_right_measure_exact(s, numerator):
    m = s.measure * F(numerator, 16)
    taken = s.take_from_right(m)
    assert taken.measure == m
    assert taken.issubset(s)
    # left and right takes of complementary measures partition s
    rest = s.take_from_left(s.measure - m)
    assert (taken & rest) == EMPTY
    assert (taken | rest) == s


@given(interval_sets())
def test_complement_partitions_cake(s):
    assert (s | s.complement()) == FULL
    assert (s & s.complement()) == EMPTY
