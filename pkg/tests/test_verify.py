"""The black-box truthfulness verifier and the fairness checks around it."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cakecut.aligned import Theta
from cakecut.general import Allocation, DemandPair, allocation_violations, mechanism
from cakecut.intervals import EMPTY, FULL, IntervalSet, interval, valuation
from cakecut.verify import (
    RANDOM_DENOMINATOR,
    STRUCTURED_MAGNITUDES,
    check_envy_free,
    check_ic,
    delta_decompose,
    deviation_chain,
    generate_deviations,
    pareto_convert,
    proportional_overlap,
    random_demand_pair,
    random_interval_set,
    run_ic_suite,
)

F = Fraction
HALF = mechanism(Theta(F(1, 2)))

DENOM = 16


@st.composite
def lattice_sets(draw, max_pieces=3, min_pieces=0):
    pieces = draw(st.integers(min_pieces, max_pieces))
    points = sorted(draw(st.sets(st.integers(0, DENOM), min_size=2 * pieces, max_size=2 * pieces)))
    return IntervalSet(
        [(F(points[2 * i], DENOM), F(points[2 * i + 1], DENOM)) for i in range(pieces)]
    )


# -- decomposing a misreport -------------------------------------------------

def test_delta_decompose_identity():
    A = interval(0, F(1, 2))
    got = delta_decompose(A, A, interval(F(1, 4), 1))
    assert all(d.is_empty() for d in (got.delta1, got.delta2, got.delta3, got.delta4))


def test_delta_decompose_worked_example():
    got = delta_decompose(
        interval(0, F(1, 2)), interval(F(1, 4), F(3, 4)), interval(F(1, 2), 1)
    )
    assert got.delta1 == interval(F(1, 2), F(3, 4))
    assert got.delta2 == EMPTY
    assert got.delta3 == EMPTY
    assert got.delta4 == interval(0, F(1, 4))


def test_delta_decompose_pure_withdrawal():
    got = delta_decompose(
        interval(0, F(1, 2)), interval(0, F(1, 4)), interval(F(1, 3), F(2, 3))
    )
    assert got.delta1 == EMPTY and got.delta3 == EMPTY
    assert got.delta2 == interval(F(1, 3), F(1, 2))
    assert got.delta4 == interval(F(1, 4), F(1, 3))


@given(lattice_sets(), lattice_sets(), lattice_sets())
def test_deltas_partition_the_disagreement(A, A_prime, B):
    got = delta_decompose(A, A_prime, B)
    assert got.delta1 | got.delta3 == A_prime - A
    assert got.delta2 | got.delta4 == A - A_prime
    pieces = [got.delta1, got.delta2, got.delta3, got.delta4]
    for i in range(4):
        for j in range(i + 1, 4):
            assert (pieces[i] & pieces[j]).is_empty()


def test_deviation_chain_worked_example():
    A = interval(0, F(1, 2))
    chain = deviation_chain(A, interval(F(1, 4), F(3, 4)), interval(F(1, 2), 1))
    assert chain == [
        interval(F(1, 4), F(3, 4)),
        interval(F(1, 4), F(1, 2)),
        interval(F(1, 4), F(1, 2)),
        interval(F(1, 4), F(1, 2)),
        A,
    ]


@given(lattice_sets(), lattice_sets(), lattice_sets())
def test_deviation_chain_lands_on_the_truth(A, A_prime, B):
    chain = deviation_chain(A, A_prime, B)
    assert len(chain) == 5
    assert chain[0] == A_prime
    assert chain[-1] == A


def test_utility_never_drops_along_a_chain():
    """Walking a misreport back to the truth never hurts the truthful player."""
    rng = random.Random(20260817)
    mechs = [mechanism(Theta(F(k, 4))) for k in range(5)]
    for _ in range(60):
        A = random_interval_set(rng)
        A_prime = random_interval_set(rng)
        B = random_interval_set(rng)
        for mech in mechs:
            last = None
            for step in deviation_chain(A, A_prime, B):
                if step.is_empty():
                    break
                utility = valuation(A, mech(step, B).C)
                assert last is None or utility >= last, (A, A_prime, B)
                last = utility


# -- deterministic deviation suites ------------------------------------------------

def test_random_sets_live_on_the_lattice():
    rng = random.Random(5)
    for _ in range(50):
        got = random_interval_set(rng)
        assert not got.is_empty()
        assert len(got.intervals) <= 3
        for lo, hi in got.intervals:
            assert (lo * RANDOM_DENOMINATOR).denominator == 1
            assert (hi * RANDOM_DENOMINATOR).denominator == 1
    pair = random_demand_pair(rng)
    assert pair.A.measure > 0 and pair.B.measure > 0


def test_generate_deviations_is_deterministic_and_clean():
    A = interval(0, F(1, 2))
    B = interval(F(1, 4), F(3, 4))
    first = generate_deviations(A, B, seed=11, n_random=4)
    second = generate_deviations(A, B, seed=11, n_random=4)
    assert first == second
    # all four perturbation regions are nonempty here
    assert len(first) >= 4 * len(STRUCTURED_MAGNITUDES)
    assert A not in first
    assert all(not move.is_empty() for move in first)
    assert len({move.intervals for move in first}) == len(first)
    assert generate_deviations(A, B, seed=12, n_random=4) != first


# -- the verifier itself ------------------------------------------------------------

def test_family_members_pass_check_ic():
    A = interval(0, F(3, 5))
    B = interval(F(2, 5), 1)
    deviations = generate_deviations(A, B, seed=3, n_random=6)
    report = check_ic(HALF, A, B, deviations, mechanism_id="theta:1/2")
    assert report.mechanism == "theta:1/2"
    assert report.trials == 2 * len(deviations)
    assert report.worst_gain <= 0
    assert report.witness is None
    assert report.wasteful is None


def test_proportional_split_is_caught_with_an_exact_witness():
    A = interval(0, F(1, 2))
    B = FULL
    report = check_ic(proportional_overlap, A, B, [FULL], mechanism_id="proportional")
    assert report.worst_gain == F(2, 3)
    witness = report.witness
    assert witness is not None
    assert witness.player == "I"
    assert witness.misreport == FULL
    assert witness.truthful_utility == F(1, 3)
    assert witness.deviated_utility == F(1)
    assert witness.gain == F(2, 3)


def test_witness_is_the_smallest_profitable_misreport():
    A = interval(0, F(1, 2))
    report = check_ic(proportional_overlap, A, FULL, [FULL, interval(0, F(3, 4))])
    assert report.witness is not None
    assert report.witness.misreport == interval(0, F(3, 4))
    # the worst gain still comes from the full-cake lie
    assert report.worst_gain == F(2, 3)


def test_slack_suppresses_witnesses_but_not_the_gain():
    A = interval(0, F(1, 2))
    report = check_ic(proportional_overlap, A, FULL, [FULL], slack=F(1))
    assert report.worst_gain == F(2, 3)
    assert report.witness is None
    assert report.slack == F(1)
    report = check_ic(proportional_overlap, A, FULL, [FULL], slack=F(1, 3))
    assert report.witness is not None


def test_report_serialization_shape():
    A = interval(0, F(1, 2))
    report = check_ic(proportional_overlap, A, FULL, [FULL], mechanism_id="proportional")
    blob = report.to_json()
    assert blob["mechanism"] == "proportional"
    assert blob["trials"] == 2
    assert blob["worst_gain"] == "2/3"
    assert blob["slack"] == "0/1"
    assert blob["wasteful"] is None
    assert blob["witness"]["player"] == "I"
    assert blob["witness"]["gain"] == "2/3"
    assert blob["witness"]["misreport"] == {"intervals": [["0/1", "1/1"]]}


def test_wasteful_output_is_reported():
    def hoarder(A, B):
        return Allocation(A | B, EMPTY)

    A = interval(0, F(1, 2))
    B = interval(F(1, 4), 1)
    report = check_ic(hoarder, A, B, generate_deviations(A, B, seed=1, n_random=0))
    assert report.wasteful is not None
    assert "piece C leaves demand A" in report.wasteful.violations
    assert report.wasteful.to_json()["violations"] == list(report.wasteful.violations)


def test_suite_runner_clears_the_family_and_flags_the_cheat():
    clean = run_ic_suite(HALF, scenarios=25, seed=7, mechanism_id="theta:1/2")
    assert clean.worst_gain <= 0
    assert clean.witness is None
    assert clean.wasteful is None
    again = run_ic_suite(HALF, scenarios=25, seed=7, mechanism_id="theta:1/2")
    assert again.trials == clean.trials and again.worst_gain == clean.worst_gain

    caught = run_ic_suite(proportional_overlap, scenarios=50, seed=7)
    assert caught.worst_gain > 0
    assert caught.witness is not None

    early = run_ic_suite(proportional_overlap, scenarios=50, seed=7, stop_on_violation=True)
    assert early.witness is not None
    assert early.trials < caught.trials


# -- fairness ------------------------------------------------------------------------

def test_envy_freeness_of_the_balanced_member():
    rng = random.Random(13)
    for _ in range(40):
        pair = random_demand_pair(rng)
        assert check_envy_free(HALF, pair.A, pair.B) == (True, True)


def test_tilted_members_cause_envy_at_full_conflict():
    assert check_envy_free(mechanism(Theta(F(7, 10))), FULL, FULL) == (True, False)
    assert check_envy_free(mechanism(Theta(F(3, 10))), FULL, FULL) == (False, True)


def test_pareto_convert_trims_without_losing_value():
    A = interval(0, F(1, 2))
    B = FULL
    C = interval(0, F(1, 6)) | interval(F(5, 6), 1)
    D = interval(F(1, 6), F(5, 6))
    got = pareto_convert(A, B, C, D)
    assert valuation(A, got.C) == valuation(A, C)
    assert valuation(B, got.D) == valuation(B, D)
    assert got.C.issubset(A) and got.D.issubset(B)
    # the trim freed some cake here
    assert (got.C | got.D).measure < (C | D).measure


def test_pareto_convert_requires_disjoint_pieces():
    with pytest.raises(ValueError, match="disjoint"):
        pareto_convert(FULL, FULL, interval(0, F(1, 2)), interval(F(1, 4), 1))


def test_proportional_overlap_is_non_wasteful():
    rng = random.Random(99)
    for _ in range(40):
        pair = random_demand_pair(rng)
        got = proportional_overlap(pair.A, pair.B)
        assert allocation_violations(pair, got) == []
