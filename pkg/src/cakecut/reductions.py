"""Moving between the general model and the aligned model.

`derive_aligned` reads off the aligned family member hiding inside any
truthful non-wasteful general mechanism.  `witness_pair` goes the other way:
given target normalized demand sizes (a, b) it constructs a concrete demand
pair on which the general mechanism must reproduce the aligned sizes, and
records every oracle query it made along the way.  Inconsistencies between
the oracle's answers and truthfulness/non-wastefulness are raised as
counterexamples carrying the trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .aligned import AlignedAllocation, AlignedProfile, Theta, f_theta
from .general import Allocation, MechanismOracle
from .intervals import FULL, ONE, ZERO, IntervalSet, RationalLike, interval, to_fraction


@dataclass(frozen=True)
class RatioTuple:
    """Demand and piece sizes, normalized by the contested cake |A ∪ B|."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction


def ratio_tuple(
    A: IntervalSet, B: IntervalSet, C: IntervalSet, D: IntervalSet
) -> RatioTuple:
    """Normalize (|A|, |B|, |C|, |D|) by |A ∪ B|.

    Raises ValueError when nothing was demanded.
    """
    total = (A | B).measure
    if total == ZERO:
        raise ValueError("cannot normalize by an empty demanded region")
    return RatioTuple(
        A.measure / total, B.measure / total, C.measure / total, D.measure / total
    )


@dataclass
class TraceStep:
    """One recorded construction step or oracle query."""

    label: str
    data: dict


class OracleContractError(Exception):
    """An oracle answer contradicted truthfulness or non-wastefulness.

    Carries the query trace accumulated up to the contradiction, so the
    offending exchange can be replayed.
    """

    def __init__(self, detail: str, trace: list[TraceStep]):
        super().__init__(detail)
        self.detail = detail
        self.trace = trace


@dataclass(frozen=True)
class DerivedAligned:
    """The aligned mechanism induced by a general one; callable on profiles."""

    theta: Theta

    def __call__(self, profile: AlignedProfile) -> AlignedAllocation:
        return f_theta(self.theta, profile)


def _query(
    oracle: MechanismOracle,
    A: IntervalSet,
    B: IntervalSet,
    trace: list[TraceStep],
    label: str,
) -> Allocation:
    result = oracle(A, B)
    trace.append(TraceStep(label, {"A": A, "B": B, "C": result.C, "D": result.D}))
    return result


def derive_aligned(oracle: MechanismOracle) -> DerivedAligned:
    """Identify the aligned family member of a truthful general mechanism.

    One probe with both players demanding the whole cake fixes theta as the
    size of player I's piece.  A probe answer that does not split the whole
    cake (|C| + |D| != 1) disqualifies the oracle outright.
    """
    trace: list[TraceStep] = []
    probe = _query(oracle, FULL, FULL, trace, "full-demand probe")
    if probe.C.measure + probe.D.measure != ONE:
        raise OracleContractError(
            "wasteful at the full-demand probe: "
            f"|C| + |D| = {probe.C.measure + probe.D.measure}, expected 1",
            trace,
        )
    return DerivedAligned(Theta(probe.C.measure))


def extend_to(base: IntervalSet, size: RationalLike) -> IntervalSet:
    """Grow `base` to the target measure using the leftmost available cake."""
    target = to_fraction(size)
    extra = target - base.measure
    if extra < ZERO:
        raise ValueError(f"target {target} is below the base measure {base.measure}")
    return base | base.complement().take_from_left(extra)


def _expect(condition: bool, detail: str, trace: list[TraceStep]):
    if not condition:
        raise OracleContractError(detail, trace)


def witness_pair(
    oracle: MechanismOracle, a: RationalLike, b: RationalLike
) -> tuple[IntervalSet, IntervalSet, list[TraceStep]]:
    """Build demands (A, B) with |A| = a, |B| = b realizing the aligned sizes.

    For a + b <= 1 disjoint prefix/suffix demands suffice.  Otherwise the
    full-demand probe pins theta, and one of two constructions applies
    depending on whether both players want more than their probe pieces.
    Every oracle query lands in the returned trace; answers that contradict
    what a truthful non-wasteful mechanism must do raise OracleContractError.
    """
    a = to_fraction(a)
    b = to_fraction(b)
    for name, val in (("a", a), ("b", b)):
        if val < ZERO or val > ONE:
            raise ValueError(f"{name} must lie in [0, 1], got {val}")

    trace: list[TraceStep] = []

    if a + b <= ONE:
        # Disjoint (or just touching) demands: non-wastefulness forces the
        # mechanism to hand each player exactly his demand.
        A = interval(ZERO, a)
        B = interval(ONE - b, ONE)
        check = _query(oracle, A, B, trace, "disjoint demands")
        _expect(check.C == A and check.D == B,
                "mechanism must hand out disjoint demands verbatim", trace)
        return A, B, trace

    probe = _query(oracle, FULL, FULL, trace, "full-demand probe")
    theta = probe.C.measure
    _expect(theta + probe.D.measure == ONE,
            "wasteful at the full-demand probe", trace)
    c_tilde, d_tilde = probe.C, probe.D

    if a > theta and b > d_tilde.measure:
        # Both players want more than their probe pieces: grow player I's
        # demand around his probe piece, ask what he gets against a
        # full-cake opponent, and grow player II's demand around the rest.
        A1 = extend_to(c_tilde, a)
        trace.append(TraceStep("grow A around probe piece", {"A1": A1}))
        q = _query(oracle, A1, FULL, trace, "A grown, B full")
        _expect(q.C.issubset(A1), "player I's piece must stay inside his demand", trace)
        _expect(q.C.measure == theta,
                f"truthfulness forces |C| = {theta}, got {q.C.measure}", trace)
        _expect(q.D == q.C.complement(),
                "a full-cake opponent must receive the entire remainder", trace)
        B2 = extend_to(q.C.complement(), b)
        trace.append(TraceStep("grow B around the remainder", {"B2": B2}))
        final = _query(oracle, A1, B2, trace, "constructed pair")
        _expect(final.C.measure == theta and final.D.measure == ONE - theta,
                "constructed pair must reproduce the probe split", trace)
        return A1, B2, trace

    if a <= theta:
        # Player I is content with part of his probe piece; he must get all
        # of it, and player II's demand grows around everything else.
        A1 = c_tilde.take_from_left(a)
        trace.append(TraceStep("restrict A inside probe piece", {"A1": A1}))
        q = _query(oracle, A1, FULL, trace, "A restricted, B full")
        _expect(q.C == A1,
                "truthfulness forces player I to receive his whole demand", trace)
        _expect(q.D == A1.complement(),
                "a full-cake opponent must receive the entire remainder", trace)
        B2 = extend_to(A1.complement(), b)
        trace.append(TraceStep("grow B around the remainder", {"B2": B2}))
        final = _query(oracle, A1, B2, trace, "constructed pair")
        _expect(final.C.measure == a and final.D.measure == ONE - a,
                "constructed pair must hand player I his whole demand", trace)
        return A1, B2, trace

    # Mirror image: player II is content with part of his probe piece.
    B1 = d_tilde.take_from_right(b)
    trace.append(TraceStep("restrict B inside probe piece", {"B1": B1}))
    q = _query(oracle, FULL, B1, trace, "A full, B restricted")
    _expect(q.D == B1,
            "truthfulness forces player II to receive his whole demand", trace)
    _expect(q.C == B1.complement(),
            "a full-cake opponent must receive the entire remainder", trace)
    A2 = extend_to(B1.complement(), a)
    trace.append(TraceStep("grow A around the remainder", {"A2": A2}))
    final = _query(oracle, A2, B1, trace, "constructed pair")
    _expect(final.C.measure == ONE - b and final.D.measure == b,
            "constructed pair must hand player II his whole demand", trace)
    return A2, B1, trace
