"""The truthful mechanism for arbitrary interval demands.

Demands are any positive-measure interval sets A and B.  The mechanism
normalizes by the contested cake A ∪ B, sizes the pieces with the aligned
family rule, and places them positionally: each player keeps his exclusive
region in full, player I fills up from the left end of the overlap, player
II from the right end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .aligned import Theta
from .intervals import ONE, ZERO, IntervalSet


@dataclass(frozen=True)
class DemandPair:
    """Reported demands.  Zero-measure demands are rejected up front."""

    A: IntervalSet
    B: IntervalSet

    def __post_init__(self):
        if self.A.measure == ZERO:
            raise ValueError("demand A must have positive measure")
        if self.B.measure == ZERO:
            raise ValueError("demand B must have positive measure")


@dataclass(frozen=True)
class Allocation:
    """Pieces handed to the two players."""

    C: IntervalSet
    D: IntervalSet


MechanismOracle = Callable[[IntervalSet, IntervalSet], Allocation]


def allocation_sizes(theta: Theta, demands: DemandPair) -> tuple[Fraction, Fraction]:
    """Piece sizes |C| and |D|, before any cake is placed.

    |C| = min(|A|, max(|A \\ B|, theta * |A ∪ B|)) and |D| fills the rest of
    the union.  The mirrored formula for |D| must agree, and is asserted.
    """
    union = demands.A | demands.B
    total = union.measure
    only_a = (demands.A - demands.B).measure
    size_c = min(demands.A.measure, max(only_a, theta.value * total))
    size_d = total - size_c

    only_b = (demands.B - demands.A).measure
    mirrored = min(demands.B.measure, max(only_b, (ONE - theta.value) * total))
    assert size_d == mirrored, "piece-size formulas disagree"
    return size_c, size_d


def allocate(theta: Theta, demands: DemandPair) -> Allocation:
    """Run the mechanism: exclusive regions first, then the overlap.

    Player I tops up from the left end of A ∩ B, player II from the right
    end; the two take operations split the overlap exactly.
    """
    size_c, size_d = allocation_sizes(theta, demands)
    joint = demands.A & demands.B
    only_a = demands.A - demands.B
    only_b = demands.B - demands.A
    piece_c = only_a | joint.take_from_left(size_c - only_a.measure)
    piece_d = only_b | joint.take_from_right(size_d - only_b.measure)
    return Allocation(piece_c, piece_d)


def allocation_violations(demands: DemandPair, allocation: Allocation) -> list[str]:
    """Names of the non-wastefulness conditions an allocation breaks.

    Empty list means: pieces disjoint, each inside its player's demand, and
    together covering everything anyone asked for.
    """
    out = []
    if not (allocation.C & allocation.D).is_empty():
        out.append("pieces C and D overlap")
    if not allocation.C.issubset(demands.A):
        out.append("piece C leaves demand A")
    if not allocation.D.issubset(demands.B):
        out.append("piece D leaves demand B")
    if (allocation.C | allocation.D) != (demands.A | demands.B):
        out.append("pieces do not cover the demanded cake")
    return out


def mechanism(theta: Theta) -> MechanismOracle:
    """The mechanism as a plain (A, B) -> Allocation callable."""

    def run(A: IntervalSet, B: IntervalSet) -> Allocation:
        return allocate(theta, DemandPair(A, B))

    return run
