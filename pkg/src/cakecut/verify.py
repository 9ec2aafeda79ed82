"""Black-box checks that a mechanism cannot be gamed.

A misreport A' differs from the truth A in four disjoint ways, depending on
whether the changed cake is claimed mass inside or outside the opponent's
demand:

    delta1 = (A' \\ A) ∩ B     claimed extra, contested
    delta2 = (A \\ A') ∩ B     dropped truth, contested
    delta3 = (A' \\ A) \\ B     claimed extra, uncontested
    delta4 = (A \\ A') \\ B     dropped truth, uncontested

Undoing them one at a time walks a misreport back to the truth; for the
mechanisms built here, truthful utility never drops along that walk.  The
verifier exploits the same decomposition to generate targeted misreports,
and also supports arbitrary random ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .general import Allocation, DemandPair, MechanismOracle, allocation_violations
from .intervals import ZERO, IntervalSet, format_fraction, valuation


@dataclass(frozen=True)
class DeltaDecomposition:
    delta1: IntervalSet
    delta2: IntervalSet
    delta3: IntervalSet
    delta4: IntervalSet


def delta_decompose(A: IntervalSet, A_prime: IntervalSet, B: IntervalSet) -> DeltaDecomposition:
    """Split a misreport's disagreement with the truth into the four deltas."""
    claimed = A_prime - A
    dropped = A - A_prime
    return DeltaDecomposition(
        delta1=claimed & B,
        delta2=dropped & B,
        delta3=claimed - B,
        delta4=dropped - B,
    )


def deviation_chain(A: IntervalSet, A_prime: IntervalSet, B: IntervalSet) -> list[IntervalSet]:
    """The five reports stepping from the misreport A' back to the truth A.

    Order: shed contested lies, restore contested truth, shed uncontested
    lies, restore uncontested truth.  The last element is always A.
    """
    deltas = delta_decompose(A, A_prime, B)
    a1 = A_prime
    a2 = a1 - deltas.delta1
    a3 = a2 | deltas.delta2
    a4 = a3 - deltas.delta3
    a5 = a4 | deltas.delta4
    assert a5 == A, "chain failed to land on the truthful report"
    return [a1, a2, a3, a4, a5]


# -- deviation generation -------------------------------------------------

STRUCTURED_MAGNITUDES = (Fraction(1, 16), Fraction(1, 4))
RANDOM_DENOMINATOR = 64


def random_interval_set(rng: random.Random, max_pieces: int = 3) -> IntervalSet:
    """A nonempty interval set with endpoints on the 1/64 lattice."""
    pieces = rng.randint(1, max_pieces)
    points = sorted(rng.sample(range(RANDOM_DENOMINATOR + 1), 2 * pieces))
    return IntervalSet(
        [
            (Fraction(points[2 * k], RANDOM_DENOMINATOR),
             Fraction(points[2 * k + 1], RANDOM_DENOMINATOR))
            for k in range(pieces)
        ]
    )


def random_demand_pair(rng: random.Random) -> DemandPair:
    return DemandPair(random_interval_set(rng), random_interval_set(rng))


def generate_deviations(
    A: IntervalSet, B: IntervalSet, seed: int, n_random: int
) -> list[IntervalSet]:
    """Deterministic misreports of A against opponent B.

    Three layers: single-delta perturbations of A at fixed magnitudes (each
    skipped when its region is empty), full chains toward two random
    targets, and `n_random` arbitrary random reports.  Duplicates and A
    itself are dropped.
    """
    moves: list[IntervalSet] = []
    regions = [
        (B - A, "add"),                 # inflate into contested cake
        (A & B, "remove"),              # understate contested demand
        ((A | B).complement(), "add"),  # inflate into unwanted cake
        (A - B, "remove"),              # understate exclusive demand
    ]
    for region, mode in regions:
        if region.is_empty():
            continue
        for magnitude in STRUCTURED_MAGNITUDES:
            chunk = region.take_from_left(magnitude * region.measure)
            moves.append(A | chunk if mode == "add" else A - chunk)

    rng = random.Random(seed)
    for _ in range(2):
        target = random_interval_set(rng)
        moves.extend(deviation_chain(A, target, B))
    for _ in range(n_random):
        moves.append(random_interval_set(rng))

    out: list[IntervalSet] = []
    seen = set()
    for move in moves:
        # the message space is positive-measure demands, and repeating the
        # truth is not a deviation
        if move == A or move.is_empty() or move.intervals in seen:
            continue
        seen.add(move.intervals)
        out.append(move)
    return out


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class ICViolation:
    """A profitable misreport, with both allocations for the record."""

    player: str  # "I" or "II"
    A: IntervalSet
    B: IntervalSet
    misreport: IntervalSet
    truthful_utility: Fraction
    deviated_utility: Fraction
    truthful_allocation: Allocation
    deviated_allocation: Allocation

    @property
    def gain(self) -> Fraction:
        return self.deviated_utility - self.truthful_utility

    def to_json(self) -> dict:
        return {
            "player": self.player,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "misreport": self.misreport.to_json(),
            "truthful_utility": format_fraction(self.truthful_utility),
            "deviated_utility": format_fraction(self.deviated_utility),
            "gain": format_fraction(self.gain),
        }


@dataclass(frozen=True)
class WastefulnessWitness:
    """An input on which the mechanism's output broke an allocation invariant."""

    A: IntervalSet
    B: IntervalSet
    allocation: Allocation
    violations: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "C": self.allocation.C.to_json(),
            "D": self.allocation.D.to_json(),
            "violations": list(self.violations),
        }


@dataclass
class ICReport:
    """Outcome of a verification run.

    worst_gain is the largest utility improvement any tried misreport
    achieved (total over all trials); a witness is present exactly when it
    exceeds the slack.  Slack is zero for the exact built-in mechanisms;
    oracles that round through floats get a small allowance so that noise
    is not mistaken for gaming.  Wastefulness is reported separately.
    """

    mechanism: str
    trials: int
    worst_gain: Fraction
    witness: Optional[ICViolation]
    wasteful: Optional[WastefulnessWitness] = None
    slack: Fraction = ZERO

    def to_json(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "trials": self.trials,
            "worst_gain": format_fraction(self.worst_gain),
            "slack": format_fraction(self.slack),
            "witness": self.witness.to_json() if self.witness else None,
            "wasteful": self.wasteful.to_json() if self.wasteful else None,
        }


def _misreport_key(v: ICViolation):
    return (v.misreport.intervals, v.player)


def check_ic(
    mech: MechanismOracle,
    A: IntervalSet,
    B: IntervalSet,
    deviations: Sequence[IntervalSet],
    mechanism_id: str = "mechanism",
    slack: Fraction = ZERO,
) -> ICReport:
    """Try every deviation as a misreport for each player in turn.

    Player I swaps A for the deviation, player II swaps B; utilities are
    always measured against the true demand.  A violation is a gain
    strictly above the slack; the reported witness is the lexicographically
    smallest profitable misreport.  Outputs breaking the allocation
    invariants are recorded as a wastefulness witness and do not stop the
    run.
    """
    truthful = mech(A, B)
    wasteful = _wastefulness(A, B, truthful)
    u_one = valuation(A, truthful.C)
    u_two = valuation(B, truthful.D)

    worst: Optional[Fraction] = None
    violations: list[ICViolation] = []
    trials = 0
    for report in deviations:
        for player in ("I", "II"):
            if player == "I":
                alloc = mech(report, B)
                utility = valuation(A, alloc.C)
                truthful_u = u_one
            else:
                alloc = mech(A, report)
                utility = valuation(B, alloc.D)
                truthful_u = u_two
            trials += 1
            if wasteful is None:
                pair = (report, B) if player == "I" else (A, report)
                wasteful = _wastefulness(pair[0], pair[1], alloc)
            gain = utility - truthful_u
            if worst is None or gain > worst:
                worst = gain
            if gain > slack:
                violations.append(
                    ICViolation(
                        player=player,
                        A=A,
                        B=B,
                        misreport=report,
                        truthful_utility=truthful_u,
                        deviated_utility=utility,
                        truthful_allocation=truthful,
                        deviated_allocation=alloc,
                    )
                )

    witness = min(violations, key=_misreport_key) if violations else None
    return ICReport(
        mechanism=mechanism_id,
        trials=trials,
        worst_gain=worst if worst is not None else ZERO,
        witness=witness,
        wasteful=wasteful,
        slack=slack,
    )


def _wastefulness(A: IntervalSet, B: IntervalSet, alloc: Allocation) -> Optional[WastefulnessWitness]:
    try:
        broken = allocation_violations(DemandPair(A, B), alloc)
    except ValueError:
        return None  # a zero-measure report; invariants are not at issue
    if broken:
        return WastefulnessWitness(A, B, alloc, tuple(broken))
    return None


def run_ic_suite(
    mech: MechanismOracle,
    scenarios: int,
    seed: int,
    mechanism_id: str = "mechanism",
    n_random: int = 4,
    stop_on_violation: bool = False,
    slack: Fraction = ZERO,
) -> ICReport:
    """Drive check_ic over random demand pairs with per-pair deviation suites.

    Each scenario draws a fresh (A, B) and misreport suites tailored to both
    players.  Aggregates the worst gain, keeps the first scenario's witness,
    and counts every misreport evaluation in `trials`.
    """
    rng = random.Random(seed)
    total_trials = 0
    worst: Optional[Fraction] = None
    witness = None
    wasteful = None
    for _ in range(scenarios):
        demands = random_demand_pair(rng)
        suite = generate_deviations(demands.A, demands.B, seed=rng.randrange(2**32), n_random=n_random)
        suite += generate_deviations(demands.B, demands.A, seed=rng.randrange(2**32), n_random=n_random)
        report = check_ic(mech, demands.A, demands.B, suite, mechanism_id, slack=slack)
        total_trials += report.trials
        if witness is None and report.witness is not None:
            witness = report.witness
        if worst is None or report.worst_gain > worst:
            worst = report.worst_gain
        wasteful = wasteful or report.wasteful
        if stop_on_violation and worst > slack:
            break
    return ICReport(
        mechanism=mechanism_id,
        trials=total_trials,
        worst_gain=worst if worst is not None else ZERO,
        witness=witness,
        wasteful=wasteful,
        slack=slack,
    )


# -- other fairness checks -------------------------------------------------

def check_envy_free(mech: MechanismOracle, A: IntervalSet, B: IntervalSet) -> tuple[bool, bool]:
    """Does each player weakly prefer his own piece to the other's?"""
    alloc = mech(A, B)
    envy_free_one = valuation(A, alloc.C) >= valuation(A, alloc.D)
    envy_free_two = valuation(B, alloc.D) >= valuation(B, alloc.C)
    return envy_free_one, envy_free_two


def pareto_convert(
    A: IntervalSet, B: IntervalSet, C: IntervalSet, D: IntervalSet
) -> Allocation:
    """Trim any disjoint allocation to the demands without losing value.

    Each player's valuation only sees his demanded region, so C ∩ A and
    D ∩ B preserve both utilities while freeing the rest of the cake.
    """
    if not (C & D).is_empty():
        raise ValueError("pieces must be disjoint")
    return Allocation(C & A, D & B)


# -- reference non-truthful mechanism ---------------------------------------

def proportional_overlap(A: IntervalSet, B: IntervalSet) -> Allocation:
    """Split the contested region pro rata to demand sizes.  Non-wasteful
    but gameable: inflating a demand buys a larger share of the overlap."""
    total = A.measure + B.measure
    if total == ZERO:
        raise ValueError("at least one demand must have positive measure")
    joint = A & B
    share = joint.measure * A.measure / total
    left = joint.take_from_left(share)
    return Allocation((A - B) | left, (B - A) | (joint - left))
