"""Social welfare of the aligned family, and how close it comes to optimal.

Everything here runs in binary64 floats; the exact-arithmetic core stays
upstream and values cross into float space at this module's boundary.
Utilities are normalized (each player values his full demand at 1), so
social welfare lives in [0, 2] and the optimum admits a closed form:

    sw_max(a, b) = 2                              when a + b <= 1
                 = 1 + (1 - min(a, b)) / max(a, b)  otherwise

The efficiency ratio eta = sw / sw_max of the theta = 1/2 member is bounded
below by 1 / (8 - 4*sqrt(3)) ~ 0.933, attained at (1, sqrt(3)-1) and its
mirror image; those two profiles double as cheap certificates that every
other family member does worse.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Iterator

from .aligned import AlignedProfile, Theta, f_theta, fraction_grid
from .intervals import ONE, ZERO, RationalLike, format_fraction, to_fraction

SQRT3 = math.sqrt(3.0)

# Worst-case efficiency of the theta = 1/2 member: 1 / (8 - 4*sqrt(3)).
HALF_THETA_RATIO = 1.0 / (8.0 - 4.0 * SQRT3)

# The two profiles witnessing the worst case, as floats.
PROBE_WIDE_A = (1.0, SQRT3 - 1.0)
PROBE_WIDE_B = (SQRT3 - 1.0, 1.0)


def social_welfare(theta: float, a: float, b: float) -> float:
    """Welfare of the theta member at float demand sizes (a, b), both > 0."""
    if a + b <= 1.0:
        return 2.0
    c = min(a, max(1.0 - b, theta))
    d = 1.0 - c
    return c / a + d / b


def max_social_welfare(a: float, b: float) -> float:
    """Optimal welfare: serve the narrower (hungrier per unit) player first."""
    if a + b <= 1.0:
        return 2.0
    return 1.0 + (1.0 - min(a, b)) / max(a, b)


def eta_ratio(theta: float, a: float, b: float) -> float:
    """Efficiency ratio sw / sw_max in float space."""
    return social_welfare(theta, a, b) / max_social_welfare(a, b)


def sw_aligned(theta: Theta, profile: AlignedProfile) -> float:
    """Welfare of f_theta at an exact profile.  Demands must be nonzero."""
    if profile.a == ZERO or profile.b == ZERO:
        raise ValueError("welfare is undefined when a demand has measure zero")
    if profile.a + profile.b <= ONE:
        return 2.0
    return social_welfare(float(theta.value), float(profile.a), float(profile.b))


def sw_max_aligned(profile: AlignedProfile) -> float:
    """Optimal welfare at an exact profile.  Demands must be nonzero."""
    if profile.a == ZERO or profile.b == ZERO:
        raise ValueError("welfare is undefined when a demand has measure zero")
    if profile.a + profile.b <= ONE:
        return 2.0
    return max_social_welfare(float(profile.a), float(profile.b))


def eta(theta: Theta, profile: AlignedProfile) -> float:
    """Efficiency of f_theta at an exact profile; exactly 1 off the overlap."""
    if profile.a == ZERO or profile.b == ZERO:
        raise ValueError("welfare is undefined when a demand has measure zero")
    if profile.a + profile.b <= ONE:
        return 1.0
    return sw_aligned(theta, profile) / sw_max_aligned(profile)


class WelfareCase(enum.Enum):
    """Which ordering of {a, 1-a, b, 1-b, 1/2} a profile falls into.

    The four overlap cases follow the closed-form welfare table for the
    theta = 1/2 member; boundaries are assigned to the lowest-numbered case
    (the formulas agree there).
    """

    DISJOINT = "disjoint"   # a + b <= 1: no contested cake
    NARROW_B = "1"          # b <= 1/2 <= a: player II fully inside his piece
    WIDE_BOTH_B_SMALLER = "2"   # 1/2 <= b <= a: both truncated at the split
    NARROW_A = "3"          # a <= 1/2 <= b: player I fully inside his piece
    WIDE_BOTH_A_SMALLER = "4"   # 1/2 <= a < b: both truncated at the split


HALF = Fraction(1, 2)


def classify_case(profile: AlignedProfile) -> WelfareCase:
    a, b = profile.a, profile.b
    if a + b <= ONE:
        return WelfareCase.DISJOINT
    if b <= HALF:
        return WelfareCase.NARROW_B
    if a <= HALF:
        return WelfareCase.NARROW_A
    if b <= a:
        return WelfareCase.WIDE_BOTH_B_SMALLER
    return WelfareCase.WIDE_BOTH_A_SMALLER


@dataclass(frozen=True)
class WelfareReport:
    """One profile's welfare snapshot under a given family member."""

    theta: Theta
    profile: AlignedProfile
    sw_mechanism: float
    sw_max: float
    eta: float
    case_label: WelfareCase


def welfare_report(theta: Theta, profile: AlignedProfile) -> WelfareReport:
    return WelfareReport(
        theta=theta,
        profile=profile,
        sw_mechanism=sw_aligned(theta, profile),
        sw_max=sw_max_aligned(profile),
        eta=eta(theta, profile),
        case_label=classify_case(profile),
    )


def sweep(theta: Theta, grid_step: RationalLike = Fraction(1, 100)) -> Iterator[WelfareReport]:
    """Welfare reports over the positive demand lattice, row by row."""
    axis = [x for x in fraction_grid(grid_step) if x > ZERO]
    for a in axis:
        for b in axis:
            yield welfare_report(theta, AlignedProfile(a, b))


def _lattice_scale(grid_step) -> int:
    step = grid_step if isinstance(grid_step, float) else float(to_fraction(grid_step))
    scale = round(1.0 / step)
    if scale < 2:
        raise ValueError("grid step must be well below 1")
    return scale


def eta_min(
    theta: Theta,
    grid_step: RationalLike | float = Fraction(1, 100),
    refine_iters: int = 6,
) -> tuple[float, AlignedProfile]:
    """Worst-case efficiency of f_theta over overlapping demands.

    Scans the decimal lattice of pitch `grid_step` restricted to a + b > 1,
    then refines: each round shrinks the pitch tenfold and rescans a window
    around the incumbent.  The scan runs a from 1 downward and b upward and
    replaces the incumbent only on strict improvement, so of the two
    mirror-image minimizers the wide-a one is reported.

    Returns the minimal ratio and the exact lattice profile attaining it.
    """
    theta_f = float(theta.value)
    scale = _lattice_scale(grid_step)

    best = math.inf
    best_ij = (scale, scale)
    for i in range(scale, 0, -1):
        for j in range(scale - i + 1, scale + 1):
            v = eta_ratio(theta_f, i / scale, j / scale)
            if v < best:
                best = v
                best_ij = (i, j)

    for _ in range(max(0, refine_iters)):
        scale *= 10
        ci, cj = best_ij[0] * 10, best_ij[1] * 10
        best = math.inf
        best_ij = None
        for i in range(min(scale, ci + 10), max(1, ci - 10) - 1, -1):
            j_lo = max(1, cj - 10, scale - i + 1)
            for j in range(j_lo, min(scale, cj + 10) + 1):
                v = eta_ratio(theta_f, i / scale, j / scale)
                if v < best:
                    best = v
                    best_ij = (i, j)
        assert best_ij is not None, "refinement window lost the feasible region"

    i, j = best_ij
    return best, AlignedProfile(Fraction(i, scale), Fraction(j, scale))


@dataclass(frozen=True)
class ThetaSweepRow:
    """Worst-case efficiency of one family member, plus the two certificates.

    eta_probe_wide_a evaluates the profile (1, sqrt(3)-1), which punishes
    theta above 1/2; eta_probe_wide_b evaluates (sqrt(3)-1, 1), which
    punishes theta below 1/2.
    """

    theta: Fraction
    eta_min: float
    argmin: AlignedProfile
    eta_probe_wide_a: float
    eta_probe_wide_b: float


def theta_sweep(
    grid_step_theta: RationalLike = Fraction(1, 20),
    grid_step_ab: RationalLike | float = Fraction(1, 100),
    refine_iters: int = 6,
) -> list[ThetaSweepRow]:
    """eta_min across the family, one row per lattice theta."""
    rows = []
    for theta_value in fraction_grid(grid_step_theta):
        theta = Theta(theta_value)
        theta_f = float(theta_value)
        value, argmin = eta_min(theta, grid_step_ab, refine_iters)
        rows.append(
            ThetaSweepRow(
                theta=theta_value,
                eta_min=value,
                argmin=argmin,
                eta_probe_wide_a=eta_ratio(theta_f, *PROBE_WIDE_A),
                eta_probe_wide_b=eta_ratio(theta_f, *PROBE_WIDE_B),
            )
        )
    return rows


def format_real(x: float) -> str:
    """Reals are printed with 9 significant digits everywhere."""
    return f"{x:.9g}"


WELFARE_CSV_HEADER = ["theta", "a", "b", "sw_mech", "sw_max", "eta", "case"]


def write_welfare_csv(reports: Iterable[WelfareReport], stream: IO[str]) -> int:
    """Stream welfare reports as CSV rows.  Returns the row count."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(WELFARE_CSV_HEADER)
    count = 0
    for r in reports:
        writer.writerow(
            [
                format_fraction(r.theta.value),
                format_fraction(r.profile.a),
                format_fraction(r.profile.b),
                format_real(r.sw_mechanism),
                format_real(r.sw_max),
                format_real(r.eta),
                r.case_label.value,
            ]
        )
        count += 1
    return count


THETA_SWEEP_CSV_HEADER = [
    "theta",
    "eta_min",
    "argmin_a",
    "argmin_b",
    "eta_probe_wide_a",
    "eta_probe_wide_b",
]


def write_theta_sweep_csv(rows: Iterable[ThetaSweepRow], stream: IO[str]) -> int:
    """One CSV row per family member.  Returns the row count."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(THETA_SWEEP_CSV_HEADER)
    count = 0
    for r in rows:
        writer.writerow(
            [
                format_fraction(r.theta),
                format_real(r.eta_min),
                format_fraction(r.argmin.a),
                format_fraction(r.argmin.b),
                format_real(r.eta_probe_wide_a),
                format_real(r.eta_probe_wide_b),
            ]
        )
        count += 1
    return count


def randomized_pot_bound(p: float, tau: float) -> float:
    """Efficiency guarantee of the lottery that plays the split tau with
    probability p against each pure dictatorship with probability (1-p)/2.

    Increasing in p, so the uniform-over-players cap p = 1/2 is the best
    admissible weight; minimizing over tau at p = 1/2 lands on tau = 2 -
    sqrt(3) and the same 0.933 bound the deterministic family attains.
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p must lie in [0, 1/2], got {p}")
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"tau must lie in [0, 1), got {tau}")
    return (p / (1.0 - tau) + 1.0 - p) / (1.0 + tau)


def minimize_pot_bound(
    p: float, resolution: float = 1e-3, refine_iters: int = 6
) -> tuple[float, float]:
    """Grid-plus-refinement minimizer of the lottery bound over tau.

    Scans [0, 0.99] at the given pitch, then shrinks tenfold around the
    incumbent each round.  Returns (tau_star, bound).
    """
    scale = round(1.0 / resolution)
    if scale < 2:
        raise ValueError("resolution must be well below 1")
    hi = (scale * 99) // 100

    best = math.inf
    best_j = 0
    for j in range(0, hi + 1):
        v = randomized_pot_bound(p, j / scale)
        if v < best:
            best = v
            best_j = j

    for _ in range(max(0, refine_iters)):
        scale *= 10
        hi = (scale * 99) // 100
        center = best_j * 10
        best = math.inf
        best_j = None
        for j in range(max(0, center - 10), min(hi, center + 10) + 1):
            v = randomized_pot_bound(p, j / scale)
            if v < best:
                best = v
                best_j = j
        assert best_j is not None
    return best_j / scale, best
