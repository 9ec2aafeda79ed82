"""The one-parameter family of truthful mechanisms for aligned demands.

In the aligned model player I wants the prefix [0, a], player II wants the
suffix [1-b, 1], and an allocation hands player I a prefix [0, c] and player
II a suffix [1-d, 1].  The family is indexed by a split point theta:

    c = min(a, max(1-b, theta))
    d = min(b, max(1-a, 1-theta))

Both players always receive their whole demand when the demands do not
overlap, and together they always cover exactly the demanded cake.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .intervals import ONE, ZERO, RationalLike, to_fraction


def _unit_fraction(value: RationalLike, name: str) -> Fraction:
    out = to_fraction(value)
    if out < ZERO or out > ONE:
        raise ValueError(f"{name} must lie in [0, 1], got {out}")
    return out


@dataclass(frozen=True)
class Theta:
    """Family index: the split point handed out when both players want everything."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", _unit_fraction(self.value, "theta"))


@dataclass(frozen=True)
class AlignedProfile:
    """Reported demand sizes: player I wants [0, a], player II wants [1-b, 1]."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _unit_fraction(self.a, "a"))
        object.__setattr__(self, "b", _unit_fraction(self.b, "b"))


@dataclass(frozen=True)
class AlignedAllocation:
    """Allocated prefix/suffix sizes.  Feasibility (c + d <= 1) is enforced."""

    c: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _unit_fraction(self.c, "c"))
        object.__setattr__(self, "d", _unit_fraction(self.d, "d"))
        if self.c + self.d > ONE:
            raise ValueError(
                f"pieces overlap: c + d = {self.c + self.d} exceeds the cake"
            )


AlignedOracle = Callable[[AlignedProfile], AlignedAllocation]


def mu(theta: Theta, b: RationalLike) -> Fraction:
    """Size handed to player I when he asks for everything: max(1-b, theta)."""
    return max(ONE - _unit_fraction(b, "b"), theta.value)


def nu(theta: Theta, a: RationalLike) -> Fraction:
    """Size handed to player II when he asks for everything: max(1-a, 1-theta)."""
    return max(ONE - _unit_fraction(a, "a"), ONE - theta.value)


def f_theta(theta: Theta, profile: AlignedProfile) -> AlignedAllocation:
    """Evaluate the family member at `profile`.

    Each player's size is his demand truncated at what he would get by
    demanding the whole cake; mu(1) + nu(1) = 1 makes the two truncations
    compatible, and c + d = min(a + b, 1) exactly.
    """
    c = min(profile.a, mu(theta, profile.b))
    d = min(profile.b, nu(theta, profile.a))
    return AlignedAllocation(c, d)


@dataclass(frozen=True)
class NotInFamily:
    """Certificate that an oracle is not f_theta for any theta.

    `reason` is "wasteful" when the oracle burned demanded cake or handed a
    player more than he asked for, and "mismatch" when it is non-wasteful
    but disagrees with the family member pinned down by its own full-demand
    behaviour.
    """

    profile: AlignedProfile
    got: AlignedAllocation
    expected: AlignedAllocation
    reason: str


def fraction_grid(step: RationalLike) -> list[Fraction]:
    """The lattice {0, step, 2*step, ...} capped at 1, always containing 1."""
    s = to_fraction(step)
    if s <= ZERO:
        raise ValueError("grid step must be positive")
    out = []
    k = 0
    while k * s < ONE:
        out.append(k * s)
        k += 1
    out.append(ONE)
    return out


def characterize(
    oracle: AlignedOracle,
    grid_step: RationalLike = Fraction(1, 100),
    positive_only: bool = False,
) -> Union[Theta, NotInFamily]:
    """Identify which family member an aligned oracle is, if any.

    The oracle's full-demand answer fixes the only candidate theta; the grid
    (with theta and 1-theta spliced in, so the family's breakpoints are
    probed exactly) is then checked profile by profile.  Returns the first
    violation in lexicographic (a, b) order, or the identified Theta.

    `positive_only` drops zero-size demands from the grid, for oracles whose
    domain requires every player to want something.
    """
    probe = oracle(AlignedProfile(ONE, ONE))
    theta_hat = Theta(probe.c)

    points = set(fraction_grid(grid_step))
    points.add(theta_hat.value)
    points.add(ONE - theta_hat.value)
    if positive_only:
        points.discard(ZERO)
    axis = sorted(points)

    for a in axis:
        for b in axis:
            profile = AlignedProfile(a, b)
            got = oracle(profile)
            expected = f_theta(theta_hat, profile)
            if got.c > a or got.d > b or got.c + got.d != min(a + b, ONE):
                return NotInFamily(profile, got, expected, "wasteful")
            if got != expected:
                return NotInFamily(profile, got, expected, "mismatch")
    return theta_hat
