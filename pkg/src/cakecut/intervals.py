"""Exact subsets of the unit cake [0, 1].

A piece of cake is a finite union of half-open intervals [lo, hi) with
rational endpoints.  Every :class:`IntervalSet` is kept in canonical form
(sorted, pairwise disjoint, non-adjacent), so structural equality is set
equality and every measure computation is exact.

Floats are rejected at the boundary: a float endpoint would smuggle binary
rounding into a representation whose whole point is exactness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or string like "3/4" (or "0.25") to Fraction.

    Floats are rejected with TypeError rather than silently converted.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(value, float):
        raise TypeError(
            "float endpoints are not exact; pass a string like '1/3' instead"
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p/q" (the denominator is kept even when 1)."""
    return f"{value.numerator}/{value.denominator}"


def _canonical(pairs: Iterable[tuple[RationalLike, RationalLike]]) -> tuple[tuple[Fraction, Fraction], ...]:
    cleaned: list[tuple[Fraction, Fraction]] = []
    for lo, hi in pairs:
        lo = to_fraction(lo)
        hi = to_fraction(hi)
        if lo > hi:
            raise ValueError(f"interval has lo > hi: [{lo}, {hi})")
        if lo < ZERO or hi > ONE:
            raise ValueError(f"interval [{lo}, {hi}) leaves the unit cake")
        if lo < hi:
            cleaned.append((lo, hi))
    cleaned.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalSet:
    """A canonical finite union of half-open subintervals of [0, 1).

    The constructor accepts any iterable of (lo, hi) endpoint pairs, merges
    overlapping or adjacent intervals, drops empty ones, and sorts the rest,
    so construction is normalization and normalizing twice changes nothing.
    """

    intervals: tuple[tuple[Fraction, Fraction], ...] = field(default=())

    def __init__(self, pairs: Iterable[tuple[RationalLike, RationalLike]] = ()):
        object.__setattr__(self, "intervals", _canonical(pairs))

    @staticmethod
    def _trusted(intervals: tuple[tuple[Fraction, Fraction], ...]) -> "IntervalSet":
        # fast path for operation results that are canonical by construction
        out = object.__new__(IntervalSet)
        object.__setattr__(out, "intervals", intervals)
        return out

    # -- queries ---------------------------------------------------------

    @property
    def measure(self) -> Fraction:
        """Total length, as an exact Fraction."""
        got = self.__dict__.get("_measure")
        if got is None:
            got = sum((hi - lo for lo, hi in self.intervals), start=ZERO)
            object.__setattr__(self, "_measure", got)
        return got

    def is_empty(self) -> bool:
        return not self.intervals

    def issubset(self, other: "IntervalSet") -> bool:
        """True when every point of self lies in other."""
        # canonical pieces are separated by gaps, so each piece of self
        # must sit inside a single piece of other
        cover = other.intervals
        j, n = 0, len(cover)
        for lo, hi in self.intervals:
            while j < n and cover[j][1] < hi:
                j += 1
            if j == n or cover[j][0] > lo:
                return False
        return True

    def __bool__(self) -> bool:
        return bool(self.intervals)

    # -- boolean algebra -------------------------------------------------

    def union(self, other: "IntervalSet") -> "IntervalSet":
        a, b = self.intervals, other.intervals
        if not a:
            return other
        if not b:
            return self
        # linear merge of two canonical sequences
        merged: list[list[Fraction]] = []
        i = j = 0
        while i < len(a) or j < len(b):
            if j >= len(b) or (i < len(a) and a[i][0] <= b[j][0]):
                lo, hi = a[i]
                i += 1
            else:
                lo, hi = b[j]
                j += 1
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return IntervalSet._trusted(tuple((lo, hi) for lo, hi in merged))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            # advance whichever interval ends first
            if a[i][1] <= b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet._trusted(tuple(out))

    def complement(self) -> "IntervalSet":
        """The rest of the unit cake."""
        out = []
        cursor = ZERO
        for lo, hi in self.intervals:
            if cursor < lo:
                out.append((cursor, lo))
            cursor = hi
        if cursor < ONE:
            out.append((cursor, ONE))
        return IntervalSet._trusted(tuple(out))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        cut = other.intervals
        out = []
        j, n = 0, len(cut)
        for lo, hi in self.intervals:
            start = lo
            while j < n and cut[j][1] <= start:
                j += 1
            # scan with a lookahead index: a cut piece reaching past hi
            # may also clip the next piece of self
            k = j
            while k < n and cut[k][0] < hi:
                if cut[k][0] > start:
                    out.append((start, cut[k][0]))
                if cut[k][1] > start:
                    start = cut[k][1]
                k += 1
            if start < hi:
                out.append((start, hi))
        return IntervalSet._trusted(tuple(out))

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.difference(other).union(other.difference(self))

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __xor__ = symmetric_difference

    # -- carving ---------------------------------------------------------

    def take_from_left(self, amount: RationalLike) -> "IntervalSet":
        """The leftmost sub-piece of the given measure.

        Raises ValueError when amount is negative or exceeds the measure.
        """
        m = to_fraction(amount)
        if m < ZERO or m > self.measure:
            raise ValueError(f"cannot take {m} from a set of measure {self.measure}")
        out = []
        remaining = m
        for lo, hi in self.intervals:
            if remaining == ZERO:
                break
            width = hi - lo
            if width <= remaining:
                out.append((lo, hi))
                remaining -= width
            else:
                out.append((lo, lo + remaining))
                remaining = ZERO
        return IntervalSet._trusted(tuple(out))

    def take_from_right(self, amount: RationalLike) -> "IntervalSet":
        """The rightmost sub-piece of the given measure."""
        m = to_fraction(amount)
        if m < ZERO or m > self.measure:
            raise ValueError(f"cannot take {m} from a set of measure {self.measure}")
        out = []
        remaining = m
        for lo, hi in reversed(self.intervals):
            if remaining == ZERO:
                break
            width = hi - lo
            if width <= remaining:
                out.append((lo, hi))
                remaining -= width
            else:
                out.append((hi - remaining, hi))
                remaining = ZERO
        out.reverse()
        return IntervalSet._trusted(tuple(out))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        """JSON-ready dict: {"intervals": [["p/q", "p/q"], ...]}."""
        return {
            "intervals": [
                [format_fraction(lo), format_fraction(hi)]
                for lo, hi in self.intervals
            ]
        }

    @classmethod
    def from_json(cls, obj: object) -> "IntervalSet":
        """Parse the dict form produced by :meth:`to_json`.

        Endpoints may be "p/q" strings or plain integers; floats are
        rejected.  Raises ValueError on any shape problem.
        """
        if not isinstance(obj, dict) or "intervals" not in obj:
            raise ValueError('expected an object of the form {"intervals": [...]}')
        raw = obj["intervals"]
        if not isinstance(raw, list):
            raise ValueError('"intervals" must be a list of [lo, hi] pairs')
        pairs = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ValueError(f"bad interval entry {entry!r}; expected [lo, hi]")
            try:
                pairs.append((to_fraction(entry[0]), to_fraction(entry[1])))
            except TypeError as exc:
                raise ValueError(str(exc)) from exc
        return cls(pairs)

    def __repr__(self) -> str:
        if not self.intervals:
            return "IntervalSet(empty)"
        body = " ".join(f"[{lo}, {hi})" for lo, hi in self.intervals)
        return f"IntervalSet({body})"


EMPTY = IntervalSet()
FULL = IntervalSet([(ZERO, ONE)])


def interval(lo: RationalLike, hi: RationalLike) -> IntervalSet:
    """Shorthand for a single interval [lo, hi)."""
    return IntervalSet([(lo, hi)])


def valuation(demand: IntervalSet, piece: IntervalSet) -> Fraction:
    """Value of a piece to an agent who wants exactly `demand`.

    Uniform preferences over the demanded region: |piece ∩ demand| / |demand|.
    Raises ValueError for a zero-measure demand, whose valuation is undefined.
    """
    total = demand.measure
    if total == ZERO:
        raise ValueError("valuation is undefined for a zero-measure demand")
    return demand.intersect(piece).measure / total
