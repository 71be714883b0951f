"""Minimum hitting sets for intervals and the slab decomposition they induce.

A hitting set stabs every query interval strictly inside its interior.  Its
tau points cut the real line into tau+1 closed slabs whose interiors are
pairwise disjoint; because each interval contains a hitting point in its
interior, every interval meets at least two consecutive slabs.  Hitting
points are normalised to midpoints between consecutive distinct interval
endpoints: any interior point can slide to such a midpoint without changing
which open intervals it stabs, which makes the candidate set finite and lets
a greedy sweep (rightmost candidate inside each unhit interval, intervals
ordered by right endpoint) attain the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Instance, Interval
from .errors import InvalidHittingSet


@dataclass(frozen=True)
class HittingSet:
    """Sorted points, one strictly inside every interval they were built for."""

    points: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def hits(self, interval: Interval) -> bool:
        return any(interval.left < e < interval.right for e in self.points)


@dataclass(frozen=True)
class SlabDecomposition:
    """The tau+1 closed slabs induced by tau hitting points.

    Slabs are ordered by left endpoint, interiors pairwise disjoint, union
    the whole line.  A point equal to a boundary belongs to both adjacent
    slabs.
    """

    boundaries: tuple[float, ...]
    slabs: tuple[Interval, ...]

    def cover_span(self, interval: Interval) -> tuple[int, int]:
        """Indices (x, y) of the leftmost/rightmost slab meeting ``interval``."""
        hit = [j for j, s in enumerate(self.slabs) if s.intersects(interval)]
        return hit[0], hit[-1]


def candidate_points(intervals: Sequence[Interval]) -> list[float]:
    """Canonical stabbing candidates: midpoints between consecutive distinct
    endpoint values, plus one sentinel left of the minimum and right of the
    maximum endpoint."""
    if not intervals:
        return []
    endpoints = sorted({iv.left for iv in intervals} | {iv.right for iv in intervals})
    mids = [(a + b) / 2.0 for a, b in zip(endpoints, endpoints[1:])]
    return [endpoints[0] - 1.0] + mids + [endpoints[-1] + 1.0]


def min_hitting_set(intervals: Sequence[Interval]) -> HittingSet:
    """Greedy minimum hitting set over the canonical candidate midpoints.

    Duplicated intervals are collapsed first.  An empty collection yields an
    empty hitting set (tau = 0).
    """
    unique = sorted({(iv.left, iv.right) for iv in intervals})
    if not unique:
        return HittingSet(())
    candidates = candidate_points(intervals)
    chosen: list[float] = []
    # Sweep by right endpoint; the latest chosen point is the largest, and
    # every chosen point is below the current right endpoint, so one
    # comparison decides whether the interval is already hit.
    for left, right in sorted(unique, key=lambda iv: (iv[1], iv[0])):
        if chosen and left < chosen[-1] < right:
            continue
        inside = [c for c in candidates if left < c < right]
        chosen.append(inside[-1])
    return HittingSet(tuple(chosen))


def build_slabs(
    hitting_set: HittingSet, intervals: Sequence[Interval] | None = None
) -> SlabDecomposition:
    """Slabs (-inf, e_1], [e_1, e_2], ..., [e_tau, +inf) from sorted points.

    With zero points the whole line is a single slab.  When ``intervals``
    is given, the decomposition is checked to satisfy the two-slab cover
    property for each of them.
    """
    points = tuple(float(e) for e in hitting_set.points)
    for a, b in zip(points, points[1:]):
        if not a < b:
            raise InvalidHittingSet(f"points must be strictly increasing, got {points}")
    bounds = (-math.inf,) + points + (math.inf,)
    slabs = tuple(Interval(lo, hi) for lo, hi in zip(bounds, bounds[1:]))
    decomposition = SlabDecomposition(points, slabs)
    if intervals is not None:
        for iv in intervals:
            x, y = decomposition.cover_span(iv)
            if not x < y:
                raise InvalidHittingSet(
                    f"interval [{iv.left}, {iv.right}] meets only slab {x}; "
                    "the hitting set misses its interior"
                )
    return decomposition


def arms_in_interval(source: Instance | Mapping[int, float] | object, interval: Interval) -> set[int]:
    """Ids of arms whose point lies in the closed interval.

    ``source`` is anything with a ``points`` mapping (an Instance or a
    Bandit view) or the mapping itself.  Closed containment means an arm
    sitting exactly on a slab boundary belongs to both adjacent slabs.
    """
    points = source if isinstance(source, Mapping) else source.points
    return {a for a, p in points.items() if interval.contains(p)}
