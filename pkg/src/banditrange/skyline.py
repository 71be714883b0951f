"""PAC skyline computation for d-dimensional weights.

Within an interval, the left skyline keeps, for every arm b, some arm to
b's right whose weight is within eps componentwise (coverage), while no
returned arm is beaten by eps componentwise by anything to its right
(non-domination).  The algorithm alternates estimation and elimination:

  1. start with all arms in the interval, eps_1 = eps/5, delta_1 = delta/2;
  2. while more than 120 * ceil(4/eps_t)^d arms remain, estimate every arm
     to sup-norm accuracy about eps_t/4, bucket the estimates into lattice
     cubes of side eps_t/4, and inside every crowded cube drop the half of
     the arms with the smaller positions; then shrink eps by 3/4 and halve
     delta;
  3. estimate the survivors once more and discard every arm whose estimate
     is strictly below some weakly-right arm in every coordinate.

Each elimination round removes at least 9/20 of the active arms, so the
loop's total sampling cost telescopes.  The right skyline is the same
computation run on negated positions.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Bandit, Estimate, Interval
from .errors import EmptyArmSet, InvalidEps, InvalidEta
from .geometry import arms_in_interval


@dataclass(frozen=True)
class CubeIndex:
    """Lattice coordinates of the cube a weight vector falls into."""

    coords: tuple[int, ...]


def cube_index(values: Sequence[float], eta: float) -> CubeIndex:
    """Cube of side ``eta`` containing ``values``, ties broken downward.

    Coordinate k maps to the nearest integer multiple of eta; a value
    sitting exactly halfway between two lattice points joins the lower one,
    which fixes the cover's overlapping faces deterministically.
    """
    if eta <= 0:
        raise InvalidEta(f"eta must be positive, got {eta}")
    return CubeIndex(tuple(math.ceil(v / eta - 0.5) for v in values))


def lattice_point(index: CubeIndex, eta: float) -> np.ndarray:
    return np.array([k * eta for k in index.coords])


def cube_grid_count(eps_t: float, d: int) -> int:
    """Cube budget ceil(4/eps_t)^d used by the loop threshold, the pull
    counts, and the crowding threshold."""
    return math.ceil(4.0 / eps_t) ** d


def elimination_pull_count(eps_t: float, delta_t: float, d: int) -> int:
    """Per-arm pulls in elimination round t."""
    return math.ceil(
        (8.0 / eps_t**2) * math.log(cube_grid_count(eps_t, d) * 50.0 * d / delta_t)
    )


def final_pull_count(eps_t: float, delta_t: float, active: int, d: int) -> int:
    """Per-arm pulls for the post-loop pruning estimates."""
    return math.ceil((1.0 / eps_t**2) * math.log(active * d / delta_t))


def schedule(eps: float, delta: float, t: int) -> tuple[float, float]:
    """(eps_t, delta_t) for iteration t >= 1."""
    return (0.75 ** (t - 1)) * (eps / 5.0), (0.5 ** (t - 1)) * (delta / 2.0)


def median_split(
    arm_ids: Iterable[int], points: Mapping[int, float]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split arms at the median position: (kept, dropped).

    Arms sort by (position, id) so ties are deterministic; exactly
    floor(k/2) arms are dropped.  A singleton is kept whole.
    """
    ordered = sorted(arm_ids, key=lambda a: (points[a], a))
    if len(ordered) < 2:
        return tuple(ordered), ()
    half = len(ordered) // 2
    return tuple(ordered[half:]), tuple(ordered[:half])


@dataclass(frozen=True)
class IterationRecord:
    t: int
    epsilon: float
    delta: float
    active: int
    pulls_per_arm: int
    dropped: int

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "active": self.active,
            "pulls_per_arm": self.pulls_per_arm,
            "dropped": self.dropped,
        }


@dataclass(frozen=True)
class FinalRecord:
    t: int
    epsilon: float
    delta: float
    active: int
    pulls_per_arm: int
    pruned: int

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "active": self.active,
            "pulls_per_arm": self.pulls_per_arm,
            "pruned": self.pruned,
        }


@dataclass(frozen=True)
class SkylineRunTrace:
    """Per-iteration schedule, pull, and elimination record of one run."""

    iterations: tuple[IterationRecord, ...]
    final: FinalRecord

    def to_json(self) -> dict:
        return {
            "iterations": [r.to_json() for r in self.iterations],
            "final": self.final.to_json(),
        }


def _estimate_dominated(
    arm_ids: Sequence[int],
    estimates: Mapping[int, Estimate],
    points: Mapping[int, float],
) -> set[int]:
    """Arms whose estimate is strictly below, in every coordinate, the
    estimate of some arm at a weakly larger position."""
    ids = list(arm_ids)
    if len(ids) < 2:
        return set()
    pos = np.array([points[a] for a in ids])
    means = np.array([estimates[a].mean for a in ids])
    dominated: set[int] = set()
    block = 256
    for start in range(0, len(ids), block):
        stop = min(start + block, len(ids))
        right_of = pos[None, :] >= pos[start:stop, None]
        strictly_below = np.all(means[None, :, :] > means[start:stop, None, :], axis=2)
        hit = np.any(right_of & strictly_below, axis=1)
        dominated.update(ids[start + k] for k in np.nonzero(hit)[0])
    return dominated


def _validate_params(eps: float, delta: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise InvalidEps(f"eps must lie in (0, 1], got {eps}")
    if not (0.0 < delta < 1.0):
        raise InvalidEps(f"delta must lie in (0, 1), got {delta}")


def _skyline_core(
    bandit: Bandit,
    arm_ids: Sequence[int],
    points: Mapping[int, float],
    eps: float,
    delta: float,
) -> tuple[set[int], dict[int, Estimate], SkylineRunTrace]:
    d = bandit.dimension
    active = sorted(arm_ids)
    t = 1
    eps_t, delta_t = schedule(eps, delta, t)
    records: list[IterationRecord] = []

    while len(active) > 120 * cube_grid_count(eps_t, d):
        pulls = elimination_pull_count(eps_t, delta_t, d)
        estimates = {
            a: bandit.estimate_mean(a, pulls, accuracy=eps_t / 4.0) for a in active
        }
        eta = eps_t / 4.0
        buckets: dict[CubeIndex, list[int]] = defaultdict(list)
        for a in active:
            buckets[cube_index(estimates[a].mean, eta)].append(a)
        crowded = len(active) / (10.0 * cube_grid_count(eps_t, d))
        dropped: set[int] = set()
        for key in sorted(buckets, key=lambda c: c.coords):
            members = buckets[key]
            if len(members) > crowded:
                _, low_half = median_split(members, points)
                dropped.update(low_half)
        survivors = [a for a in active if a not in dropped]
        # Geometric shrink: crowded cubes hold >= 9/10 of the arms and shed
        # half each, so at most 11/20 survive any executed round.
        assert 20 * len(survivors) <= 11 * len(active), (
            f"elimination round {t} kept {len(survivors)} of {len(active)} arms"
        )
        records.append(
            IterationRecord(t, eps_t, delta_t, len(active), pulls, len(dropped))
        )
        active = survivors
        t += 1
        eps_t, delta_t = schedule(eps, delta, t)

    pulls = final_pull_count(eps_t, delta_t, len(active), d)
    estimates = {a: bandit.estimate_mean(a, pulls, accuracy=eps) for a in active}
    pruned = _estimate_dominated(active, estimates, points)
    returned = {a for a in active if a not in pruned}
    trace = SkylineRunTrace(
        tuple(records),
        FinalRecord(t, eps_t, delta_t, len(active), pulls, len(pruned)),
    )
    return returned, {a: estimates[a] for a in sorted(returned)}, trace


def left_skyline(
    bandit: Bandit, interval: Interval, eps: float, delta: float
) -> tuple[set[int], dict[int, Estimate], SkylineRunTrace]:
    """Arms forming an eps-left-skyline of the interval, with probability
    at least 1 - delta, together with their final estimates and the run
    trace.  Exported estimates carry the conservative accuracy tag eps."""
    _validate_params(eps, delta)
    arm_ids = arms_in_interval(bandit, interval)
    if not arm_ids:
        raise EmptyArmSet(f"no arms inside [{interval.left}, {interval.right}]")
    return _skyline_core(bandit, arm_ids, bandit.points, eps, delta)


def right_skyline(
    bandit: Bandit, interval: Interval, eps: float, delta: float
) -> tuple[set[int], dict[int, Estimate], SkylineRunTrace]:
    """Mirror image of :func:`left_skyline`: the same computation on
    negated positions yields an eps-right-skyline."""
    _validate_params(eps, delta)
    arm_ids = arms_in_interval(bandit, interval)
    if not arm_ids:
        raise EmptyArmSet(f"no arms inside [{interval.left}, {interval.right}]")
    mirrored = {a: -p for a, p in bandit.points.items()}
    return _skyline_core(bandit, arm_ids, mirrored, eps, delta)
