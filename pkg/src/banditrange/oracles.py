"""Ground-truth verifiers over the hidden means.

Everything here reads the true distribution means straight off the
:class:`Instance` (the privileged side of the API boundary) and checks
answers by exhaustive comparison.  The skyline verdict is computed twice,
once through the point-and-weight characterisation and once through the
per-suffix Pareto-set definition, and the two forms must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Instance, Interval
from .errors import InvalidWitness, OracleScaleExceeded, WrongDimension
from .geometry import arms_in_interval, candidate_points
from .skyline import CubeIndex, cube_index

BRUTE_FORCE_MAX_INTERVALS = 14


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome plus a witness describing the violation, if any."""

    ok: bool
    witness: tuple | None = None

    def __post_init__(self) -> None:
        if self.ok == (self.witness is not None):
            raise ValueError("witness must be present exactly when ok is False")

    def __bool__(self) -> bool:
        return self.ok


def true_means(instance: Instance, arm_ids: Iterable[int] | None = None) -> np.ndarray:
    """Matrix of hidden means, one row per requested arm id."""
    ids = sorted(instance.points) if arm_ids is None else list(arm_ids)
    by_id = {a.id: a.true_mean for a in instance.arms}
    return np.array([by_id[a] for a in ids])


def check_eps_optimal(
    instance: Instance, interval: Interval, arm_id: int, eps: float
) -> Verdict:
    """Is the arm's true mean within eps of the interval maximum (d = 1)?"""
    if instance.dimension != 1:
        raise WrongDimension("eps-optimality is a scalar-weight notion")
    members = arms_in_interval(instance, interval)
    if arm_id not in members:
        raise InvalidWitness(f"arm {arm_id} lies outside the queried interval")
    means = {a: float(instance.arm(a).true_mean[0]) for a in members}
    best = min(members, key=lambda a: (-means[a], a))
    if means[arm_id] >= means[best] - eps:
        return Verdict(True)
    return Verdict(False, ("not-eps-optimal", arm_id, best))


def check_eps_pareto(
    instance: Instance, interval: Interval, arm_set: Iterable[int], eps: float
) -> Verdict:
    """Both halves of eps-Pareto optimality against the true means:
    (a) every arm in the interval is covered within eps componentwise by
    some member, and (b) no member is beaten by eps componentwise."""
    chosen = sorted(set(arm_set))
    members = sorted(arms_in_interval(instance, interval))
    outside = [a for a in chosen if a not in set(members)]
    if outside:
        raise InvalidWitness(f"arms {outside} lie outside the queried interval")
    mean = {a: instance.arm(a).true_mean for a in members}
    for b in members:
        if not any(np.all(mean[a] >= mean[b] - eps) for a in chosen):
            return Verdict(False, ("coverage", b))
    for a in chosen:
        for b in members:
            # b == a never counts as a dominator; with eps > 0 the guard is
            # a no-op, and it keeps the eps = 0 specialisation classical.
            if b != a and np.all(mean[b] >= mean[a] + eps):
                return Verdict(False, ("dominated", a, b))
    return Verdict(True)


def _skyline_prop_form(
    members: Sequence[int],
    chosen: Sequence[int],
    mean: dict[int, np.ndarray],
    pos: dict[int, float],
    eps: float,
) -> Verdict:
    chosen_set = set(chosen)
    for b in members:
        covered = any(
            pos[beta] >= pos[b] and np.all(mean[beta] >= mean[b] - eps)
            for beta in chosen
        )
        if not covered:
            return Verdict(False, ("coverage", b))
    for beta in chosen:
        for x in members:
            if x != beta and pos[x] >= pos[beta] and np.all(mean[x] >= mean[beta] + eps):
                return Verdict(False, ("dominated", beta, x))
    return Verdict(True)


def _pareto_set_exists(
    suffix: Sequence[int],
    pool: Sequence[int],
    mean: dict[int, np.ndarray],
    eps: float,
) -> bool:
    """Does some subset of ``pool`` form an eps-Pareto optimal set for the
    arm set ``suffix``?  The maximal usable subset is the pool members not
    beaten by eps within the suffix: any valid set lies inside it, and
    enlarging a valid set with such members keeps both halves valid, so it
    suffices to test that one."""
    keep = [
        a
        for a in pool
        if not any(x != a and np.all(mean[x] >= mean[a] + eps) for x in suffix)
    ]
    return all(
        any(np.all(mean[a] >= mean[b] - eps) for a in keep) for b in suffix
    )


def _skyline_def_form(
    members: Sequence[int],
    chosen: Sequence[int],
    mean: dict[int, np.ndarray],
    pos: dict[int, float],
    eps: float,
) -> bool:
    chosen_set = set(chosen)
    for b in members:
        suffix = [x for x in members if pos[x] >= pos[b]]
        pool = [x for x in suffix if x in chosen_set]
        if not _pareto_set_exists(suffix, pool, mean, eps):
            return False
    for beta in chosen:
        optimal_somewhere = False
        for b in members:
            if pos[b] > pos[beta]:
                continue
            suffix = [x for x in members if pos[x] >= pos[b]]
            if not any(
                x != beta and np.all(mean[x] >= mean[beta] + eps) for x in suffix
            ):
                optimal_somewhere = True
                break
        if not optimal_somewhere:
            return False
    return True


def skyline_verdict_forms(
    instance: Instance,
    interval: Interval,
    arm_set: Iterable[int],
    eps: float,
    side: str = "left",
) -> tuple[Verdict, bool]:
    """The skyline verdict in both its forms: the point-and-weight
    characterisation (with witness) and the per-suffix Pareto-set
    definition (boolean).  They are provably equivalent; ``check_skyline``
    asserts it on every call."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    chosen = sorted(set(arm_set))
    members = sorted(arms_in_interval(instance, interval))
    outside = [a for a in chosen if a not in set(members)]
    if outside:
        raise InvalidWitness(f"arms {outside} lie outside the queried interval")
    sign = 1.0 if side == "left" else -1.0
    pos = {a: sign * instance.points[a] for a in members}
    mean = {a: instance.arm(a).true_mean for a in members}
    prop = _skyline_prop_form(members, chosen, mean, pos, eps)
    definition = _skyline_def_form(members, chosen, mean, pos, eps)
    return prop, definition


def check_skyline(
    instance: Instance,
    interval: Interval,
    arm_set: Iterable[int],
    eps: float,
    side: str = "left",
) -> Verdict:
    """Skyline verdict against true means (positions negated for the right
    side), cross-checked between its two equivalent formulations."""
    prop, definition = skyline_verdict_forms(instance, interval, arm_set, eps, side)
    if prop.ok != definition:
        raise RuntimeError(
            "skyline verifier forms disagree: "
            f"characterisation={prop.ok} definition={definition}"
        )
    return prop


def brute_min_hitting_set(intervals: Sequence[Interval]) -> int:
    """Exact minimum hitting-set size by exhaustive search over the
    canonical candidate midpoints (dynamic program over interval subsets)."""
    if len(intervals) > BRUTE_FORCE_MAX_INTERVALS:
        raise OracleScaleExceeded(
            f"{len(intervals)} intervals exceed the exhaustive budget of "
            f"{BRUTE_FORCE_MAX_INTERVALS}"
        )
    unique = sorted({(iv.left, iv.right) for iv in intervals})
    q = len(unique)
    if q == 0:
        return 0
    covers = []
    for c in candidate_points(intervals):
        mask = 0
        for i, (left, right) in enumerate(unique):
            if left < c < right:
                mask |= 1 << i
        if mask:
            covers.append(mask)
    covers = sorted(set(covers))
    full = (1 << q) - 1
    best = {0: 0}
    frontier = {0}
    size = 0
    while full not in best:
        size += 1
        next_frontier = set()
        for state in frontier:
            for mask in covers:
                new = state | mask
                if new not in best:
                    best[new] = size
                    next_frontier.add(new)
        if not next_frontier:
            raise RuntimeError("some interval admits no stabbing candidate")
        frontier = next_frontier
    return best[full]


def representative_arms(
    instance: Instance, arm_ids: Iterable[int], eta: float
) -> dict[CubeIndex, int]:
    """Instrumentation only: per cube of the true-mean lattice, the member
    arm with the largest position (ties to the larger id).  Algorithms never
    see this; it mirrors the analysis-side construct."""
    reps: dict[CubeIndex, int] = {}
    points = instance.points
    for a in sorted(arm_ids):
        cube = cube_index(instance.arm(a).true_mean, eta)
        held = reps.get(cube)
        if held is None or (points[a], a) > (points[held], held):
            reps[cube] = a
    return reps
