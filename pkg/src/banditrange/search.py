"""Top-level PAC range searching.

Both solvers cut the line into slabs from a minimum hitting set of the
query intervals, harvest a candidate arm set per slab (best arm plus both
skylines for scalar weights; both skylines for vector weights), and answer
every query interval from the candidates it contains: the estimate argmax
in the scalar case, the estimate Pareto front in the vector case.  The
confidence budget splits evenly over the per-slab subroutine calls, so the
total failure probability stays below delta by a union bound.

A naive baseline that estimates every arm to uniform accuracy is included
for sample-count comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import Bandit, Estimate, Interval
from .errors import EmptyArmSet, WrongDimension
from .geometry import arms_in_interval, build_slabs, min_hitting_set
from .skyline import left_skyline, right_skyline

BEST_METHODS = ("median_elimination", "naive")


@dataclass(frozen=True)
class AnswerSet:
    """Per-interval results of one range-search run.

    ``answers`` holds one entry per query interval: an arm id (or None for
    an interval containing no arms) in ``max`` mode, a frozenset of arm ids
    (or None) in ``pareto`` mode.  ``pruned`` records, in pareto mode, the
    estimate-dominated candidates removed per interval.  Pull counts are
    deltas over the run, not the bandit's lifetime totals.
    """

    mode: str
    answers: tuple
    candidates: frozenset[int]
    pruned: tuple | None
    estimates: dict[int, Estimate]
    total_pulls: int
    per_arm_pulls: dict[int, int]
    tau: int
    subroutine_calls: int
    per_slab: tuple
    empty_intervals: tuple[int, ...]

    def to_json(self) -> dict:
        answers = [
            (sorted(a) if isinstance(a, frozenset) else a) for a in self.answers
        ]
        return {
            "schema": 1,
            "mode": self.mode,
            "answers": answers,
            "candidates": sorted(self.candidates),
            "pruned": None if self.pruned is None else [sorted(p) for p in self.pruned],
            "estimates": {str(a): e.to_json() for a, e in sorted(self.estimates.items())},
            "pulls": {
                "total": self.total_pulls,
                "per_arm": {str(a): c for a, c in sorted(self.per_arm_pulls.items())},
            },
            "tau": self.tau,
            "subroutine_calls": self.subroutine_calls,
            "per_slab": list(self.per_slab),
            "empty_intervals": list(self.empty_intervals),
        }


def naive_best_pull_count(eps: float, delta: float, n_arms: int) -> int:
    return math.ceil((2.0 / eps**2) * math.log(2.0 * n_arms / delta))


def median_elimination_pull_count(eps_l: float, delta_l: float) -> int:
    return math.ceil((4.0 / eps_l**2) * math.log(3.0 / delta_l))


def best_arm(
    bandit: Bandit,
    interval: Interval,
    eps: float,
    delta: float,
    method: str = "median_elimination",
) -> tuple[int, Estimate]:
    """An arm within eps of the best mean in the interval, with probability
    at least 1 - delta, plus an estimate accurate to eps on the same event.

    ``naive`` estimates every arm once and takes the argmax.  The default
    halves the field each round under the schedules eps_1 = eps/4,
    delta_1 = delta/2, eps_{l+1} = 3 eps_l / 4, delta_{l+1} = delta_l / 2,
    spending ceil((4/eps_l^2) ln(3/delta_l)) pulls per surviving arm.
    """
    if method not in BEST_METHODS:
        raise ValueError(f"method must be one of {BEST_METHODS}, got {method!r}")
    arms = sorted(arms_in_interval(bandit, interval))
    if not arms:
        raise EmptyArmSet(f"no arms inside [{interval.left}, {interval.right}]")

    if method == "naive":
        pulls = naive_best_pull_count(eps, delta, len(arms))
        estimates = {a: bandit.estimate_mean(a, pulls, accuracy=eps) for a in arms}
        winner = min(arms, key=lambda a: (-estimates[a].mean[0], a))
        return winner, estimates[winner]

    survivors = arms
    eps_l, delta_l = eps / 4.0, delta / 2.0
    estimates: dict[int, Estimate] = {}
    while len(survivors) > 1:
        pulls = median_elimination_pull_count(eps_l, delta_l)
        estimates = {
            a: bandit.estimate_mean(a, pulls, accuracy=eps) for a in survivors
        }
        ranked = sorted(survivors, key=lambda a: (-estimates[a].mean[0], a))
        survivors = sorted(ranked[: math.ceil(len(ranked) / 2)])
        eps_l, delta_l = 0.75 * eps_l, 0.5 * delta_l
    winner = survivors[0]
    if winner not in estimates:
        pulls = median_elimination_pull_count(eps / 4.0, delta / 2.0)
        estimates[winner] = bandit.estimate_mean(winner, pulls, accuracy=eps)
    return winner, estimates[winner]


def _merge_estimates(into: dict[int, Estimate], new: Mapping[int, Estimate]) -> None:
    # Keep the most accurate estimate per arm; first writer wins ties so the
    # merge is deterministic in slab/subroutine order.
    for arm_id, est in new.items():
        held = into.get(arm_id)
        if held is None:
            into[arm_id] = est
            continue
        old_acc = math.inf if held.accuracy is None else held.accuracy
        new_acc = math.inf if est.accuracy is None else est.accuracy
        if new_acc < old_acc:
            into[arm_id] = est


def _pareto_dominated(
    arm_ids: Sequence[int], estimates: Mapping[int, Estimate]
) -> set[int]:
    """Arms whose estimate is strictly below another's in every coordinate."""
    ids = sorted(arm_ids)
    if len(ids) < 2:
        return set()
    means = np.array([estimates[a].mean for a in ids])
    below = np.all(means[:, None, :] < means[None, :, :], axis=2)
    hit = np.any(below, axis=1)
    return {ids[k] for k in np.nonzero(hit)[0]}


def _ledger_delta(
    bandit: Bandit, before: Mapping[int, int]
) -> tuple[int, dict[int, int]]:
    after = bandit.ledger.snapshot()
    per_arm = {
        a: after[a] - before.get(a, 0)
        for a in after
        if after[a] != before.get(a, 0)
    }
    return sum(per_arm.values()), per_arm


def max_range_search(
    bandit: Bandit,
    eps: float,
    delta: float,
    best_method: str = "median_elimination",
) -> AnswerSet:
    """(eps, delta)-PAC range searching for scalar weights.

    Runs the best-arm subroutine and both skylines, each at accuracy eps/3
    and confidence delta / (3 (tau+1)), on every non-empty slab, then
    answers every interval with the estimate argmax over the candidates it
    contains (ties to the lower arm id).
    """
    if bandit.dimension != 1:
        raise WrongDimension(
            f"scalar solver needs dimension 1, instance has {bandit.dimension}"
        )
    before = bandit.ledger.snapshot()
    hs = min_hitting_set(bandit.intervals)
    decomposition = build_slabs(hs, intervals=bandit.intervals)
    tau = hs.size
    delta_sub = delta / (3.0 * (tau + 1))

    candidates: set[int] = set()
    estimates: dict[int, Estimate] = {}
    per_slab = []
    calls = 0
    for slab in decomposition.slabs:
        slab_arms = arms_in_interval(bandit, slab)
        if not slab_arms:
            per_slab.append(
                {"slab": [slab.left, slab.right], "arms": 0, "calls": []}
            )
            continue
        beta, beta_est = best_arm(bandit, slab, eps / 3.0, delta_sub, best_method)
        left_ids, left_est, _ = left_skyline(bandit, slab, eps / 3.0, delta_sub)
        right_ids, right_est, _ = right_skyline(bandit, slab, eps / 3.0, delta_sub)
        calls += 3
        candidates.add(beta)
        candidates.update(left_ids)
        candidates.update(right_ids)
        _merge_estimates(estimates, {beta: beta_est})
        _merge_estimates(estimates, left_est)
        _merge_estimates(estimates, right_est)
        per_slab.append(
            {
                "slab": [slab.left, slab.right],
                "arms": len(slab_arms),
                "calls": ["best", "left-skyline", "right-skyline"],
            }
        )

    answers = []
    empty = []
    for idx, interval in enumerate(bandit.intervals):
        in_interval = arms_in_interval(bandit, interval)
        if not in_interval:
            answers.append(None)
            empty.append(idx)
            continue
        local = sorted(candidates & in_interval)
        assert local, "non-empty interval must see at least one candidate"
        answers.append(min(local, key=lambda a: (-estimates[a].mean[0], a)))

    total, per_arm = _ledger_delta(bandit, before)
    return AnswerSet(
        mode="max",
        answers=tuple(answers),
        candidates=frozenset(candidates),
        pruned=None,
        estimates=estimates,
        total_pulls=total,
        per_arm_pulls=per_arm,
        tau=tau,
        subroutine_calls=calls,
        per_slab=tuple(per_slab),
        empty_intervals=tuple(empty),
    )


def pareto_range_search(bandit: Bandit, eps: float, delta: float) -> AnswerSet:
    """(eps, delta)-PAC range searching for d-dimensional weights.

    Runs both skylines at accuracy eps/3 and confidence delta / (2 (tau+1))
    per non-empty slab; each interval answers with the candidates it
    contains minus those Pareto-dominated under the estimates.
    """
    before = bandit.ledger.snapshot()
    hs = min_hitting_set(bandit.intervals)
    decomposition = build_slabs(hs, intervals=bandit.intervals)
    tau = hs.size
    delta_sub = delta / (2.0 * (tau + 1))

    candidates: set[int] = set()
    estimates: dict[int, Estimate] = {}
    per_slab = []
    calls = 0
    for slab in decomposition.slabs:
        slab_arms = arms_in_interval(bandit, slab)
        if not slab_arms:
            per_slab.append(
                {"slab": [slab.left, slab.right], "arms": 0, "calls": []}
            )
            continue
        left_ids, left_est, _ = left_skyline(bandit, slab, eps / 3.0, delta_sub)
        right_ids, right_est, _ = right_skyline(bandit, slab, eps / 3.0, delta_sub)
        calls += 2
        candidates.update(left_ids)
        candidates.update(right_ids)
        _merge_estimates(estimates, left_est)
        _merge_estimates(estimates, right_est)
        per_slab.append(
            {
                "slab": [slab.left, slab.right],
                "arms": len(slab_arms),
                "calls": ["left-skyline", "right-skyline"],
            }
        )

    answers = []
    pruned = []
    empty = []
    for idx, interval in enumerate(bandit.intervals):
        in_interval = arms_in_interval(bandit, interval)
        if not in_interval:
            answers.append(None)
            pruned.append(frozenset())
            empty.append(idx)
            continue
        local = candidates & in_interval
        assert local, "non-empty interval must see at least one candidate"
        dominated = _pareto_dominated(sorted(local), estimates)
        answers.append(frozenset(local - dominated))
        pruned.append(frozenset(dominated))

    total, per_arm = _ledger_delta(bandit, before)
    return AnswerSet(
        mode="pareto",
        answers=tuple(answers),
        candidates=frozenset(candidates),
        pruned=tuple(pruned),
        estimates=estimates,
        total_pulls=total,
        per_arm_pulls=per_arm,
        tau=tau,
        subroutine_calls=calls,
        per_slab=tuple(per_slab),
        empty_intervals=tuple(empty),
    )


def naive_range_search(bandit: Bandit, eps: float, delta: float) -> AnswerSet:
    """Uniform-sampling baseline: estimate every arm with
    ceil((2/eps^2) ln(2 n d / delta)) pulls, then answer each interval by
    estimate argmax (scalar) or estimate Pareto front (vector)."""
    before = bandit.ledger.snapshot()
    n, d = bandit.n, bandit.dimension
    pulls = math.ceil((2.0 / eps**2) * math.log(2.0 * n * d / delta))
    estimates = {
        a: bandit.estimate_mean(a, pulls, accuracy=eps) for a in bandit.arm_ids
    }

    mode = "max" if d == 1 else "pareto"
    answers = []
    pruned = [] if mode == "pareto" else None
    empty = []
    for idx, interval in enumerate(bandit.intervals):
        in_interval = sorted(arms_in_interval(bandit, interval))
        if not in_interval:
            answers.append(None)
            if pruned is not None:
                pruned.append(frozenset())
            empty.append(idx)
            continue
        if mode == "max":
            answers.append(
                min(in_interval, key=lambda a: (-estimates[a].mean[0], a))
            )
        else:
            dominated = _pareto_dominated(in_interval, estimates)
            answers.append(frozenset(in_interval) - dominated)
            pruned.append(frozenset(dominated))

    total, per_arm = _ledger_delta(bandit, before)
    return AnswerSet(
        mode=mode,
        answers=tuple(answers),
        candidates=frozenset(bandit.arm_ids),
        pruned=None if pruned is None else tuple(pruned),
        estimates=estimates,
        total_pulls=total,
        per_arm_pulls=per_arm,
        tau=min_hitting_set(bandit.intervals).size,
        subroutine_calls=0,
        per_slab=(),
        empty_intervals=tuple(empty),
    )
