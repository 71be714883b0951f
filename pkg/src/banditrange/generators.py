"""Instance generators: random benchmarks and the hard lower-bound family.

The hard family embeds many independent find-the-biased-arm games into one
range-search instance.  Groups of m arms share a point; within each group
one secretly chosen arm's mean exceeds the others by 2*eps in every
coordinate.  Group means step by 4*eps per coordinate following the
base-(1/(8 eps)) digits of the group index, nested intervals [0, t] make
each suffix's newest special arm the unique near-optimal answer, and tau
translated copies force any hitting set to spend one point per copy.

Rewards must stay inside [0, 1] although the construction's raw draw is a
sum of two Bernoullis.  The generator therefore doubles both Bernoulli
parameters (base 1/2 + 4 eps instead of 1/4 + 2 eps, shifts 8 eps k instead
of 4 eps k) and reports half the sum, which preserves the construction's
exact means 1/4 + 4 eps k (+ 2 eps on the special arm) with support
{0, 1/2, 1}.  The gap parameter is therefore unchanged; the hidden section
records it as ``eps_effective``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Arm, BernoulliVector, Constant, Instance, Interval, ShiftedBernoulliSum
from .errors import DecodeFailure, InvalidEps, OracleScaleExceeded
from .geometry import arms_in_interval, min_hitting_set
from .oracles import (
    BRUTE_FORCE_MAX_INTERVALS,
    Verdict,
    brute_min_hitting_set,
    check_eps_pareto,
)
from .search import AnswerSet


def random_instance(
    n: int,
    q: int,
    d: int,
    seed: int,
    kind: str = "bernoulli",
    span: tuple[float, float] = (0.0, 10.0),
) -> Instance:
    """Arms at uniform points with uniform mean vectors, plus q random
    intervals over the same span.  Fully determined by the seed."""
    if kind not in ("bernoulli", "constant"):
        raise ValueError(f"kind must be 'bernoulli' or 'constant', got {kind!r}")
    rng = np.random.default_rng(seed)
    lo, hi = span
    points = rng.uniform(lo, hi, size=n)
    arms = []
    for i in range(n):
        weights = tuple(rng.uniform(0.0, 1.0, size=d))
        dist = BernoulliVector(weights) if kind == "bernoulli" else Constant(weights)
        arms.append(Arm(i, float(points[i]), dist))
    intervals = []
    while len(intervals) < q:
        a, b = rng.uniform(lo, hi, size=2)
        if a == b:
            continue
        intervals.append(Interval(min(a, b), max(a, b)))
    return Instance(tuple(arms), tuple(intervals), d)


@dataclass(frozen=True)
class GameSpec:
    """Parameters of the embedded guessing game: m arms per group, the
    total group count, the gap parameter, and the hidden assignment."""

    m: int
    group_count: int
    eps: float
    c: tuple[int, ...]


def _digits_base(value: int, base: int, width: int) -> tuple[int, ...]:
    # Most significant digit first.
    digits = []
    for j in range(width):
        digits.append((value // base ** (width - 1 - j)) % base)
    return tuple(digits)


def _lower_bound_core(
    m: int, eps: float, tau: int, d: int, seed: int, min_base: int
) -> tuple[Instance, GameSpec]:
    if m < 1:
        raise ValueError(f"need at least one arm per group, got m={m}")
    if tau < 1:
        raise ValueError(f"need at least one copy, got tau={tau}")
    raw = 1.0 / (8.0 * eps)
    base = round(raw)
    if abs(raw - base) > 1e-9:
        raise InvalidEps(f"1/(8 eps) must be an integer, got {raw}")
    if base < min_base:
        raise InvalidEps(f"1/(8 eps) must be >= {min_base}, got {base}")

    groups_per_copy = base**d
    group_count = tau * groups_per_copy
    rng = np.random.default_rng(seed)
    c = tuple(int(x) for x in rng.integers(0, m, size=group_count))

    shift = 1.0 + groups_per_copy
    arms: list[Arm] = []
    groups: list[list[int]] = []
    intervals: list[Interval] = []
    for copy in range(tau):
        offset = copy * shift
        for t in range(1, groups_per_copy + 1):
            g = copy * groups_per_copy + (t - 1)
            digits = _digits_base(t - 1, base, d)
            shifts = tuple(8.0 * eps * k for k in digits)
            members = []
            for j in range(m):
                bern_base = 0.5 + (4.0 * eps if j == c[g] else 0.0)
                arms.append(
                    Arm(len(arms), offset + t, ShiftedBernoulliSum(bern_base, shifts))
                )
                members.append(arms[-1].id)
            groups.append(members)
        intervals.extend(
            Interval(offset, offset + t) for t in range(1, groups_per_copy + 1)
        )

    hidden = {
        "family": "lower_bound",
        "m": m,
        "eps_effective": eps,
        "tau": tau,
        "d": d,
        "seed": int(seed),
        "c": list(c),
        "groups": [list(g) for g in groups],
        "groups_per_copy": groups_per_copy,
    }
    instance = Instance(tuple(arms), tuple(intervals), d, hidden)
    return instance, GameSpec(m, group_count, eps, c)


def lower_bound_instance_1d(
    m: int, eps: float, tau: int, seed: int
) -> tuple[Instance, GameSpec]:
    """Scalar-weight hard family: tau translated copies of 1/(8 eps) nested
    intervals, each group's means stepping by 4*eps.  Requires 1/(8 eps) to
    be a positive integer."""
    return _lower_bound_core(m, eps, tau, 1, seed, min_base=1)


def lower_bound_instance_dd(
    m: int, eps: float, tau: int, d: int, seed: int
) -> tuple[Instance, GameSpec]:
    """Vector-weight hard family: (1/(8 eps))^d groups per copy, coordinate
    k of group t stepping by 4*eps times the k-th base-(1/(8 eps)) digit of
    t-1.  Requires 1/(8 eps) to be an integer >= 2."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return _lower_bound_core(m, eps, tau, d, seed, min_base=2)


def _group_interval(instance: Instance, member_ids: list[int]) -> Interval:
    # Groups share a point and consecutive groups sit >= 1 apart, so a
    # half-unit window isolates exactly this group.
    p = instance.points[member_ids[0]]
    return Interval(p - 0.5, p + 0.5)


def certify_lower_bound_instance(
    instance: Instance, hidden_c: tuple[int, ...], eps: float
) -> Verdict:
    """Analytic checks that a generated instance realises the construction:

    1. its minimum hitting set has size tau;
    2. within each group, the special arm is the unique eps-Pareto optimum;
    3. no arm of an earlier group eps-dominates a later special arm
       (same copy);
    4. the j-th interval of each copy contains exactly that copy's first j
       groups.
    """
    hidden = instance.hidden or {}
    tau = hidden.get("tau")
    groups = hidden.get("groups")
    per_copy = hidden.get("groups_per_copy")
    if tau is None or groups is None or per_copy is None:
        raise ValueError("instance lacks the generator's hidden section")

    if instance.q <= BRUTE_FORCE_MAX_INTERVALS:
        tau_star = brute_min_hitting_set(instance.intervals)
    else:
        tau_star = min_hitting_set(instance.intervals).size
    if tau_star != tau:
        return Verdict(False, ("hitting-set-size", tau_star, tau))

    special = [grp[hidden_c[g]] for g, grp in enumerate(groups)]
    means = {a.id: a.true_mean for a in instance.arms}
    for g, grp in enumerate(groups):
        window = _group_interval(instance, grp)
        if not check_eps_pareto(instance, window, {special[g]}, eps).ok:
            return Verdict(False, ("special-not-optimal", g, special[g]))
        for a in grp:
            if a == special[g]:
                continue
            if not any(np.all(means[y] >= means[a] + eps) for y in grp):
                return Verdict(False, ("ordinary-not-dominated", g, a))

    for copy_start in range(0, len(groups), per_copy):
        copy_groups = groups[copy_start : copy_start + per_copy]
        for later in range(1, len(copy_groups)):
            target = means[special[copy_start + later]]
            for earlier in range(later):
                for a in copy_groups[earlier]:
                    if np.all(means[a] >= target - eps):
                        return Verdict(
                            False,
                            ("earlier-group-dominates", copy_start + earlier, a),
                        )

    for copy in range(tau):
        for j in range(1, per_copy + 1):
            interval = instance.intervals[copy * per_copy + (j - 1)]
            expected = {
                a
                for grp in groups[copy * per_copy : copy * per_copy + j]
                for a in grp
            }
            if arms_in_interval(instance, interval) != expected:
                return Verdict(False, ("interval-content", copy, j))

    return Verdict(True)


def decode_game_answer(answer_set: AnswerSet, instance: Instance) -> tuple[int, ...]:
    """Recover the game guess from a range-search output: intersect each
    group's own interval answer with the group and report the member's
    within-group index.  Raises :class:`DecodeFailure` when an intersection
    is not a single arm."""
    hidden = instance.hidden or {}
    groups = hidden.get("groups")
    per_copy = hidden.get("groups_per_copy")
    if groups is None or per_copy is None:
        raise ValueError("instance lacks the generator's hidden section")
    guess = []
    for g, grp in enumerate(groups):
        answer = answer_set.answers[g]  # interval order matches group order
        if answer is None:
            raise DecodeFailure(f"interval for group {g} received no answer")
        chosen = {answer} if isinstance(answer, int) else set(answer)
        overlap = chosen & set(grp)
        if len(overlap) != 1:
            raise DecodeFailure(
                f"group {g} intersects the answer in {sorted(overlap)}"
            )
        guess.append(grp.index(overlap.pop()))
    return tuple(guess)
