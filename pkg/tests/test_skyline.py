"""Cube bucketing, schedules, pull counts, and the skyline subroutines."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banditrange import (
    Arm,
    Bandit,
    BernoulliVector,
    Constant,
    EmptyArmSet,
    Instance,
    Interval,
    InvalidEps,
    InvalidEta,
    check_skyline,
    cube_grid_count,
    cube_index,
    elimination_pull_count,
    final_pull_count,
    left_skyline,
    median_split,
    random_instance,
    right_skyline,
    schedule,
)


def constant_instance(points_and_weights, intervals=((-100.0, 100.0),)):
    arms = tuple(
        Arm(i, p, Constant(tuple(np.atleast_1d(w))))
        for i, (p, w) in enumerate(points_and_weights)
    )
    d = arms[0].distribution.dimension
    return Instance(arms, tuple(Interval(a, b) for a, b in intervals), d)


# ---------------------------------------------------------------- cubes


def test_cube_examples():
    assert cube_index((0.3,), 0.25).coords == (1,)  # lattice point 0.25
    assert cube_index((0.0, 0.0, 0.0), 0.1).coords == (0, 0, 0)
    assert cube_index((0.125,), 0.25).coords == (0,)  # exact tie goes down


def test_cube_rejects_bad_eta():
    with pytest.raises(InvalidEta):
        cube_index((0.5,), 0.0)
    with pytest.raises(InvalidEta):
        cube_index((0.5,), -0.2)


@given(
    st.floats(0.0, 1.0, allow_nan=False),
    st.floats(0.01, 1.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_cube_contains_its_value(value, eta):
    kappa = cube_index((value,), eta).coords[0]
    assert kappa >= 0
    assert abs(value - kappa * eta) <= eta / 2 + 1e-12


# ---------------------------------------------------------------- median split


def test_median_split_even_count():
    points = {1: 1.0, 2: 2.0, 3: 3.0, 4: 4.0}
    kept, dropped = median_split([1, 2, 3, 4], points)
    assert dropped == (1, 2)
    assert kept == (3, 4)


def test_median_split_odd_count_drops_floor_half():
    points = {1: 1.0, 2: 2.0, 3: 3.0}
    kept, dropped = median_split([1, 2, 3], points)
    assert dropped == (1,)
    assert kept == (2, 3)


def test_median_split_ties_break_by_id():
    points = {5: 1.0, 9: 1.0, 7: 1.0, 2: 1.0}
    kept, dropped = median_split([5, 9, 7, 2], points)
    assert dropped == (2, 5)
    assert kept == (7, 9)


def test_median_split_singleton_untouched():
    assert median_split([3], {3: 0.0}) == ((3,), ())


@given(st.sets(st.integers(0, 50), min_size=1, max_size=20))
@settings(max_examples=100, deadline=None)
def test_median_split_partitions_exactly(ids):
    points = {a: float(a % 5) for a in ids}
    kept, dropped = median_split(sorted(ids), points)
    assert len(dropped) == len(ids) // 2
    assert sorted(kept + dropped) == sorted(ids)
    worst_kept = min((points[a], a) for a in kept)
    assert all((points[a], a) < worst_kept for a in dropped)


# ---------------------------------------------------------------- schedules


def test_schedule_values_are_exact():
    eps, delta = 0.4, 0.2
    eps_1, delta_1 = eps / 5.0, delta / 2.0
    for t in range(1, 12):
        eps_t, delta_t = schedule(eps, delta, t)
        assert eps_t == (0.75 ** (t - 1)) * eps_1
        assert delta_t == (0.5 ** (t - 1)) * delta_1


def test_schedule_approximation_budget_sums_to_four_fifths():
    eps = 0.3
    total = sum(schedule(eps, 0.1, t)[0] for t in range(1, 400))
    assert total == pytest.approx(0.8 * eps, rel=1e-12)


def test_pull_count_formulas_match_hand_computation():
    # Inline recomputation, independent of the package helpers.
    eps_t, delta_t, d = 0.2, 0.05, 1
    cubes = math.ceil(4.0 / eps_t) ** d
    assert cube_grid_count(eps_t, d) == cubes == 20
    expected = math.ceil((8.0 / eps_t**2) * math.log(cubes * 50 * d / delta_t))
    assert elimination_pull_count(eps_t, delta_t, d) == expected == 1981
    expected_final = math.ceil((1.0 / eps_t**2) * math.log(37 * d / delta_t))
    assert final_pull_count(eps_t, delta_t, 37, d) == expected_final


# ---------------------------------------------------------------- skylines


def test_singleton_interval_returns_the_arm_with_final_stage_pulls():
    inst = constant_instance([(1.0, 0.6)])
    bandit = Bandit(inst, seed=4)
    eps, delta = 0.2, 0.1
    ids, estimates, trace = left_skyline(bandit, Interval(0.0, 2.0), eps, delta)
    assert ids == {0}
    assert trace.iterations == ()
    expected = math.ceil((1.0 / (eps / 5.0) ** 2) * math.log(1 * 1 / (delta / 2.0)))
    assert trace.final.pulls_per_arm == expected
    assert bandit.ledger.total == expected
    assert estimates[0].accuracy == eps


def test_decreasing_constant_weights_keep_every_arm():
    # Each arm is the unique non-dominated arm of its own suffix.
    inst = constant_instance([(1.0, 0.9), (2.0, 0.5), (3.0, 0.1)])
    bandit = Bandit(inst, seed=4)
    ids, _, _ = left_skyline(bandit, Interval(0.0, 4.0), 0.05, 0.1)
    assert ids == {0, 1, 2}
    assert check_skyline(inst, Interval(0.0, 4.0), ids, 0.05, "left").ok


def test_right_neighbor_dominance_prunes_left_arm():
    inst = constant_instance([(1.0, 0.1), (2.0, 0.9)])
    bandit = Bandit(inst, seed=4)
    ids, _, _ = left_skyline(bandit, Interval(0.0, 3.0), 0.05, 0.1)
    assert ids == {1}
    assert check_skyline(inst, Interval(0.0, 3.0), ids, 0.05, "left").ok


def test_right_skyline_equals_left_skyline_of_mirrored_points():
    weights = [0.2, 0.8, 0.5, 0.9]
    inst = constant_instance([(float(i), w) for i, w in enumerate(weights)])
    mirrored = constant_instance([(-float(i), w) for i, w in enumerate(weights)])
    window = Interval(-10.0, 10.0)
    right_ids, _, _ = right_skyline(Bandit(inst, seed=8), window, 0.1, 0.1)
    left_ids, _, _ = left_skyline(Bandit(mirrored, seed=8), window, 0.1, 0.1)
    assert right_ids == left_ids  # ids coincide under the mirror map


def test_right_skyline_keeps_prefix_optima():
    # Decreasing weights: the leftmost arm dominates every prefix.
    inst = constant_instance([(1.0, 0.9), (2.0, 0.5), (3.0, 0.1)])
    bandit = Bandit(inst, seed=4)
    ids, _, _ = right_skyline(bandit, Interval(0.0, 4.0), 0.05, 0.1)
    assert ids == {0}
    assert check_skyline(inst, Interval(0.0, 4.0), ids, 0.05, "right").ok


def test_no_returned_arm_is_estimate_dominated_by_a_survivor():
    # Constant arms make estimates exact, so the pruning rule is visible.
    rng = np.random.default_rng(12)
    pts = [(float(i), rng.uniform(0, 1, 2)) for i in range(15)]
    inst = constant_instance([(p, tuple(w)) for p, w in pts])
    bandit = Bandit(inst, seed=5)
    ids, estimates, _ = left_skyline(bandit, Interval(-1.0, 16.0), 0.2, 0.1)
    for z in ids:
        for x in range(15):
            if inst.points[x] >= inst.points[z]:
                assert not np.all(
                    inst.arm(x).true_mean > np.array(estimates[z].mean)
                )


def test_vector_weights_exercise_cube_bucketing():
    inst = random_instance(30, 1, 2, seed=77)
    bandit = Bandit(inst, seed=6)
    ids, estimates, trace = left_skyline(bandit, Interval(-1.0, 11.0), 0.3, 0.1)
    assert ids
    assert set(estimates) == ids
    verdicts = check_skyline(inst, Interval(-1.0, 11.0), ids, 0.3, "left")
    assert verdicts.ok


def test_empty_interval_raises():
    inst = constant_instance([(1.0, 0.5)])
    with pytest.raises(EmptyArmSet):
        left_skyline(Bandit(inst, seed=1), Interval(5.0, 6.0), 0.1, 0.1)


def test_parameter_validation():
    inst = constant_instance([(1.0, 0.5)])
    with pytest.raises(InvalidEps):
        left_skyline(Bandit(inst, seed=1), Interval(0.0, 2.0), 1.5, 0.1)
    with pytest.raises(InvalidEps):
        right_skyline(Bandit(inst, seed=1), Interval(0.0, 2.0), 0.1, 0.0)


def test_elimination_loop_runs_and_shrinks_geometrically():
    # eps = 1 puts the first threshold at 120 * 20 = 2400 < n = 2600.
    inst = random_instance(2600, 1, 1, seed=15)
    bandit = Bandit(inst, seed=16)
    ids, _, trace = left_skyline(bandit, Interval(-1.0, 11.0), 1.0, 0.1)
    assert len(trace.iterations) >= 1
    sizes = [r.active for r in trace.iterations] + [trace.final.active]
    for before, after in zip(sizes, sizes[1:]):
        assert 20 * after <= 11 * before
    for r in trace.iterations:
        cubes = math.ceil(4.0 / r.epsilon) ** 1
        assert r.pulls_per_arm == math.ceil(
            (8.0 / r.epsilon**2) * math.log(cubes * 50 / r.delta)
        )
