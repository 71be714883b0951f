"""Data model, sampling oracle, and ledger accounting."""

import json
import math

import numpy as np
import pytest

from banditrange import (
    Arm,
    Bandit,
    BernoulliVector,
    Constant,
    Instance,
    Interval,
    InvalidArm,
    InvalidBudget,
    InvalidInterval,
    ShiftedBernoulliSum,
    instance_from_json,
)


def single_arm_instance(distribution):
    return Instance((Arm(0, 0.0, distribution),), (Interval(-1.0, 1.0),), distribution.dimension)


def test_constant_arm_always_returns_values_and_counts_one_pull():
    bandit = Bandit(single_arm_instance(Constant((0.7,))), seed=1)
    for _ in range(5):
        assert bandit.sample_arm(0) == pytest.approx([0.7])
    assert bandit.ledger.total == 5
    assert bandit.ledger.count(0) == 5


def test_degenerate_bernoulli_probabilities():
    bandit = Bandit(single_arm_instance(BernoulliVector((1.0, 0.0))), seed=3)
    draws = np.array([bandit.sample_arm(0) for _ in range(50)])
    assert np.all(draws[:, 0] == 1.0)
    assert np.all(draws[:, 1] == 0.0)


def test_law_of_large_numbers_bernoulli_quarter():
    # 100000 direct draws at seed 42; the long-run average must sit near 1/4.
    dist = BernoulliVector((0.25,))
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((42, 0))))
    mean = dist.draw(rng, 100000).mean()
    assert abs(mean - 0.25) < 0.01


def test_estimate_constant_arm_is_exact():
    bandit = Bandit(single_arm_instance(Constant((0.3, 0.9))), seed=1)
    est = bandit.estimate_mean(0, 5)
    assert est.mean == pytest.approx((0.3, 0.9))
    assert bandit.ledger.total == 5


def test_estimate_ledger_delta_is_exactly_pull_count():
    bandit = Bandit(single_arm_instance(BernoulliVector((0.4,))), seed=2)
    for k in (1, 7, 123):
        before = bandit.ledger.count(0)
        bandit.estimate_mean(0, k)
        assert bandit.ledger.count(0) - before == k
    assert bandit.ledger.total == 1 + 7 + 123


def test_estimate_bernoulli_half_close_at_10000_pulls():
    bandit = Bandit(single_arm_instance(BernoulliVector((0.5,))), seed=7)
    est = bandit.estimate_mean(0, 10000)
    assert abs(est.mean[0] - 0.5) < 0.02


@pytest.mark.parametrize(
    "dist",
    [
        BernoulliVector((0.25, 0.8)),
        Constant((0.3, 0.9)),
        ShiftedBernoulliSum(0.5, (0.2, 0.6)),
    ],
    ids=["bernoulli", "constant", "shifted-sum"],
)
def test_mean_fidelity_against_analytic_mean(dist):
    rng = np.random.default_rng(2024)
    draws = dist.draw(rng, 100000)
    tolerance = 3.0 * np.sqrt(dist.variance / 100000) + 0.005
    assert np.all(np.abs(draws.mean(axis=0) - dist.mean) <= tolerance)


def test_shifted_bernoulli_sum_support_and_mean():
    dist = ShiftedBernoulliSum(0.5, (0.25, 0.75))
    assert dist.mean == pytest.approx([0.375, 0.625])
    draws = dist.draw(np.random.default_rng(5), 500)
    assert set(np.unique(draws)) <= {0.0, 0.5, 1.0}
    assert np.all(draws >= 0.0) and np.all(draws <= 1.0)


def test_estimate_mean_matches_binomial_sufficient_statistic():
    # The estimate is the average of pull_count draws; for Bernoulli arms
    # equality in distribution means the long-run estimate matches the mean.
    bandit = Bandit(single_arm_instance(ShiftedBernoulliSum(0.5, (0.4,))), seed=11)
    est = bandit.estimate_mean(0, 200000)
    assert abs(est.mean[0] - 0.45) < 0.01


def test_same_seed_reproduces_draws_estimates_and_ledger():
    inst = Instance(
        (
            Arm(0, 0.0, BernoulliVector((0.3,))),
            Arm(1, 1.0, BernoulliVector((0.8,))),
        ),
        (Interval(-1.0, 2.0),),
        1,
    )
    results = []
    for _ in range(2):
        bandit = Bandit(inst, seed=99)
        run = [tuple(bandit.sample_arm(0)) for _ in range(3)]
        run.append(bandit.estimate_mean(1, 50).mean)
        run.append(tuple(sorted(bandit.ledger.snapshot().items())))
        results.append(run)
    assert results[0] == results[1]


def test_arm_substream_independent_of_pull_order():
    inst = Instance(
        (
            Arm(0, 0.0, BernoulliVector((0.3,))),
            Arm(1, 1.0, BernoulliVector((0.8,))),
        ),
        (Interval(-1.0, 2.0),),
        1,
    )
    first = Bandit(inst, seed=5)
    a_then_b = [first.sample_arm(0) for _ in range(4)]
    first.sample_arm(1)
    second = Bandit(inst, seed=5)
    second.sample_arm(1)  # interleave the other arm first
    b_then_a = [second.sample_arm(0) for _ in range(4)]
    assert np.array_equal(np.array(a_then_b), np.array(b_then_a))


def test_unknown_arm_and_zero_budget_raise():
    bandit = Bandit(single_arm_instance(Constant((0.5,))), seed=1)
    with pytest.raises(InvalidArm):
        bandit.sample_arm(7)
    with pytest.raises(InvalidBudget):
        bandit.estimate_mean(0, 0)


def test_estimates_clamped_to_unit_range():
    bandit = Bandit(single_arm_instance(BernoulliVector((1.0,))), seed=1)
    est = bandit.estimate_mean(0, 17)
    assert 0.0 <= est.mean[0] <= 1.0
    assert est.mean[0] == 1.0


def test_instance_json_roundtrip_preserves_everything():
    inst = Instance(
        (
            Arm(0, 0.5, BernoulliVector((0.2, 0.9))),
            Arm(1, 1.5, ShiftedBernoulliSum(0.5, (0.1, 0.3))),
            Arm(2, 2.5, Constant((0.4, 0.6))),
        ),
        (Interval(0.0, 2.0), Interval(1.0, 3.0)),
        2,
        hidden={"note": "oracle-only"},
    )
    back = instance_from_json(json.loads(json.dumps(inst.to_json())))
    assert back == inst
    assert back.hidden == {"note": "oracle-only"}


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance((), (Interval(0, 1),), 1)
    with pytest.raises(ValueError):
        Instance((Arm(1, 0.0, Constant((0.5,))),), (), 1)  # ids must start at 0
    with pytest.raises(ValueError):
        Instance((Arm(0, 0.0, Constant((0.5, 0.5))),), (), 1)  # dimension mismatch


def test_interval_requires_nonempty_interior():
    with pytest.raises(InvalidInterval):
        Interval(2.0, 2.0)
    with pytest.raises(InvalidInterval):
        Interval(3.0, 1.0)


def test_ledger_total_equals_sum_of_counters():
    bandit = Bandit(
        Instance(
            tuple(Arm(i, float(i), BernoulliVector((0.5,))) for i in range(4)),
            (Interval(-1.0, 5.0),),
            1,
        ),
        seed=13,
    )
    rng = np.random.default_rng(0)
    for _ in range(60):
        arm = int(rng.integers(0, 4))
        if rng.random() < 0.5:
            bandit.sample_arm(arm)
        else:
            bandit.estimate_mean(arm, int(rng.integers(1, 9)))
    snapshot = bandit.ledger.snapshot()
    assert bandit.ledger.total == sum(snapshot.values())


def test_distribution_component_range_validation():
    with pytest.raises(ValueError):
        BernoulliVector((1.2,))
    with pytest.raises(ValueError):
        ShiftedBernoulliSum(-0.1, (0.5,))
    with pytest.raises(ValueError):
        Constant(())
