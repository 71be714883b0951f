"""Trial batches, success-rate statistics, and sample-count comparisons.

Every trial derives its seed from the master seed and the trial index, runs
one algorithm on a fresh sampling view, and has its answers judged by the
true-mean oracles.  Reports are plain JSON-able dicts and byte-identical
across repeated runs of the same config.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Bandit, Instance
from .errors import ConfigMismatch, OracleScaleExceeded
from .geometry import min_hitting_set
from .oracles import check_eps_optimal, check_eps_pareto
from .search import (
    AnswerSet,
    max_range_search,
    naive_range_search,
    pareto_range_search,
)

ALGORITHMS = ("alg-rs", "alg-d-rs", "naive")


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Documented derivation of per-trial seeds: hash of (master, index)."""
    seq = np.random.SeedSequence((int(master_seed), int(trial_index)))
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    instance: Instance
    algorithm: str
    eps: float
    delta: float
    trials: int
    master_seed: int
    best_method: str = "median_elimination"
    label: str | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not (0.0 < self.eps < 1.0) or not (0.0 < self.delta < 1.0):
            raise ValueError("eps and delta must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trial_count must be >= 1")

    @property
    def name(self) -> str:
        return self.label or self.algorithm


def run_answer_set(config: ExperimentConfig, seed: int) -> AnswerSet:
    bandit = Bandit(config.instance, seed)
    if config.algorithm == "alg-rs":
        return max_range_search(bandit, config.eps, config.delta, config.best_method)
    if config.algorithm == "alg-d-rs":
        return pareto_range_search(bandit, config.eps, config.delta)
    return naive_range_search(bandit, config.eps, config.delta)


def verify_answers(
    instance: Instance, answers: AnswerSet, eps: float
) -> list[bool | None]:
    """Oracle verdict per interval; None marks an interval with no arms
    (excluded from PAC judgement)."""
    verdicts: list[bool | None] = []
    for idx, interval in enumerate(instance.intervals):
        answer = answers.answers[idx]
        if answer is None:
            verdicts.append(None)
        elif answers.mode == "max":
            verdicts.append(check_eps_optimal(instance, interval, answer, eps).ok)
        else:
            verdicts.append(check_eps_pareto(instance, interval, answer, eps).ok)
    return verdicts


def sample_bound_normalizer(instance: Instance, eps: float, delta: float) -> float:
    """The bound shape (n d / eps^2) ln(tau d / (eps delta)) that measured
    pull totals are reported against."""
    tau = max(min_hitting_set(instance.intervals).size, 1)
    n, d = instance.n, instance.dimension
    return (n * d / eps**2) * math.log(tau * d / (eps * delta))


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    per_trial: tuple[dict, ...]
    aggregate: dict

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "config": self.config,
            "per_trial": list(self.per_trial),
            "aggregate": self.aggregate,
        }


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Independent seeded trials of one algorithm, each verified against
    the true means.  Trials whose verification exceeds oracle scale are
    flagged and left out of the aggregate."""
    instance = config.instance
    per_trial = []
    successes = 0
    verified = 0
    pulls = []
    for i in range(config.trials):
        seed = trial_seed(config.master_seed, i)
        answers = run_answer_set(config, seed)
        record = {"trial": i, "seed": seed, "total_pulls": answers.total_pulls}
        try:
            verdicts = verify_answers(instance, answers, config.eps)
        except OracleScaleExceeded as exc:
            warnings.warn(f"trial {i} not verifiable: {exc}")
            record.update({"verdicts": None, "success": None, "excluded": True})
            per_trial.append(record)
            continue
        ok = all(v for v in verdicts if v is not None)
        record.update({"verdicts": verdicts, "success": ok})
        per_trial.append(record)
        verified += 1
        successes += int(ok)
        pulls.append(answers.total_pulls)

    mean_pulls = float(np.mean(pulls)) if pulls else math.nan
    aggregate = {
        "trials": config.trials,
        "verified_trials": verified,
        "success_fraction": (successes / verified) if verified else math.nan,
        "mean_pulls": mean_pulls,
        "bound_constant": mean_pulls
        / sample_bound_normalizer(instance, config.eps, config.delta),
    }
    cfg = {
        "algorithm": config.algorithm,
        "eps": config.eps,
        "delta": config.delta,
        "trials": config.trials,
        "master_seed": config.master_seed,
        "best_method": config.best_method,
        "label": config.name,
        "n": instance.n,
        "q": instance.q,
        "dimension": instance.dimension,
    }
    return ExperimentReport(cfg, tuple(per_trial), aggregate)


def compare_sample_complexity(configs: Sequence[ExperimentConfig]) -> list[dict]:
    """Mean pulls and fitted bound constant per config.  All configs must
    share one instance so the comparison is apples to apples."""
    if not configs:
        raise ValueError("need at least one config")
    first = configs[0].instance
    for cfg in configs[1:]:
        if cfg.instance != first:
            raise ConfigMismatch("configs do not share an instance")
    rows = []
    for cfg in configs:
        report = run_experiment(cfg)
        rows.append(
            {
                "label": cfg.name,
                "algorithm": cfg.algorithm,
                "eps": cfg.eps,
                "delta": cfg.delta,
                "trials": cfg.trials,
                "mean_pulls": report.aggregate["mean_pulls"],
                "bound_constant": report.aggregate["bound_constant"],
                "success_fraction": report.aggregate["success_fraction"],
            }
        )
    return rows


def render_table(rows: Sequence[dict]) -> str:
    headers = ["label", "algorithm", "eps", "delta", "trials", "mean_pulls", "bound_constant", "success_fraction"]
    lines = ["\t".join(headers)]
    for row in rows:
        lines.append(
            "\t".join(
                f"{row[h]:.6g}" if isinstance(row[h], float) else str(row[h])
                for h in headers
            )
        )
    return "\n".join(lines)
