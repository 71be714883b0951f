"""Problem instances, reward distributions, and the sampling oracle.

An instance is a set of arms on the real line plus a collection of query
intervals.  Each arm hides a reward distribution whose mean (its *weight*)
lies in [0,1]^d.  Algorithms never touch the distributions directly: they
operate on a :class:`Bandit` view that exposes only the public geometry
(points, intervals, dimension) and the sampling operations, while counting
every draw in a :class:`SampleLedger`.  Verification code reads the true
means straight off the :class:`Instance`.

Determinism contract: each arm draws from its own counter-based substream
keyed by ``(seed, arm_id)``, so the interleaving of pulls across arms never
changes an individual arm's draw sequence, and a fixed (instance, seed,
call sequence) always reproduces identical draws, estimates, and ledgers.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import ClassVar, Mapping, Sequence, Union

import numpy as np

from .errors import InvalidArm, InvalidBudget, InvalidInterval


def _unit_tuple(values: Sequence[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not out:
        raise ValueError(f"{what} must be non-empty")
    for v in out:
        if not (0.0 <= v <= 1.0) or math.isnan(v):
            raise ValueError(f"{what} component {v} outside [0, 1]")
    return out


@dataclass(frozen=True)
class BernoulliVector:
    """d independent Bernoulli coordinates; the mean equals the probabilities."""

    probabilities: tuple[float, ...]

    kind: ClassVar[str] = "bernoulli_vector"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "probabilities", _unit_tuple(self.probabilities, "probabilities")
        )

    @property
    def dimension(self) -> int:
        return len(self.probabilities)

    @property
    def mean(self) -> np.ndarray:
        return np.array(self.probabilities)

    @property
    def variance(self) -> np.ndarray:
        p = self.mean
        return p * (1.0 - p)

    def draw(self, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        p = self.mean
        return (rng.random((size, self.dimension)) < p).astype(float)

    def mean_of_draws(self, rng: np.random.Generator, count: int) -> np.ndarray:
        # Binomial counts are the sufficient statistic of `count` Bernoulli
        # draws, so this is distributionally exact and O(1) per call.
        return rng.binomial(count, self.mean) / count

    def to_json(self) -> dict:
        return {"kind": self.kind, "probabilities": list(self.probabilities)}


@dataclass(frozen=True)
class Constant:
    """Degenerate distribution that always reports its mean."""

    values: tuple[float, ...]

    kind: ClassVar[str] = "constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _unit_tuple(self.values, "values"))

    @property
    def dimension(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> np.ndarray:
        return np.array(self.values)

    @property
    def variance(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def draw(self, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        return np.tile(self.mean, (size, 1))

    def mean_of_draws(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.mean

    def to_json(self) -> dict:
        return {"kind": self.kind, "values": list(self.values)}


@dataclass(frozen=True)
class ShiftedBernoulliSum:
    """Half the sum of a shared Bernoulli(base) and per-coordinate Bernoulli(shifts).

    One draw takes alpha ~ Ber(base) once and beta_k ~ Ber(shifts[k])
    independently, reporting ((alpha + beta_1)/2, ..., (alpha + beta_d)/2).
    Support is {0, 1/2, 1} per coordinate and the mean is (base + shifts)/2,
    so means in [1/4, 3/4] are realised with rewards inside [0, 1].  The
    shared alpha correlates coordinates within a single draw.
    """

    base: float
    shifts: tuple[float, ...]

    kind: ClassVar[str] = "shifted_bernoulli_sum"

    def __post_init__(self) -> None:
        b = float(self.base)
        if not (0.0 <= b <= 1.0):
            raise ValueError(f"base {b} outside [0, 1]")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "shifts", _unit_tuple(self.shifts, "shifts"))

    @property
    def dimension(self) -> int:
        return len(self.shifts)

    @property
    def mean(self) -> np.ndarray:
        return (self.base + np.array(self.shifts)) / 2.0

    @property
    def variance(self) -> np.ndarray:
        s = np.array(self.shifts)
        return (self.base * (1.0 - self.base) + s * (1.0 - s)) / 4.0

    def draw(self, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        alpha = (rng.random(size) < self.base).astype(float)
        beta = (rng.random((size, self.dimension)) < np.array(self.shifts)).astype(float)
        return (alpha[:, None] + beta) / 2.0

    def mean_of_draws(self, rng: np.random.Generator, count: int) -> np.ndarray:
        alpha_total = rng.binomial(count, self.base)
        beta_totals = rng.binomial(count, np.array(self.shifts))
        return (alpha_total + beta_totals) / (2.0 * count)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base, "shifts": list(self.shifts)}


RewardDistribution = Union[BernoulliVector, Constant, ShiftedBernoulliSum]

_DISTRIBUTION_KINDS = {
    BernoulliVector.kind: lambda d: BernoulliVector(tuple(d["probabilities"])),
    Constant.kind: lambda d: Constant(tuple(d["values"])),
    ShiftedBernoulliSum.kind: lambda d: ShiftedBernoulliSum(d["base"], tuple(d["shifts"])),
}


def distribution_from_json(data: Mapping) -> RewardDistribution:
    try:
        factory = _DISTRIBUTION_KINDS[data["kind"]]
    except KeyError as exc:
        raise ValueError(f"unknown distribution kind {data.get('kind')!r}") from exc
    return factory(data)


@dataclass(frozen=True)
class Interval:
    """Closed interval [left, right] with non-empty interior."""

    left: float
    right: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", float(self.left))
        object.__setattr__(self, "right", float(self.right))
        if not self.left < self.right:
            raise InvalidInterval(f"need left < right, got [{self.left}, {self.right}]")

    def contains(self, point: float) -> bool:
        return self.left <= point <= self.right

    def intersects(self, other: "Interval") -> bool:
        return self.left <= other.right and other.left <= self.right

    def to_json(self) -> dict:
        return {"left": self.left, "right": self.right}


@dataclass(frozen=True)
class Arm:
    """A sampleable reward source pinned to a location on the real line."""

    id: int
    point: float
    distribution: RewardDistribution

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "point", float(self.point))
        if math.isnan(self.point) or math.isinf(self.point):
            raise ValueError(f"arm {self.id} point must be finite")

    @property
    def true_mean(self) -> np.ndarray:
        return self.distribution.mean


@dataclass(frozen=True)
class Instance:
    """Arms plus query intervals.  ``hidden`` carries oracle-only metadata.

    Arm ids must be exactly 0..n-1.  Query intervals may be empty (the
    degenerate no-query case); algorithms then answer nothing.
    """

    arms: tuple[Arm, ...]
    intervals: tuple[Interval, ...]
    dimension: int
    hidden: dict | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arms", tuple(self.arms))
        object.__setattr__(self, "intervals", tuple(self.intervals))
        if not self.arms:
            raise ValueError("instance needs at least one arm")
        ids = sorted(a.id for a in self.arms)
        if ids != list(range(len(self.arms))):
            raise ValueError("arm ids must be exactly 0..n-1")
        for a in self.arms:
            if a.distribution.dimension != self.dimension:
                raise ValueError(
                    f"arm {a.id} has dimension {a.distribution.dimension}, "
                    f"instance declares {self.dimension}"
                )

    @property
    def n(self) -> int:
        return len(self.arms)

    @property
    def q(self) -> int:
        return len(self.intervals)

    @property
    def points(self) -> dict[int, float]:
        return {a.id: a.point for a in self.arms}

    def arm(self, arm_id: int) -> Arm:
        for a in self.arms:
            if a.id == arm_id:
                return a
        raise InvalidArm(f"no arm with id {arm_id}")

    def to_json(self, include_hidden: bool = True) -> dict:
        data = {
            "schema": 1,
            "dimension": self.dimension,
            "arms": [
                {"id": a.id, "point": a.point, "distribution": a.distribution.to_json()}
                for a in self.arms
            ],
            "intervals": [iv.to_json() for iv in self.intervals],
        }
        if include_hidden and self.hidden is not None:
            data["hidden"] = self.hidden
        return data


def instance_from_json(data: Mapping) -> Instance:
    arms = tuple(
        Arm(a["id"], a["point"], distribution_from_json(a["distribution"]))
        for a in data["arms"]
    )
    intervals = tuple(Interval(iv["left"], iv["right"]) for iv in data["intervals"])
    return Instance(arms, intervals, int(data["dimension"]), data.get("hidden"))


def save_instance(path, instance: Instance) -> None:
    with open(path, "w") as fh:
        json.dump(instance.to_json(), fh, indent=2)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))


class SampleLedger:
    """Exact per-arm pull counters.  Increments are lock-guarded so
    concurrent pulls of distinct arms stay consistent; counters never
    decrease and the total always equals the sum of the per-arm counts."""

    def __init__(self) -> None:
        self._counts: dict[int, int] = {}
        self._total = 0
        self._lock = threading.Lock()

    def record(self, arm_id: int, pulls: int = 1) -> None:
        if pulls < 1:
            raise InvalidBudget(f"cannot record {pulls} pulls")
        with self._lock:
            self._counts[arm_id] = self._counts.get(arm_id, 0) + pulls
            self._total += pulls

    @property
    def total(self) -> int:
        return self._total

    def count(self, arm_id: int) -> int:
        return self._counts.get(arm_id, 0)

    def snapshot(self) -> dict[int, int]:
        with self._lock:
            return dict(self._counts)


@dataclass(frozen=True)
class Estimate:
    """Empirical mean of an arm together with the accuracy its producer
    guarantees on its success event (sup-norm radius), if any."""

    arm_id: int
    mean: tuple[float, ...]
    accuracy: float | None = None

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.mean)

    def to_json(self) -> dict:
        return {"arm_id": self.arm_id, "mean": list(self.mean), "accuracy": self.accuracy}


class Bandit:
    """Sampling view of an instance: public geometry plus the reward oracle.

    Exposes points, intervals, and dimension, but not the distributions or
    their means.  All PAC algorithms in this package run on this view only;
    anything that needs ground truth goes through the oracles module with
    the full :class:`Instance` in hand.
    """

    def __init__(self, instance: Instance, seed: int) -> None:
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self.seed = seed
        self.dimension = instance.dimension
        self.intervals = instance.intervals
        self.points: dict[int, float] = instance.points
        self.arm_ids: tuple[int, ...] = tuple(sorted(self.points))
        self.ledger = SampleLedger()
        self._distributions = {a.id: a.distribution for a in instance.arms}
        self._streams: dict[int, np.random.Generator] = {}

    @property
    def n(self) -> int:
        return len(self.arm_ids)

    def _stream(self, arm_id: int) -> np.random.Generator:
        gen = self._streams.get(arm_id)
        if gen is None:
            # Counter-based substream per (seed, arm_id): pull order across
            # arms cannot perturb an individual arm's draw sequence.
            gen = np.random.Generator(
                np.random.Philox(np.random.SeedSequence((self.seed, arm_id)))
            )
            self._streams[arm_id] = gen
        return gen

    def _distribution(self, arm_id: int) -> RewardDistribution:
        try:
            return self._distributions[arm_id]
        except KeyError as exc:
            raise InvalidArm(f"no arm with id {arm_id}") from exc

    def sample_arm(self, arm_id: int) -> np.ndarray:
        """One independent draw from the arm's distribution; ledger +1."""
        dist = self._distribution(arm_id)
        value = dist.draw(self._stream(arm_id), 1)[0]
        self.ledger.record(arm_id, 1)
        return value

    def estimate_mean(
        self, arm_id: int, pull_count: int, accuracy: float | None = None
    ) -> Estimate:
        """Componentwise empirical average of ``pull_count`` draws.

        The ledger grows by exactly ``pull_count``.  ``accuracy`` is the
        sup-norm guarantee the calling subroutine attaches to the estimate.
        """
        if pull_count < 1:
            raise InvalidBudget(f"pull_count must be >= 1, got {pull_count}")
        dist = self._distribution(arm_id)
        mean = dist.mean_of_draws(self._stream(arm_id), int(pull_count))
        self.ledger.record(arm_id, int(pull_count))
        clipped = np.clip(mean, 0.0, 1.0)
        return Estimate(arm_id, tuple(float(v) for v in clipped), accuracy)
