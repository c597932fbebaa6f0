"""Seeded simulation of repeated play through a box.

Each run draws Alice's setting (first with probability x), Bob's setting
(first with probability y), then an outcome pair from the box's conditional
block via inverse CDF.  Payoffs are credited per run and averaged.

The generator is Philox (4x64, 10 rounds) keyed with the seed, a
counter-based generator whose streams are identical on every platform; per
call to simulate the three uniform arrays (Alice setting, Bob setting,
outcome) are drawn in that fixed order.  Identical configs therefore give
bit-identical estimates, independent of the compiled or pure-Python tally
backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import mc_tally
from .game_core import PayoffMatrix, StrategyProfile
from .probability_box import JointBox, Setting

__all__ = ["EmpiricalEstimate", "PlayConfig", "sample_outcome", "simulate"]

_OUTCOME_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class PlayConfig:
    """One simulation request."""

    matrix: PayoffMatrix
    box: JointBox
    profile: StrategyProfile
    runs: int
    seed: int

    def __post_init__(self) -> None:
        runs = int(self.runs)
        if runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        seed = int(self.seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        object.__setattr__(self, "runs", runs)
        object.__setattr__(self, "seed", seed)


@dataclass(frozen=True)
class EmpiricalEstimate:
    """Empirical payoff means with standard errors and raw tallies.

    counts has one entry per (setting pair, outcome pair) cell in box order
    and sums to runs; stderr is the sample standard deviation over runs
    divided by sqrt(runs), zero when runs == 1.
    """

    meanA: float
    meanB: float
    stderrA: float
    stderrB: float
    counts: tuple
    seed: int
    runs: int

    def to_dict(self) -> dict:
        return {
            "meanA": self.meanA,
            "meanB": self.meanB,
            "stderrA": self.stderrA,
            "stderrB": self.stderrB,
            "counts": list(self.counts),
            "seed": self.seed,
            "runs": self.runs,
        }


def sample_outcome(box: JointBox, a: Setting, b: Setting, rng: np.random.Generator) -> tuple:
    """Draw one outcome pair from the conditional block for settings (a, b).

    Inverse CDF on the block's four entries, consuming one uniform from rng.
    Returns (alice outcome, bob outcome), each +1 or -1.
    """
    if a.party != "alice":
        raise ValueError(f"first setting must belong to alice, got {a.party!r}")
    if b.party != "bob":
        raise ValueError(f"second setting must belong to bob, got {b.party!r}")
    block = box.block(a.index, b.index)
    c0 = block[0]
    c1 = c0 + block[1]
    c2 = c1 + block[2]
    c3 = c2 + block[3]
    t = rng.random() * c3
    j = int(t >= c0) + int(t >= c1) + int(t >= c2)
    return _OUTCOME_PAIRS[j]


def _moments(counts: np.ndarray, weights: np.ndarray, runs: int) -> tuple:
    total = float(np.dot(counts, weights))
    mean = total / runs
    if runs == 1:
        return mean, 0.0
    sumsq = float(np.dot(counts, weights * weights))
    var = (sumsq - runs * mean * mean) / (runs - 1)
    return mean, math.sqrt(max(var, 0.0) / runs)


def simulate(config: PlayConfig) -> EmpiricalEstimate:
    """Play the game runs times and estimate both players' payoffs."""
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    n = config.runs
    u_setting_a = rng.random(n)
    u_setting_b = rng.random(n)
    u_outcome = rng.random(n)
    counts = mc_tally(
        u_setting_a,
        u_setting_b,
        u_outcome,
        config.profile.x,
        config.profile.y,
        config.box.p,
    )
    k, l, m, n_pay = config.matrix.as_tuple()
    weights_a = np.tile(np.array([k, l, m, n_pay]), 4)
    weights_b = np.tile(np.array([k, m, l, n_pay]), 4)
    mean_a, stderr_a = _moments(counts, weights_a, n)
    mean_b, stderr_b = _moments(counts, weights_b, n)
    return EmpiricalEstimate(
        meanA=mean_a,
        meanB=mean_b,
        stderrA=stderr_a,
        stderrB=stderr_b,
        counts=tuple(int(c) for c in counts),
        seed=config.seed,
        runs=n,
    )
