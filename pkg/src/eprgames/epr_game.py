"""Games played through a joint probability box.

Each player picks a measurement setting instead of an option directly; the
box then draws the pair of outcomes, and outcomes determine payoffs through
the same four values (K, L, M, N) as the plain game.  Expected payoffs are
again bilinear in the setting weights, so all of game_core applies once the
2x2 block tables are computed from the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game_core import (
    BlockPayoffs,
    EquilibriumSet,
    PayoffMatrix,
    PayoffPair,
    StrategyProfile,
    deviation_margins,
    enumerate_equilibria,
    mixed_payoffs,
)
from .probability_box import (
    CHExtreme,
    JointBox,
    NotFactorizable,
    chsh_correlation_sum,
    factorize,
    from_coins,
    max_ch_violation,
)

__all__ = [
    "AnalysisReport",
    "ConstraintSet",
    "LinearConstraint",
    "OmegaCoefficients",
    "analyze",
    "constraint_satisfied",
    "epr_block_payoffs",
    "linear_constraint",
    "mu_form_gains",
    "nash_inequality_residuals",
    "omega_coefficients",
]


def epr_block_payoffs(matrix: PayoffMatrix, box: JointBox) -> BlockPayoffs:
    """Expected payoffs per setting pair under the box.

    Entry (i, j) weights the four outcome probabilities of the block where
    Alice uses setting i+1 and Bob setting j+1.
    """
    k, l, m, n = matrix.as_tuple()
    p = box.p
    a = np.empty((2, 2))
    b = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            base = 8 * i + 4 * j
            a[i, j] = k * p[base] + l * p[base + 1] + m * p[base + 2] + n * p[base + 3]
            b[i, j] = k * p[base] + m * p[base + 1] + l * p[base + 2] + n * p[base + 3]
    return BlockPayoffs(a=a, b=b)


@dataclass(frozen=True)
class OmegaCoefficients:
    """Outcome-wise differences of block probabilities.

    Coefficient i compares the probability of outcome cell i across the four
    blocks with alternating signs; the four coefficients always sum to zero
    for a valid box, and all four vanish iff the two settings of each player
    are interchangeable cell by cell.
    """

    o1: float
    o2: float
    o3: float
    o4: float

    def as_tuple(self) -> tuple:
        return (self.o1, self.o2, self.o3, self.o4)

    def to_dict(self) -> dict:
        return {"o1": self.o1, "o2": self.o2, "o3": self.o3, "o4": self.o4}


def omega_coefficients(box: JointBox) -> OmegaCoefficients:
    p = box.p
    values = [((p[c] - p[4 + c]) - p[8 + c]) + p[12 + c] for c in range(4)]
    return OmegaCoefficients(*map(float, values))


def mu_form_gains(
    matrix: PayoffMatrix,
    box: JointBox,
    profile: StrategyProfile,
    x_alt: float,
    y_alt: float,
) -> PayoffPair:
    """Closed-form unilateral deviation losses.

    Returns (alice, bob) where alice is the payoff Alice gives up by moving
    her weight from profile.x to x_alt while Bob stays at profile.y, and
    symmetrically for bob.  Positive values mean the deviation hurts.  The
    expression uses only the eight free entries of the box, which makes it
    convenient for reasoning about constrained families.
    """
    k, l, m, n = matrix.as_tuple()
    d1 = m - k
    d2 = n - l
    d3 = d2 - d1
    p = box.p
    common = 1.0 + p[0] + p[3] - p[4] - p[7] - p[8] - p[11] - p[13] - p[14]
    x, y = profile.x, profile.y

    slope_a = y * d3 * common - (
        d3 * (1.0 - p[4] - p[7] - p[13] - p[14]) + (d1 + d2) * (p[0] - p[3] - p[8] + p[11])
    )
    slope_b = x * d3 * common - (
        d3 * (1.0 - p[8] - p[11] - p[13] - p[14]) + (d1 + d2) * (p[0] - p[3] - p[4] + p[7])
    )
    gain_a = 0.5 * (x - float(x_alt)) * slope_a
    gain_b = 0.5 * (y - float(y_alt)) * slope_b
    return PayoffPair(float(gain_a), float(gain_b))


def nash_inequality_residuals(
    matrix: PayoffMatrix, box: JointBox, profile: StrategyProfile
) -> tuple:
    """Worst-case deviation losses from the closed form: (alice, bob).

    Both are minima over the deviating player's pure alternatives, so the
    profile is a weak equilibrium iff both are non-negative (up to
    tolerance).  Agrees with game_core.deviation_margins applied to
    epr_block_payoffs up to rounding.
    """
    alice = min(
        mu_form_gains(matrix, box, profile, 0.0, profile.y).alice,
        mu_form_gains(matrix, box, profile, 1.0, profile.y).alice,
    )
    bob = min(
        mu_form_gains(matrix, box, profile, profile.x, 0.0).bob,
        mu_form_gains(matrix, box, profile, profile.x, 1.0).bob,
    )
    return (alice, bob)


@dataclass(frozen=True)
class LinearConstraint:
    """A single linear equality on the 16 box entries: coeffs . p == rhs."""

    coeffs: tuple
    rhs: float
    label: str = ""

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != 16:
            raise ValueError(f"constraint needs 16 coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", float(self.rhs))

    def residual(self, p: np.ndarray) -> float:
        return float(np.dot(self.coeffs, p) - self.rhs)


def linear_constraint(terms: dict, rhs: float, label: str = "") -> LinearConstraint:
    """Build a constraint from sparse 1-based entry indices."""
    coeffs = [0.0] * 16
    for k, c in terms.items():
        if not 1 <= int(k) <= 16:
            raise ValueError(f"entry index {k} outside 1..16")
        coeffs[int(k) - 1] += float(c)
    return LinearConstraint(tuple(coeffs), rhs, label=label)


@dataclass(frozen=True)
class ConstraintSet:
    """A labelled family of linear equalities on boxes."""

    label: str
    constraints: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def residuals(self, box) -> np.ndarray:
        p = box.p if isinstance(box, JointBox) else np.asarray(box, dtype=np.float64)
        return np.array([c.residual(p) for c in self.constraints])

    def max_residual(self, box) -> float:
        res = self.residuals(box)
        return float(np.abs(res).max()) if res.size else 0.0

    def satisfied(self, box, tol: float = 1e-9) -> bool:
        return self.max_residual(box) <= tol


def constraint_satisfied(box, constraint_set: ConstraintSet, tol: float = 1e-9) -> bool:
    return constraint_set.satisfied(box, tol=tol)


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the analyze entry point computes for one (game, box) pair."""

    matrix: PayoffMatrix
    box: JointBox
    blocks: BlockPayoffs
    equilibria: EquilibriumSet
    payoffs: tuple  # PayoffPair per equilibria.points entry
    margins: tuple  # (alice, bob) deviation margins per point
    omega: OmegaCoefficients
    chsh: float
    ch_extreme: CHExtreme
    coins: object  # CoinProfile when the box factorizes, else None
    factorization_residual: float

    @property
    def factorizable(self) -> bool:
        return self.coins is not None

    def to_dict(self) -> dict:
        out = {
            "game": {"K": self.matrix.K, "L": self.matrix.L, "M": self.matrix.M, "N": self.matrix.N},
            "box": self.box.tolist(),
            "blocks": {"alice": self.blocks.a.tolist(), "bob": self.blocks.b.tolist()},
            "equilibria": self.equilibria.to_dict(),
            "payoffs": [{"alice": pp.alice, "bob": pp.bob} for pp in self.payoffs],
            "margins": [{"alice": m[0], "bob": m[1]} for m in self.margins],
            "omega": self.omega.to_dict(),
            "chsh": self.chsh,
            "ch_max": self.ch_extreme.to_dict(),
            "factorizable": self.factorizable,
            "factorization_residual": self.factorization_residual,
        }
        if self.coins is not None:
            out["coins"] = {
                "r": self.coins.r,
                "s": self.coins.s,
                "rp": self.coins.rp,
                "sp": self.coins.sp,
            }
        return out


def analyze(matrix: PayoffMatrix, box: JointBox, tol: float = 1e-12) -> AnalysisReport:
    """Full report: equilibria, payoffs, correlation diagnostics, coin fit.

    tol is the tie tolerance handed to the equilibrium enumerator.
    """
    blocks = epr_block_payoffs(matrix, box)
    equilibria = enumerate_equilibria(blocks, tol=tol)
    payoffs = tuple(mixed_payoffs(blocks, pt) for pt in equilibria.points)
    margins = tuple(deviation_margins(blocks, pt) for pt in equilibria.points)
    fit = factorize(box)
    if isinstance(fit, NotFactorizable):
        coins, residual = None, fit.max_residual
    else:
        coins = fit
        residual = float(np.abs(box.p - from_coins(coins).p).max())
    return AnalysisReport(
        matrix=matrix,
        box=box,
        blocks=blocks,
        equilibria=equilibria,
        payoffs=payoffs,
        margins=margins,
        omega=omega_coefficients(box),
        chsh=chsh_correlation_sum(box),
        ch_extreme=max_ch_violation(box),
        coins=coins,
        factorization_residual=residual,
    )
