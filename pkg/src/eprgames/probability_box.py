"""Joint-probability boxes for two-party, two-setting, binary-outcome experiments.

A box is a vector of 16 probabilities Pr(outcome_a, outcome_b; setting_a,
setting_b).  Entries follow Cereceda's indexing: with outcomes pi_a, pi_b in
{+1, -1} and settings numbered 1 and 2 per party,

    k = 1 + (1 - pi_b)/2 + 2*(1 - pi_a)/2 + 4*(setting_b - 1) + 8*(setting_a - 1)

so the box splits into four blocks of four (one per setting pair), each block
laid out (+ +), (+ -), (- +), (- -).  Arrays in this module are 0-based:
position i stores the entry labelled p_{i+1} above.

A valid box has each block summing to one and satisfies the eight marginal
equalities that stop either party's setting choice from signalling the other
(entry sums per party outcome agree across the other party's settings).
Those 12 constraints leave 8 degrees of freedom; the free coordinates used
throughout are (p1, p4, p5, p8, p9, p12, p14, p15) and the other eight are
affine in them.

All functions are pure and boxes are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "ALICE_1",
    "ALICE_2",
    "BOB_1",
    "BOB_2",
    "BoxValidationError",
    "CHExtreme",
    "CoinProfile",
    "DEPENDENT_INDICES",
    "FREE_INDICES",
    "FreeBlock",
    "InvalidFreeBlockError",
    "JointBox",
    "NotFactorizable",
    "Setting",
    "ValidationReport",
    "ch_xi_bound",
    "cereceda_index",
    "chsh_correlation_sum",
    "clauser_horne_value",
    "complete_from_free",
    "correlators",
    "factorize",
    "free_block",
    "from_coins",
    "marginals",
    "max_ch_violation",
    "maximal_violation_box",
    "named_box",
    "no_signaling_rows",
    "uniform_box",
    "validate",
]

# 0-based positions of the free and dependent coordinates.
FREE_INDICES = (0, 3, 4, 7, 8, 11, 13, 14)
DEPENDENT_INDICES = (1, 2, 5, 6, 9, 10, 12, 15)

# No-signalling rows: label, indices summed with +, indices summed with -.
# Each says one party's marginal for one outcome is the same under both of
# the other party's settings.
_NS_ROWS = (
    ("A+|S1", (0, 1), (4, 5)),
    ("B+|S1'", (0, 2), (8, 10)),
    ("A+|S2", (8, 9), (12, 13)),
    ("B+|S2'", (4, 6), (12, 14)),
    ("A-|S1", (2, 3), (6, 7)),
    ("A-|S2", (10, 11), (14, 15)),
    ("B-|S1'", (1, 3), (9, 11)),
    ("B-|S2'", (5, 7), (13, 15)),
)

_BLOCK_LABELS = ("S1,S1'", "S1,S2'", "S2,S1'", "S2,S2'")


def no_signaling_rows() -> tuple:
    """The eight marginal equalities as (label, plus indices, minus indices).

    Indices are 0-based; each row asserts the two index pairs sum to the
    same value.
    """
    return _NS_ROWS


@dataclass(frozen=True)
class Setting:
    """A measurement setting owned by one party."""

    party: str  # "alice" | "bob"
    index: int  # 1 | 2

    def __post_init__(self) -> None:
        if self.party not in ("alice", "bob"):
            raise ValueError(f"unknown party {self.party!r}")
        if self.index not in (1, 2):
            raise ValueError(f"setting index must be 1 or 2, got {self.index!r}")


ALICE_1 = Setting("alice", 1)
ALICE_2 = Setting("alice", 2)
BOB_1 = Setting("bob", 1)
BOB_2 = Setting("bob", 2)


def _check_outcome(value: int, name: str) -> int:
    if value not in (1, -1):
        raise ValueError(f"{name} must be +1 or -1, got {value!r}")
    return value


def cereceda_index(pi_a: int, pi_b: int, a: Setting, b: Setting) -> int:
    """1-based position of the probability Pr(pi_a, pi_b; a, b)."""
    _check_outcome(pi_a, "pi_a")
    _check_outcome(pi_b, "pi_b")
    if a.party != "alice":
        raise ValueError(f"first setting must belong to alice, got {a.party!r}")
    if b.party != "bob":
        raise ValueError(f"second setting must belong to bob, got {b.party!r}")
    return 1 + (1 - pi_b) // 2 + (1 - pi_a) + 4 * (b.index - 1) + 8 * (a.index - 1)


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of every box constraint at a given tolerance."""

    ok: bool
    tol: float
    entries_in_range: bool
    out_of_range: tuple  # ((1-based index, value), ...)
    normalization: tuple  # ((block label, residual), ...)
    no_signaling: tuple  # ((row label, residual), ...)

    @property
    def max_residual(self) -> float:
        return max(r for _, r in self.normalization + self.no_signaling)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "tol": self.tol,
            "entries_in_range": self.entries_in_range,
            "out_of_range": [{"index": k, "value": v} for k, v in self.out_of_range],
            "normalization": [
                {"block": lbl, "residual": r} for lbl, r in self.normalization
            ],
            "no_signaling": [
                {"constraint": lbl, "residual": r} for lbl, r in self.no_signaling
            ],
            "max_residual": self.max_residual,
        }


def validate(values, tol: float = 1e-9) -> ValidationReport:
    """Check 16 raw numbers against the box constraints.

    Passes overall iff every entry lies in [-tol, 1 + tol] and every
    normalization and no-signalling residual is at most tol.
    """
    p = np.asarray(values, dtype=np.float64)
    if p.shape != (16,):
        raise ValueError(f"expected 16 probabilities, got shape {p.shape}")
    out_of_range = tuple(
        (i + 1, float(v)) for i, v in enumerate(p) if v < -tol or v > 1.0 + tol
    )
    norm = tuple(
        (lbl, abs(float(p[4 * blk : 4 * blk + 4].sum()) - 1.0))
        for blk, lbl in enumerate(_BLOCK_LABELS)
    )
    ns = tuple(
        (lbl, abs(float(p[list(pos)].sum() - p[list(neg)].sum())))
        for lbl, pos, neg in _NS_ROWS
    )
    ok = not out_of_range and all(r <= tol for _, r in norm + ns)
    return ValidationReport(
        ok=ok,
        tol=tol,
        entries_in_range=not out_of_range,
        out_of_range=out_of_range,
        normalization=norm,
        no_signaling=ns,
    )


class BoxValidationError(ValueError):
    """Raised when 16 raw numbers do not form a valid box."""

    def __init__(self, report: ValidationReport):
        self.report = report
        worst = report.max_residual
        super().__init__(
            f"invalid box: max constraint residual {worst:.3g}, "
            f"{len(report.out_of_range)} entries out of range (tol {report.tol:g})"
        )


@dataclass(frozen=True, eq=False)
class JointBox:
    """An immutable, validated box of 16 joint probabilities."""

    p: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.p, dtype=np.float64)
        if arr.shape != (16,):
            raise ValueError(f"expected 16 probabilities, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    @classmethod
    def from_values(cls, values, tol: float = 1e-9) -> "JointBox":
        """Validate raw numbers and wrap them; raises BoxValidationError."""
        report = validate(values, tol)
        if not report.ok:
            raise BoxValidationError(report)
        return cls(np.asarray(values, dtype=np.float64))

    def prob(self, k: int) -> float:
        """Entry by 1-based index."""
        if not 1 <= k <= 16:
            raise ValueError(f"index must be in 1..16, got {k}")
        return float(self.p[k - 1])

    def block(self, a_index: int, b_index: int) -> np.ndarray:
        """The four entries for one setting pair: (++, +-, -+, --)."""
        if a_index not in (1, 2) or b_index not in (1, 2):
            raise ValueError("setting indices must be 1 or 2")
        base = 8 * (a_index - 1) + 4 * (b_index - 1)
        return np.array(self.p[base : base + 4])

    def tolist(self) -> list:
        return [float(v) for v in self.p]

    def __repr__(self) -> str:
        entries = ", ".join(format(v, ".6g") for v in self.p)
        return f"JointBox([{entries}])"


def uniform_box() -> JointBox:
    """Every outcome pair equally likely under every setting pair."""
    return JointBox(np.full(16, 0.25))


@dataclass(frozen=True)
class CoinProfile:
    """Heads probabilities (r, s) for Alice's settings and (rp, sp) for Bob's."""

    r: float
    s: float
    rp: float
    sp: float

    def __post_init__(self) -> None:
        for name in ("r", "s", "rp", "sp"):
            v = float(getattr(self, name))
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"coin weight {name}={v!r} outside [0, 1]")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))

    def as_tuple(self) -> tuple:
        return (self.r, self.s, self.rp, self.sp)


def from_coins(coins) -> JointBox:
    """Box produced by four independent biased coins, one per setting.

    Alice's settings land +1 with probabilities r (first) and s (second);
    Bob's with rp and sp.  The 16 entries are the corresponding products.
    """
    if not isinstance(coins, CoinProfile):
        coins = CoinProfile(*coins)
    r, s, rp, sp = coins.as_tuple()
    p = np.array(
        [
            r * rp, r * (1 - rp), rp * (1 - r), (1 - r) * (1 - rp),
            r * sp, r * (1 - sp), sp * (1 - r), (1 - r) * (1 - sp),
            s * rp, s * (1 - rp), rp * (1 - s), (1 - s) * (1 - rp),
            s * sp, s * (1 - sp), sp * (1 - s), (1 - s) * (1 - sp),
        ]
    )
    return JointBox(p)


def marginals(box: JointBox) -> CoinProfile:
    """Per-setting +1 marginals (r, s, rp, sp) read off canonical blocks."""
    p = box.p
    return CoinProfile(
        r=float(p[0] + p[1]),
        s=float(p[8] + p[9]),
        rp=float(p[0] + p[2]),
        sp=float(p[4] + p[6]),
    )


@dataclass(frozen=True)
class NotFactorizable:
    """Certificate that no coin profile reproduces the box."""

    max_residual: float
    residuals: tuple  # 16 absolute gaps against the best product form


def factorize(box: JointBox, tol: float = 1e-9):
    """Recover the coin profile behind a product-form box.

    The only candidate is the box's own marginals; returns a CoinProfile when
    the worst entry gap is at most tol, else NotFactorizable.
    """
    coins = marginals(box)
    predicted = from_coins(coins)
    residuals = tuple(float(v) for v in np.abs(box.p - predicted.p))
    worst = max(residuals)
    if worst <= tol:
        return coins
    return NotFactorizable(max_residual=worst, residuals=residuals)


@dataclass(frozen=True)
class FreeBlock:
    """The 8 free coordinates of a box, in index order."""

    p1: float
    p4: float
    p5: float
    p8: float
    p9: float
    p12: float
    p14: float
    p15: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.p1, self.p4, self.p5, self.p8, self.p9, self.p12, self.p14, self.p15]
        )

    @classmethod
    def from_array(cls, values) -> "FreeBlock":
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (8,):
            raise ValueError(f"expected 8 free entries, got shape {arr.shape}")
        return cls(*(float(v) for v in arr))


def free_block(box: JointBox) -> FreeBlock:
    """Extract the free coordinates of a box."""
    return FreeBlock.from_array(box.p[list(FREE_INDICES)])


class InvalidFreeBlockError(ValueError):
    """Raised when a free block forces some dependent entry outside [0, 1]."""

    def __init__(self, entries):
        self.entries = tuple(entries)  # ((1-based index, value), ...)
        detail = ", ".join(f"p{k}={v:.6g}" for k, v in self.entries)
        super().__init__(f"free block completes outside [0, 1]: {detail}")


def complete_from_free(free, tol: float = 1e-12) -> JointBox:
    """Fill in the 8 dependent entries from the free ones.

    The free entries must already lie in [0, 1]; the completion is the unique
    solution of the normalization and no-signalling equalities.  Raises
    InvalidFreeBlockError when any completed entry falls outside
    [-tol, 1 + tol].
    """
    if isinstance(free, FreeBlock):
        f = free.as_array()
    else:
        f = np.asarray(free, dtype=np.float64)
        if f.shape != (8,):
            raise ValueError(f"expected 8 free entries, got shape {f.shape}")
    if (f < 0).any() or (f > 1).any():
        raise ValueError("free entries must lie in [0, 1]")
    boxes, ok = _kernels.complete_free_batch(np.ascontiguousarray(f[None, :]), tol)
    row = boxes[0]
    if not ok[0]:
        bad = [
            (i + 1, float(v)) for i, v in enumerate(row) if v < -tol or v > 1.0 + tol
        ]
        raise InvalidFreeBlockError(bad)
    return JointBox(row)


def maximal_violation_box(which: int) -> JointBox:
    """One of the two boxes reaching the extreme correlation sum of 2*sqrt(2).

    which=1 puts (2 + sqrt 2)/8 on the free coordinates and (2 - sqrt 2)/8 on
    the dependent ones; which=2 swaps the two values (and flips the sign of
    the extreme correlation sum).
    """
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    high = (2.0 + math.sqrt(2.0)) / 8.0
    low = (2.0 - math.sqrt(2.0)) / 8.0
    value = high if which == 1 else low
    return complete_from_free(np.full(8, value))


_NAMED_BOXES = {
    "uniform": uniform_box,
    "chsh-max-1": lambda: maximal_violation_box(1),
    "chsh-max-2": lambda: maximal_violation_box(2),
}


def named_box(name: str) -> JointBox:
    """Resolve one of the built-in boxes: uniform, chsh-max-1, chsh-max-2."""
    try:
        factory = _NAMED_BOXES[name]
    except KeyError:
        known = ", ".join(sorted(_NAMED_BOXES))
        raise ValueError(f"unknown box name {name!r} (known: {known})") from None
    return factory()


def _joint(p: np.ndarray, pi_a: int, pi_b: int, a_index: int, b_index: int) -> float:
    base = 8 * (a_index - 1) + 4 * (b_index - 1)
    return float(p[base + (1 - pi_a) + (1 - pi_b) // 2])


def _alice_marginal(p: np.ndarray, pi_a: int, a_index: int, b_index: int) -> float:
    base = 8 * (a_index - 1) + 4 * (b_index - 1) + (1 - pi_a)
    return float(p[base] + p[base + 1])


def _bob_marginal(p: np.ndarray, pi_b: int, a_index: int, b_index: int) -> float:
    base = 8 * (a_index - 1) + 4 * (b_index - 1) + (1 - pi_b) // 2
    return float(p[base] + p[base + 2])


def clauser_horne_value(
    box: JointBox,
    outcomes=(1, 1),
    alice_first: int = 1,
    bob_first: int = 1,
) -> float:
    """Clauser-Horne combination for one outcome pair and role assignment.

    With Alice's settings playing roles (first, other) and likewise for Bob,
    evaluates

        J(first, first) - J(first, other) + J(other, first) + J(other, other)
        - Pr_A(outcome; other) - Pr_B(outcome; first)

    where J is the joint probability of the fixed outcome pair.  Product-form
    boxes keep this in [-1, 0]; values above 0 or below -1 certify that no
    coin profile can reproduce the box.
    """
    pi_a, pi_b = outcomes
    _check_outcome(pi_a, "pi_a")
    _check_outcome(pi_b, "pi_b")
    if alice_first not in (1, 2) or bob_first not in (1, 2):
        raise ValueError("role assignments must be 1 or 2")
    a1, a2 = alice_first, 3 - alice_first
    b1, b2 = bob_first, 3 - bob_first
    p = box.p
    return (
        _joint(p, pi_a, pi_b, a1, b1)
        - _joint(p, pi_a, pi_b, a1, b2)
        + _joint(p, pi_a, pi_b, a2, b1)
        + _joint(p, pi_a, pi_b, a2, b2)
        - _alice_marginal(p, pi_a, a2, b1)
        - _bob_marginal(p, pi_b, a1, b1)
    )


@dataclass(frozen=True)
class CHExtreme:
    """Largest Clauser-Horne value over outcomes and role assignments."""

    value: float
    outcomes: tuple
    alice_first: int
    bob_first: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "outcomes": list(self.outcomes),
            "alice_first": self.alice_first,
            "bob_first": self.bob_first,
        }


def max_ch_violation(box: JointBox) -> CHExtreme:
    """Maximize the Clauser-Horne combination over its 16 variants."""
    best = None
    for pi_a in (1, -1):
        for pi_b in (1, -1):
            for a_first in (1, 2):
                for b_first in (1, 2):
                    v = clauser_horne_value(box, (pi_a, pi_b), a_first, b_first)
                    if best is None or v > best.value:
                        best = CHExtreme(v, (pi_a, pi_b), a_first, b_first)
    return best


def correlators(box: JointBox) -> tuple:
    """Outcome-product expectations E(a, b) for the four setting pairs."""
    p = box.p
    return tuple(
        float(p[base] + p[base + 3] - p[base + 1] - p[base + 2])
        for base in (0, 4, 8, 12)
    )


def chsh_correlation_sum(box: JointBox, signs=(1, 1, 1, -1)) -> float:
    """Signed sum of the four correlators.

    signs orders the setting pairs (S1,S1'), (S1,S2'), (S2,S1'), (S2,S2') and
    must multiply to -1.  Product-form boxes keep the sum within [-2, 2];
    every valid box stays within [-4, 4].
    """
    signs = tuple(signs)
    if len(signs) != 4 or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be four values in {+1, -1}")
    if signs[0] * signs[1] * signs[2] * signs[3] != -1:
        raise ValueError("signs must multiply to -1")
    e = correlators(box)
    return signs[0] * e[0] + signs[1] * e[1] + signs[2] * e[2] + signs[3] * e[3]


def ch_xi_bound(w1: float, w2: float, v1: float, v2: float, c1: float, c2: float) -> float:
    """The bounded bilinear form behind the Clauser-Horne inequality.

    Requires 0 <= w1, w2 <= c1 and 0 <= v1, v2 <= c2.  Returns

        w1*v1 - w1*v2 + w2*v1 + w2*v2 - c2*w2 - c1*v1

    which always lies in [-c1*c2, 0] under those preconditions.
    """
    for name, val, cap in (("w1", w1, c1), ("w2", w2, c1), ("v1", v1, c2), ("v2", v2, c2)):
        if not 0 <= val <= cap:
            raise ValueError(f"precondition violated: 0 <= {name} <= {cap} fails for {val}")
    return w1 * v1 - w1 * v2 + w2 * v1 + w2 * v2 - c2 * w2 - c1 * v1
