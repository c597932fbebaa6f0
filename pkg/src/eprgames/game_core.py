"""Two-player games with two pure options per side and bilinear mixing.

A game instance is four payoffs (K, L, M, N): Alice receives K, L, M, N when
the realized option pair is (first, first), (first, second), (second, first),
(second, second); Bob receives the same with L and M exchanged.  A mixed
strategy is the probability of playing the first option, so expected payoffs
are bilinear in (x, y) over a 2x2 block table.

Equilibrium enumeration is exact: each player's best-response correspondence
is a union of axis-aligned pieces of the unit square, and the set of weak
Nash equilibria is the intersection of the two.  Degenerate games therefore
produce segments or the whole square, not just isolated points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BlockPayoffs",
    "EquilibriumSet",
    "PayoffMatrix",
    "PayoffPair",
    "Segment",
    "StrategyProfile",
    "block_payoffs_classical",
    "deviation_margins",
    "enumerate_equilibria",
    "equilibrium_set_distance",
    "is_equilibrium",
    "mixed_payoffs",
    "payoff_two_coin",
]


@dataclass(frozen=True)
class PayoffMatrix:
    """The four payoffs of a symmetric-role 2x2 game."""

    K: float
    L: float
    M: float
    N: float

    def __post_init__(self) -> None:
        for name in "KLMN":
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"payoff {name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple:
        return (self.K, self.L, self.M, self.N)


@dataclass(frozen=True)
class StrategyProfile:
    """Mixed strategies: probability of the first option for each player."""

    x: float
    y: float

    def __post_init__(self) -> None:
        for name in ("x", "y"):
            v = float(getattr(self, name))
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"strategy weight {name}={v!r} outside [0, 1]")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class PayoffPair:
    """Expected payoffs for Alice and Bob."""

    alice: float
    bob: float

    def as_tuple(self) -> tuple:
        return (self.alice, self.bob)


@dataclass(frozen=True, eq=False)
class BlockPayoffs:
    """Per-player 2x2 tables of expected payoffs, one entry per option pair."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (2, 2):
                raise ValueError(f"block table {name} must be 2x2, got {arr.shape}")
            if not np.isfinite(arr).all():
                raise ValueError(f"block table {name} contains non-finite entries")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def block_payoffs_classical(matrix: PayoffMatrix) -> BlockPayoffs:
    """Block tables of the plain game: the payoffs themselves."""
    k, l, m, n = matrix.as_tuple()
    return BlockPayoffs(a=[[k, l], [m, n]], b=[[k, m], [l, n]])


def mixed_payoffs(blocks: BlockPayoffs, profile: StrategyProfile) -> PayoffPair:
    """Bilinear expected payoffs at a mixed profile."""
    x, y = profile.x, profile.y
    a, b = blocks.a, blocks.b
    pa = x * (y * a[0, 0] + (1 - y) * a[0, 1]) + (1 - x) * (y * a[1, 0] + (1 - y) * a[1, 1])
    pb = x * (y * b[0, 0] + (1 - y) * b[0, 1]) + (1 - x) * (y * b[1, 0] + (1 - y) * b[1, 1])
    return PayoffPair(float(pa), float(pb))


def payoff_two_coin(matrix: PayoffMatrix, profile: StrategyProfile) -> PayoffPair:
    """Expected payoffs when each player mixes directly over the two options."""
    return mixed_payoffs(block_payoffs_classical(matrix), profile)


def deviation_margins(blocks: BlockPayoffs, profile: StrategyProfile) -> tuple:
    """Worst unilateral loss from staying put: (alice, bob).

    Each margin is min over that player's two pure deviations of
    payoff(profile) - payoff(deviation); non-negative margins mean no
    profitable deviation exists.  Expected payoffs are affine in each
    player's own weight, so pure deviations suffice.
    """
    x, y = profile.x, profile.y
    here = mixed_payoffs(blocks, profile)
    alice = min(
        here.alice - mixed_payoffs(blocks, StrategyProfile(0.0, y)).alice,
        here.alice - mixed_payoffs(blocks, StrategyProfile(1.0, y)).alice,
    )
    bob = min(
        here.bob - mixed_payoffs(blocks, StrategyProfile(x, 0.0)).bob,
        here.bob - mixed_payoffs(blocks, StrategyProfile(x, 1.0)).bob,
    )
    return (alice, bob)


def is_equilibrium(blocks: BlockPayoffs, profile: StrategyProfile, tol: float = 1e-9) -> bool:
    """Weak Nash test: no pure deviation gains more than tol."""
    alice, bob = deviation_margins(blocks, profile)
    return alice >= -tol and bob >= -tol


@dataclass(frozen=True)
class Segment:
    """A one-dimensional piece of an equilibrium set.

    axis "x-free": x runs over [lo, hi] at y = fixed.
    axis "y-free": y runs over [lo, hi] at x = fixed.
    """

    axis: str
    fixed: float
    lo: float
    hi: float

    def endpoints(self) -> tuple:
        if self.axis == "x-free":
            return ((self.lo, self.fixed), (self.hi, self.fixed))
        return ((self.fixed, self.lo), (self.fixed, self.hi))

    def to_dict(self) -> dict:
        return {"axis": self.axis, "fixed": self.fixed, "lo": self.lo, "hi": self.hi}


def _point_segment_distance(x: float, y: float, seg: Segment) -> float:
    if seg.axis == "x-free":
        u, v, w = x, y, seg.fixed
    else:
        u, v, w = y, x, seg.fixed
    du = 0.0 if seg.lo <= u <= seg.hi else min(abs(u - seg.lo), abs(u - seg.hi))
    return math.hypot(du, v - w)


@dataclass(frozen=True)
class EquilibriumSet:
    """The complete set of weak Nash equilibria of a block game.

    points lists every isolated equilibrium plus the endpoints of each
    segment; no listed point lies in the open interior of a listed segment.
    full_square means every profile is an equilibrium, in which case points
    and segments are empty.
    """

    points: tuple  # of StrategyProfile
    segments: tuple  # of Segment
    full_square: bool = False

    def distance_to(self, x: float, y: float) -> float:
        """Euclidean distance from (x, y) to the set."""
        if self.full_square:
            return 0.0 if 0 <= x <= 1 and 0 <= y <= 1 else math.hypot(
                x - min(max(x, 0.0), 1.0), y - min(max(y, 0.0), 1.0)
            )
        best = math.inf
        for pt in self.points:
            best = min(best, math.hypot(x - pt.x, y - pt.y))
        for seg in self.segments:
            best = min(best, _point_segment_distance(x, y, seg))
        return best

    def contains(self, x: float, y: float, tol: float = 1e-9) -> bool:
        return self.distance_to(x, y) <= tol

    def sample_points(self, resolution: int = 129) -> list:
        """Finite cover of the set, used for set-to-set distances."""
        pts = [(pt.x, pt.y) for pt in self.points]
        for seg in self.segments:
            for t in np.linspace(seg.lo, seg.hi, resolution):
                if seg.axis == "x-free":
                    pts.append((float(t), seg.fixed))
                else:
                    pts.append((seg.fixed, float(t)))
        if self.full_square:
            for u in np.linspace(0.0, 1.0, resolution):
                for v in np.linspace(0.0, 1.0, resolution):
                    pts.append((float(u), float(v)))
        return pts

    def is_empty(self) -> bool:
        return not (self.points or self.segments or self.full_square)

    def to_dict(self) -> dict:
        return {
            "points": [{"x": pt.x, "y": pt.y} for pt in self.points],
            "segments": [seg.to_dict() for seg in self.segments],
            "full_square": self.full_square,
        }


def equilibrium_set_distance(a: EquilibriumSet, b: EquilibriumSet, resolution: int = 129) -> float:
    """Hausdorff distance between two equilibrium sets.

    Directed distances are exact from sampled covers of one set to the other,
    so the result is exact for finite sets and accurate to the sampling
    resolution when segments or the full square are involved.
    """
    if a.is_empty() and b.is_empty():
        return 0.0
    if a.is_empty() or b.is_empty():
        return math.inf
    d_ab = max((b.distance_to(x, y) for x, y in a.sample_points(resolution)), default=0.0)
    d_ba = max((a.distance_to(x, y) for x, y in b.sample_points(resolution)), default=0.0)
    return max(d_ab, d_ba)


# Best-response pieces: ("square",), ("v", x, lo, hi) for a vertical segment,
# ("h", y, lo, hi) for a horizontal one.


def _alice_pieces(a: np.ndarray, tol: float) -> list:
    # Gain from raising x at mixed y: c(y) = alpha*y + beta.
    alpha = (a[0, 0] - a[1, 0]) - (a[0, 1] - a[1, 1])
    beta = a[0, 1] - a[1, 1]
    if abs(alpha) <= tol and abs(beta) <= tol:
        return [("square",)]
    if abs(alpha) <= tol:
        return [("v", 1.0 if beta > 0 else 0.0, 0.0, 1.0)]
    root = -beta / alpha
    if root < -tol or root > 1.0 + tol:
        sign = alpha * 0.5 + beta
        return [("v", 1.0 if sign > 0 else 0.0, 0.0, 1.0)]
    root = min(max(root, 0.0), 1.0)
    x_low = 1.0 if alpha < 0 else 0.0
    pieces = []
    if root > tol:
        pieces.append(("v", x_low, 0.0, root))
    pieces.append(("h", root, 0.0, 1.0))
    if root < 1.0 - tol:
        pieces.append(("v", 1.0 - x_low, root, 1.0))
    return pieces


def _bob_pieces(b: np.ndarray, tol: float) -> list:
    # Gain from raising y at mixed x: c(x) = gamma*x + delta.
    gamma = (b[0, 0] - b[0, 1]) - (b[1, 0] - b[1, 1])
    delta = b[1, 0] - b[1, 1]
    if abs(gamma) <= tol and abs(delta) <= tol:
        return [("square",)]
    if abs(gamma) <= tol:
        return [("h", 1.0 if delta > 0 else 0.0, 0.0, 1.0)]
    root = -delta / gamma
    if root < -tol or root > 1.0 + tol:
        sign = gamma * 0.5 + delta
        return [("h", 1.0 if sign > 0 else 0.0, 0.0, 1.0)]
    root = min(max(root, 0.0), 1.0)
    y_low = 1.0 if gamma < 0 else 0.0
    pieces = []
    if root > tol:
        pieces.append(("h", y_low, 0.0, root))
    pieces.append(("v", root, 0.0, 1.0))
    if root < 1.0 - tol:
        pieces.append(("h", 1.0 - y_low, root, 1.0))
    return pieces


def _intersect(pa, pb, tol):
    """Intersection of two pieces: list of pieces and/or point pairs."""
    if pa[0] == "square":
        return [pb]
    if pb[0] == "square":
        return [pa]
    if pa[0] == pb[0]:
        if abs(pa[1] - pb[1]) > tol:
            return []
        lo, hi = max(pa[2], pb[2]), min(pa[3], pb[3])
        if hi < lo - tol:
            return []
        if hi <= lo + tol:
            mid = (max(lo, hi) + min(lo, hi)) / 2.0
            return [("pt", pa[1], mid) if pa[0] == "v" else ("pt", mid, pa[1])]
        return [(pa[0], pa[1], lo, hi)]
    v, h = (pa, pb) if pa[0] == "v" else (pb, pa)
    x0, y0 = v[1], h[1]
    if h[2] - tol <= x0 <= h[3] + tol and v[2] - tol <= y0 <= v[3] + tol:
        return [("pt", x0, y0)]
    return []


def _merge_segments(segs: list, tol: float) -> list:
    merged = []
    for kind in ("h", "v"):
        group = sorted((s for s in segs if s[0] == kind), key=lambda s: (s[1], s[2]))
        current = None
        for s in group:
            if (
                current is not None
                and abs(s[1] - current[1]) <= tol
                and s[2] <= current[3] + tol
            ):
                current = (kind, current[1], current[2], max(current[3], s[3]))
            else:
                if current is not None:
                    merged.append(current)
                current = s
        if current is not None:
            merged.append(current)
    return merged


def enumerate_equilibria(blocks: BlockPayoffs, tol: float = 1e-12) -> EquilibriumSet:
    """All weak Nash equilibria of a block game.

    Ties in payoff comparisons are decided with absolute tolerance tol.  The
    result is the full solution set: isolated points, indifference segments,
    or the entire square when both players are everywhere indifferent.
    """
    pieces_a = _alice_pieces(blocks.a, tol)
    pieces_b = _bob_pieces(blocks.b, tol)
    if pieces_a == [("square",)] and pieces_b == [("square",)]:
        return EquilibriumSet(points=(), segments=(), full_square=True)

    raw_points = []
    raw_segments = []
    for pa in pieces_a:
        for pb in pieces_b:
            for piece in _intersect(pa, pb, tol):
                if piece[0] == "pt":
                    raw_points.append((piece[1], piece[2]))
                else:
                    raw_segments.append(piece)

    segments = []
    for kind, fixed, lo, hi in _merge_segments(raw_segments, tol):
        if hi - lo <= tol:
            raw_points.append((fixed, (lo + hi) / 2.0) if kind == "v" else ((lo + hi) / 2.0, fixed))
        else:
            axis = "y-free" if kind == "v" else "x-free"
            segments.append(Segment(axis=axis, fixed=fixed, lo=lo, hi=hi))
    segments.sort(key=lambda s: (s.axis, s.fixed, s.lo))

    for seg in segments:
        raw_points.extend(seg.endpoints())

    points = []
    for x, y in sorted(raw_points):
        x, y = min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0)
        if any(math.hypot(x - px, y - py) <= tol for px, py in points):
            continue
        interior = False
        for seg in segments:
            if _point_segment_distance(x, y, seg) <= tol:
                e1, e2 = seg.endpoints()
                if math.hypot(x - e1[0], y - e1[1]) > tol and math.hypot(x - e2[0], y - e2[1]) > tol:
                    interior = True
                    break
        if not interior:
            points.append((x, y))

    return EquilibriumSet(
        points=tuple(StrategyProfile(x, y) for x, y in sorted(points)),
        segments=tuple(segments),
        full_square=False,
    )
