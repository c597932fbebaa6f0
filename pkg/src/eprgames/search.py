"""Sampling the valid-box polytope and scanning for non-classical equilibria.

Boxes are sampled in the 8 free coordinates: draw uniformly from the unit
cube, orthogonally project onto the affine subspace of any supplied
constraint set, complete the dependent entries, and reject anything outside
[0, 1].  Constraint sets whose feasible region lies in a face of the cube
would never be hit by projection alone, so bound tightening runs first:
the constraint equalities plus normalization and the no-signaling rules are
propagated over entry intervals until a fixpoint, and every entry pinned to
a single value joins the projection system.  A constraint set that pins all
eight free coordinates yields its unique box once.

The scanner runs the full analysis on each sampled box and reports the ones
whose equilibrium set moves away from the family's classical equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import complete_free_batch
from .epr_game import ConstraintSet, analyze
from .game_core import EquilibriumSet, equilibrium_set_distance
from .games_catalog import GameFamily, classical_equilibria
from .probability_box import (
    DEPENDENT_INDICES,
    FREE_INDICES,
    JointBox,
    no_signaling_rows,
)

__all__ = [
    "InfeasibleConstraintError",
    "SampledBoxes",
    "SearchConfig",
    "SearchHit",
    "sample_boxes",
    "scan_for_new_equilibria",
]

_BATCH = 4096
_MAX_ATTEMPTS = 10**6
_PIN_TOL = 1e-12


class InfeasibleConstraintError(ValueError):
    """Raised when a constraint set admits no valid box."""

    def __init__(self, label: str, reason: str):
        self.label = label
        self.reason = reason
        super().__init__(f"constraint set {label!r} is infeasible: {reason}")


@dataclass(frozen=True)
class SampledBoxes:
    """Accepted boxes plus acceptance accounting."""

    boxes: tuple
    attempts: int
    acceptance_rate: float


def _completion_affine() -> tuple:
    """The dependent entries as an affine map of the free ones.

    Derived from the completion kernel itself so the two can never drift:
    returns (matrix, offset) with dependent = matrix @ free + offset, both
    exact dyadic rationals.
    """
    basis = np.zeros((9, 8))
    basis[1:] = np.eye(8)
    boxes, _ = complete_free_batch(np.ascontiguousarray(basis), 1.0)
    offset = boxes[0, list(DEPENDENT_INDICES)].copy()
    matrix = boxes[1:, list(DEPENDENT_INDICES)].T - offset[:, None]
    return matrix, offset


_DEP_MATRIX, _DEP_OFFSET = _completion_affine()


def _all_equalities(constraint: ConstraintSet) -> list:
    """User equalities plus normalization and no-signaling, as (coeffs, rhs)."""
    rows = [(np.array(c.coeffs), c.rhs) for c in constraint.constraints]
    for block in range(4):
        w = np.zeros(16)
        w[4 * block : 4 * block + 4] = 1.0
        rows.append((w, 1.0))
    for _, plus, minus in no_signaling_rows():
        w = np.zeros(16)
        w[list(plus)] += 1.0
        w[list(minus)] -= 1.0
        rows.append((w, 0.0))
    return rows


def _tighten_bounds(constraint: ConstraintSet) -> tuple:
    """Interval propagation of all equalities over p in [0, 1]^16."""
    lo = np.zeros(16)
    hi = np.ones(16)
    rows = _all_equalities(constraint)
    for _ in range(200):
        changed = False
        for w, rhs in rows:
            idx = np.nonzero(w)[0]
            terms_lo = np.minimum(w[idx] * lo[idx], w[idx] * hi[idx])
            terms_hi = np.maximum(w[idx] * lo[idx], w[idx] * hi[idx])
            total_lo = terms_lo.sum()
            total_hi = terms_hi.sum()
            for pos, i in enumerate(idx):
                other_lo = total_lo - terms_lo[pos]
                other_hi = total_hi - terms_hi[pos]
                num_lo = rhs - other_hi
                num_hi = rhs - other_lo
                if w[i] > 0:
                    new_lo, new_hi = num_lo / w[i], num_hi / w[i]
                else:
                    new_lo, new_hi = num_hi / w[i], num_lo / w[i]
                if new_lo > lo[i] + 1e-15:
                    lo[i] = new_lo
                    changed = True
                if new_hi < hi[i] - 1e-15:
                    hi[i] = new_hi
                    changed = True
            if (lo > hi + 1e-9).any():
                bad = int(np.argmax(lo - hi))
                raise InfeasibleConstraintError(
                    constraint.label, f"entry p{bad + 1} has empty range"
                )
        if not changed:
            break
    return lo, hi


def _free_space_system(constraint: ConstraintSet) -> tuple:
    """Equality system G f = h on the free coordinates.

    Combines the constraint equalities (rewritten through the completion
    map) with every entry pinned by bound tightening.
    """
    free = list(FREE_INDICES)
    dep = list(DEPENDENT_INDICES)
    rows, rhs = [], []
    for c in constraint.constraints:
        w = np.array(c.coeffs)
        rows.append(w[free] + _DEP_MATRIX.T @ w[dep])
        rhs.append(c.rhs - w[dep] @ _DEP_OFFSET)
    lo, hi = _tighten_bounds(constraint)
    pinned = np.nonzero(hi - lo <= _PIN_TOL)[0]
    for k in pinned:
        value = min(max((lo[k] + hi[k]) / 2.0, 0.0), 1.0)
        if k in FREE_INDICES:
            row = np.zeros(8)
            row[free.index(k)] = 1.0
            rows.append(row)
            rhs.append(value)
        else:
            d = dep.index(k)
            rows.append(_DEP_MATRIX[d].copy())
            rhs.append(value - _DEP_OFFSET[d])
    return np.array(rows), np.array(rhs)


def _affine_solution(constraint: ConstraintSet) -> tuple:
    """Particular solution and nullspace basis of the free-space system."""
    g, h = _free_space_system(constraint)
    part, *_ = np.linalg.lstsq(g, h, rcond=None)
    if np.abs(g @ part - h).max() > 1e-9:
        raise InfeasibleConstraintError(constraint.label, "equalities are inconsistent")
    _, s, vt = np.linalg.svd(g)
    rank = int((s > 1e-12 * max(s[0], 1.0)).sum()) if s.size else 0
    null = vt[rank:].T
    return part, null


def sample_boxes(samples: int, seed: int, constraint: ConstraintSet = None) -> SampledBoxes:
    """Draw valid boxes, optionally restricted to a constraint set.

    Deterministic for fixed (samples, seed, constraint).  Raises
    InfeasibleConstraintError when the constraint set is provably empty or
    the quota is not met within the attempt budget (1000 attempts per
    requested box, at least 10^6).  A fully determining constraint set
    returns its single box once.
    """
    samples = int(samples)
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    budget = max(_MAX_ATTEMPTS, 1000 * samples)
    if constraint is None:
        part = None
        null = np.eye(8)
    else:
        part, null = _affine_solution(constraint)
        if null.shape[1] == 0:
            boxes, ok = complete_free_batch(np.ascontiguousarray(part[None, :]), _PIN_TOL)
            if not ok[0]:
                raise InfeasibleConstraintError(
                    constraint.label, "unique solution is not a valid box"
                )
            box = JointBox.from_values(np.clip(boxes[0], 0.0, 1.0))
            return SampledBoxes(boxes=(box,), attempts=1, acceptance_rate=1.0)

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    projector = null @ null.T
    accepted = []
    attempts = 0
    while len(accepted) < samples and attempts < budget:
        u = rng.random((_BATCH, 8))
        attempts += _BATCH
        if part is None:
            candidates = u
        else:
            candidates = part + (u - part) @ projector
        in_cube = (
            (candidates >= -_PIN_TOL) & (candidates <= 1.0 + _PIN_TOL)
        ).all(axis=1)
        candidates = np.clip(candidates[in_cube], 0.0, 1.0)
        if candidates.shape[0] == 0:
            continue
        boxes, ok = complete_free_batch(np.ascontiguousarray(candidates), _PIN_TOL)
        for row in boxes[ok.astype(bool)]:
            accepted.append(JointBox.from_values(np.clip(row, 0.0, 1.0)))
            if len(accepted) == samples:
                break
    if len(accepted) < samples:
        label = constraint.label if constraint is not None else "<none>"
        raise InfeasibleConstraintError(
            label, f"accepted only {len(accepted)} of {samples} boxes in {attempts} attempts"
        )
    return SampledBoxes(
        boxes=tuple(accepted),
        attempts=attempts,
        acceptance_rate=len(accepted) / attempts,
    )


@dataclass(frozen=True)
class SearchConfig:
    """Scan parameters."""

    family: GameFamily
    constraint: ConstraintSet
    samples: int
    seed: int
    tol: float = 1e-6

    def __post_init__(self) -> None:
        if int(self.samples) < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class SearchHit:
    """A sampled box whose equilibria left the classical set."""

    index: int
    box: JointBox
    equilibria: EquilibriumSet
    classical_diff: str
    factorizable: bool
    chsh: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "box": self.box.tolist(),
            "equilibria": self.equilibria.to_dict(),
            "classical_diff": self.classical_diff,
            "factorizable": self.factorizable,
            "chsh": self.chsh,
        }


def scan_for_new_equilibria(config: SearchConfig, inject: tuple = ()) -> list:
    """Analyze sampled boxes and collect those with non-classical equilibria.

    inject prepends specific boxes (index 0 onward) ahead of the sampled
    stream, so golden boxes are always examined.  A hit is any box whose
    equilibrium set sits further than config.tol from the classical one in
    Hausdorff distance.
    """
    classical = classical_equilibria(config.family).equilibria
    stream = list(inject)
    stream.extend(sample_boxes(config.samples, config.seed, config.constraint).boxes)
    hits = []
    for index, box in enumerate(stream):
        report = analyze(config.family.matrix, box)
        distance = equilibrium_set_distance(report.equilibria, classical)
        if distance > config.tol:
            hits.append(
                SearchHit(
                    index=index,
                    box=box,
                    equilibria=report.equilibria,
                    classical_diff=f"hausdorff distance {distance:.9g} from classical equilibria",
                    factorizable=report.factorizable,
                    chsh=report.chsh,
                )
            )
    return hits
