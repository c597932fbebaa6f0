"""Named game families and frozen reference scenarios.

Three families are built in: Prisoner's Dilemma, Stag Hunt, and Chicken,
each with its defining payoff inequalities.  For every classical equilibrium
of a family there is a constraint set on boxes: linear equalities that any
factorizable box must satisfy for that equilibrium to survive, obtained by
translating conditions on the four coin biases into box entries.  Keeping
the equalities while dropping factorizability is what the rest of the
package explores.

reproduce() runs fixed end-to-end scenarios against frozen expected values
and reports any drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .epr_game import (
    ConstraintSet,
    analyze,
    epr_block_payoffs,
    linear_constraint,
)
from .game_core import (
    EquilibriumSet,
    PayoffMatrix,
    Segment,
    StrategyProfile,
    block_payoffs_classical,
    enumerate_equilibria,
    is_equilibrium,
    mixed_payoffs,
)
from .probability_box import CoinProfile, JointBox, named_box

__all__ = [
    "ClassicalSolution",
    "DeltaParams",
    "GameFamily",
    "ReproductionReport",
    "SCENARIOS",
    "chicken",
    "classical_equilibria",
    "coin_witness",
    "constraint_set_for",
    "constraint_targets",
    "deltas",
    "detect_family",
    "prisoners_dilemma",
    "reproduce",
    "sh_quantum_candidates",
    "stag_hunt",
]

PD_KIND = "prisoners-dilemma"
SH_KIND = "stag-hunt"
CHICKEN_KIND = "chicken"


@dataclass(frozen=True)
class GameFamily:
    """A validated member of one of the built-in families."""

    kind: str
    matrix: PayoffMatrix
    alpha: float = float("nan")
    beta: float = float("nan")


def prisoners_dilemma(K: float, L: float, M: float, N: float) -> GameFamily:
    """Prisoner's Dilemma: requires M > K > N > L."""
    if not M > K:
        raise ValueError(f"Prisoner's Dilemma requires M > K, got M={M}, K={K}")
    if not K > N:
        raise ValueError(f"Prisoner's Dilemma requires K > N, got K={K}, N={N}")
    if not N > L:
        raise ValueError(f"Prisoner's Dilemma requires N > L, got N={N}, L={L}")
    return GameFamily(kind=PD_KIND, matrix=PayoffMatrix(K, L, M, N))


def stag_hunt(K: float, L: float, M: float, N: float) -> GameFamily:
    """Stag Hunt: requires K > M >= N > L and M + N > K + L."""
    if not K > M:
        raise ValueError(f"Stag Hunt requires K > M, got K={K}, M={M}")
    if not M >= N:
        raise ValueError(f"Stag Hunt requires M >= N, got M={M}, N={N}")
    if not N > L:
        raise ValueError(f"Stag Hunt requires N > L, got N={N}, L={L}")
    if not M + N > K + L:
        raise ValueError(
            f"Stag Hunt requires M + N > K + L, got M+N={M + N}, K+L={K + L}"
        )
    return GameFamily(kind=SH_KIND, matrix=PayoffMatrix(K, L, M, N))


def chicken(alpha: float, beta: float) -> GameFamily:
    """Chicken with payoffs (K, L, M, N) = (0, alpha, beta, 0), 0 < alpha < alpha + beta."""
    if not alpha > 0:
        raise ValueError(f"Chicken requires 0 < alpha, got alpha={alpha}")
    if not alpha < alpha + beta:
        raise ValueError(
            f"Chicken requires alpha < alpha + beta (beta > 0), got beta={beta}"
        )
    return GameFamily(
        kind=CHICKEN_KIND,
        matrix=PayoffMatrix(0.0, float(alpha), float(beta), 0.0),
        alpha=float(alpha),
        beta=float(beta),
    )


def detect_family(matrix: PayoffMatrix):
    """Classify a bare payoff matrix into a family, or return None.

    The three families' defining inequalities are mutually exclusive, so at
    most one constructor accepts.
    """
    k, l, m, n = matrix.as_tuple()
    if k == 0.0 and n == 0.0:
        try:
            return chicken(l, m)
        except ValueError:
            pass
    for ctor in (prisoners_dilemma, stag_hunt):
        try:
            return ctor(k, l, m, n)
        except ValueError:
            continue
    return None


@dataclass(frozen=True)
class DeltaParams:
    """Payoff differences d1 = M-K, d2 = N-L, d3 = d2-d1, d4 = L+M-2N."""

    d1: float
    d2: float
    d3: float
    d4: float

    def as_tuple(self) -> tuple:
        return (self.d1, self.d2, self.d3, self.d4)


def deltas(family: GameFamily) -> DeltaParams:
    k, l, m, n = family.matrix.as_tuple()
    d1 = m - k
    d2 = n - l
    return DeltaParams(d1, d2, d2 - d1, l + m - 2 * n)


@dataclass(frozen=True)
class ClassicalSolution:
    """Equilibria of the plain game plus the payoff pair at each point."""

    equilibria: EquilibriumSet
    payoffs: tuple  # PayoffPair per equilibria.points entry


def classical_equilibria(family: GameFamily) -> ClassicalSolution:
    """The family's classical equilibria with payoffs.

    PD has the single point (0, 0) with payoff (N, N).  SH has (0, 0),
    (d2/d3, d2/d3), (1, 1) with payoffs (N, N), ((d2/d3)^2 d3 + (d2/d3) d4
    + N, same), (K, K).  Chicken has (1, 0), (a/(a+b), a/(a+b)), (0, 1)
    with payoffs (a, b), (ab/(a+b), same), (b, a).
    """
    blocks = block_payoffs_classical(family.matrix)
    eq = enumerate_equilibria(blocks)
    payoffs = tuple(mixed_payoffs(blocks, pt) for pt in eq.points)
    return ClassicalSolution(equilibria=eq, payoffs=payoffs)


# Constraint sets, one per (family, classical equilibrium).  Each is the
# box-entry translation of equalities on the coin biases (r = p1+p2,
# s = p9+p10, r' = p1+p3, s' = p5+p7), written in the frozen forms below.

_BOTH_SECOND_SET = (
    ({5: 1.0}, 0.0, "p5 = 0"),
    ({7: 1.0}, 0.0, "p7 = 0"),
    ({9: 1.0}, 0.0, "p9 = 0"),
    ({10: 1.0}, 0.0, "p10 = 0"),
    ({16: 1.0}, 1.0, "p16 = 1"),
)

_BOTH_FIRST_PD_SET = (
    ({5: 1.0}, 0.0, "p5 = 0"),
    ({6: 1.0}, 0.0, "p6 = 0"),
    ({9: 1.0}, 0.0, "p9 = 0"),
    ({11: 1.0}, 0.0, "p11 = 0"),
    ({4: 1.0}, 1.0, "p4 = 1"),
)

_SH_MIXED_SET = (
    ({1: 1.0}, 1.0, "p1 = 1"),
    ({6: 1.0}, 1.0, "p6 = 1"),
    ({11: 1.0}, 1.0, "p11 = 1"),
    ({16: 1.0}, 1.0, "p16 = 1"),
)

_SH_BOTH_FIRST_SET = (
    ({5: 1.0}, 0.0, "p5 = 0"),
    ({6: 1.0}, 0.0, "p6 = 0"),
    ({9: 1.0}, 0.0, "p9 = 0"),
    ({11: 1.0}, 0.0, "p11 = 0"),
    ({7: 1.0, 8: 1.0}, 1.0, "p7 + p8 = 1"),
    ({10: 1.0, 12: 1.0}, 1.0, "p10 + p12 = 1"),
    ({4: 1.0}, 1.0, "p4 = 1"),
)

# Chicken pure profiles: the coin conditions that reproduce the classical
# payoffs and pass the four-coin Nash inequalities for every value of the
# unconstrained coins are r = 1, s' = 0 for (1, 0) and r' = 1, s = 0 for
# (0, 1).
_CHICKEN_10_SET = (
    ({1: 1.0, 2: 1.0}, 1.0, "p1 + p2 = 1"),
    ({5: 1.0, 7: 1.0}, 0.0, "p5 + p7 = 0"),
)

_CHICKEN_01_SET = (
    ({1: 1.0, 3: 1.0}, 1.0, "p1 + p3 = 1"),
    ({9: 1.0, 10: 1.0}, 0.0, "p9 + p10 = 0"),
)

_CHICKEN_MIXED_EQUAL_SET = (
    ({1: 1.0, 2: 1.0, 9: 1.0, 10: 1.0}, 1.0, "p1 + p2 + p9 + p10 = 1"),
    ({1: 1.0, 3: 1.0, 5: 1.0, 7: 1.0}, 1.0, "p1 + p3 + p5 + p7 = 1"),
)


def _build_set(label: str, rows) -> ConstraintSet:
    return ConstraintSet(
        label=label,
        constraints=tuple(linear_constraint(t, rhs, label=lbl) for t, rhs, lbl in rows),
    )


def constraint_targets(family: GameFamily) -> tuple:
    """The named classical equilibria a constraint set exists for."""
    if family.kind == PD_KIND:
        return ("(0,0)", "(1,1)")
    if family.kind == SH_KIND:
        return ("(0,0)", "mixed", "(1,1)")
    if family.kind == CHICKEN_KIND:
        return ("(1,0)", "mixed", "(0,1)")
    raise ValueError(f"unknown family kind {family.kind!r}")


def constraint_set_for(family: GameFamily, target: str) -> ConstraintSet:
    """The box equalities tied to one classical equilibrium of the family."""
    if target not in constraint_targets(family):
        raise ValueError(
            f"unknown target {target!r} for {family.kind}; "
            f"expected one of {constraint_targets(family)}"
        )
    label = f"{family.kind}:{target}"
    if family.kind == PD_KIND:
        rows = _BOTH_SECOND_SET if target == "(0,0)" else _BOTH_FIRST_PD_SET
        return _build_set(label, rows)
    if family.kind == SH_KIND:
        rows = {
            "(0,0)": _BOTH_SECOND_SET,
            "mixed": _SH_MIXED_SET,
            "(1,1)": _SH_BOTH_FIRST_SET,
        }[target]
        return _build_set(label, rows)
    if target == "(1,0)":
        return _build_set(label, _CHICKEN_10_SET)
    if target == "(0,1)":
        return _build_set(label, _CHICKEN_01_SET)
    a, b = family.alpha, family.beta
    if abs(a - b) <= 1e-12:
        return _build_set(label, _CHICKEN_MIXED_EQUAL_SET)
    rows = (
        ({2: a, 4: a, 5: -b, 7: -b}, 0.0, "alpha*(p2 + p4) - beta*(p5 + p7) = 0"),
        ({3: a, 4: a, 9: -b, 10: -b}, 0.0, "alpha*(p3 + p4) - beta*(p9 + p10) = 0"),
    )
    return _build_set(label, rows)


def coin_witness(family: GameFamily, target: str) -> CoinProfile:
    """A coin profile whose product box satisfies the target's constraint set.

    Unconstrained coins are set to 1/2 so the witness stays dyadic and the
    residuals vanish exactly.
    """
    if target not in constraint_targets(family):
        raise ValueError(f"unknown target {target!r} for {family.kind}")
    if family.kind in (PD_KIND, SH_KIND):
        if target == "(0,0)":
            return CoinProfile(0.5, 0.0, 0.5, 0.0)
        if target == "(1,1)":
            return CoinProfile(0.0, 0.5, 0.0, 0.5)
        return CoinProfile(1.0, 0.0, 1.0, 0.0)
    if target == "(1,0)":
        return CoinProfile(1.0, 0.5, 0.5, 0.0)
    if target == "(0,1)":
        return CoinProfile(0.5, 0.0, 1.0, 0.5)
    # Mixed chicken: alpha*(1 - r) = beta*s and alpha*(1 - r') = beta*s'.
    m = min(0.5, family.beta / (2.0 * family.alpha))
    r = 1.0 - m
    s = family.alpha * m / family.beta
    return CoinProfile(r, s, r, s)


def sh_quantum_candidates(family: GameFamily, box: JointBox) -> tuple:
    """Stag Hunt candidate equilibria for a constrained box.

    Returns (label, x, y) triples for the five-member candidate list; the
    box-dependent formulas are skipped when their divisor vanishes or the
    result leaves the unit square.
    """
    if family.kind != SH_KIND:
        raise ValueError("candidate list is specific to stag-hunt")
    d = deltas(family)
    ratio = d.d2 / d.d3
    p = box.p
    p1, p8, p12, p13 = p[0], p[7], p[11], p[12]
    out = [
        ("pure-(0,0)", 0.0, 0.0),
        ("pure-(1,1)", 1.0, 1.0),
        ("mixed-classical", ratio, ratio),
    ]
    if p1 > 1e-12:
        out.append(("mixed-scaled", ratio * (1.0 - p12) / p1, ratio * (1.0 - p8) / p1))
    if p13 > 1e-12:
        # x must pair with p8 here: Bob's indifference bracket under the
        # (1,1)-family is -(1 - x) p13 d3 + (1 - p8) d2, the mirror image of
        # Alice's with p12.
        out.append(
            (
                "mixed-shifted",
                1.0 - ratio * (1.0 - p8) / p13,
                1.0 - ratio * (1.0 - p12) / p13,
            )
        )
    eps = 1e-9
    return tuple(
        (label, x, y)
        for label, x, y in out
        if -eps <= x <= 1.0 + eps and -eps <= y <= 1.0 + eps
    )


SCENARIOS = (
    "pd-classical",
    "pd-quantum",
    "sh-classical",
    "sh-quantum-cases",
    "chicken-classical",
    "chicken-set1",
    "chicken-set2",
    "sh-maximal-sets-incompatible",
)


@dataclass(frozen=True)
class ReproductionReport:
    scenario: str
    passed: bool
    expected: dict
    observed: dict
    diffs: tuple

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "expected": self.expected,
            "observed": self.observed,
            "diffs": list(self.diffs),
        }


def _points_match(observed, expected, tol):
    if len(observed) != len(expected):
        return False
    return all(
        math.hypot(o.x - e[0], o.y - e[1]) <= tol for o, e in zip(observed, expected)
    )


def _pairs_match(observed, expected, tol):
    if len(observed) != len(expected):
        return False
    return all(
        abs(o.alice - e[0]) <= tol and abs(o.bob - e[1]) <= tol
        for o, e in zip(observed, expected)
    )


def _classical_scenario(family, exp_points, exp_payoffs, tol):
    sol = classical_equilibria(family)
    diffs = []
    if not _points_match(sol.equilibria.points, exp_points, tol):
        diffs.append(
            f"equilibria {[pt.as_tuple() for pt in sol.equilibria.points]} "
            f"!= expected {exp_points}"
        )
    if not _pairs_match(sol.payoffs, exp_payoffs, tol):
        diffs.append(
            f"payoffs {[pp.as_tuple() for pp in sol.payoffs]} != expected {exp_payoffs}"
        )
    if sol.equilibria.segments:
        diffs.append("unexpected equilibrium segments")
    expected = {"points": exp_points, "payoffs": exp_payoffs}
    observed = {
        "points": [pt.as_tuple() for pt in sol.equilibria.points],
        "payoffs": [pp.as_tuple() for pp in sol.payoffs],
    }
    return expected, observed, diffs


def _maximal_chicken_scenario(which, exp_points, exp_payoffs, exp_edges):
    family = chicken(1.0, 1.0)
    box = named_box(f"chsh-max-{which}")
    report = analyze(family.matrix, box)
    tol = 1e-12
    diffs = []
    if not _points_match(report.equilibria.points, exp_points, tol):
        diffs.append(
            f"equilibria {[pt.as_tuple() for pt in report.equilibria.points]} "
            f"!= expected {exp_points}"
        )
    if not _pairs_match(report.payoffs, exp_payoffs, tol):
        diffs.append(
            f"payoffs {[pp.as_tuple() for pp in report.payoffs]} != expected {exp_payoffs}"
        )
    observed_edges = [seg.to_dict() for seg in report.equilibria.segments]
    if observed_edges != exp_edges:
        diffs.append(f"segments {observed_edges} != expected {exp_edges}")
    mixed_set = constraint_set_for(family, "mixed")
    if not mixed_set.satisfied(box, tol=1e-12):
        diffs.append("box unexpectedly violates the mixed-chicken constraint set")
    if report.factorizable:
        diffs.append("box unexpectedly factorizable")
    expected = {"points": exp_points, "payoffs": exp_payoffs, "segments": exp_edges}
    observed = {
        "points": [pt.as_tuple() for pt in report.equilibria.points],
        "payoffs": [pp.as_tuple() for pp in report.payoffs],
        "segments": observed_edges,
        "chsh": report.chsh,
    }
    return expected, observed, diffs


def _pd_quantum_scenario(samples, seed):
    from .search import sample_boxes

    family = prisoners_dilemma(3.0, 0.0, 5.0, 1.0)
    cs = constraint_set_for(family, "(0,0)")
    result = sample_boxes(samples, seed, cs)
    origin = StrategyProfile(0.0, 0.0)
    holds = 0
    for box in result.boxes:
        blocks = epr_block_payoffs(family.matrix, box)
        if is_equilibrium(blocks, origin, tol=1e-9):
            holds += 1
    total = len(result.boxes)
    diffs = []
    if total == 0:
        diffs.append("no boxes sampled")
    elif holds != total:
        diffs.append(f"(0,0) failed for {total - holds} of {total} boxes")
    expected = {"fraction_with_origin_equilibrium": 1.0}
    observed = {
        "samples": total,
        "fraction_with_origin_equilibrium": holds / total if total else 0.0,
        "acceptance_rate": result.acceptance_rate,
    }
    return expected, observed, diffs


def _sh_quantum_cases_scenario(samples, seed):
    from .search import sample_boxes

    family = stag_hunt(4.0, 0.0, 3.0, 3.0)
    diffs = []
    observed_cases = {}
    for target in ("(0,0)", "mixed", "(1,1)"):
        cs = constraint_set_for(family, target)
        result = sample_boxes(samples, seed, cs)
        arising = {}
        unmatched = 0
        segment_boxes = 0
        for box in result.boxes:
            eq = enumerate_equilibria(epr_block_payoffs(family.matrix, box))
            if eq.segments:
                segment_boxes += 1
            candidates = sh_quantum_candidates(family, box)
            for pt in eq.points:
                best = None
                for label, cx, cy in candidates:
                    dist = math.hypot(pt.x - cx, pt.y - cy)
                    if best is None or dist < best[1]:
                        best = (label, dist)
                if best is not None and best[1] <= 1e-6:
                    arising[best[0]] = arising.get(best[0], 0) + 1
                else:
                    unmatched += 1
        observed_cases[target] = {
            "boxes": len(result.boxes),
            "arising": arising,
            "unmatched_points": unmatched,
            "boxes_with_segments": segment_boxes,
        }
        if unmatched:
            diffs.append(f"case {target}: {unmatched} equilibrium points off-list")
        if segment_boxes:
            diffs.append(f"case {target}: {segment_boxes} boxes with segment equilibria")
        if not result.boxes:
            diffs.append(f"case {target}: no boxes sampled")
    expected = {"unmatched_points": 0, "candidate_list_size": 5}
    return expected, observed_cases, diffs


def _sh_incompatibility_scenario():
    family = stag_hunt(4.0, 0.0, 3.0, 3.0)
    floor = (2.0 - math.sqrt(2.0)) / 8.0
    diffs = []
    observed = {}
    for which in (1, 2):
        box = named_box(f"chsh-max-{which}")
        for target in ("(0,0)", "mixed", "(1,1)"):
            cs = constraint_set_for(family, target)
            residual = cs.max_residual(box)
            key = f"chsh-max-{which} vs {target}"
            observed[key] = residual
            if cs.satisfied(box, tol=1e-9):
                diffs.append(f"{key}: unexpectedly satisfied")
            if residual < floor - 1e-12:
                diffs.append(f"{key}: residual {residual} below floor {floor}")
    expected = {"satisfied": False, "min_max_residual": floor}
    return expected, observed, diffs


_SQRT2 = math.sqrt(2.0)


def reproduce(scenario: str) -> ReproductionReport:
    """Run one frozen scenario and compare against its expected outcome.

    Sampling scenarios use fixed seeds and sample counts, so every report
    is deterministic.
    """
    tol = 1e-12
    if scenario == "pd-classical":
        expected, observed, diffs = _classical_scenario(
            prisoners_dilemma(3.0, 0.0, 5.0, 1.0),
            [(0.0, 0.0)],
            [(1.0, 1.0)],
            0.0,
        )
    elif scenario == "sh-classical":
        expected, observed, diffs = _classical_scenario(
            stag_hunt(4.0, 0.0, 3.0, 3.0),
            [(0.0, 0.0), (0.75, 0.75), (1.0, 1.0)],
            [(3.0, 3.0), (3.0, 3.0), (4.0, 4.0)],
            tol,
        )
    elif scenario == "chicken-classical":
        third = 1.0 / 3.0
        expected, observed, diffs = _classical_scenario(
            chicken(1.0, 2.0),
            [(0.0, 1.0), (third, third), (1.0, 0.0)],
            [(2.0, 1.0), (2.0 * third, 2.0 * third), (1.0, 2.0)],
            tol,
        )
    elif scenario == "chicken-set1":
        hi = (2.0 + _SQRT2) / 4.0
        lo = (2.0 - _SQRT2) / 4.0
        expected, observed, diffs = _maximal_chicken_scenario(
            1, [(0.0, 0.0), (1.0, 1.0)], [(hi, hi), (lo, lo)], []
        )
    elif scenario == "chicken-set2":
        hi = (2.0 + _SQRT2) / 4.0
        edges = [
            Segment("x-free", 1.0, 0.0, 1.0).to_dict(),
            Segment("y-free", 1.0, 0.0, 1.0).to_dict(),
        ]
        expected, observed, diffs = _maximal_chicken_scenario(
            2,
            [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0)],
            [(hi, hi), (hi, hi), (hi, hi)],
            edges,
        )
    elif scenario == "pd-quantum":
        expected, observed, diffs = _pd_quantum_scenario(samples=300, seed=7)
    elif scenario == "sh-quantum-cases":
        expected, observed, diffs = _sh_quantum_cases_scenario(samples=200, seed=11)
    elif scenario == "sh-maximal-sets-incompatible":
        expected, observed, diffs = _sh_incompatibility_scenario()
    else:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    return ReproductionReport(
        scenario=scenario,
        passed=not diffs,
        expected=expected,
        observed=observed,
        diffs=tuple(diffs),
    )
