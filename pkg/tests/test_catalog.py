"""Family constructors, per-equilibrium constraint sets, frozen scenarios."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprgames.epr_game import epr_block_payoffs, linear_constraint
from eprgames.game_core import PayoffMatrix, StrategyProfile, is_equilibrium
from eprgames.games_catalog import (
    GameFamily,
    SCENARIOS,
    chicken,
    classical_equilibria,
    coin_witness,
    constraint_set_for,
    constraint_targets,
    deltas,
    detect_family,
    prisoners_dilemma,
    reproduce,
    sh_quantum_candidates,
    stag_hunt,
)
from eprgames.probability_box import CoinProfile, JointBox, from_coins, named_box

PD = prisoners_dilemma(3.0, 0.0, 5.0, 1.0)
SH = stag_hunt(4.0, 0.0, 3.0, 3.0)
CHICKEN12 = chicken(1.0, 2.0)


class TestFamilyConstructors:
    def test_pd_accepts_canonical_payoffs(self):
        assert PD.kind == "prisoners-dilemma"
        assert PD.matrix.as_tuple() == (3.0, 0.0, 5.0, 1.0)

    @pytest.mark.parametrize("k,l,m,n,frag", [
        (3.0, 0.0, 2.0, 1.0, "M > K"),
        (3.0, 0.0, 5.0, 4.0, "K > N"),
        (3.0, 2.0, 5.0, 1.0, "N > L"),
    ])
    def test_pd_rejects_broken_orderings(self, k, l, m, n, frag):
        with pytest.raises(ValueError, match=frag.replace(">", ".")):
            prisoners_dilemma(k, l, m, n)

    def test_sh_accepts_canonical_payoffs(self):
        assert SH.kind == "stag-hunt"
        assert SH.matrix.as_tuple() == (4.0, 0.0, 3.0, 3.0)

    @pytest.mark.parametrize("k,l,m,n", [
        (3.0, 0.0, 4.0, 3.0),   # K > M fails
        (4.0, 0.0, 2.0, 3.0),   # M >= N fails
        (4.0, 3.0, 3.0, 3.0),   # N > L fails
        (5.0, 0.0, 4.0, 1.0),   # M + N > K + L fails
    ])
    def test_sh_rejects_broken_orderings(self, k, l, m, n):
        with pytest.raises(ValueError):
            stag_hunt(k, l, m, n)

    def test_chicken_embeds_into_payoff_matrix(self):
        assert CHICKEN12.kind == "chicken"
        assert CHICKEN12.alpha == 1.0 and CHICKEN12.beta == 2.0
        assert CHICKEN12.matrix.as_tuple() == (0.0, 1.0, 2.0, 0.0)

    @pytest.mark.parametrize("alpha,beta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -0.5)])
    def test_chicken_rejects_non_positive_parameters(self, alpha, beta):
        with pytest.raises(ValueError):
            chicken(alpha, beta)


class TestDetectFamily:
    @pytest.mark.parametrize("family", [PD, SH, CHICKEN12, chicken(2.0, 1.0)])
    def test_round_trip(self, family):
        found = detect_family(family.matrix)
        assert found is not None
        assert found.kind == family.kind
        assert found.matrix.as_tuple() == family.matrix.as_tuple()

    def test_chicken_recovers_parameters(self):
        found = detect_family(PayoffMatrix(0.0, 1.0, 2.0, 0.0))
        assert found.kind == "chicken"
        assert (found.alpha, found.beta) == (1.0, 2.0)

    @pytest.mark.parametrize("payoffs", [
        (1.0, 1.0, 1.0, 1.0),
        (0.0, -1.0, 2.0, 0.0),   # chicken shape but alpha <= 0
        (5.0, 4.0, 3.0, 2.0),
    ])
    def test_unclassifiable_matrices_return_none(self, payoffs):
        assert detect_family(PayoffMatrix(*payoffs)) is None


class TestDeltas:
    def test_pd_values(self):
        assert deltas(PD).as_tuple() == (2.0, 1.0, -1.0, 3.0)

    def test_sh_values(self):
        assert deltas(SH).as_tuple() == (-1.0, 3.0, 4.0, -3.0)

    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
    def test_chicken_values(self, alpha, beta):
        d = deltas(chicken(alpha, beta))
        assert d.as_tuple() == (beta, -alpha, -alpha - beta, alpha + beta)


class TestClassicalEquilibria:
    def test_pd_exact(self):
        sol = classical_equilibria(PD)
        assert [pt.as_tuple() for pt in sol.equilibria.points] == [(0.0, 0.0)]
        assert [pp.as_tuple() for pp in sol.payoffs] == [(1.0, 1.0)]
        assert not sol.equilibria.segments and not sol.equilibria.full_square

    def test_sh_three_equilibria(self):
        sol = classical_equilibria(SH)
        got = {pt.as_tuple(): pp.as_tuple()
               for pt, pp in zip(sol.equilibria.points, sol.payoffs)}
        assert set(got) == {(0.0, 0.0), (0.75, 0.75), (1.0, 1.0)}
        assert got[(0.0, 0.0)] == pytest.approx((3.0, 3.0), abs=1e-12)
        assert got[(0.75, 0.75)] == pytest.approx((3.0, 3.0), abs=1e-12)
        assert got[(1.0, 1.0)] == pytest.approx((4.0, 4.0), abs=1e-12)

    def test_chicken_payoffs_by_point(self):
        sol = classical_equilibria(CHICKEN12)
        got = {(round(pt.x, 9), round(pt.y, 9)): pp.as_tuple()
               for pt, pp in zip(sol.equilibria.points, sol.payoffs)}
        third = round(1.0 / 3.0, 9)
        assert set(got) == {(0.0, 1.0), (third, third), (1.0, 0.0)}
        assert got[(1.0, 0.0)] == pytest.approx((1.0, 2.0), abs=1e-12)
        assert got[(0.0, 1.0)] == pytest.approx((2.0, 1.0), abs=1e-12)
        assert got[(third, third)] == pytest.approx((2 / 3, 2 / 3), abs=1e-12)

    @given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
    @settings(max_examples=40, deadline=None)
    def test_chicken_mixed_point_formula(self, alpha, beta):
        sol = classical_equilibria(chicken(alpha, beta))
        share = alpha / (alpha + beta)
        value = alpha * beta / (alpha + beta)
        interior = [pt for pt in sol.equilibria.points if 0.0 < pt.x < 1.0]
        assert len(interior) == 1
        pt = interior[0]
        assert (pt.x, pt.y) == pytest.approx((share, share), abs=1e-9)
        idx = sol.equilibria.points.index(pt)
        assert sol.payoffs[idx].as_tuple() == pytest.approx((value, value), abs=1e-9)


class TestConstraintTargets:
    def test_per_family_targets(self):
        assert constraint_targets(PD) == ("(0,0)", "(1,1)")
        assert constraint_targets(SH) == ("(0,0)", "mixed", "(1,1)")
        assert constraint_targets(CHICKEN12) == ("(1,0)", "mixed", "(0,1)")

    def test_unknown_kind_rejected(self):
        bogus = GameFamily(kind="bogus", matrix=PayoffMatrix(0, 0, 0, 0))
        with pytest.raises(ValueError, match="bogus"):
            constraint_targets(bogus)

    def test_unknown_target_rejected(self):
        with pytest.raises(ValueError, match="mixed"):
            constraint_set_for(PD, "mixed")


class TestConstraintSetContents:
    def test_pd_origin_set_rows(self):
        cs = constraint_set_for(PD, "(0,0)")
        assert cs.label == "prisoners-dilemma:(0,0)"
        assert [c.label for c in cs.constraints] == [
            "p5 = 0", "p7 = 0", "p9 = 0", "p10 = 0", "p16 = 1",
        ]

    def test_sh_both_first_set_rows(self):
        cs = constraint_set_for(SH, "(1,1)")
        assert [c.label for c in cs.constraints] == [
            "p5 = 0", "p6 = 0", "p9 = 0", "p11 = 0",
            "p7 + p8 = 1", "p10 + p12 = 1", "p4 = 1",
        ]

    def test_chicken_general_mixed_rows(self):
        cs = constraint_set_for(CHICKEN12, "mixed")
        assert len(cs.constraints) == 2
        first = cs.constraints[0]
        assert first.coeffs[1] == 1.0 and first.coeffs[3] == 1.0
        assert first.coeffs[4] == -2.0 and first.coeffs[6] == -2.0
        assert first.rhs == 0.0

    def test_chicken_equal_mixed_rows(self):
        cs = constraint_set_for(chicken(1.0, 1.0), "mixed")
        assert [c.label for c in cs.constraints] == [
            "p1 + p2 + p9 + p10 = 1", "p1 + p3 + p5 + p7 = 1",
        ]

    def test_equal_parameter_forms_agree_on_normalized_boxes(self):
        # With alpha = beta the general rows reduce to the frozen special
        # rows through the first block's normalization: p2 + p4 = 1 - p1 - p3
        # turns alpha*(p2+p4) - beta*(p5+p7) into -(p1+p3+p5+p7 - 1).
        general_row1 = linear_constraint({2: 1.0, 4: 1.0, 5: -1.0, 7: -1.0}, 0.0)
        general_row2 = linear_constraint({3: 1.0, 4: 1.0, 9: -1.0, 10: -1.0}, 0.0)
        special = constraint_set_for(chicken(1.0, 1.0), "mixed")
        rng = np.random.default_rng(99)
        for _ in range(40):
            first = from_coins(CoinProfile(*rng.uniform(size=4)))
            second = from_coins(CoinProfile(*rng.uniform(size=4)))
            w = rng.uniform()
            box = JointBox.from_values(w * first.p + (1 - w) * second.p)
            s1, s2 = (c.residual(box.p) for c in special.constraints)
            assert general_row1.residual(box.p) == pytest.approx(-s2, abs=1e-12)
            assert general_row2.residual(box.p) == pytest.approx(-s1, abs=1e-12)

    def test_maximal_boxes_sit_inside_the_mixed_chicken_set(self):
        cs = constraint_set_for(chicken(1.0, 1.0), "mixed")
        assert cs.max_residual(named_box("chsh-max-1")) <= 1e-12
        assert cs.max_residual(named_box("chsh-max-2")) <= 1e-12


ALL_TARGET_CASES = [
    (family, target)
    for family in (PD, SH, chicken(1.0, 1.0), CHICKEN12, chicken(2.0, 1.0))
    for target in constraint_targets(family)
]


def target_profile(family, target):
    if target == "mixed":
        if family.kind == "stag-hunt":
            d = deltas(family)
            w = d.d2 / d.d3
        else:
            w = family.alpha / (family.alpha + family.beta)
        return StrategyProfile(w, w)
    x, y = eval(target)  # targets are literal "(x,y)" pairs
    return StrategyProfile(float(x), float(y))


class TestCoinWitness:
    @pytest.mark.parametrize("family,target", ALL_TARGET_CASES,
                             ids=[f"{f.kind}-{t}" for f, t in ALL_TARGET_CASES])
    def test_witness_box_has_zero_residual(self, family, target):
        box = from_coins(coin_witness(family, target))
        cs = constraint_set_for(family, target)
        assert cs.max_residual(box) == 0.0

    @pytest.mark.parametrize("family,target", ALL_TARGET_CASES,
                             ids=[f"{f.kind}-{t}" for f, t in ALL_TARGET_CASES])
    def test_witness_box_keeps_the_target_equilibrium(self, family, target):
        box = from_coins(coin_witness(family, target))
        blocks = epr_block_payoffs(family.matrix, box)
        assert is_equilibrium(blocks, target_profile(family, target), tol=1e-9)

    def test_unknown_target_rejected(self):
        with pytest.raises(ValueError, match="unknown target"):
            coin_witness(PD, "(1,0)")

    def test_chicken_mixed_witness_values(self):
        assert coin_witness(CHICKEN12, "mixed").as_tuple() == (0.5, 0.25, 0.5, 0.25)
        assert coin_witness(chicken(2.0, 1.0), "mixed").as_tuple() == (0.75, 0.5, 0.75, 0.5)


class TestClassicalConsistency:
    """Factorizable boxes inside a constraint set keep the paired equilibrium."""

    @staticmethod
    def coin_families(rng):
        u = rng.uniform
        yield PD, "(0,0)", lambda: (u(), 0.0, u(), 0.0)
        yield PD, "(1,1)", lambda: (0.0, u(), 0.0, u())
        yield SH, "(0,0)", lambda: (u(), 0.0, u(), 0.0)
        yield SH, "(1,1)", lambda: (0.0, u(), 0.0, u())
        yield SH, "mixed", lambda: (1.0, 0.0, 1.0, 0.0)
        yield CHICKEN12, "(1,0)", lambda: (1.0, u(), u(), 0.0)
        yield CHICKEN12, "(0,1)", lambda: (u(), 0.0, 1.0, u())

        def mixed():
            r, rp = u(), u()
            return (r, (1.0 - r) / 2.0, rp, (1.0 - rp) / 2.0)

        yield CHICKEN12, "mixed", mixed

    def test_constrained_product_boxes(self):
        rng = np.random.default_rng(20260815)
        for family, target, draw in self.coin_families(rng):
            cs = constraint_set_for(family, target)
            profile = target_profile(family, target)
            blocks_for = family.matrix
            for _ in range(30):
                box = from_coins(CoinProfile(*draw()))
                assert cs.satisfied(box, tol=1e-12), (family.kind, target)
                blocks = epr_block_payoffs(blocks_for, box)
                assert is_equilibrium(blocks, profile, tol=1e-9), (family.kind, target)


class TestShQuantumCandidates:
    def test_rejects_other_families(self):
        with pytest.raises(ValueError, match="stag-hunt"):
            sh_quantum_candidates(PD, named_box("uniform"))

    def test_uniform_box_keeps_only_unit_square_entries(self):
        got = sh_quantum_candidates(SH, named_box("uniform"))
        assert [g[0] for g in got] == ["pure-(0,0)", "pure-(1,1)", "mixed-classical"]
        assert got[2][1] == pytest.approx(0.75)

    def test_guards_skip_vanishing_divisors(self):
        box = from_coins(CoinProfile(0.0, 0.0, 0.0, 0.0))  # p1 = p13 = 0
        labels = [g[0] for g in sh_quantum_candidates(SH, box)]
        assert "mixed-scaled" not in labels
        assert "mixed-shifted" not in labels

    def test_shifted_candidate_matches_enumerated_interior_point(self):
        # A box in the (1,1)-family with an interior equilibrium: the frozen
        # formula must land exactly on what the enumerator finds.
        box = JointBox.from_values(
            [0.0, 0.0, 0.0, 1.0,
             0.0, 0.0, 0.7, 0.3,
             0.0, 0.7, 0.0, 0.3,
             0.6, 0.1, 0.1, 0.2])
        assert constraint_set_for(SH, "(1,1)").satisfied(box, tol=1e-12)
        got = dict((label, (x, y)) for label, x, y in sh_quantum_candidates(SH, box))
        assert got["mixed-shifted"] == pytest.approx((0.125, 0.125), abs=1e-15)
        from eprgames.game_core import enumerate_equilibria
        eq = enumerate_equilibria(epr_block_payoffs(SH.matrix, box))
        interior = [pt for pt in eq.points if 0.0 < pt.x < 1.0]
        assert len(interior) == 1
        assert (interior[0].x, interior[0].y) == pytest.approx((0.125, 0.125), abs=1e-12)


class TestScenarios:
    def test_catalog_lists_eight_scenarios(self):
        assert SCENARIOS == (
            "pd-classical",
            "pd-quantum",
            "sh-classical",
            "sh-quantum-cases",
            "chicken-classical",
            "chicken-set1",
            "chicken-set2",
            "sh-maximal-sets-incompatible",
        )

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ValueError, match="unknown scenario"):
            reproduce("nope")

    def test_pd_classical_report_shape(self):
        report = reproduce("pd-classical")
        assert report.passed
        assert report.observed["points"] == [(0.0, 0.0)]
        assert report.observed["payoffs"] == [(1.0, 1.0)]
        d = report.to_dict()
        assert set(d) == {"scenario", "passed", "expected", "observed", "diffs"}
        assert d["diffs"] == []

    def test_chicken_set2_keeps_edges(self):
        report = reproduce("chicken-set2")
        assert report.passed
        assert len(report.observed["segments"]) == 2

    @pytest.mark.parametrize("scenario", SCENARIOS)
    def test_every_scenario_passes(self, scenario):
        report = reproduce(scenario)
        assert report.passed, report.diffs
