from fractions import Fraction

import pytest

from genprob import CapExceeded, GroupError, Permutation
from genprob.classes import ABELIAN, NILPOTENT, SOLUBLE
from genprob.tower import (
    QuotientTower,
    dihedral_tower,
    monotonicity_report,
    positivity_verdict,
    prob_sequence,
)


@pytest.fixture(scope="module")
def tower3():
    return dihedral_tower(3, 4)


class TestConstruction:
    def test_levels_and_orders(self, tower3):
        assert [G.order for G in tower3.levels] == [6, 18, 54, 162]
        assert [G.degree for G in tower3.levels] == [3, 9, 27, 81]

    def test_tracks_commute_with_projections(self, tower3):
        # re-run the internal verification explicitly
        tower3._verify()
        for k, proj in enumerate(tower3.projections):
            assert proj(tower3.tracks["x"][k + 1]) == tower3.tracks["x"][k]
            assert proj(tower3.tracks["r"][k + 1]) == tower3.tracks["r"][k]

    def test_projections_are_homomorphisms_beyond_generators(self, tower3):
        G1, G0 = tower3.levels[1], tower3.levels[0]
        proj = tower3.projections[0]
        for a in G1.elements():
            for b in G1.generators:
                assert proj(a * b) == proj(a) * proj(b)

    def test_rejects_non_prime(self):
        with pytest.raises(GroupError):
            dihedral_tower(9, 2)
        with pytest.raises(GroupError):
            dihedral_tower(2, 2)

    def test_rejects_oversized(self):
        with pytest.raises(CapExceeded):
            dihedral_tower(3, 4, cap=100)

    def test_bad_projection_rejected(self, tower3):
        broken = [lambda p: tower3.levels[0].identity for _ in range(3)]
        with pytest.raises(GroupError):
            QuotientTower("broken", list(tower3.levels), broken)


class TestSequences:
    def test_nilpotent_track_x(self, tower3):
        seq = prob_sequence(NILPOTENT, tower3, "x")
        assert seq == [Fraction(1, 3 ** n) for n in range(1, 5)]

    def test_soluble_is_constant_one(self, tower3):
        assert prob_sequence(SOLUBLE, tower3, "x") == [Fraction(1)] * 4

    def test_abelian_track_r(self, tower3):
        # the rotation commutes exactly with the rotation subgroup
        assert prob_sequence(ABELIAN, tower3, "r") == [Fraction(1, 2)] * 4

    def test_p5(self):
        t = dihedral_tower(5, 3)
        assert prob_sequence(NILPOTENT, t, "x") == [
            Fraction(1, 5), Fraction(1, 25), Fraction(1, 125)
        ]

    def test_monotonicity_report(self, tower3):
        report = monotonicity_report(NILPOTENT, tower3, "x")
        assert report.monotone
        assert not report.violations
        assert report.inf_upper_bound == Fraction(1, 81)
        payload = report.to_json()
        assert payload["levels"][0] == {
            "order": 6, "probability": {"num": 1, "den": 3}
        }
        assert payload["inf_upper_bound"] == {"num": 1, "den": 81}


class TestVerdicts:
    def test_nilpotent_negative(self, tower3):
        verdict = positivity_verdict(NILPOTENT, tower3, track="x")
        assert verdict.verdict == "not nilpotent-positive along track 'x'"
        assert verdict.indices == [6, 18, 54, 162]

    def test_soluble_positive(self, tower3):
        verdict = positivity_verdict(SOLUBLE, tower3)
        assert verdict.verdict == "virtually prosoluble"
        assert verdict.indices == [1, 1, 1, 1]

    def test_nilpotent_stabilized_is_finite_by_pronilpotent(self):
        # a constant tower of a fixed nilpotent-by-finite group
        t = dihedral_tower(3, 2)
        constant = QuotientTower(
            "constant",
            [t.levels[0], t.levels[0]],
            [lambda p: p],
            {"x": [t.tracks["x"][0]] * 2},
        )
        verdict = positivity_verdict(NILPOTENT, constant, track="x")
        assert verdict.verdict == "finite-by-pronilpotent"
