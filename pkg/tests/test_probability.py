import random
from fractions import Fraction

import pytest

from genprob import ElementSet, EmptySet, Permutation
from genprob.classes import ABELIAN, NILPOTENT, SOLUBLE
from genprob.probability import (
    averaging_identity_check,
    center,
    hall_bound_check,
    hypercenter,
    omega,
    omega_global,
    partition_identity_check,
    prob_elem,
    prob_group,
    prob_sets,
    quotient_monotonicity_check,
    soluble_radical,
    verify_identities,
)

from conftest import catalog_group

P = Permutation.parse


class TestOmega:
    def test_s3_nilpotent_transposition(self):
        S3 = catalog_group("S3")
        assert len(omega(NILPOTENT, S3, P("(1,2)", 3))) == 2

    def test_abelian_omega_is_centralizer(self):
        for name in ("S4", "D12", "Q8", "SL23"):
            G = catalog_group(name)
            for x in G.elements():
                assert omega(ABELIAN, G, x).members == G.centralizer(x).members

    def test_whole_group_shortcut(self):
        C12 = catalog_group("C12")
        assert len(omega(SOLUBLE, C12, C12.element_at(5))) == 12

    def test_prob_elem_identity_element(self):
        # the identity pairs into the class with exactly the class-members'
        # cyclic groups: <1, g> = <g>, always abelian
        G = catalog_group("S4")
        assert prob_elem(ABELIAN, G, G.identity).probability == 1


class TestProbGroup:
    def test_s3_nilpotent_is_half(self):
        assert prob_group(NILPOTENT, catalog_group("S3")).probability == Fraction(1, 2)

    @pytest.mark.parametrize("name", ["S3", "S4", "A4", "A5", "D12", "SL23", "PSL27"])
    @pytest.mark.parametrize("klass", [ABELIAN, NILPOTENT, SOLUBLE], ids=lambda c: c.name)
    def test_class_reduction_matches_exhaustive(self, name, klass):
        G = catalog_group(name)
        a = prob_group(klass, G, method="exhaustive")
        b = prob_group(klass, G, method="class-reduced")
        assert a.probability == b.probability

    def test_method_auto_switch(self):
        assert prob_group(SOLUBLE, catalog_group("S4")).method == "exhaustive"
        assert prob_group(SOLUBLE, catalog_group("S6")).method == "class-reduced"

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            prob_group(SOLUBLE, catalog_group("S3"), method="guess")


class TestProbSets:
    def test_empty_rejected(self):
        G = catalog_group("S3")
        full = ElementSet(G, frozenset(range(6)))
        with pytest.raises(EmptySet):
            prob_sets(SOLUBLE, G, ElementSet(G, frozenset()), full)

    def test_whole_times_whole_matches_prob_group(self):
        G = catalog_group("S4")
        full = ElementSet(G, frozenset(range(G.order)))
        assert prob_sets(NILPOTENT, G, full, full).probability == prob_group(
            NILPOTENT, G
        ).probability


class TestGlobalOmega:
    def test_reduced_matches_brute(self):
        for name in ("S4", "A5", "D12", "SL23", "PSL27"):
            G = catalog_group(name)
            for klass in (ABELIAN, NILPOTENT, SOLUBLE):
                assert (
                    omega_global(klass, G).members
                    == omega_global(klass, G, class_reduced=False).members
                )

    def test_simple_groups_have_trivial_soluble_core(self):
        for name in ("A5", "PSL27", "A6"):
            assert len(omega_global(SOLUBLE, catalog_group(name))) == 1

    def test_structural_oracles(self):
        for name in ("S4", "A5", "SL23", "C3xA5", "D18"):
            G = catalog_group(name)
            assert verify_identities(G).passed

    def test_radical_of_c3xa5(self):
        G = catalog_group("C3xA5")
        assert len(soluble_radical(G)) == 3
        assert len(hypercenter(G)) == 3
        assert len(center(G)) == 3

    def test_radical_index_identity(self):
        for name in ("A5", "S5", "C3xA5", "S4"):
            G = catalog_group(name)
            core = omega_global(SOLUBLE, G)
            assert len(core) * (G.order // len(soluble_radical(G))) == G.order


class TestLaws:
    def test_averaging(self):
        G = catalog_group("S4")
        X = ElementSet(G, frozenset(range(G.order)))
        for klass in (ABELIAN, NILPOTENT, SOLUBLE):
            assert averaging_identity_check(klass, G, X).holds

    def test_averaging_on_subset(self):
        G = catalog_group("A5")
        rng = random.Random(2)
        X = ElementSet(G, frozenset(rng.sample(range(60), 10)))
        assert averaging_identity_check(SOLUBLE, G, X).holds

    def test_quotient_monotonicity(self):
        S4 = catalog_group("S4")
        V = S4.subgroup([P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
        for klass in (ABELIAN, NILPOTENT, SOLUBLE):
            for x in (P("(1,2)", 4), P("(1,2,3)", 4), P("(1,2,3,4)", 4)):
                assert quotient_monotonicity_check(klass, S4, V, x).holds

    def test_partition_identity_cosets(self):
        S3 = catalog_group("S3")
        A3 = S3.subgroup([P("(1,2,3)", 3)])
        parts = S3.coset_partition(A3)
        for klass in (ABELIAN, NILPOTENT, SOLUBLE):
            assert partition_identity_check(klass, S3, parts, parts).holds

    def test_partition_identity_random_split(self):
        G = catalog_group("A4")
        rng = random.Random(5)
        indices = list(range(12))
        rng.shuffle(indices)
        parts = [ElementSet(G, frozenset(indices[i::3])) for i in range(3)]
        assert partition_identity_check(SOLUBLE, G, parts, parts).holds


class TestHallBound:
    def instances(self):
        A4 = catalog_group("A4")
        V = A4.subgroup([P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
        S3 = catalog_group("S3")
        C3 = S3.subgroup([P("(1,2,3)", 3)])
        D12 = catalog_group("D12")
        rot = D12.generators[0]
        Q3 = D12.subgroup([rot * rot])
        C6 = catalog_group("C6")
        QS = catalog_group("Q8xS3")  # Q8 x S3 on 8 + 3 points
        Q8C3 = QS.subgroup(
            [QS.generators[0], QS.generators[1], QS.generators[3] * QS.generators[3]]
        )  # Q8 x <(1,2,3)>, normal nilpotent of order 24
        flip = QS.generators[2] * QS.generators[3]  # the S3 transposition part
        return [
            (A4, V, P("(1,2,3)", 4), P("(1,2,3)", 4)),
            (A4, V, P("(1,2,3)", 4), P("(1,3,2)", 4)),
            (A4, V, P("(1,2,3)", 4), A4.identity),
            (S3, C3, P("(1,2)", 3), P("(1,2)", 3)),
            (S3, C3, P("(1,2)", 3), S3.identity),
            (D12, Q3, rot ** 3, D12.generators[1]),
            (QS, Q8C3, flip, flip),
            (C6, C6, C6.identity, C6.identity),
        ]

    def test_bound_holds_on_all_instances(self):
        results = [hall_bound_check(*inst) for inst in self.instances()]
        assert len(results) >= 6
        for r in results:
            assert r.holds, r.details

    def test_klein_instance_value(self):
        A4 = catalog_group("A4")
        V = A4.subgroup([P("(1,2)(3,4)", 4), P("(1,3)(2,4)", 4)])
        r = hall_bound_check(A4, V, P("(1,2,3)", 4), P("(1,2,3)", 4))
        assert r.details["bound"] == Fraction(1, 4)
        assert r.details["probability"] == Fraction(1, 4)

    def test_precondition_failures_reported(self):
        S3 = catalog_group("S3")
        triv = S3.subgroup([])
        r = hall_bound_check(S3, triv, P("(1,2)", 3), P("(1,2)", 3))
        assert not r.holds
        assert "G != NQ" in r.details["failures"]
        A5 = catalog_group("A5")
        r = hall_bound_check(A5, A5.subgroup([]), P("(1,2,3)", 5), P("(1,2,3,4,5)", 5))
        assert not r.holds
