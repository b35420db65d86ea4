import pytest

from genprob import GroupError, Permutation
from genprob.wreath import (
    ALPHA,
    BETA,
    WreathElement,
    alt5,
    base_level,
    build_g,
    build_m,
    canonical_transversal,
    compute_h,
    h_pattern_ok,
    projection,
    random_transversal,
    shifted_transversal,
    solubilizer_in_alt5,
    verify_alpha_beta_generation,
    verify_lemma_mechanism,
)

P = Permutation.parse


@pytest.fixture(scope="module")
def level():
    lvl, _ = base_level()
    return lvl


@pytest.fixture(scope="module")
def T(level):
    return canonical_transversal(level.top, ALPHA)


class TestArithmetic:
    def test_order(self, level):
        assert level.order() == 60 ** 60 * 60
        assert level.base_length == 60

    def test_identity_and_inverse(self, level):
        e = level.identity()
        assert level.multiply(e, e) == e
        w = build_m(level, canonical_transversal(level.top, ALPHA))
        assert level.multiply(w, level.inverse(w)) == e

    def test_associativity_spot_check(self, level, T):
        a = build_g(level, T, ALPHA)
        b = level.from_top(BETA)
        c = build_m(level, T)
        lhs = level.multiply(level.multiply(a, b), c)
        rhs = level.multiply(a, level.multiply(b, c))
        assert lhs == rhs

    def test_top_projection_is_homomorphism(self, level, T):
        a = build_g(level, T, ALPHA)
        b = build_g(level, T, BETA)
        assert level.multiply(a, b).top == a.top * b.top

    def test_regular_action_convention(self, level):
        # conjugating a socle element by a pure top element z moves the
        # coordinate at x to x * z^-1
        coords = {level.top.element_at(7): P("(1,2,3,4,5)", 5)}
        w = level.from_base(coords)
        z = level.top.element_at(11)
        conj = level.conjugate(w, level.from_top(z))
        for x in level.top.elements():
            expected = coords.get(x * z.inverse(), level.bottom.identity)
            assert projection(level, conj, x) == expected


class TestConstruction:
    def test_m_pattern(self, level, T):
        m = build_m(level, T)
        alpha_coords = [y for y in m.base if y == ALPHA]
        beta_coords = [y for y in m.base if y == BETA]
        ident_coords = [y for y in m.base if y.is_identity()]
        assert (len(alpha_coords), len(beta_coords), len(ident_coords)) == (1, 19, 40)
        assert projection(level, m, level.top.identity) == ALPHA

    def test_orders(self, level, T):
        g1 = build_g(level, T, ALPHA)
        h1 = compute_h(level, g1)
        assert level.element_order(g1) == 45
        assert level.element_order(h1) == 15
        assert h1 == level.power(g1, 3)
        assert h1.in_socle and not g1.in_socle

    def test_h_pattern(self, level, T):
        h1 = compute_h(level, build_g(level, T, ALPHA))
        assert h_pattern_ok(level, h1, ALPHA)
        cyclic = {ALPHA ** k for k in range(3)}
        alpha_count = sum(1 for x in level.top.elements() if x in cyclic)
        assert alpha_count == 3

    def test_pattern_is_transversal_independent(self, level):
        transversals = [
            canonical_transversal(level.top, ALPHA),
            shifted_transversal(level.top, ALPHA),
            shifted_transversal(level.top, ALPHA, shift=2),
            random_transversal(level.top, ALPHA, seed=99),
        ]
        assert len({t.representatives for t in transversals}) >= 3
        for t in transversals:
            h = compute_h(level, build_g(level, t, ALPHA))
            assert h_pattern_ok(level, h, ALPHA)
            assert level.element_order(h) == 15

    def test_projection_rejects_non_socle(self, level, T):
        g1 = build_g(level, T, ALPHA)
        with pytest.raises(GroupError):
            projection(level, g1, level.top.identity)

    def test_bad_transversal_rejected(self, level, T):
        broken = type(T)(T.representatives[:-1], ALPHA)
        with pytest.raises(GroupError):
            build_m(level, broken)


class TestVerification:
    def test_alpha_beta_generation(self):
        report = verify_alpha_beta_generation()
        assert report.checks == 60
        assert report.passed == 60
        assert report.all_passed

    def test_negative_control_three_cycle(self):
        # replacing beta by a 3-cycle must break generation for some u:
        # <(1,2,3), (1,2,3)^u> can sit inside Alt(4) or a point stabilizer
        A5 = alt5()
        gamma = P("(1,2,3)", 5)
        orders = {A5.subgroup([ALPHA, gamma ** u]).order for u in A5.elements()}
        assert orders != {60}

    def test_mechanism(self, level, T):
        report = verify_lemma_mechanism(level, T, samples=20, seed=3)
        assert report.all_passed
        assert report.sampled_checks == 57 * 20
        assert report.sampled_passed == report.sampled_checks
        assert report.containment_checks == 3
        assert report.h_pattern_ok
        assert (report.order_g, report.order_h) == (45, 15)

    def test_mechanism_seed_recorded(self, level, T):
        report = verify_lemma_mechanism(level, T, samples=2, seed=77)
        assert report.seed == 77
        assert report.to_json()["seed"] == 77

    def test_solubilizer_in_alt5(self):
        core = solubilizer_in_alt5(ALPHA)
        assert len(core) < 60
        assert alt5().identity in core
