"""Explicit arithmetic in Alt(5) wr Alt(5) and verification of the finite
steps behind the tower construction.

The wreath product has base Alt(5)^60 indexed by the canonical enumeration
of the top group, with the top acting by the regular action.  Only the first
level (base length 60) is materialized; level two would have base length
60^61 and is out of reach by design.

Multiplication convention: for a = (f, s) and b = (g, t),
``(a*b).base[x] = f(x) * g(x*s)`` and ``(a*b).top = s*t``.  This is the one
convention under which conjugating a base-only element w by rho = m*z
satisfies ``(w^rho)[x] = (w[x*z^-1]) conjugated by m[x*z^-1]``, which the
regression tests pin down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import GroupError, NotInGroup
from .group import ElementSet, FiniteGroup
from .perm import Permutation

__all__ = [
    "WreathLevel",
    "WreathElement",
    "Transversal",
    "alt5",
    "base_level",
    "canonical_transversal",
    "shifted_transversal",
    "build_m",
    "build_g",
    "compute_h",
    "projection",
    "verify_alpha_beta_generation",
    "verify_lemma_mechanism",
    "solubilizer_in_alt5",
    "ALPHA",
    "BETA",
]

ALPHA = Permutation.parse("(1,2,3)", 5)
BETA = Permutation.parse("(1,2,3,4,5)", 5)


@lru_cache(maxsize=1)
def alt5() -> FiniteGroup:
    return FiniteGroup(5, [ALPHA, BETA], name="A5")


@dataclass(frozen=True)
class WreathLevel:
    """One level of the tower: bottom wr top with the regular action."""

    top: FiniteGroup
    bottom: FiniteGroup

    @property
    def base_length(self) -> int:
        return self.top.order

    def order(self) -> int:
        return self.bottom.order ** self.top.order * self.top.order

    def index_of(self, x: Permutation) -> int:
        return self.top.index_of(x)

    def identity(self) -> "WreathElement":
        bot_id = self.bottom.identity
        return WreathElement((bot_id,) * self.base_length, self.top.identity)

    def from_base(self, coords: dict[Permutation, Permutation]) -> "WreathElement":
        base = [self.bottom.identity] * self.base_length
        for x, y in coords.items():
            base[self.index_of(x)] = y
        return WreathElement(tuple(base), self.top.identity)

    def from_top(self, s: Permutation) -> "WreathElement":
        self.top._require_member(s)
        return WreathElement((self.bottom.identity,) * self.base_length, s)

    def validate(self, w: "WreathElement") -> None:
        if len(w.base) != self.base_length:
            raise GroupError("base length mismatch")
        if not self.top.contains(w.top):
            raise NotInGroup("top component outside the top group")
        for y in w.base:
            if not self.bottom.contains(y):
                raise NotInGroup("base coordinate outside the bottom group")

    def multiply(self, a: "WreathElement", b: "WreathElement") -> "WreathElement":
        elems = self.top.elements()
        idx = self.top.index_of
        base = tuple(
            a.base[i] * b.base[idx(elems[i] * a.top)]
            for i in range(self.base_length)
        )
        return WreathElement(base, a.top * b.top)

    def inverse(self, a: "WreathElement") -> "WreathElement":
        elems = self.top.elements()
        idx = self.top.index_of
        top_inv = a.top.inverse()
        base = tuple(
            a.base[idx(elems[i] * top_inv)].inverse()
            for i in range(self.base_length)
        )
        return WreathElement(base, top_inv)

    def power(self, a: "WreathElement", k: int) -> "WreathElement":
        result = self.identity()
        current = a if k >= 0 else self.inverse(a)
        for _ in range(abs(k)):
            result = self.multiply(result, current)
        return result

    def conjugate(self, w: "WreathElement", rho: "WreathElement") -> "WreathElement":
        return self.multiply(self.multiply(self.inverse(rho), w), rho)

    def element_order(self, a: "WreathElement") -> int:
        ident = self.identity()
        current = a
        n = 1
        while current != ident:
            current = self.multiply(current, a)
            n += 1
        return n


@dataclass(frozen=True)
class WreathElement:
    base: tuple[Permutation, ...]
    top: Permutation

    @property
    def in_socle(self) -> bool:
        return self.top.is_identity()


@dataclass(frozen=True)
class Transversal:
    """Left-coset representatives of <g> in the top group, identity included."""

    representatives: tuple[Permutation, ...]
    g: Permutation = field(compare=False)

    def __post_init__(self) -> None:
        if not any(r.is_identity() for r in self.representatives):
            raise GroupError("transversal must contain the identity")

    def __len__(self) -> int:
        return len(self.representatives)


def _coset_key(top: FiniteGroup, x: Permutation, g: Permutation) -> frozenset[int]:
    """Index set of the left coset x<g>."""
    members = set()
    power = top.identity
    while True:
        members.add(top.index_of(x * power))
        power = power * g
        if power.is_identity():
            return frozenset(members)


def canonical_transversal(top: FiniteGroup, g: Permutation) -> Transversal:
    """Greedy sweep of the canonical enumeration: take x when its coset of
    <g> is not yet represented.  Index 0 is the identity, so 1 is in T."""
    seen: set[frozenset[int]] = set()
    reps = []
    for x in top.elements():
        key = _coset_key(top, x, g)
        if key not in seen:
            seen.add(key)
            reps.append(x)
    return Transversal(tuple(reps), g)


def shifted_transversal(top: FiniteGroup, g: Permutation, shift: int = 1) -> Transversal:
    """A different valid transversal: every non-identity representative is
    multiplied by g^shift (staying inside its left coset)."""
    base = canonical_transversal(top, g)
    reps = tuple(
        r if r.is_identity() else r * g ** shift for r in base.representatives
    )
    return Transversal(reps, g)


def random_transversal(top: FiniteGroup, g: Permutation, seed: int) -> Transversal:
    rng = random.Random(seed)
    order_g = g.order()
    reps = tuple(
        r if r.is_identity() else r * g ** rng.randrange(order_g)
        for r in canonical_transversal(top, g).representatives
    )
    return Transversal(reps, g)


def _check_transversal(level: WreathLevel, T: Transversal) -> None:
    expected = level.top.order // T.g.order()
    keys = {_coset_key(level.top, r, T.g) for r in T.representatives}
    if len(T.representatives) != expected or len(keys) != expected:
        raise GroupError("invalid transversal: wrong size or repeated coset")


def build_m(level: WreathLevel, T: Transversal) -> WreathElement:
    """Base-only element: alpha at the identity coordinate, beta at the other
    transversal coordinates, identity elsewhere."""
    _check_transversal(level, T)
    coords = {}
    for r in T.representatives:
        coords[r] = ALPHA if r.is_identity() else BETA
    return level.from_base(coords)


def build_g(level: WreathLevel, T: Transversal, g_top: Permutation) -> WreathElement:
    return level.multiply(build_m(level, T), level.from_top(g_top))


def compute_h(level: WreathLevel, g_elem: WreathElement) -> WreathElement:
    """g raised to the order of its top component; lands in the socle."""
    gamma = g_elem.top.order()
    h = level.power(g_elem, gamma)
    if not h.in_socle:
        raise GroupError(
            "g^|top| escaped the socle: wreath multiplication convention bug"
        )
    return h


def projection(level: WreathLevel, w: WreathElement, x: Permutation) -> Permutation:
    """Coordinate of a socle element at the index of x."""
    if not w.in_socle:
        raise GroupError("projection is only defined on socle elements")
    return w.base[level.index_of(x)]


def base_level() -> tuple[WreathLevel, Permutation]:
    """The tower's first step: Alt(5) wr Alt(5) with distinguished top
    element alpha."""
    A5 = alt5()
    return WreathLevel(top=A5, bottom=A5), ALPHA


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class GenerationReport:
    checks: int
    passed: int
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.checks


def verify_alpha_beta_generation() -> GenerationReport:
    """<alpha, beta^u> is all of Alt(5) for every u in Alt(5): no proper
    subgroup contains both an element of order 3 and one of order 5."""
    A5 = alt5()
    report = GenerationReport(0, 0)
    for u in A5.elements():
        report.checks += 1
        sub = A5.subgroup([ALPHA, BETA ** u])
        if sub.order == 60:
            report.passed += 1
        else:
            report.failures.append(f"u={u}: order {sub.order}")
    return report


@dataclass
class MechanismReport:
    alpha_beta_checks: int
    alpha_beta_passed: int
    sampled_checks: int
    sampled_passed: int
    containment_checks: int
    containment_passed: int
    h_pattern_ok: bool
    order_g: int
    order_h: int
    seed: int

    @property
    def all_passed(self) -> bool:
        return (
            self.alpha_beta_passed == self.alpha_beta_checks
            and self.sampled_passed == self.sampled_checks
            and self.containment_passed == self.containment_checks
            and self.h_pattern_ok
        )

    def to_json(self) -> dict:
        return {
            "alpha_beta_checks": self.alpha_beta_checks,
            "passed": self.all_passed,
            "sampled_checks": self.sampled_checks,
            "h_pattern_ok": self.h_pattern_ok,
            "order_g1": self.order_g,
            "order_h1": self.order_h,
            "seed": self.seed,
        }


def h_pattern_ok(level: WreathLevel, h: WreathElement, g_top: Permutation) -> bool:
    """Projection of h is alpha on the cyclic group of the top element and
    beta everywhere else."""
    cyclic = {g_top ** k for k in range(g_top.order())}
    for x in level.top.elements():
        expected = ALPHA if x in cyclic else BETA
        if projection(level, h, x) != expected:
            return False
    return True


def verify_lemma_mechanism(
    level: WreathLevel,
    T: Transversal,
    samples: int = 100,
    seed: int = 0,
) -> MechanismReport:
    """Exhaustive-plus-sampled check of the containment mechanism.

    For every top element z outside <g> and `samples` random base elements m,
    the conjugate of h by rho = m*z projects, at the identity coordinate, to
    a pair (alpha, beta^u) generating Alt(5) -- so <h, rho> is insoluble and
    rho cannot lie in the solubilizer.  Top elements z inside <g> are checked
    to land in socle*<g> instead.
    """
    g_top = T.g
    rng = random.Random(seed)
    g_elem = build_g(level, T, g_top)
    h = compute_h(level, g_elem)
    pattern = h_pattern_ok(level, h, g_top)

    gen_report = verify_alpha_beta_generation()
    # order of <alpha, beta^u> keyed by u, reused for every sampled check
    A5 = alt5()
    gen_ok = {
        u.images: A5.subgroup([ALPHA, BETA ** u]).order == 60 for u in A5.elements()
    }

    cyclic = {g_top ** k for k in range(g_top.order())}
    top_elems = level.top.elements()
    bottom_elems = level.bottom.elements()

    sampled_checks = sampled_passed = 0
    containment_checks = containment_passed = 0
    ident_idx_coord = top_elems[0]
    for z in top_elems:
        if z in cyclic:
            # rho = m*z stays in socle*<g> for any base part m
            containment_checks += 1
            m = WreathElement(
                tuple(rng.choice(bottom_elems) for _ in range(level.base_length)),
                level.top.identity,
            )
            rho = level.multiply(m, level.from_top(z))
            if rho.top in cyclic and rho.base == m.base:
                containment_passed += 1
            continue
        z_inv = z.inverse()
        witness_coord = level.index_of(ident_idx_coord * z_inv)  # x z^-1 with x = 1
        for _ in range(samples):
            base = tuple(rng.choice(bottom_elems) for _ in range(level.base_length))
            rho = WreathElement(base, z)
            sampled_checks += 1
            h_rho = level.conjugate(h, rho)
            p1 = projection(level, h, ident_idx_coord)
            p2 = projection(level, h_rho, ident_idx_coord)
            # the conjugate's coordinate at 1 is the coordinate of h at z^-1,
            # conjugated by the base entry there
            u = base[witness_coord]
            expected = projection(level, h, ident_idx_coord * z_inv) ** u
            if p1 == ALPHA and p2 == expected == BETA ** u and gen_ok[u.images]:
                sampled_passed += 1

    return MechanismReport(
        alpha_beta_checks=gen_report.checks,
        alpha_beta_passed=gen_report.passed,
        sampled_checks=sampled_checks,
        sampled_passed=sampled_passed,
        containment_checks=containment_checks,
        containment_passed=containment_passed,
        h_pattern_ok=pattern,
        order_g=level.element_order(g_elem),
        order_h=level.element_order(h),
        seed=seed,
    )


def solubilizer_in_alt5(x: Permutation) -> ElementSet:
    """Exhaustive solubilizer of x in Alt(5)."""
    from .classes import SOLUBLE
    from .probability import omega

    A5 = alt5()
    return omega(SOLUBLE, A5, x)
