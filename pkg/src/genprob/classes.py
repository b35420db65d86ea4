"""Group-class predicates and the cached two-element generation test.

A ``GroupClass`` is a named predicate on finite groups (abelian, nilpotent,
soluble are built in).  The central operation is ``test_pair``: does the
subgroup generated by two elements belong to the class?  Pair enumeration
dominates every probability and graph computation, so results are cached per
(group, class) and each built-in class carries a fast test that avoids
constructing the subgroup where a cheap criterion exists:

* abelian: two generators commute.
* nilpotent: split both elements into prime parts; the pair generates a
  nilpotent group iff parts for distinct primes commute and each same-prime
  pair generates a p-group (checked by closure with the Sylow order of the
  ambient group as a hard size bound).
* soluble: orders below 60, odd orders, and two-prime orders force
  solubility; otherwise the generated subgroup is classified once per
  distinct subgroup via its derived series.

Every fast test is property-checked against the plain
``predicate(subgroup(x, y))`` route in the test suite.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import NotInGroup, UnknownName
from .group import FiniteGroup, direct_product
from .perm import Permutation, identity_tuple, inv, mul

__all__ = [
    "GroupClass",
    "ABELIAN",
    "NILPOTENT",
    "SOLUBLE",
    "BUILTIN_CLASSES",
    "class_by_name",
    "test_pair",
    "closure_audit",
    "ClosureAuditReport",
]

# Pair subgroups up to this size are classified by materialized closure
# (cheap, enables dedup by element set); larger ones go through the
# stabilizer chain instead.
_CLOSURE_AMBIENT_MAX = 1024

_SMALLEST_INSOLUBLE = 60  # |Alt(5)|; every group below this order is soluble


@dataclass(frozen=True)
class GroupClass:
    """A class of finite groups closed under subgroups, quotients and
    finite direct products (property-tested by ``closure_audit``)."""

    name: str
    predicate: Callable[[FiniteGroup], bool]
    # closure under subgroups lets omega() short-circuit when the whole
    # ambient group lies in the class
    subgroup_closed: bool = False
    fast_pair: Callable[[FiniteGroup, tuple, tuple], bool] | None = field(
        default=None, compare=False
    )

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# tuple-level helpers
# ---------------------------------------------------------------------------

def _tuple_order(t: tuple[int, ...]) -> int:
    seen = [False] * len(t)
    order = 1
    for start in range(len(t)):
        if seen[start] or t[start] == start:
            continue
        length = 1
        seen[start] = True
        j = t[start]
        while j != start:
            seen[j] = True
            length += 1
            j = t[j]
        order = math.lcm(order, length)
    return order


def _tuple_power(t: tuple[int, ...], k: int) -> tuple[int, ...]:
    result = identity_tuple(len(t))
    base = t
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _p_part_exponent(order: int, p: int) -> tuple[int, int]:
    """Split order = a*b with a the p-part; return (a, b)."""
    a = 1
    while order % p == 0:
        a *= p
        order //= p
    return a, order


def _p_part(t: tuple[int, ...], p: int) -> tuple[int, ...]:
    """The p-component of t inside the cyclic group it generates."""
    o = _tuple_order(t)
    a, b = _p_part_exponent(o, p)
    if a == 1:
        return identity_tuple(len(t))
    if b == 1:
        return t
    # exponent e with e = 1 mod a, e = 0 mod b
    e = b * pow(b, -1, a)
    return _tuple_power(t, e)


def _closure(gens: Sequence[tuple[int, ...]], degree: int,
             limit: int | None = None) -> set[tuple[int, ...]] | None:
    """Multiplicative closure of the generators; None if it exceeds limit."""
    ident = identity_tuple(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                f = mul(e, g)
                if f not in seen:
                    seen.add(f)
                    if limit is not None and len(seen) > limit:
                        return None
                    nxt.append(f)
        frontier = nxt
    return seen


def _small_generating_set(elems: set[tuple[int, ...]], degree: int) -> list[tuple[int, ...]]:
    gens: list[tuple[int, ...]] = []
    span: set[tuple[int, ...]] = {identity_tuple(degree)}
    for e in sorted(elems):
        if e in span:
            continue
        gens.append(e)
        span = _closure(gens, degree)  # type: ignore[assignment]
        if len(span) == len(elems):
            break
    return gens


def _normal_closure_in(seed: list[tuple[int, ...]], gens: Sequence[tuple[int, ...]],
                       degree: int) -> set[tuple[int, ...]]:
    """Closure of ``seed`` under multiplication and conjugation by ``gens``."""
    ident = identity_tuple(degree)
    closure_gens = [t for t in seed if t != ident]
    if not closure_gens:
        return {ident}
    gen_invs = [inv(g) for g in gens]
    span = _closure(closure_gens, degree)
    assert span is not None
    while True:
        new = []
        for t in closure_gens:
            for g, gi in zip(gens, gen_invs):
                c = mul(mul(gi, t), g)
                if c not in span:
                    new.append(c)
        if not new:
            return span
        closure_gens.extend(new)
        span = _closure(closure_gens, degree)  # type: ignore[assignment]
        assert span is not None


def _soluble_materialized(elems: set[tuple[int, ...]], degree: int) -> bool:
    current = elems
    while len(current) > 1:
        gens = _small_generating_set(current, degree)
        seeds = [
            mul(mul(inv(a), inv(b)), mul(a, b))
            for i, a in enumerate(gens)
            for b in gens[i + 1:]
        ]
        derived = _normal_closure_in(seeds, gens, degree)
        if len(derived) == len(current):
            return False
        current = derived
    return True


# ---------------------------------------------------------------------------
# fast pair tests
# ---------------------------------------------------------------------------

def _abelian_pair(G: FiniteGroup, xt: tuple, yt: tuple) -> bool:
    return mul(xt, yt) == mul(yt, xt)


def _nilpotent_pair(G: FiniteGroup, xt: tuple, yt: tuple) -> bool:
    if mul(xt, yt) == mul(yt, xt):
        return True
    degree = G.degree
    ident = identity_tuple(degree)
    primes = sorted(set(_prime_factors(_tuple_order(xt))) |
                    set(_prime_factors(_tuple_order(yt))))
    xparts = {p: _p_part(xt, p) for p in primes}
    yparts = {p: _p_part(yt, p) for p in primes}
    for p in primes:
        for q in primes:
            if p != q and mul(xparts[p], yparts[q]) != mul(yparts[q], xparts[p]):
                return False
    for p in primes:
        a, b = xparts[p], yparts[p]
        gens = [t for t in (a, b) if t != ident]
        if len(gens) < 2:
            continue
        sylow_bound, _ = _p_part_exponent(G.order, p)
        span = _closure(gens, degree, limit=sylow_bound)
        if span is None:
            return False
        n = len(span)
        while n % p == 0:
            n //= p
        if n != 1:
            return False
    return True


def _order_forces_soluble(n: int) -> bool:
    """Orders that admit no insoluble group: odd (Feit-Thompson) or with at
    most two prime divisors (Burnside)."""
    return n < _SMALLEST_INSOLUBLE or n % 2 == 1 or len(_prime_factors(n)) <= 2


def _soluble_pair(G: FiniteGroup, xt: tuple, yt: tuple) -> bool:
    if mul(xt, yt) == mul(yt, xt):
        return True
    span = _closure([xt, yt], G.degree, limit=_CLOSURE_AMBIENT_MAX)
    if span is not None:
        if _order_forces_soluble(len(span)):
            return True
        key = frozenset(span)
        cached = G.subgroup_cache.setdefault(key, {})
        if "soluble" not in cached:
            cached["soluble"] = _soluble_materialized(span, G.degree)
        return cached["soluble"]
    sub = FiniteGroup(G.degree, [Permutation(xt), Permutation(yt)], cap=G.cap)
    if _order_forces_soluble(sub.order):
        return True
    if sub.order == G.order:
        return G.is_soluble
    return sub.is_soluble


ABELIAN = GroupClass("abelian", lambda G: G.is_abelian, True, _abelian_pair)
NILPOTENT = GroupClass("nilpotent", lambda G: G.is_nilpotent, True, _nilpotent_pair)
SOLUBLE = GroupClass("soluble", lambda G: G.is_soluble, True, _soluble_pair)

BUILTIN_CLASSES = {c.name: c for c in (ABELIAN, NILPOTENT, SOLUBLE)}


def class_by_name(name: str) -> GroupClass:
    try:
        return BUILTIN_CLASSES[name]
    except KeyError:
        raise UnknownName(
            f"unknown class {name!r}; expected one of {sorted(BUILTIN_CLASSES)}"
        ) from None


# ---------------------------------------------------------------------------
# test_pair
# ---------------------------------------------------------------------------

def test_pair(C: GroupClass, G: FiniteGroup, x: Permutation, y: Permutation) -> bool:
    """Whether <x, y> lies in the class.  Results are cached per (G, C)."""
    if not G.contains(x) or not G.contains(y):
        raise NotInGroup("pair elements must lie in the group")
    return pair_in_group(C, G, x.images, y.images)


def pair_in_group(C: GroupClass, G: FiniteGroup, xt: tuple, yt: tuple) -> bool:
    """Internal test_pair over image tuples; membership is assumed."""
    # a subgroup-closed class containing G contains every <x, y>
    if C.subgroup_closed and C.predicate(G):
        return True
    cache = G.pair_cache.setdefault(C.name, {})
    key = (xt, yt) if xt <= yt else (yt, xt)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if C.fast_pair is not None:
        result = C.fast_pair(G, xt, yt)
    else:
        result = C.predicate(
            FiniteGroup(G.degree, [Permutation(xt), Permutation(yt)], cap=G.cap)
        )
    cache[key] = result
    return result


def pair_by_predicate(C: GroupClass, G: FiniteGroup, x: Permutation, y: Permutation) -> bool:
    """Uncached, fast-path-free route: build <x,y> and apply the predicate.

    This is the reference implementation that the fast tests are checked
    against; it is deliberately independent of ``test_pair`` internals.
    """
    return C.predicate(G.subgroup([x, y]))


# ---------------------------------------------------------------------------
# closure audit
# ---------------------------------------------------------------------------

@dataclass
class ClosureAuditReport:
    class_name: str
    checks: int
    violations: list[str]

    @property
    def passed(self) -> bool:
        return not self.violations


def closure_audit(
    C: GroupClass,
    samples: Sequence[FiniteGroup],
    seed: int = 0,
    rounds: int = 5,
) -> ClosureAuditReport:
    """Property-test the three closure axioms on sample groups in the class.

    For every sample already in the class: random 2-generated subgroups must
    stay in the class, quotients by random normal closures must stay in the
    class, and pairwise direct products (on disjoint supports) must stay in
    the class.
    """
    rng = random.Random(seed)
    report = ClosureAuditReport(C.name, 0, [])
    in_class = [G for G in samples if C.predicate(G)]

    def record(ok: bool, what: str) -> None:
        report.checks += 1
        if not ok:
            report.violations.append(what)

    for G in in_class:
        elems = G.elements()
        for _ in range(rounds):
            x, y = rng.choice(elems), rng.choice(elems)
            record(
                C.predicate(G.subgroup([x, y])),
                f"subgroup <{x}, {y}> of {G!r} left the class",
            )
            z = rng.choice(elems)
            quotient, _ = G.quotient(G.normal_closure([z]))
            record(
                C.predicate(quotient),
                f"quotient of {G!r} by closure of {z} left the class",
            )
    for i, A in enumerate(in_class):
        for B in in_class[i:]:
            record(
                C.predicate(direct_product(A, B)),
                f"direct product {A!r} x {B!r} left the class",
            )
    return report
