"""Finite permutation group engine.

A ``FiniteGroup`` is built from generators and carries a stabilizer chain
(base points + strong generators), which gives exact order and membership
without materializing elements.  Element materialization is a separate,
capped step used by the counting machinery.

The canonical element enumeration is a breadth-first closure from the
generators in fixed generator order, each new level sorted by image tuple,
so index 0 is always the identity and the ordering is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import CapExceeded, DegreeMismatch, NotInGroup, NotNormal, ParseError
from .perm import Permutation, identity_tuple, inv, mul

__all__ = [
    "FiniteGroup",
    "ElementSet",
    "DEFAULT_MATERIALIZATION_CAP",
    "from_generators",
    "direct_product",
    "parse_group_spec",
    "format_group_spec",
]

DEFAULT_MATERIALIZATION_CAP = 100_000


def _conj(x: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    return mul(mul(inv(g), x), g)


def _comm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return mul(mul(inv(a), inv(b)), mul(a, b))


# ---------------------------------------------------------------------------
# Stabilizer chain (deterministic Schreier-Sims)
# ---------------------------------------------------------------------------

class _Level:
    __slots__ = ("point", "gens", "orbit")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[tuple[int, ...]] = []
        # orbit[x] = transversal perm u with u(point) = x
        self.orbit: dict[int, tuple[int, ...]] = {point: identity_tuple(degree)}


class StabilizerChain:
    """Base and strong generating set for a permutation group."""

    def __init__(self, degree: int, gens: Iterable[tuple[int, ...]]):
        self.degree = degree
        self.levels: list[_Level] = []
        ident = identity_tuple(degree)
        for g in gens:
            if g != ident:
                self._add_generator(g, 0)

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def order(self) -> int:
        return math.prod(len(lv.orbit) for lv in self.levels)

    def strong_generators(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        for lv in self.levels:
            for g in lv.gens:
                if g not in out:
                    out.append(g)
        return out

    def sift(self, p: tuple[int, ...], start: int = 0) -> tuple[tuple[int, ...], int]:
        """Strip p through the chain; returns (residue, level reached)."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            img = p[lv.point]
            u = lv.orbit.get(img)
            if u is None:
                return p, i
            p = mul(p, inv(u))
        return p, len(self.levels)

    def contains(self, p: tuple[int, ...]) -> bool:
        residue, _ = self.sift(p)
        return residue == identity_tuple(self.degree)

    def _add_generator(self, p: tuple[int, ...], level: int) -> None:
        # p fixes the base points of all levels before `level`
        self._insert(p, level, level)

    def _insert(self, p: tuple[int, ...], first: int, last: int) -> None:
        """Install p as a strong generator at levels first..last, then re-close.

        p fixes the base points of all levels before `last`, so it belongs in
        the generating set of every level in the range, not just the deepest;
        skipping the intermediate levels breaks the subgroup-chain invariant
        the order computation relies on.
        """
        for k in range(first, last + 1):
            if k == len(self.levels):
                point = next(i for i in range(self.degree) if p[i] != i)
                self.levels.append(_Level(point, self.degree))
            lv = self.levels[k]
            lv.gens.append(p)
            self._recompute_orbit(lv)
        for k in range(last, first - 1, -1):
            self._close_level(k)

    def _recompute_orbit(self, lv: _Level) -> None:
        lv.orbit = {lv.point: identity_tuple(self.degree)}
        frontier = [lv.point]
        while frontier:
            nxt = []
            for x in frontier:
                u = lv.orbit[x]
                for g in lv.gens:
                    y = g[x]
                    if y not in lv.orbit:
                        lv.orbit[y] = mul(u, g)
                        nxt.append(y)
            frontier = nxt

    def _close_level(self, level: int) -> None:
        lv = self.levels[level]
        ident = identity_tuple(self.degree)
        for x in list(lv.orbit):
            u = lv.orbit[x]
            for g in lv.gens:
                schreier = mul(mul(u, g), inv(lv.orbit[g[x]]))
                if schreier == ident:
                    continue
                residue, j = self.sift(schreier, level + 1)
                if residue != ident:
                    self._insert(residue, level + 1, j)


# ---------------------------------------------------------------------------
# FiniteGroup
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A finite permutation group given by generators.

    Immutable after construction; queries are read-only and may be issued
    concurrently.  ``elements()`` materializes the full element list and is
    gated by ``cap``.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        cap: int = DEFAULT_MATERIALIZATION_CAP,
        name: str | None = None,
    ):
        if degree < 1:
            raise ValueError("degree must be positive")
        for g in generators:
            if g.degree != degree:
                raise DegreeMismatch(
                    f"generator {g} has degree {g.degree}, expected {degree}"
                )
        self.degree = degree
        self.generators = tuple(generators)
        self.cap = cap
        self.name = name
        self._gen_tuples = tuple(g.images for g in generators)
        self.chain = StabilizerChain(degree, self._gen_tuples)
        self.order: int = self.chain.order()
        self._elements: list[tuple[int, ...]] | None = None
        self._index: dict[tuple[int, ...], int] | None = None
        # shared caches used by the class / probability machinery
        self.pair_cache: dict[str, dict[tuple, bool]] = {}
        self.subgroup_cache: dict[frozenset, dict[str, bool]] = {}
        self._class_data: tuple | None = None

    # -- identity / keys ----------------------------------------------------

    @cached_property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    @cached_property
    def cache_key(self) -> str:
        """Stable hash of (degree, generators), for persisted caches."""
        import hashlib

        blob = repr((self.degree, self._gen_tuples)).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def __repr__(self) -> str:
        label = self.name or f"degree-{self.degree} group"
        return f"<FiniteGroup {label} of order {self.order}>"

    # -- membership ----------------------------------------------------------

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(
                f"element degree {p.degree} does not match group degree {self.degree}"
            )
        return self.chain.contains(p.images)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def _require_member(self, p: Permutation) -> None:
        if not self.contains(p):
            raise NotInGroup(f"{p} is not an element of {self!r}")

    # -- canonical enumeration ------------------------------------------------

    def elements(self) -> list[Permutation]:
        return [Permutation(t) for t in self.element_tuples()]

    def element_tuples(self) -> list[tuple[int, ...]]:
        if self._elements is None:
            if self.order > self.cap:
                raise CapExceeded(
                    f"order {self.order} exceeds materialization cap {self.cap}"
                )
            ident = identity_tuple(self.degree)
            seen = {ident}
            out = [ident]
            frontier = [ident]
            while frontier:
                new = []
                for e in frontier:
                    for g in self._gen_tuples:
                        f = mul(e, g)
                        if f not in seen:
                            seen.add(f)
                            new.append(f)
                new.sort()
                out.extend(new)
                frontier = new
            self._elements = out
            self._index = {t: i for i, t in enumerate(out)}
        return self._elements

    def index_of(self, p: Permutation | tuple[int, ...]) -> int:
        t = p.images if isinstance(p, Permutation) else p
        self.element_tuples()
        assert self._index is not None
        try:
            return self._index[t]
        except KeyError:
            raise NotInGroup(f"element not in group {self!r}") from None

    def element_at(self, index: int) -> Permutation:
        return Permutation(self.element_tuples()[index])

    @property
    def is_materialized(self) -> bool:
        return self._elements is not None

    # -- subgroup construction -------------------------------------------------

    def subgroup(self, gens: Sequence[Permutation], name: str | None = None) -> "FiniteGroup":
        for g in gens:
            self._require_member(g)
        return FiniteGroup(self.degree, gens, cap=self.cap, name=name)

    def normal_closure(self, gens: Sequence[Permutation]) -> "FiniteGroup":
        """Smallest normal subgroup of this group containing ``gens``."""
        for g in gens:
            self._require_member(g)
        return self._normal_closure_tuples([g.images for g in gens])

    def _normal_closure_tuples(self, seed: list[tuple[int, ...]]) -> "FiniteGroup":
        ident = identity_tuple(self.degree)
        closure_gens = [t for t in seed if t != ident]
        chain = StabilizerChain(self.degree, closure_gens)
        worklist = list(closure_gens)
        while worklist:
            t = worklist.pop()
            for g in self._gen_tuples:
                c = _conj(t, g)
                if not chain.contains(c):
                    closure_gens.append(c)
                    worklist.append(c)
                    chain._add_generator(c, 0)
        sub = FiniteGroup.__new__(FiniteGroup)
        sub.degree = self.degree
        sub.generators = tuple(Permutation(t) for t in closure_gens)
        sub.cap = self.cap
        sub.name = None
        sub._gen_tuples = tuple(closure_gens)
        sub.chain = chain
        sub.order = chain.order()
        sub._elements = None
        sub._index = None
        sub.pair_cache = {}
        sub.subgroup_cache = {}
        sub._class_data = None
        return sub

    # -- elementwise structure ---------------------------------------------------

    def centralizer(self, x: Permutation) -> "ElementSet":
        self._require_member(x)
        xt = x.images
        members = frozenset(
            i for i, t in enumerate(self.element_tuples()) if mul(t, xt) == mul(xt, t)
        )
        return ElementSet(self, members)

    def center(self) -> "ElementSet":
        members = frozenset(
            i
            for i, t in enumerate(self.element_tuples())
            if all(mul(t, g) == mul(g, t) for g in self._gen_tuples)
        )
        return ElementSet(self, members)

    def conjugacy_classes(self) -> list[tuple[Permutation, int]]:
        """(enumeration-minimal representative, class size) per class."""
        reps, sizes, _, _ = self._conjugacy_data()
        return [(self.element_at(r), s) for r, s in zip(reps, sizes)]

    def _conjugacy_data(self) -> tuple[list[int], list[int], list[int], list[tuple[int, ...]]]:
        """Returns (rep indices, class sizes, class id per element, transporters).

        ``transporters[i]`` is a group element g with rep^g equal to element i,
        where rep is the representative of element i's class.
        """
        if self._class_data is None:
            elems = self.element_tuples()
            n = len(elems)
            class_of = [-1] * n
            transporter: list[tuple[int, ...]] = [identity_tuple(self.degree)] * n
            reps: list[int] = []
            sizes: list[int] = []
            for start in range(n):
                if class_of[start] != -1:
                    continue
                cid = len(reps)
                reps.append(start)
                class_of[start] = cid
                transporter[start] = identity_tuple(self.degree)
                frontier = [start]
                count = 1
                while frontier:
                    nxt = []
                    for i in frontier:
                        for g in self._gen_tuples:
                            c = _conj(elems[i], g)
                            j = self.index_of(c)
                            if class_of[j] == -1:
                                class_of[j] = cid
                                transporter[j] = mul(transporter[i], g)
                                nxt.append(j)
                                count += 1
                    frontier = nxt
                sizes.append(count)
            self._class_data = (reps, sizes, class_of, transporter)
        return self._class_data

    # -- series and predicates ------------------------------------------------

    def derived_subgroup(self) -> "FiniteGroup":
        gens = self._gen_tuples
        seed = [
            _comm(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]
        ]
        return self._normal_closure_tuples(seed)

    def derived_series(self) -> list["FiniteGroup"]:
        """Descending derived series, stopping when it stabilizes."""
        series = [self]
        current = self
        while current.order > 1:
            nxt = current.derived_subgroup()
            if nxt.order == current.order:
                break
            series.append(nxt)
            current = nxt
        return series

    def lower_central_series(self) -> list["FiniteGroup"]:
        series = [self]
        current = self
        while current.order > 1:
            seed = [
                _comm(g, c)
                for g in self._gen_tuples
                for c in current._gen_tuples
            ]
            nxt = self._normal_closure_tuples(seed)
            if nxt.order == current.order:
                break
            series.append(nxt)
            current = nxt
        return series

    def upper_central_series(self) -> list["ElementSet"]:
        """Ascending central series as element sets, ending at the hypercenter.

        Z_{i+1} = { x : [x,g] in Z_i for every generator g }, which needs only
        membership in the previous term, never a quotient group.
        """
        elems = self.element_tuples()
        current: frozenset[int] = frozenset({0})
        series = [ElementSet(self, current)]
        while True:
            members = set()
            in_current = current
            for i, t in enumerate(elems):
                ti = inv(t)
                ok = True
                for g in self._gen_tuples:
                    c = mul(mul(ti, inv(g)), mul(t, g))
                    if self.index_of(c) not in in_current:
                        ok = False
                        break
                if ok:
                    members.add(i)
            nxt = frozenset(members)
            if nxt == current:
                break
            series.append(ElementSet(self, nxt))
            current = nxt
        return series

    def hypercenter(self) -> "ElementSet":
        return self.upper_central_series()[-1]

    @cached_property
    def is_abelian(self) -> bool:
        gens = self._gen_tuples
        return all(
            mul(a, b) == mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:]
        )

    @cached_property
    def is_nilpotent(self) -> bool:
        return self.lower_central_series()[-1].order == 1

    @cached_property
    def is_soluble(self) -> bool:
        return self.derived_series()[-1].order == 1

    # -- quotients ---------------------------------------------------------------

    def quotient(
        self, normal: "FiniteGroup"
    ) -> tuple["FiniteGroup", Callable[[Permutation], Permutation]]:
        """Quotient by a normal subgroup, as the action on its right cosets.

        Returns the quotient group and the projection homomorphism.
        Normality is verified by conjugating each subgroup generator by each
        group generator.
        """
        for ng in normal._gen_tuples:
            if not self.chain.contains(ng):
                raise NotInGroup("subgroup is not contained in the group")
            for g in self._gen_tuples:
                if not normal.chain.contains(_conj(ng, g)):
                    raise NotNormal("subgroup is not normal")
        index = self.order // normal.order
        if index > self.cap:
            raise CapExceeded(f"index {index} exceeds cap {self.cap}")

        # BFS over right cosets Ng in canonical generator order
        reps: list[tuple[int, ...]] = [identity_tuple(self.degree)]
        rep_inv: list[tuple[int, ...]] = [identity_tuple(self.degree)]

        def coset_index(t: tuple[int, ...]) -> int | None:
            for j, ri in enumerate(rep_inv):
                if normal.chain.contains(mul(t, ri)):
                    return j
            return None

        frontier = [0]
        while frontier:
            nxt = []
            for i in frontier:
                for g in self._gen_tuples:
                    t = mul(reps[i], g)
                    if coset_index(t) is None:
                        reps.append(t)
                        rep_inv.append(inv(t))
                        nxt.append(len(reps) - 1)
            frontier = nxt
        assert len(reps) == index

        def project(p: Permutation) -> Permutation:
            self._require_member(p)
            images = []
            for rep in reps:
                j = coset_index(mul(rep, p.images))
                assert j is not None
                images.append(j)
            return Permutation(tuple(images))

        quotient_group = FiniteGroup(
            max(index, 1),
            [project(g) for g in self.generators],
            cap=self.cap,
            name=f"{self.name}/N" if self.name else None,
        )
        return quotient_group, project

    # -- cosets --------------------------------------------------------------------

    def right_coset(self, sub: "FiniteGroup", rep: Permutation) -> "ElementSet":
        """The coset (sub)·rep as an element set of this group."""
        self._require_member(rep)
        members = frozenset(
            self.index_of(mul(t, rep.images)) for t in sub.element_tuples()
        )
        return ElementSet(self, members)

    def coset_partition(self, sub: "FiniteGroup") -> list["ElementSet"]:
        """Partition of the group into right cosets of ``sub``, in index order."""
        covered: set[int] = set()
        parts = []
        for i, t in enumerate(self.element_tuples()):
            if i in covered:
                continue
            coset = self.right_coset(sub, Permutation(t))
            covered |= coset.members
            parts.append(coset)
        return parts


@dataclass(frozen=True)
class ElementSet:
    """A subset of a materialized group, stored as canonical element indices."""

    group: FiniteGroup = field(compare=False)
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        n = self.group.order
        if any(not 0 <= i < n for i in self.members):
            raise ValueError("member index out of range")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: Permutation) -> bool:
        return self.group.index_of(p) in self.members

    def perms(self) -> list[Permutation]:
        return [self.group.element_at(i) for i in sorted(self.members)]

    def conjugate(self, g: Permutation) -> "ElementSet":
        elems = self.group.element_tuples()
        gt = g.images
        return ElementSet(
            self.group,
            frozenset(self.group.index_of(_conj(elems[i], gt)) for i in self.members),
        )

    def intersection(self, other: "ElementSet") -> "ElementSet":
        if other.group is not self.group:
            raise ValueError("element sets live in different groups")
        return ElementSet(self.group, self.members & other.members)

    def as_subgroup(self, name: str | None = None) -> FiniteGroup:
        return self.group.subgroup(self.perms(), name=name)


# ---------------------------------------------------------------------------
# Constructors and text format
# ---------------------------------------------------------------------------

def from_generators(
    degree: int,
    gens: Sequence[Permutation],
    cap: int = DEFAULT_MATERIALIZATION_CAP,
    name: str | None = None,
) -> FiniteGroup:
    return FiniteGroup(degree, gens, cap=cap, name=name)


def direct_product(a: FiniteGroup, b: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Direct product as a permutation group on the disjoint union of supports."""
    degree = a.degree + b.degree
    gens = [
        Permutation(g.images + tuple(range(a.degree, degree))) for g in a.generators
    ] + [
        Permutation(tuple(range(a.degree)) + tuple(v + a.degree for v in g.images))
        for g in b.generators
    ]
    return FiniteGroup(degree, gens, cap=max(a.cap, b.cap), name=name)


def parse_group_spec(text: str, cap: int = DEFAULT_MATERIALIZATION_CAP,
                     name: str | None = None) -> FiniteGroup:
    """Parse the group-spec text format.

    First line: ``degree N``.  Each following non-empty line is one generator
    in 1-indexed cycle notation.  Lines starting with ``#`` are comments.
    """
    lines = text.splitlines()
    degree = None
    gens: list[Permutation] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit():
                raise ParseError("expected 'degree N' header", line=lineno)
            degree = int(parts[1])
            if degree < 1:
                raise ParseError("degree must be positive", line=lineno)
            continue
        try:
            gens.append(Permutation.parse(line, degree))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if degree is None:
        raise ParseError("missing 'degree N' header", line=len(lines) or 1)
    return FiniteGroup(degree, gens, cap=cap, name=name)


def format_group_spec(group: FiniteGroup) -> str:
    lines = [f"degree {group.degree}"]
    lines.extend(str(g) for g in group.generators)
    return "\n".join(lines) + "\n"
