"""Finite-quotient towers standing in for profinite groups.

A tower is a finite, explicit chain of finite groups with verified surjective
projections between consecutive levels, plus named element tracks that
commute with the projections.  Probability sequences along a tower realize
the infimum-over-quotients description of the profinite probability; the
report states the last value plus a non-increase certificate, never a
claimed limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .classes import GroupClass, NILPOTENT, SOLUBLE
from .errors import CapExceeded, GroupError
from .group import DEFAULT_MATERIALIZATION_CAP, FiniteGroup
from .perm import Permutation
from .probability import hypercenter, omega_global, prob_elem, soluble_radical

__all__ = [
    "QuotientTower",
    "dihedral_tower",
    "prob_sequence",
    "monotonicity_report",
    "positivity_verdict",
    "MonotonicityReport",
    "PositivityReport",
]


@dataclass
class QuotientTower:
    """Levels with projections level k+1 -> level k and compatible tracks."""

    name: str
    levels: list[FiniteGroup]
    projections: list[Callable[[Permutation], Permutation]]
    tracks: dict[str, list[Permutation]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.projections) != len(self.levels) - 1:
            raise GroupError("need one projection per consecutive level pair")
        self._verify()

    def _verify(self) -> None:
        for k, proj in enumerate(self.projections):
            upper, lower = self.levels[k + 1], self.levels[k]
            images = [proj(g) for g in upper.generators]
            if lower.subgroup(images).order != lower.order:
                raise GroupError(f"projection {k + 1}->{k} is not surjective")
            for a in upper.generators:
                for b in upper.generators:
                    if proj(a * b) != proj(a) * proj(b):
                        raise GroupError(f"projection {k + 1}->{k} is not a homomorphism")
        for name, track in self.tracks.items():
            if len(track) != len(self.levels):
                raise GroupError(f"track {name!r} must name an element per level")
            for k, proj in enumerate(self.projections):
                if proj(track[k + 1]) != track[k]:
                    raise GroupError(f"track {name!r} does not commute with projections")


def dihedral_tower(
    p: int, n_max: int, cap: int = DEFAULT_MATERIALIZATION_CAP
) -> QuotientTower:
    """Dihedral groups of order 2*p^n for n = 1..n_max, p an odd prime.

    Level n acts on p^n points: the rotation r is the full cycle, the
    involution x is point negation.  Projections send r to r and x to x;
    this is the finite shadow of inverting a procyclic rotation group.
    """
    if p < 3 or p % 2 == 0 or any(p % d == 0 for d in range(3, int(p ** 0.5) + 1, 2)):
        raise GroupError("p must be an odd prime")
    if 2 * p ** n_max > cap:
        raise CapExceeded(f"top level order {2 * p ** n_max} exceeds cap {cap}")

    levels = []
    for n in range(1, n_max + 1):
        m = p ** n
        rot = Permutation(tuple((i + 1) % m for i in range(m)))
        refl = Permutation(tuple((-i) % m for i in range(m)))
        levels.append(
            FiniteGroup(m, [rot, refl], cap=cap, name=f"D{2 * m}")
        )

    def make_projection(n: int) -> Callable[[Permutation], Permutation]:
        m_hi, m_lo = p ** (n + 1), p ** n

        def project(e: Permutation) -> Permutation:
            a = e.images[0]
            if e.images[1 % m_hi] == (a + 1) % m_hi:  # rotation i -> i + a
                return Permutation(tuple((i + a) % m_lo for i in range(m_lo)))
            return Permutation(tuple((a - i) % m_lo for i in range(m_lo)))

        return project

    projections = [make_projection(n) for n in range(1, n_max)]
    tracks = {
        "x": [G.generators[1] for G in levels],
        "r": [G.generators[0] for G in levels],
    }
    return QuotientTower(f"dihedral(p={p})", levels, projections, tracks)


def prob_sequence(C: GroupClass, tower: QuotientTower, track: str) -> list[Fraction]:
    """Exact per-level probabilities for the tracked element."""
    elems = tower.tracks[track]
    return [
        prob_elem(C, G, x).probability for G, x in zip(tower.levels, elems)
    ]


@dataclass
class MonotonicityReport:
    tower: str
    class_name: str
    track: str
    sequence: list[Fraction]
    monotone: bool
    violations: list[int] = field(default_factory=list)

    @property
    def inf_upper_bound(self) -> Fraction:
        return self.sequence[-1]

    def to_json(self) -> dict:
        return {
            "tower": self.tower,
            "class": self.class_name,
            "track": self.track,
            "levels": [
                {"order": order, "probability": {"num": q.numerator, "den": q.denominator}}
                for order, q in self.sequence_with_orders
            ],
            "monotone": self.monotone,
            "inf_upper_bound": {
                "num": self.inf_upper_bound.numerator,
                "den": self.inf_upper_bound.denominator,
            },
        }

    sequence_with_orders: list = field(default_factory=list)


def monotonicity_report(
    C: GroupClass, tower: QuotientTower, track: str
) -> MonotonicityReport:
    """Certify the sequence is non-increasing (a violation flags an engine
    bug, since consecutive levels are quotients of each other)."""
    seq = prob_sequence(C, tower, track)
    violations = [
        k for k in range(len(seq) - 1) if seq[k + 1] > seq[k]
    ]
    report = MonotonicityReport(
        tower.name, C.name, track, seq, not violations, violations
    )
    report.sequence_with_orders = [
        (G.order, q) for G, q in zip(tower.levels, seq)
    ]
    return report


@dataclass
class PositivityReport:
    tower: str
    class_name: str
    indices: list[int]
    verdict: str
    track: str | None = None

    def to_json(self) -> dict:
        return {
            "tower": self.tower,
            "class": self.class_name,
            "indices": self.indices,
            "verdict": self.verdict,
            "track": self.track,
        }


def positivity_verdict(
    C: GroupClass, tower: QuotientTower, track: str | None = None
) -> PositivityReport:
    """Which positivity pattern the finite levels certify.

    Soluble class: the index of the soluble radical per level; a stabilized
    index sequence is the virtually-prosoluble pattern.  Nilpotent class:
    the index of the hypercenter per level; bounded means the
    finite-by-pronilpotent pattern, diverging means positivity fails along
    the tower (the probability sequence tends to the infimum 0).
    """
    if C.name == SOLUBLE.name:
        indices = [G.order // len(soluble_radical(G)) for G in tower.levels]
        stabilized = len(indices) >= 2 and indices[-1] == indices[-2]
        verdict = "virtually prosoluble" if stabilized else "index still growing"
    elif C.name == NILPOTENT.name:
        indices = [G.order // len(hypercenter(G)) for G in tower.levels]
        stabilized = len(indices) >= 2 and indices[-1] == indices[-2]
        if stabilized:
            verdict = "finite-by-pronilpotent"
        elif track is not None:
            verdict = f"not nilpotent-positive along track {track!r}"
        else:
            verdict = "hypercenter index diverging"
    else:
        indices = [
            G.order // len(omega_global(C, G)) for G in tower.levels
        ]
        stabilized = len(indices) >= 2 and indices[-1] == indices[-2]
        verdict = "global omega index stabilized" if stabilized else "index still growing"
    return PositivityReport(tower.name, C.name, indices, verdict, track)
