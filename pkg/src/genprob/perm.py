"""Fixed-degree permutation arithmetic.

Points are 0-indexed internally.  All text I/O (cycle notation) is 1-indexed,
so ``Permutation.parse("(1,2,3)", 5)`` sends point 0 to point 1.

Composition is left-to-right: ``(p * q)(i) == q(p(i))``, i.e. ``p`` acts
first.  Every product in this package follows this convention, and
conjugation is ``x ** g == g^-1 * x * g``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DegreeMismatch, ParseError

__all__ = ["Permutation", "mul", "inv", "identity_tuple"]


# Internal arithmetic works on plain image tuples; the Permutation wrapper
# is the public face.  Hot loops elsewhere in the package use these directly.

def identity_tuple(degree: int) -> tuple[int, ...]:
    return tuple(range(degree))


def mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Image tuple of p followed by q."""
    return tuple(map(q.__getitem__, p))


def inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {0..degree-1}, stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError("images are not a bijection of {0..%d}" % (n - 1))

    @property
    def degree(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(degree: int) -> "Permutation":
        return Permutation(identity_tuple(degree))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"cannot compose degree {self.degree} with degree {other.degree}"
            )
        return Permutation(mul(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(inv(self.images))

    def __pow__(self, k: int) -> "Permutation":
        if isinstance(k, Permutation):
            # x ** g is conjugation g^-1 x g
            return k.inverse() * self * k
        base = self.images if k >= 0 else inv(self.images)
        result = identity_tuple(self.degree)
        e = abs(k)
        while e:
            if e & 1:
                result = mul(result, base)
            base = mul(base, base)
            e >>= 1
        return Permutation(result)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles sorted by smallest moved point; fixed points omitted."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def commutes_with(self, other: "Permutation") -> bool:
        return mul(self.images, other.images) == mul(other.images, self.images)

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(v + 1) for v in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation[{self.degree}] {self}"

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-indexed disjoint-cycle notation, e.g. "(1,2,3)(4,5)".

        "()" or an empty string denotes the identity.  Points may be
        separated by commas or whitespace.
        """
        text = text.strip()
        images = list(range(degree))
        if text in ("", "()"):
            return cls(tuple(images))
        if not re.fullmatch(r"(\(\s*\d+(\s*[,\s]\s*\d+)*\s*\))+", text):
            raise ParseError(f"malformed cycle notation: {text!r}")
        touched: set[int] = set()
        for body in re.findall(r"\(([^()]*)\)", text):
            points = [int(tok) - 1 for tok in re.split(r"[,\s]+", body.strip())]
            for pt in points:
                if not 0 <= pt < degree:
                    raise ParseError(f"point {pt + 1} out of range for degree {degree}")
                if pt in touched:
                    raise ParseError(f"point {pt + 1} repeated; cycles must be disjoint")
                touched.add(pt)
            for a, b in zip(points, points[1:] + points[:1]):
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], degree: int) -> "Permutation":
        """Build from 0-indexed cycles."""
        images = list(range(degree))
        for cyc in cycles:
            pts = list(cyc)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        return cls(tuple(images))

    def __iter__(self) -> Iterator[int]:
        return iter(self.images)
