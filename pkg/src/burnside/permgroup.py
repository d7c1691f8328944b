"""Permutations of {1..m}: cycle structure, conjugacy, enumeration, joint orbits.

Permutations are immutable, stored in one-line form (``images[i]`` is the
image of point ``i+1``).  Only what the two concrete actions need lives here;
there is no general permutation-group machinery.

Text format: disjoint cycle notation with space-separated points, fixed
points omitted, e.g. ``"(1 2)(3 4)"``; the identity prints as ``"e"``.
"""

from __future__ import annotations

import itertools
from typing import Iterator

__all__ = [
    "Permutation",
    "CycleType",
    "identity",
    "from_cycles",
    "parse_perm",
    "enumerate_sym",
    "conjugate",
    "joint_orbits",
    "canonical_sort_key",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 9

# Multiset of cycle lengths, sorted descending, summing to the degree.
CycleType = tuple[int, ...]


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images) -> None:
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self*other)(i) = self(other(i))."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images, start=1))

    def fixed_points(self) -> frozenset[int]:
        return frozenset(i for i, j in enumerate(self.images, start=1) if i == j)

    def moved_points(self) -> frozenset[int]:
        return frozenset(i for i, j in enumerate(self.images, start=1) if i != j)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """All cycles including fixed points, each starting at its smallest
        element, sorted by smallest element; they partition {1..m}."""
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            j = self(start)
            while j != start:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_type(self) -> CycleType:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def cycle_count(self) -> int:
        """Total number of cycles, fixed points included; c(e) = degree."""
        return len(self.cycles())

    def conjugacy_class_id(self) -> CycleType:
        """Canonical key shared by g and a*g*a^-1 for every a."""
        return self.cycle_type()

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"

    def __str__(self) -> str:
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return "e"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in moved)


def identity(m: int) -> Permutation:
    return Permutation(range(1, m + 1))


def from_cycles(m: int, cycles) -> Permutation:
    cycles = [list(c) for c in cycles]
    flat = list(itertools.chain.from_iterable(cycles))
    if len(set(flat)) != len(flat):
        raise ValueError("cycles overlap or repeat points")
    images = list(range(1, m + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if not 1 <= a <= m:
                raise ValueError(f"point {a} out of range 1..{m}")
            images[a - 1] = b
    return Permutation(images)


def parse_perm(s: str, degree: int) -> Permutation:
    """Parse disjoint cycle notation; accepts "e" (or "()") for the identity."""
    s = s.strip()
    if s in ("e", "()", ""):
        return identity(degree)
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"bad permutation string: {s!r}")
    cycles = []
    for chunk in s[1:-1].split(")("):
        pts = [int(tok) for tok in chunk.replace(",", " ").split()]
        if len(pts) < 2 or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle in {s!r}")
        cycles.append(pts)
    flat = list(itertools.chain.from_iterable(cycles))
    if len(set(flat)) != len(flat):
        raise ValueError(f"cycles overlap in {s!r}")
    return from_cycles(degree, cycles)


def canonical_sort_key(g: Permutation):
    """Stable dual-state order: identity first, then by (number of moved
    points, canonical cycle form).  For S_3 this yields
    e, (1 2), (1 3), (2 3), (1 2 3), (1 3 2), matching the worked fixtures."""
    moved_cycles = tuple(c for c in g.cycles() if len(c) > 1)
    return (len(g.moved_points()), moved_cycles)


def enumerate_sym(m: int, cap: int = ENUMERATION_CAP) -> Iterator[Permutation]:
    """All m! permutations in lexicographic one-line order."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    if m > cap:
        raise ValueError(f"enumeration degree {m} exceeds cap {cap}")
    for images in itertools.permutations(range(1, m + 1)):
        yield Permutation(images)


def conjugate(a: Permutation, g: Permutation) -> Permutation:
    """a g a^-1."""
    return a * g * a.inverse()


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def joint_orbits(g: Permutation, h: Permutation) -> tuple[tuple[int, ...], ...]:
    """Orbits of the subgroup generated by g and h on {1..n}.

    Each block is closed under both generators; blocks are sorted tuples
    ordered by smallest element and partition {1..n}.
    """
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    n = g.degree
    uf = _UnionFind(n)
    for i in range(1, n + 1):
        uf.union(i - 1, g(i) - 1)
        uf.union(i - 1, h(i) - 1)
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(uf.find(i), []).append(i + 1)
    return tuple(tuple(b) for b in sorted(blocks.values()))
