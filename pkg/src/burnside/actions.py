"""The two concrete actions on words, plus a generic tabled action for tests.

Value model:       S_k permutes the alphabet symbols of words in [k]^n.
Coordinate model:  S_n permutes the coordinates, (g.x)_i = x at g^-1(i).

Words are stored internally as tuples over {1..k}.  The coordinate model is
displayed with the 0-based alphabet {0..k-1} (so binary words print as
bitstrings), the value model with its 1-based symbols; this relabelling is
presentation-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterator, Sequence

from .combinat import rising_factorial, stirling2, subfactorial
from .permgroup import Permutation, canonical_sort_key, enumerate_sym, identity

__all__ = [
    "ActionSpec",
    "Word",
    "value_spec",
    "coord_spec",
    "group_degree",
    "group_order",
    "apply_perm",
    "words",
    "word_index",
    "word_to_str",
    "word_from_str",
    "fixed_set_size",
    "enumerate_fixed_words",
    "stabilizer_size",
    "stabilizer_elements",
    "sample_stabilizer_uniform",
    "sample_fixed_word_uniform",
    "orbit_key",
    "count_orbits",
    "dual_states",
    "TabledAction",
    "random_tabled_action",
]

Word = tuple[int, ...]

VALUE = "value"
COORD = "coord"


@dataclass(frozen=True)
class ActionSpec:
    model: str
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.model not in (VALUE, COORD):
            raise ValueError(f"model must be 'value' or 'coord', got {self.model!r}")
        if self.n < 1 or self.k < 1:
            raise ValueError("need n >= 1 and k >= 1")

    @property
    def num_states(self) -> int:
        return self.k**self.n


def value_spec(k: int, n: int) -> ActionSpec:
    return ActionSpec(VALUE, n, k)


def coord_spec(k: int, n: int) -> ActionSpec:
    return ActionSpec(COORD, n, k)


def group_degree(spec: ActionSpec) -> int:
    return spec.k if spec.model == VALUE else spec.n


def group_order(spec: ActionSpec) -> int:
    return factorial(group_degree(spec))


def _check_degree(spec: ActionSpec, g: Permutation) -> None:
    if g.degree != group_degree(spec):
        raise ValueError(
            f"permutation degree {g.degree} does not match {spec.model} model degree "
            f"{group_degree(spec)}"
        )


def apply_perm(spec: ActionSpec, g: Permutation, x: Word) -> Word:
    """Act on a word: symbols through g (value) or positions through g^-1 (coord)."""
    _check_degree(spec, g)
    if spec.model == VALUE:
        return tuple(g(a) for a in x)
    inv = g.inverse()
    return tuple(x[inv(i) - 1] for i in range(1, spec.n + 1))


@lru_cache(maxsize=None)
def words(spec: ActionSpec) -> tuple[Word, ...]:
    """All k^n words in lexicographic order."""
    return tuple(itertools.product(range(1, spec.k + 1), repeat=spec.n))


def word_index(spec: ActionSpec, x: Word) -> int:
    """Mixed-radix index of a word under the lexicographic order."""
    idx = 0
    for a in x:
        if not 1 <= a <= spec.k:
            raise ValueError(f"letter {a} out of range 1..{spec.k}")
    for a in x:
        idx = idx * spec.k + (a - 1)
    return idx


def word_to_str(spec: ActionSpec, x: Word) -> str:
    offset = 1 if spec.model == COORD else 0
    symbols = [a - offset for a in x]
    if max(symbols, default=0) <= 9:
        return "".join(str(s) for s in symbols)
    return ",".join(str(s) for s in symbols)


def word_from_str(spec: ActionSpec, s: str) -> Word:
    offset = 1 if spec.model == COORD else 0
    s = s.strip()
    if "," in s:
        symbols = [int(tok) for tok in s.split(",")]
    else:
        symbols = [int(ch) for ch in s]
    x = tuple(a + offset for a in symbols)
    if len(x) != spec.n or any(not 1 <= a <= spec.k for a in x):
        raise ValueError(f"{s!r} is not a word for {spec}")
    return x


def fixed_set_size(spec: ActionSpec, g: Permutation) -> int:
    """|X_g|: f(g)^n for the value model, k^c(g) for the coordinate model."""
    _check_degree(spec, g)
    if spec.model == VALUE:
        return len(g.fixed_points()) ** spec.n
    return spec.k ** g.cycle_count()


def enumerate_fixed_words(spec: ActionSpec, g: Permutation) -> Iterator[Word]:
    """All words fixed by g, generated without scanning the full state space."""
    _check_degree(spec, g)
    if spec.model == VALUE:
        fixed = sorted(g.fixed_points())
        if not fixed:
            raise ValueError(f"{g} is a derangement: empty fixed-word set")
        yield from itertools.product(fixed, repeat=spec.n)
    else:
        cycles = g.cycles()
        for colors in itertools.product(range(1, spec.k + 1), repeat=len(cycles)):
            word = [0] * spec.n
            for cyc, color in zip(cycles, colors):
                for pos in cyc:
                    word[pos - 1] = color
            yield tuple(word)


def _index_classes(spec: ActionSpec, x: Word) -> list[list[int]]:
    """Positions of each letter (coordinate model): nonempty classes only."""
    classes: dict[int, list[int]] = {}
    for pos, a in enumerate(x, start=1):
        classes.setdefault(a, []).append(pos)
    return [classes[a] for a in sorted(classes)]


def stabilizer_size(spec: ActionSpec, x: Word) -> int:
    if spec.model == VALUE:
        r = len(set(x))
        return factorial(spec.k - r)
    out = 1
    for cls in _index_classes(spec, x):
        out *= factorial(len(cls))
    return out


def stabilizer_elements(spec: ActionSpec, x: Word) -> Iterator[Permutation]:
    """All of G_x, built constructively; the count matches stabilizer_size."""
    m = group_degree(spec)
    if spec.model == VALUE:
        unused = sorted(set(range(1, spec.k + 1)) - set(x))
        for tau in itertools.permutations(unused):
            images = list(range(1, m + 1))
            for a, b in zip(unused, tau):
                images[a - 1] = b
            yield Permutation(images)
    else:
        classes = _index_classes(spec, x)
        for taus in itertools.product(*(itertools.permutations(c) for c in classes)):
            images = list(range(1, m + 1))
            for cls, tau in zip(classes, taus):
                for a, b in zip(cls, tau):
                    images[a - 1] = b
            yield Permutation(images)


def sample_stabilizer_uniform(spec: ActionSpec, x: Word, rng) -> Permutation:
    """Uniform element of G_x, drawn constructively (no rejection)."""
    m = group_degree(spec)
    images = list(range(1, m + 1))
    if spec.model == VALUE:
        unused = sorted(set(range(1, spec.k + 1)) - set(x))
        if unused:
            shuffled = rng.permutation(unused)
            for a, b in zip(unused, shuffled):
                images[a - 1] = int(b)
    else:
        for cls in _index_classes(spec, x):
            if len(cls) > 1:
                shuffled = rng.permutation(cls)
                for a, b in zip(cls, shuffled):
                    images[a - 1] = int(b)
    return Permutation(images)


def sample_fixed_word_uniform(spec: ActionSpec, g: Permutation, rng) -> Word:
    """Uniform word in X_g: i.i.d. fixed symbols (value) or cycle coloring (coord)."""
    _check_degree(spec, g)
    if spec.model == VALUE:
        fixed = sorted(g.fixed_points())
        if not fixed:
            raise ValueError(f"{g} is a derangement: empty fixed-word set")
        picks = rng.integers(0, len(fixed), size=spec.n)
        return tuple(fixed[i] for i in picks)
    cycles = g.cycles()
    colors = rng.integers(1, spec.k + 1, size=len(cycles))
    word = [0] * spec.n
    for cyc, color in zip(cycles, colors):
        for pos in cyc:
            word[pos - 1] = int(color)
    return tuple(word)


def orbit_key(spec: ActionSpec, x: Word):
    """Canonical orbit invariant: position partition (value) or histogram (coord)."""
    if spec.model == VALUE:
        blocks: dict[int, list[int]] = {}
        for pos, a in enumerate(x, start=1):
            blocks.setdefault(a, []).append(pos)
        return tuple(sorted(tuple(b) for b in blocks.values()))
    return tuple(x.count(a) for a in range(1, spec.k + 1))


def count_orbits(spec: ActionSpec, enumerate_cap: int = 8) -> int:
    """Number of orbits, by closed form and by the Burnside average.

    The two computations must agree; the Burnside side enumerates the group
    when its degree is small and otherwise uses the exact fixed-size counts
    aggregated over cycle data.
    """
    n, k = spec.n, spec.k
    if spec.model == VALUE:
        closed = sum(stirling2(n, r) for r in range(min(n, k) + 1))
    else:
        closed = comb(n + k - 1, k - 1)

    m = group_degree(spec)
    if m <= enumerate_cap:
        total = sum(fixed_set_size(spec, g) for g in enumerate_sym(m))
    elif spec.model == VALUE:
        total = sum(
            comb(k, s) * subfactorial(k - s) * s**n for s in range(k + 1)
        )
    else:
        total = rising_factorial(k, n)
    average, rem = divmod(total, factorial(m))
    if rem or average != closed:
        raise AssertionError(
            f"Burnside average {total}/{factorial(m)} != closed form {closed}"
        )
    return closed


@lru_cache(maxsize=None)
def dual_states(spec: ActionSpec) -> tuple[Permutation, ...]:
    """G* = {g : X_g nonempty} in the documented canonical order.

    For the value model this drops the derangements of S_k; for the
    coordinate model G* is all of S_n.
    """
    m = group_degree(spec)
    elems = [g for g in enumerate_sym(m) if fixed_set_size(spec, g) > 0]
    return tuple(sorted(elems, key=canonical_sort_key))


class TabledAction:
    """A finite group action stored as an explicit table.

    ``elements`` must be closed under composition and contain the identity;
    states may be any hashable objects.  Used to exercise the model-free
    kernel identities on actions other than the two named models.
    """

    def __init__(self, elements: Sequence[Permutation], states: Sequence, act: Callable):
        elems = sorted(set(elements), key=canonical_sort_key)
        if not elems or not elems[0].is_identity():
            raise ValueError("element list must contain the identity")
        known = set(elems)
        for a in elems:
            for b in elems:
                if a * b not in known:
                    raise ValueError("element list is not closed under composition")
        self.elements: list[Permutation] = list(elems)
        self.states = list(states)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate states")
        state_pos = {x: i for i, x in enumerate(self.states)}
        self._table: list[list[int]] = []
        for g in self.elements:
            row = []
            for x in self.states:
                y = act(g, x)
                if y not in state_pos:
                    raise ValueError(f"action leaves the state set: {g} . {x} = {y}")
                row.append(state_pos[y])
            self._table.append(row)
        nstates = len(self.states)
        self.fixed_lists: list[list[int]] = [
            [i for i in range(nstates) if row[i] == i] for row in self._table
        ]
        self.stab_lists: list[list[int]] = [
            [gi for gi in range(len(self.elements)) if self._table[gi][xi] == xi]
            for xi in range(nstates)
        ]
        self.dual_indices = [gi for gi, f in enumerate(self.fixed_lists) if f]

    @property
    def group_order(self) -> int:
        return len(self.elements)

    def duals(self) -> list[Permutation]:
        return [self.elements[gi] for gi in self.dual_indices]

    def act_index(self, gi: int, xi: int) -> int:
        return self._table[gi][xi]

    def orbit_keys(self) -> list[int]:
        """A stable orbit id per state (equal ids exactly within one orbit)."""
        n = len(self.states)
        reach = [set([i]) for i in range(n)]
        for row in self._table:
            for i in range(n):
                reach[i].add(row[i])
        # union-find over the action graph
        parent = list(range(n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(n):
            for j in reach[i]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
        return [find(i) for i in range(n)]

    def class_keys(self) -> list[int]:
        """Conjugacy class id (within this group) per element."""
        pos = {g: i for i, g in enumerate(self.elements)}
        rep = [-1] * len(self.elements)
        for i, g in enumerate(self.elements):
            if rep[i] >= 0:
                continue
            for a in self.elements:
                rep[pos[a * g * a.inverse()]] = i
        return rep

    def count_orbits(self) -> int:
        total = sum(len(f) for f in self.fixed_lists)
        z, rem = divmod(total, self.group_order)
        if rem:
            raise AssertionError("Burnside average is not an integer")
        return z


def _closure(gens: list[Permutation], cap: int) -> list[Permutation] | None:
    m = gens[0].degree
    seen = {identity(m)}
    frontier = [identity(m)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    if len(seen) > cap:
                        return None
                    nxt.append(b)
        frontier = nxt
    return list(seen)


def random_tabled_action(rng, max_group: int = 24, max_states: int = 64) -> TabledAction:
    """A random genuine action: a small subgroup of S_m on words or points."""
    while True:
        m = int(rng.integers(2, 6))
        gens = []
        for _ in range(int(rng.integers(1, 3))):
            images = [int(v) + 1 for v in rng.permutation(m)]
            gens.append(Permutation(images))
        group = _closure(gens, max_group)
        if group is None:
            continue
        flavor = int(rng.integers(0, 3))
        if flavor == 0:
            # natural action on the m points
            states = list(range(1, m + 1))

            def act(g: Permutation, x: int) -> int:
                return g(x)

        elif flavor == 1:
            # coordinates of [v]^m permuted through g^-1
            v = 2 if 3**m > max_states else int(rng.integers(2, 4))
            if v**m > max_states:
                continue
            states = list(itertools.product(range(v), repeat=m))

            def act(g: Permutation, x: tuple) -> tuple:
                inv = g.inverse()
                return tuple(x[inv(i) - 1] for i in range(1, m + 1))

        else:
            # symbols of [m]^r relabelled through g
            r = 1
            while m ** (r + 1) <= max_states and r < 3:
                r += 1
            states = list(itertools.product(range(1, m + 1), repeat=r))

            def act(g: Permutation, x: tuple) -> tuple:
                return tuple(g(a) for a in x)

        return TabledAction(group, states, act)
