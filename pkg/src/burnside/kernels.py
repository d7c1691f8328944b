"""Leg matrices A and B, the kernels Q = AB and K = BA, and stationary laws.

A has one row per dual state g (uniform on the fixed words of g); B has one
row per word x (uniform on the stabilizer of x).  Everything is exact.  The
same assembly runs for the two concrete models and for tabled test actions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from ._rat import Rat
from .actions import (
    ActionSpec,
    TabledAction,
    dual_states,
    enumerate_fixed_words,
    fixed_set_size,
    group_order,
    orbit_key,
    stabilizer_elements,
    word_index,
    word_to_str,
    words,
)
from .ratmat import RationalMatrix

__all__ = [
    "ChainBundle",
    "build_legs",
    "build_bundle",
    "build_k_matrix",
    "build_q_direct",
    "check_detailed_balance",
    "reversibility_ratio",
    "diagonal_equals_e_column",
    "doeblin_floor",
    "state_cap",
]

DEFAULT_STATE_CAP = 65536
DUAL_CAP = 40320


def state_cap() -> int:
    return int(os.environ.get("BURNSIDE_MAX_STATES", DEFAULT_STATE_CAP))


class CapExceeded(ValueError):
    pass


@dataclass
class ChainBundle:
    """The assembled chain pair for one action.

    Q (on the dual states) and K (on the words) are exact row-stochastic
    matrices with Q = A B and K = B A; piQ and piK are their stationary laws.
    """

    spec: Optional[ActionSpec]
    duals: list
    states: list
    dual_labels: list[str]
    state_labels: list[str]
    A: RationalMatrix
    B: RationalMatrix
    Q: RationalMatrix
    K: RationalMatrix
    piQ: list
    piK: list
    group_order: int
    orbit_count: int
    fixed_idx: list[list[int]]
    stab_idx: list[list[int]]
    state_orbit_keys: list
    dual_class_keys: list
    e_index: int
    _m_cache: Optional[RationalMatrix] = field(default=None, repr=False)

    @property
    def M(self) -> RationalMatrix:
        """Block-flip matrix [[0, A], [B, 0]]; built on first use."""
        if self._m_cache is None:
            self._m_cache = RationalMatrix.block_flip(self.A, self.B)
        return self._m_cache

    @property
    def num_duals(self) -> int:
        return len(self.duals)

    @property
    def num_states(self) -> int:
        return len(self.states)

    def dual_index(self, g) -> int:
        return self._dual_pos[g]

    def state_index(self, x) -> int:
        return self._state_pos[x]

    def __post_init__(self) -> None:
        self._dual_pos = {g: i for i, g in enumerate(self.duals)}
        self._state_pos = {x: i for i, x in enumerate(self.states)}

    def fixed_size(self, gi: int) -> int:
        return len(self.fixed_idx[gi])

    def stab_size(self, xi: int) -> int:
        return len(self.stab_idx[xi])


def _adjacency(source) -> tuple[list, list, list[list[int]], list[list[int]], int, list, list, list, list]:
    """States, duals, incidence lists and labels for a spec or tabled action."""
    if isinstance(source, ActionSpec):
        spec = source
        if spec.num_states > state_cap():
            raise CapExceeded(
                f"k^n = {spec.num_states} exceeds the state cap {state_cap()} "
                "(override with BURNSIDE_MAX_STATES)"
            )
        duals = list(dual_states(spec))
        if len(duals) > DUAL_CAP:
            raise CapExceeded(f"|G*| = {len(duals)} exceeds the dual cap {DUAL_CAP}")
        states = list(words(spec))
        dual_pos = {g: i for i, g in enumerate(duals)}
        fixed_idx = [
            sorted(word_index(spec, x) for x in enumerate_fixed_words(spec, g))
            for g in duals
        ]
        stab_idx = [
            sorted(dual_pos[h] for h in stabilizer_elements(spec, x)) for x in states
        ]
        order = group_order(spec)
        orbit_keys = [orbit_key(spec, x) for x in states]
        class_keys = [g.conjugacy_class_id() for g in duals]
        dual_labels = [str(g) for g in duals]
        state_labels = [word_to_str(spec, x) for x in states]
    elif isinstance(source, TabledAction):
        ta = source
        duals = ta.duals()
        states = list(ta.states)
        fixed_idx = [ta.fixed_lists[gi] for gi in ta.dual_indices]
        dual_rank = {gi: r for r, gi in enumerate(ta.dual_indices)}
        stab_idx = [sorted(dual_rank[gi] for gi in ta.stab_lists[xi]) for xi in range(len(states))]
        order = ta.group_order
        okeys = ta.orbit_keys()
        orbit_keys = list(okeys)
        ckeys = ta.class_keys()
        class_keys = [ckeys[gi] for gi in ta.dual_indices]
        dual_labels = [str(g) for g in duals]
        state_labels = [str(x) for x in states]
    else:
        raise TypeError(f"cannot build kernels from {type(source).__name__}")
    return (
        states,
        duals,
        fixed_idx,
        stab_idx,
        order,
        orbit_keys,
        class_keys,
        dual_labels,
        state_labels,
    )


def build_legs(source) -> tuple[RationalMatrix, RationalMatrix]:
    """The forward leg A(g,x) = 1[x in X_g]/|X_g| and backward leg
    B(x,h) = 1[h in G_x]/|G_x|; both are row-stochastic."""
    states, duals, fixed_idx, stab_idx, *_ = _adjacency(source)
    a = RationalMatrix.zeros(len(duals), len(states))
    for gi, fixed in enumerate(fixed_idx):
        w = Rat(1, len(fixed))
        row = a.data[gi]
        for xi in fixed:
            row[xi] = w
    b = RationalMatrix.zeros(len(states), len(duals))
    for xi, stab in enumerate(stab_idx):
        w = Rat(1, len(stab))
        row = b.data[xi]
        for gi in stab:
            row[gi] = w
    return a, b


def build_bundle(source) -> ChainBundle:
    """Assemble A, B, Q = AB, K = BA, and both stationary laws."""
    (
        states,
        duals,
        fixed_idx,
        stab_idx,
        order,
        orbit_keys,
        class_keys,
        dual_labels,
        state_labels,
    ) = _adjacency(source)

    a = RationalMatrix.zeros(len(duals), len(states))
    for gi, fixed in enumerate(fixed_idx):
        w = Rat(1, len(fixed))
        row = a.data[gi]
        for xi in fixed:
            row[xi] = w
    b = RationalMatrix.zeros(len(states), len(duals))
    for xi, stab in enumerate(stab_idx):
        w = Rat(1, len(stab))
        row = b.data[xi]
        for gi in stab:
            row[gi] = w

    q = a @ b
    k = b @ a

    total_fixed = sum(len(f) for f in fixed_idx)
    total_stab = sum(len(s) for s in stab_idx)
    if total_fixed != total_stab:
        raise AssertionError("incidence mismatch between legs")
    z, rem = divmod(total_fixed, order)
    if rem:
        raise AssertionError("Burnside average is not an integer")

    pi_q = [Rat(len(fixed), order * z) for fixed in fixed_idx]
    pi_k = [Rat(len(stab), total_stab) for stab in stab_idx]

    e_index = next(i for i, g in enumerate(duals) if g.is_identity())

    spec = source if isinstance(source, ActionSpec) else None
    return ChainBundle(
        spec=spec,
        duals=duals,
        states=states,
        dual_labels=dual_labels,
        state_labels=state_labels,
        A=a,
        B=b,
        Q=q,
        K=k,
        piQ=pi_q,
        piK=pi_k,
        group_order=order,
        orbit_count=z,
        fixed_idx=fixed_idx,
        stab_idx=stab_idx,
        state_orbit_keys=orbit_keys,
        dual_class_keys=class_keys,
        e_index=e_index,
    )


def build_k_matrix(spec: ActionSpec) -> RationalMatrix:
    """K alone, assembled from the definition without touching the dual side.

    Useful when |G*| is too large to hold Q (e.g. long words over a binary
    alphabet): the stabilizers are generated constructively per word and only
    the |X| x |X| kernel is materialized, with integer row accumulation.
    """
    if spec.num_states > state_cap():
        raise CapExceeded(f"k^n = {spec.num_states} exceeds the state cap {state_cap()}")
    from math import gcd

    state_list = list(words(spec))
    pos = {x: i for i, x in enumerate(state_list)}
    lcm_fixed = 1
    for f in range(1, (spec.k if spec.model == "value" else spec.n) + 1):
        size = f**spec.n if spec.model == "value" else spec.k**f
        lcm_fixed = lcm_fixed * size // gcd(lcm_fixed, size)
    n_states = len(state_list)
    k = RationalMatrix.zeros(n_states, n_states)
    for xi, x in enumerate(state_list):
        acc = [0] * n_states
        stab_order = 0
        for h in stabilizer_elements(spec, x):
            stab_order += 1
            size = fixed_set_size(spec, h)
            w = lcm_fixed // size
            for y in enumerate_fixed_words(spec, h):
                acc[pos[y]] += w
        denom = stab_order * lcm_fixed
        row = k.data[xi]
        for yi, v in enumerate(acc):
            if v:
                row[yi] = Rat(v, denom)
    return k


def build_q_direct(spec: ActionSpec) -> RationalMatrix:
    """Q assembled entry-by-entry from the closed forms, never touching A, B.

    Must agree with build_bundle(spec).Q whenever both are feasible.
    """
    from . import closedforms

    duals = list(dual_states(spec))
    if spec.model == "value":
        entry = lambda g, h: closedforms.q_value_stirling(spec.k, spec.n, g, h)
    else:
        entry = lambda g, h: closedforms.q_coord_colorings(spec.n, spec.k, g, h)
    return RationalMatrix.from_rows([[entry(g, h) for h in duals] for g in duals])


def check_detailed_balance(p: RationalMatrix, pi) -> bool:
    """Exact detailed balance pi(i) P(i,j) == pi(j) P(j,i) for all pairs."""
    if p.rows != p.cols or len(pi) != p.rows:
        raise ValueError("dimension mismatch")
    d = p.data
    for i in range(p.rows):
        for j in range(i + 1, p.rows):
            if pi[i] * d[i][j] != pi[j] * d[j][i]:
                return False
    return True


def reversibility_ratio(bundle: ChainBundle, g, h):
    """Q(g,h)/Q(h,g); equals |X_h|/|X_g| by detailed balance."""
    gi = bundle.dual_index(g) if not isinstance(g, int) else g
    hi = bundle.dual_index(h) if not isinstance(h, int) else h
    forward = bundle.Q.data[gi][hi]
    backward = bundle.Q.data[hi][gi]
    if not backward:
        raise ZeroDivisionError("Q(h,g) = 0: ratio undefined")
    ratio = forward / backward
    expected = Rat(bundle.fixed_size(hi), bundle.fixed_size(gi))
    if ratio != expected:
        raise AssertionError(f"reversibility ratio {ratio} != |X_h|/|X_g| = {expected}")
    return ratio


def diagonal_equals_e_column(bundle: ChainBundle) -> bool:
    """Q(g,g) == Q(g,e) for every dual state g."""
    e = bundle.e_index
    return all(
        bundle.Q.data[gi][gi] == bundle.Q.data[gi][e] for gi in range(bundle.num_duals)
    )


def doeblin_floor(bundle: ChainBundle):
    """delta = 1/max|G_u|; asserts Q(g,e) >= delta and K(x,y) >= delta/|X|."""
    m = max(bundle.stab_size(xi) for xi in range(bundle.num_states))
    delta = Rat(1, m)
    e = bundle.e_index
    for gi in range(bundle.num_duals):
        if bundle.Q.data[gi][e] < delta:
            raise AssertionError(f"dual floor violated at row {bundle.dual_labels[gi]}")
    floor_k = delta / bundle.num_states
    for row in bundle.K.data:
        for v in row:
            if v < floor_k:
                raise AssertionError("primal floor violated")
    return delta
