"""Exact distribution evolution, TV profiles, mixing bounds, and lumping.

Distances stay exact rationals throughout.  Worst-case profiles for a bundle
are computed by walking point masses through the legs (one B- then A-scatter
per primal step) with integer numerators over a running denominator, and by
reducing the start set to orbit representatives for K and conjugacy-class
representatives for Q; both kernels are equivariant, so every other start
reproduces a representative's curve exactly (validated in the tests against
the all-starts computation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Callable, Optional, Sequence

from ._rat import Rat
from .kernels import ChainBundle, check_detailed_balance
from .ratmat import RationalMatrix

__all__ = [
    "evolve",
    "tv",
    "point_mass",
    "d_profile",
    "DProfile",
    "mixing_time",
    "mixing_time_from_curve",
    "ChainProfile",
    "BundleProfiles",
    "bundle_profiles",
    "StatePartition",
    "StrongLumpabilityFailure",
    "lump",
    "LumpedChain",
    "orbit_lump_K",
    "conjugacy_lump_Q",
    "fixedpoint_lump_value",
    "cycle_count_partition",
    "tv_preservation_check",
    "minorization_transfer",
    "stationarity_transfer_check",
    "BoundResult",
    "bound_suite",
]


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

def point_mass(n: int, i: int) -> list:
    mu = [Rat(0)] * n
    mu[i] = Rat(1)
    return mu


def tv(mu: Sequence, nu: Sequence):
    """Exact total variation distance, half the l1 distance."""
    if len(mu) != len(nu):
        raise ValueError("distributions live on different index sets")
    return sum((abs(a - b) for a, b in zip(mu, nu)), Rat(0)) / 2


def evolve(p: RationalMatrix, mu: Sequence, t: int) -> list:
    """Exact mu P^t by repeated vector-matrix products."""
    if len(mu) != p.rows:
        raise ValueError("dimension mismatch")
    out = list(mu)
    for _ in range(t):
        out = p.vec_mul(out)
    return out


@dataclass
class DProfile:
    t_max: int
    per_start: list[list]  # per_start[x][t]
    worst: list            # worst[t] = max over starts

    def mixing_time(self, eps) -> Optional[int]:
        return mixing_time_from_curve(self.worst, eps)


def d_profile(p: RationalMatrix, pi: Sequence, t_max: int) -> DProfile:
    """Exact worst-case TV profile over every start (dense; small chains)."""
    n = p.rows
    per_start = []
    for x in range(n):
        mu = point_mass(n, x)
        curve = [tv(mu, pi)]
        for _ in range(t_max):
            mu = p.vec_mul(mu)
            curve.append(tv(mu, pi))
        per_start.append(curve)
    worst = [max(c[t] for c in per_start) for t in range(t_max + 1)]
    for t in range(t_max):
        if worst[t + 1] > worst[t]:
            raise AssertionError(f"worst-case TV increased from t={t} to t={t + 1}")
    return DProfile(t_max, per_start, worst)


def mixing_time_from_curve(curve: Sequence, eps) -> Optional[int]:
    eps = Rat(eps) if not isinstance(eps, float) else eps
    for t, d in enumerate(curve):
        if d <= eps:
            return t
    return None


def mixing_time(p: RationalMatrix, pi: Sequence, eps, t_max: int = 200) -> int:
    """Least t with worst-case TV at most eps (linear scan, exact compare)."""
    n = p.rows
    mus = [point_mass(n, x) for x in range(n)]
    for t in range(t_max + 1):
        if max(tv(mu, pi) for mu in mus) <= eps:
            return t
        mus = [p.vec_mul(mu) for mu in mus]
    raise RuntimeError(f"chain did not mix to {eps} within {t_max} steps")


# ---------------------------------------------------------------------------
# fast exact profiles for a bundle (integer-scaled leg walks)
# ---------------------------------------------------------------------------

def _reduce_scaled(nums: list[int], den: int) -> tuple[list[int], int]:
    g = reduce(gcd, nums, den)
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    return nums, den


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


class _LegWalk:
    """Point-mass evolution through the legs with integer numerators."""

    def __init__(self, bundle: ChainBundle) -> None:
        self.fixed = bundle.fixed_idx
        self.stab = bundle.stab_idx
        self.nd = bundle.num_duals
        self.ns = bundle.num_states
        self.la = _lcm(len(f) for f in self.fixed)
        self.lb = _lcm(len(s) for s in self.stab)
        self.wa = [self.la // len(f) for f in self.fixed]
        self.wb = [self.lb // len(s) for s in self.stab]

    def to_duals(self, nums: list[int], den: int) -> tuple[list[int], int]:
        out = [0] * self.nd
        for xi, v in enumerate(nums):
            if v:
                w = v * self.wb[xi]
                for gi in self.stab[xi]:
                    out[gi] += w
        return out, den * self.lb

    def to_states(self, nums: list[int], den: int) -> tuple[list[int], int]:
        out = [0] * self.ns
        for gi, v in enumerate(nums):
            if v:
                w = v * self.wa[gi]
                for xi in self.fixed[gi]:
                    out[xi] += w
        return out, den * self.la


def _tv_scaled(nums: list[int], den: int, pi_nums: list[int], pi_den: int):
    total = 0
    for a, b in zip(nums, pi_nums):
        total += abs(a * pi_den - b * den)
    return Rat(total, 2 * den * pi_den)


@dataclass
class ChainProfile:
    t_max: int
    reps: list[int]
    curves: dict  # rep index -> list[Rat]
    key_of: list
    worst: list

    def curve_for(self, start: int) -> list:
        """Curve for any start, via its representative (equivariance)."""
        key = self.key_of[start]
        for rep in self.reps:
            if self.key_of[rep] == key:
                return self.curves[rep]
        raise KeyError(f"no representative found for start {start}")

    def mixing_time(self, eps) -> Optional[int]:
        return mixing_time_from_curve(self.worst, eps)


@dataclass
class BundleProfiles:
    t_max: int
    k: ChainProfile
    q: ChainProfile


def _scaled_pi(masses: list) -> tuple[list[int], int]:
    den = _lcm(v.denominator for v in masses)
    return [int(v.numerator) * (den // int(v.denominator)) for v in masses], den


def _profile_from_reps(
    walk: _LegWalk,
    reps: list[int],
    key_of: list,
    start_size: int,
    first_leg: Callable,
    second_leg: Callable,
    pi_scaled: tuple[list[int], int],
    t_max: int,
) -> ChainProfile:
    pi_nums, pi_den = pi_scaled
    curves = {}
    for rep in reps:
        nums = [0] * start_size
        nums[rep] = 1
        den = 1
        curve = [_tv_scaled(nums, den, pi_nums, pi_den)]
        for _ in range(t_max):
            mid, den = first_leg(nums, den)
            nums, den = second_leg(mid, den)
            nums, den = _reduce_scaled(nums, den)
            curve.append(_tv_scaled(nums, den, pi_nums, pi_den))
        curves[rep] = curve
    worst = [max(curves[rep][t] for rep in reps) for t in range(t_max + 1)]
    for t in range(t_max):
        if worst[t + 1] > worst[t]:
            raise AssertionError("worst-case TV profile is not monotone")
    return ChainProfile(t_max, reps, curves, key_of, worst)


def _first_of_each_key(keys: list) -> list[int]:
    seen = set()
    reps = []
    for i, key in enumerate(keys):
        if key not in seen:
            seen.add(key)
            reps.append(i)
    return reps


def bundle_profiles(
    bundle: ChainBundle, t_max: int = 60, reduce_starts: bool = True
) -> BundleProfiles:
    """Exact d_K and d_Q curves for every start, up to equivariance."""
    walk = _LegWalk(bundle)
    if reduce_starts:
        k_reps = _first_of_each_key(bundle.state_orbit_keys)
        q_reps = _first_of_each_key(bundle.dual_class_keys)
    else:
        k_reps = list(range(bundle.num_states))
        q_reps = list(range(bundle.num_duals))
    k_profile = _profile_from_reps(
        walk,
        k_reps,
        bundle.state_orbit_keys,
        bundle.num_states,
        walk.to_duals,
        walk.to_states,
        _scaled_pi(bundle.piK),
        t_max,
    )
    q_profile = _profile_from_reps(
        walk,
        q_reps,
        bundle.dual_class_keys,
        bundle.num_duals,
        walk.to_states,
        walk.to_duals,
        _scaled_pi(bundle.piQ),
        t_max,
    )
    return BundleProfiles(t_max, k_profile, q_profile)


# ---------------------------------------------------------------------------
# lumping
# ---------------------------------------------------------------------------

@dataclass
class StatePartition:
    labels: list
    blocks: list[list[int]]
    block_of: list[int]

    @classmethod
    def from_keys(cls, keys: Sequence, label_fn: Callable = None) -> "StatePartition":
        """Blocks in order of first occurrence of each key."""
        order: dict = {}
        blocks: list[list[int]] = []
        for i, key in enumerate(keys):
            if key not in order:
                order[key] = len(blocks)
                blocks.append([])
            blocks[order[key]].append(i)
        labels = [label_fn(k) if label_fn else k for k in order]
        block_of = [order[k] for k in keys]
        return cls(labels, blocks, block_of)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def validate_cover(self, n: int) -> None:
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(n)) or any(not b for b in self.blocks):
            raise ValueError("blocks must be nonempty and partition the state set")


class StrongLumpabilityFailure(Exception):
    """Two states in one source block disagree on a target-block row sum.

    ``mismatches`` lists (target_block_label, sum_i, sum_j) for every target
    block on which the two witness states disagree.
    """

    def __init__(self, state_i: int, state_j: int, mismatches: list):
        self.state_i = state_i
        self.state_j = state_j
        self.mismatches = list(mismatches)
        label, sum_i, sum_j = self.mismatches[0]
        self.block_label = label
        self.sum_i = sum_i
        self.sum_j = sum_j
        super().__init__(
            f"block sums differ over {len(self.mismatches)} target block(s); e.g. "
            f"over {label!r}: state {state_i} gives {sum_i}, state {state_j} gives {sum_j}"
        )

    def sums_over(self, target_label):
        for label, sum_i, sum_j in self.mismatches:
            if label == target_label:
                return sum_i, sum_j
        raise KeyError(f"no mismatch over target block {target_label!r}")


def _block_row_sums(p: RationalMatrix, partition: StatePartition, i: int) -> list:
    sums = [Rat(0)] * partition.num_blocks
    for j, v in enumerate(p.data[i]):
        if v:
            sums[partition.block_of[j]] += v
    return sums


def lump(p: RationalMatrix, pi: Sequence, partition: StatePartition):
    """Check strong lumpability exactly and return the lumped (kernel, pi).

    Raises StrongLumpabilityFailure with the offending pair of states and
    their differing block sums otherwise.
    """
    partition.validate_cover(p.rows)
    bar_rows = []
    for block in partition.blocks:
        rep = block[0]
        rep_sums = _block_row_sums(p, partition, rep)
        for other in block[1:]:
            other_sums = _block_row_sums(p, partition, other)
            if other_sums != rep_sums:
                mismatches = [
                    (partition.labels[bi], rep_sums[bi], other_sums[bi])
                    for bi in range(partition.num_blocks)
                    if rep_sums[bi] != other_sums[bi]
                ]
                raise StrongLumpabilityFailure(rep, other, mismatches)
        bar_rows.append(rep_sums)
    bar_p = RationalMatrix.from_rows(bar_rows)
    bar_pi = [sum((pi[i] for i in block), Rat(0)) for block in partition.blocks]
    return bar_p, bar_pi


@dataclass
class LumpedChain:
    kernel: RationalMatrix
    pi: list
    partition: StatePartition

    @property
    def labels(self) -> list:
        return self.partition.labels


def orbit_lump_K(bundle: ChainBundle, verify_formula: bool = True) -> LumpedChain:
    """Lump K by orbits: symmetric kernel, uniform lumped stationary law."""
    partition = StatePartition.from_keys(bundle.state_orbit_keys)
    bar_k, bar_pi = lump(bundle.K, bundle.piK, partition)
    z = bundle.orbit_count
    if any(v != Rat(1, z) for v in bar_pi):
        raise AssertionError("orbit-lumped stationary law is not uniform")
    if bar_k != bar_k.transpose():
        raise AssertionError("orbit-lumped kernel is not symmetric")
    if verify_formula:
        # aggregation identity: sum over the target orbit of K(x, .) equals
        # the stabilizer average of |X_h & O'| / |X_h|
        for bi, block in enumerate(partition.blocks):
            x = block[0]
            for bj in range(partition.num_blocks):
                target = set(partition.blocks[bj])
                acc = Rat(0)
                for gi in bundle.stab_idx[x]:
                    inside = sum(1 for xi in bundle.fixed_idx[gi] if xi in target)
                    acc += Rat(inside, len(bundle.fixed_idx[gi]))
                acc /= len(bundle.stab_idx[x])
                if acc != bar_k.data[bi][bj]:
                    raise AssertionError("orbit aggregation formula mismatch")
    return LumpedChain(bar_k, bar_pi, partition)


def conjugacy_lump_Q(bundle: ChainBundle, verify_formula: bool = True) -> LumpedChain:
    """Lump Q by conjugacy classes; the lumped chain stays reversible."""
    partition = StatePartition.from_keys(bundle.dual_class_keys)
    bar_q, bar_pi = lump(bundle.Q, bundle.piQ, partition)
    z = bundle.orbit_count
    order = bundle.group_order
    for bi, block in enumerate(partition.blocks):
        expected = Rat(len(block) * bundle.fixed_size(block[0]), order * z)
        if bar_pi[bi] != expected:
            raise AssertionError("class-lumped stationary mass mismatch")
    if not check_detailed_balance(bar_q, bar_pi):
        raise AssertionError("class-lumped kernel lost reversibility")
    if verify_formula:
        # aggregation identity: sum over the class C' of Q(g, .) equals the
        # fixed-word average of |G_u & C'| / |G_u|
        for bi, block in enumerate(partition.blocks):
            gi = block[0]
            for bj in range(partition.num_blocks):
                target = set(partition.blocks[bj])
                acc = Rat(0)
                for xi in bundle.fixed_idx[gi]:
                    inside = sum(1 for hj in bundle.stab_idx[xi] if hj in target)
                    acc += Rat(inside, len(bundle.stab_idx[xi]))
                acc /= len(bundle.fixed_idx[gi])
                if acc != bar_q.data[bi][bj]:
                    raise AssertionError("class aggregation formula mismatch")
    return LumpedChain(bar_q, bar_pi, partition)


def fixedpoint_lump_value(bundle: ChainBundle) -> LumpedChain:
    """Lump the value-model Q by the number of fixed symbols."""
    if bundle.spec is None or bundle.spec.model != "value":
        raise ValueError("fixed-point lumping applies to the value model")
    keys = [len(g.fixed_points()) for g in bundle.duals]
    partition = StatePartition.from_keys(keys)
    bar_q, bar_pi = lump(bundle.Q, bundle.piQ, partition)
    return LumpedChain(bar_q, bar_pi, partition)


def cycle_count_partition(bundle: ChainBundle) -> StatePartition:
    """Partition of the dual states by total cycle count (coordinate model)."""
    return StatePartition.from_keys([g.cycle_count() for g in bundle.duals])


@dataclass
class TvPreservationRow:
    t: int
    fine: object
    lumped: object
    equal: bool
    sign_constant: bool


def tv_preservation_check(
    p: RationalMatrix,
    pi: Sequence,
    partition: StatePartition,
    start: int,
    t_max: int,
) -> list[TvPreservationRow]:
    """Per-step comparison of fine TV against pushforward TV from one start."""
    partition.validate_cover(p.rows)
    mu = point_mass(p.rows, start)
    bar_pi = [sum((pi[i] for i in block), Rat(0)) for block in partition.blocks]
    rows = []
    for t in range(t_max + 1):
        fine = tv(mu, pi)
        bar_mu = [sum((mu[i] for i in block), Rat(0)) for block in partition.blocks]
        lumped = tv(bar_mu, bar_pi)
        sign_ok = True
        for block in partition.blocks:
            signs = {(mu[i] > pi[i]) - (mu[i] < pi[i]) for i in block}
            signs.discard(0)
            if len(signs) > 1:
                sign_ok = False
                break
        rows.append(TvPreservationRow(t, fine, lumped, fine == lumped, sign_ok))
        if fine < lumped:
            raise AssertionError("lumped TV exceeded fine TV")
        if sign_ok and fine != lumped:
            raise AssertionError("sign condition held but TV was not preserved")
        mu = p.vec_mul(mu)
    return rows


# ---------------------------------------------------------------------------
# bound curves
# ---------------------------------------------------------------------------

@dataclass
class BoundResult:
    name: str
    applicable: bool
    verified: Optional[bool]
    reason: str = ""
    curve: Optional[list] = field(default=None, repr=False)


def _geometric(base, t_max: int) -> list:
    out = []
    acc = Rat(1)
    for _ in range(t_max + 1):
        out.append(acc)
        acc *= base
    return out


def _holds_above(bound: Sequence, d: Sequence, t_from: int = 0) -> bool:
    return all(d[t] <= bound[t] for t in range(t_from, len(d)))


class MinorizationError(ValueError):
    pass


def minorization_transfer(
    bundle: ChainBundle,
    delta=None,
    nu: Optional[Sequence] = None,
    t_max: int = 60,
    d_q: Optional[Sequence] = None,
    exact_square_cap: int = 200,
) -> BoundResult:
    """From K >= delta nu (verified exactly) build the two-step dual curve
    (1-delta)^floor(t/2); also verifies Q^2(g,.) >= delta (nu B) when the
    dual space is small enough to square exactly."""
    m = max(bundle.stab_size(xi) for xi in range(bundle.num_states))
    if delta is None:
        delta = Rat(1, m)
    if nu is None:
        nu = [Rat(1, bundle.num_states)] * bundle.num_states
    for xi, row in enumerate(bundle.K.data):
        for yi, v in enumerate(row):
            if v < delta * nu[yi]:
                raise MinorizationError(
                    f"K({xi},{yi}) = {v} < delta nu = {delta * nu[yi]}"
                )
    note = ""
    if bundle.num_duals <= exact_square_cap:
        q2 = bundle.Q @ bundle.Q
        nub = bundle.B.vec_mul(list(nu))
        for gi, row in enumerate(q2.data):
            for hi, v in enumerate(row):
                if v < delta * nub[hi]:
                    raise MinorizationError(
                        f"Q^2({gi},{hi}) = {v} < delta (nu B) = {delta * nub[hi]}"
                    )
        note = "Q^2 floor verified exactly"
    else:
        note = f"dual space {bundle.num_duals} > {exact_square_cap}: Q^2 floor not squared"
    curve = [(1 - Rat(delta)) ** (t // 2) for t in range(t_max + 1)]
    verified = None
    if d_q is not None:
        verified = _holds_above(curve, d_q)
    return BoundResult("two_step_transfer", True, verified, note, curve)


def stationarity_transfer_check(bundle: ChainBundle) -> bool:
    """piQ == piK B and piK == piQ A, exactly."""
    return (
        bundle.B.vec_mul(list(bundle.piK)) == list(bundle.piQ)
        and bundle.A.vec_mul(list(bundle.piQ)) == list(bundle.piK)
    )


def bound_suite(
    bundle: ChainBundle,
    t_max: int = 60,
    profiles: Optional[BundleProfiles] = None,
    eps_list: Sequence = (Rat(1, 4), Rat(1, 10)),
) -> list[BoundResult]:
    """Run every applicable mixing bound for one bundle against its exact
    TV profiles; inapplicable bounds are reported with the reason."""
    if profiles is None:
        profiles = bundle_profiles(bundle, t_max)
    if profiles.t_max < t_max:
        raise ValueError("profiles were computed with a smaller horizon")
    d_k = profiles.k.worst[: t_max + 1]
    d_q = profiles.q.worst[: t_max + 1]
    m = max(bundle.stab_size(xi) for xi in range(bundle.num_states))
    results: list[BoundResult] = []

    # the uniform floors behind the geometric rates, verified exactly first
    from .kernels import doeblin_floor

    delta = Rat(1, m)
    try:
        doeblin_floor(bundle)
        floors_hold = True
        floor_note = f"floor delta = {delta} verified exactly"
    except AssertionError as exc:
        floors_hold = False
        floor_note = str(exc)
    ros = _geometric(1 - delta, t_max)
    results.append(
        BoundResult(
            "rosenthal_K", True, floors_hold and _holds_above(ros, d_k), floor_note, ros
        )
    )
    results.append(
        BoundResult(
            "rosenthal_Q", True, floors_hold and _holds_above(ros, d_q), floor_note, ros
        )
    )

    order = bundle.group_order
    floor_ok = all(
        v >= pi_y / order
        for row in bundle.K.data
        for v, pi_y in zip(row, bundle.piK)
    )
    chen = _geometric(1 - Rat(1, order), t_max)
    results.append(
        BoundResult(
            "chen_model_free_K", True, floor_ok and _holds_above(chen, d_k),
            f"row floor pi/|G| with |G| = {order} verified exactly", chen,
        )
    )

    # Chen's coupling bound lives on the orbit-lumped chain.
    lumped = orbit_lump_K(bundle, verify_formula=False)
    bar_profile = d_profile(lumped.kernel, lumped.pi, t_max)
    coupling = _geometric(1 - Rat(1, bundle.num_states), t_max)
    results.append(
        BoundResult(
            "chen_orbit_coupling", True, _holds_above(coupling, bar_profile.worst),
            f"|X| = {bundle.num_states}", coupling,
        )
    )

    ok_qk = all(d_q[t] <= d_k[t - 1] for t in range(1, t_max + 1))
    results.append(BoundResult("one_step_QK", True, ok_qk, "d_Q(t) <= d_K(t-1)"))
    ok_kq = all(d_k[t] <= d_q[t - 1] for t in range(1, t_max + 1))
    results.append(BoundResult("one_step_KQ", True, ok_kq, "d_K(t) <= d_Q(t-1)"))

    results.append(minorization_transfer(bundle, t_max=t_max, d_q=d_q))

    spec = bundle.spec
    if spec is not None and spec.model == "value":
        if spec.k >= spec.n:
            pag = [spec.n * v for v in _geometric(1 - Rat(1, 2 * spec.k), t_max)]
            results.append(
                BoundResult("paguyo_K", True, _holds_above(pag, d_k), "k >= n", pag)
            )
            pag_dual = [Rat(1)] + pag[:-1]
            ok = all(d_q[t] <= pag_dual[t] for t in range(1, t_max + 1))
            results.append(
                BoundResult("paguyo_Q_transfer", True, ok, "n(1-1/2k)^(t-1)", pag_dual)
            )
        else:
            results.append(
                BoundResult("paguyo_K", False, None, f"needs k >= n, have k={spec.k} < n={spec.n}")
            )
        results.append(
            BoundResult(
                "diaconis_fixed_k", False, None,
                "coordinate-model bound; inapplicable to the value model",
            )
        )
    elif spec is not None and spec.model == "coord":
        ald = [spec.n * v for v in _geometric(1 - Rat(1, spec.k), t_max)]
        results.append(
            BoundResult("aldous_K", True, _holds_above(ald, d_k), "n(1-1/k)^t", ald)
        )
        ald_dual = [Rat(1)] + ald[:-1]
        ok = all(d_q[t] <= ald_dual[t] for t in range(1, t_max + 1))
        results.append(
            BoundResult("aldous_Q_transfer", True, ok, "n(1-1/k)^(t-1)", ald_dual)
        )
        results.append(
            BoundResult(
                "diaconis_fixed_k", False, None,
                "rate constant for the fixed-alphabet floor is not numeric in the "
                "source; the flat-alphabet mixing probe covers the qualitative claim",
            )
        )
        if spec.k == 2:
            results.extend(_dz_bounds(bundle, profiles, t_max))
        else:
            results.append(
                BoundResult("dz_two_sided", False, None, "binary alphabet only")
            )
    else:
        results.append(
            BoundResult("model_bounds", False, None, "tabled action: universal bounds only")
        )

    for eps in eps_list:
        tq = mixing_time_from_curve(d_q, eps)
        tk = mixing_time_from_curve(d_k, eps)
        if tq is None or tk is None:
            results.append(
                BoundResult(f"mixing_equiv_eps={eps}", True, False, "did not mix in horizon")
            )
        else:
            results.append(
                BoundResult(
                    f"mixing_equiv_eps={eps}", True, abs(tq - tk) <= 1,
                    f"t_mix(Q)={tq}, t_mix(K)={tk}",
                )
            )
    return results


def _dz_bounds(bundle: ChainBundle, profiles: BundleProfiles, t_max: int) -> list[BoundResult]:
    """Two-sided binary-alphabet curves: all-equal starts for K, the
    worst-case dual lower bound, and single-n-cycle starts for Q."""
    n = bundle.spec.n
    out = []
    quarter = Rat(1, 4)
    upper = [4 * quarter**t for t in range(t_max + 1)]
    lower = [quarter ** (t + 1) for t in range(t_max + 1)]
    all_equal = [
        xi for xi, x in enumerate(bundle.states) if len(set(x)) == 1
    ]
    ok_up = True
    ok_low = True
    for xi in all_equal:
        curve = profiles.k.curve_for(xi)
        ok_up = ok_up and all(curve[t] <= upper[t] for t in range(t_max + 1))
        ok_low = ok_low and all(curve[t] >= lower[t] for t in range(t_max + 1))
    out.append(
        BoundResult("dz_upper_K_allequal", True, ok_up, "d_K(x0,t) <= 4 (1/4)^t", upper)
    )
    out.append(
        BoundResult("dz_lower_K_allequal", True, ok_low, "d_K(x0,t) >= (1/4)^(t+1)", lower)
    )

    dual_lower = [quarter ** (t + 2) for t in range(t_max + 1)]
    d_q = profiles.q.worst[: t_max + 1]
    out.append(
        BoundResult(
            "dz_dual_lower", True,
            all(d_q[t] >= dual_lower[t] for t in range(t_max + 1)),
            "d_Q(t) >= 4^-(t+2)", dual_lower,
        )
    )

    ncycles = [gi for gi, g in enumerate(bundle.duals) if g.cycle_type()[0] == n]
    if ncycles:
        ncycle_upper = [Rat(16) * quarter**t for t in range(t_max + 1)]
        ok = True
        for gi in ncycles:
            curve = profiles.q.curve_for(gi)
            ok = ok and all(curve[t] <= ncycle_upper[t] for t in range(1, t_max + 1))
        out.append(
            BoundResult(
                "dz_Q_ncycle_upper", True, ok, "TV(Q^t(g,.), pi) <= 4^(2-t) for t >= 1",
                ncycle_upper,
            )
        )
    return out
