"""Closed-form transition formulas for both models.

Each dual-kernel entry Q(g,h) admits several equivalent forms (a Stirling
sum, an occupancy expectation, a generating-function coefficient, ...).
Every public function here computes its value exactly; the test suite pins
all of them against the brute-force definition sum over X_g intersect X_h.
"""

from __future__ import annotations

import itertools
from math import comb, factorial

from ._rat import Rat
from .actions import ActionSpec, apply_perm, enumerate_fixed_words, stabilizer_size
from .combinat import (
    bell,
    inv_factorial_or_zero,
    kappa,
    multinomial,
    occupancy_pmf,
    rising_factorial,
    stirling2,
    subfactorial,
)
from .permgroup import Permutation, enumerate_sym, joint_orbits

__all__ = [
    "q_brute",
    "intersection_size",
    "q_value_from_overlap",
    "q_value_stirling",
    "q_value_expectation",
    "q_value_coefficient",
    "pi_value",
    "value_normalizer",
    "cycle_index_Fk",
    "theta",
    "fixed_count_classes",
    "qbar_value",
    "pibar_value",
    "q_coord_colorings",
    "q_coord_expectation",
    "q_coord_binary",
    "q_coord_id_to_tcycle",
    "q_coord_tcycle_to_e",
    "pi_coord",
    "uniform_floor_coord",
    "verify_uniform_floor",
]

COLORING_CAP = 16384


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def q_brute(spec: ActionSpec, g: Permutation, h: Permutation):
    """Direct evaluation of Q(g,h): sum 1/(|X_g| |G_x|) over x fixed by both.

    Deliberately enumerates words; this is the oracle every closed form is
    checked against.
    """
    total = Rat(0)
    count = 0
    for x in enumerate_fixed_words(spec, g):
        count += 1
        if apply_perm(spec, h, x) == x:
            total += Rat(1, stabilizer_size(spec, x))
    return total / count


def intersection_size(spec: ActionSpec, g: Permutation, h: Permutation) -> int:
    """|X_g intersect X_h|: j^n for the value model, k^s for the coordinate model."""
    if spec.model == "value":
        j = len(g.fixed_points() & h.fixed_points())
        return j**spec.n
    return spec.k ** len(joint_orbits(g, h))


# ---------------------------------------------------------------------------
# value model: Q(g,h) with a = |Fix(g)|, j = |Fix(g) & Fix(h)|
# ---------------------------------------------------------------------------

def q_value_from_overlap(k: int, n: int, a: int, j: int):
    """Stirling-sum form: a^-n * sum_r C(j,r) S(n,r) r!/(k-r)!."""
    if a <= 0:
        raise ValueError("source permutation is a derangement (no fixed symbols)")
    if j == 0:
        return Rat(0)
    total = Rat(0)
    for r in range(1, min(j, n) + 1):
        total += Rat(comb(j, r) * stirling2(n, r) * factorial(r), factorial(k - r))
    return total / a**n


def _overlap(g: Permutation, h: Permutation) -> tuple[int, int]:
    a = len(g.fixed_points())
    j = len(g.fixed_points() & h.fixed_points())
    return a, j


def q_value_stirling(k: int, n: int, g: Permutation, h: Permutation):
    a, j = _overlap(g, h)
    return q_value_from_overlap(k, n, a, j)


def q_value_expectation(k: int, n: int, g: Permutation, h: Permutation):
    """Expectation form (j/a)^n E[1/(k-R)!] over the distinct-count law on [j]^n."""
    a, j = _overlap(g, h)
    if a <= 0:
        raise ValueError("source permutation is a derangement (no fixed symbols)")
    if j == 0:
        return Rat(0)
    mean = sum(
        (p * inv_factorial_or_zero(k - r) for r, p in occupancy_pmf(j, n).items()),
        Rat(0),
    )
    return Rat(j**n, a**n) * mean


def _coeff_un_zs(j: int, n: int, s: int):
    """Exact [u^n][z^s] of exp(z) (1 + z(e^u - 1))^j via truncated bivariate
    polynomial arithmetic (degrees n in u, s in z)."""
    # polynomials stored as grids p[du][dz]
    def mul(p, q):
        out = [[Rat(0)] * (s + 1) for _ in range(n + 1)]
        for du1, row in enumerate(p):
            for dz1, c1 in enumerate(row):
                if not c1:
                    continue
                for du2 in range(n + 1 - du1):
                    qrow = q[du2]
                    for dz2 in range(s + 1 - dz1):
                        c2 = qrow[dz2]
                        if c2:
                            out[du1 + du2][dz1 + dz2] += c1 * c2
        return out

    expm1 = [Rat(0)] + [Rat(1, factorial(i)) for i in range(1, n + 1)]
    base = [[Rat(0)] * (s + 1) for _ in range(n + 1)]
    base[0][0] = Rat(1)
    if s >= 1:
        for du in range(n + 1):
            base[du][1] = expm1[du]
    power = [[Rat(0)] * (s + 1) for _ in range(n + 1)]
    power[0][0] = Rat(1)
    for _ in range(j):
        power = mul(power, base)
    expz = [[Rat(0)] * (s + 1) for _ in range(n + 1)]
    for dz in range(s + 1):
        expz[0][dz] = Rat(1, factorial(dz))
    return mul(power, expz)[n][s]


def q_value_coefficient(k: int, n: int, g: Permutation, h: Permutation):
    """Coefficient form n! a^-n [u^n][z^k] exp(z)(1 + z(e^u - 1))^j."""
    a, j = _overlap(g, h)
    if a <= 0:
        raise ValueError("source permutation is a derangement (no fixed symbols)")
    if j == 0:
        return Rat(0)
    return Rat(factorial(n), a**n) * _coeff_un_zs(j, n, k)


def value_normalizer(k: int, n: int) -> int:
    """Z_{k,n}: Bell(n) when k >= n, otherwise the partial Stirling sum."""
    if k >= n:
        return bell(n)
    return sum(stirling2(n, d) for d in range(k + 1))


def pi_value(k: int, n: int, g: Permutation):
    """Dual stationary mass f(g)^n / (k! Z_{k,n})."""
    f = len(g.fixed_points())
    if f == 0:
        raise ValueError("derangements are not dual states in the value model")
    return Rat(f**n, factorial(k) * value_normalizer(k, n))


def cycle_index_Fk(k: int) -> list[int]:
    """Coefficients of sum_g x^{f(g)} over S_k as a list indexed by the power.

    Closed form k! sum_{m<=k} (x-1)^m / m!; coefficient of x^s comes out to
    C(k,s) * !(k-s), the number of permutations with exactly s fixed symbols.
    """
    if k > 12:
        raise ValueError("cycle index capped at k <= 12")
    coeffs = [0] * (k + 1)
    fact_k = factorial(k)
    for m in range(k + 1):
        scale = fact_k // factorial(m)  # k!/m! multiplies (x-1)^m
        for s in range(m + 1):
            coeffs[s] += scale * comb(m, s) * (-1) ** (m - s)
    return coeffs


def theta(k: int, s: int):
    """Derangement probability !(k-s)/(k-s)! on the k-s unfixed symbols."""
    if not 0 <= s <= k:
        raise ValueError("need 0 <= s <= k")
    return Rat(subfactorial(k - s), factorial(k - s))


def fixed_count_classes(k: int) -> list[int]:
    """Realizable fixed-symbol counts of non-derangements, descending:
    k, k-2, k-3, ..., 1 (count k-1 is impossible)."""
    return [k] + list(range(k - 2, 0, -1))


def qbar_value(k: int, n: int, r: int, s: int):
    """Fixed-point-lumped kernel entry, by four equivalent routes.

    All four (Stirling sum, occupancy expectation, two-stage product,
    coefficient extraction) are evaluated and must agree.
    """
    classes = fixed_count_classes(k)
    if r not in classes or s not in classes:
        if s == k - 1 or r == k - 1:
            raise ValueError(f"class with {k - 1} fixed symbols is empty")
        raise ValueError(f"classes must lie in {classes}")
    th = theta(k, s)

    single = Rat(0)
    for m in range(1, min(r, s, n) + 1):
        single += Rat(comb(r, m) * stirling2(n, m) * factorial(m), factorial(s - m))
    single = th * single / r**n

    pmf = occupancy_pmf(r, n)
    expectation = th * sum(
        (p * inv_factorial_or_zero(s - m) for m, p in pmf.items()), Rat(0)
    )

    two_stage = sum(
        (
            p * Rat(comb(k - m, s - m) * subfactorial(k - s), factorial(k - m))
            for m, p in pmf.items()
            if s >= m
        ),
        Rat(0),
    )

    coefficient = th * Rat(factorial(n), r**n) * _coeff_un_zs(r, n, s)

    if not single == expectation == two_stage == coefficient:
        raise AssertionError(
            f"lumped closed forms disagree at (k={k}, n={n}, r={r}, s={s})"
        )
    return single


def pibar_value(k: int, n: int, s: int):
    """Lumped stationary mass theta_{k,s} s^n / (Z_{k,n} s!)."""
    if s not in fixed_count_classes(k):
        if s == k - 1:
            raise ValueError(f"class with {k - 1} fixed symbols is empty")
        raise ValueError(f"fixed-symbol count must lie in {fixed_count_classes(k)}")
    return theta(k, s) * Rat(s**n, factorial(s)) / value_normalizer(k, n)


# ---------------------------------------------------------------------------
# coordinate model: Q(g,h) via joint orbits of <g,h>
# ---------------------------------------------------------------------------

def _orbit_sizes(g: Permutation, h: Permutation) -> tuple[int, ...]:
    return tuple(len(b) for b in joint_orbits(g, h))


def q_coord_colorings(n: int, k: int, g: Permutation, h: Permutation, cap: int = COLORING_CAP):
    """Colorings sum k^-c(g) * sum_phi prod_a 1/M_a(phi)! over orbit colorings."""
    sizes = _orbit_sizes(g, h)
    return _coord_from_sizes_enumerate(n, k, g.cycle_count(), sizes, cap)


def _coord_from_sizes_enumerate(n: int, k: int, c: int, sizes: tuple[int, ...], cap: int):
    s = len(sizes)
    if k**s > cap:
        raise ValueError(
            f"k^s = {k**s} colorings exceed the enumeration cap {cap}; "
            "use the expectation form"
        )
    # integer accumulation over a common denominator n! k^c
    total = 0
    for phi in itertools.product(range(k), repeat=s):
        masses = [0] * k
        for b, color in zip(sizes, phi):
            masses[color] += b
        total += multinomial(n, masses)
    return Rat(total, factorial(n) * k**c)


def q_coord_expectation(n: int, k: int, g: Permutation, h: Permutation):
    """Expectation form k^{s-c(g)} E[prod_a 1/M_a!], by exact dynamic
    programming over the orbit-size convolution (no coloring enumeration)."""
    sizes = _orbit_sizes(g, h)
    dp: dict[tuple[int, ...], int] = {(0,) * k: 1}
    for b in sizes:
        nxt: dict[tuple[int, ...], int] = {}
        for masses, cnt in dp.items():
            for a in range(k):
                key = masses[:a] + (masses[a] + b,) + masses[a + 1 :]
                nxt[key] = nxt.get(key, 0) + cnt
        dp = nxt
    total = sum(cnt * multinomial(n, masses) for masses, cnt in dp.items())
    return Rat(total, factorial(n) * k ** g.cycle_count())


def q_coord_binary(n: int, g: Permutation, h: Permutation):
    """Binary closed forms: subset sum and the [w^n](1+w)^n prod(1+w^{b_j})
    coefficient; both are computed and must agree."""
    sizes = _orbit_sizes(g, h)
    c = g.cycle_count()

    subset_total = 0
    for bits in itertools.product((0, 1), repeat=len(sizes)):
        weight = sum(b for b, bit in zip(sizes, bits) if bit)
        subset_total += comb(n, weight)
    subset = Rat(subset_total, factorial(n) * 2**c)

    poly = [0] * (n + 1)
    for i in range(n + 1):
        poly[i] = comb(n, i)
    for b in sizes:
        nxt = list(poly)
        for i in range(n + 1 - b):
            nxt[i + b] += poly[i]
        poly = nxt
    coefficient = Rat(poly[n], factorial(n) * 2**c)

    if subset != coefficient:
        raise AssertionError(f"binary closed forms disagree for sizes {sizes}")
    return subset


def q_coord_id_to_tcycle(n: int, k: int, t: int):
    """Q(e, h) for h a single t-cycle, via both kappa summations."""
    if not 2 <= t <= n:
        raise ValueError("need 2 <= t <= n")
    m = n - t
    lead = Rat(k, k**n)
    form_a = lead * sum(
        (
            comb(m, j) * Rat(factorial(m - j), factorial(t + j)) * kappa(k - 1, m - j)
            for j in range(m + 1)
        ),
        Rat(0),
    )
    form_b = lead * sum(
        (
            comb(m, r) * Rat(factorial(r), factorial(n - r)) * kappa(k - 1, r)
            for r in range(m + 1)
        ),
        Rat(0),
    )
    if form_a != form_b:
        raise AssertionError(f"kappa forms disagree at (n={n}, k={k}, t={t})")
    if k == 2:
        binary = Rat(comb(2 * n - t, n), factorial(n) * 2 ** (n - 1))
        if form_a != binary:
            raise AssertionError(f"binary t-cycle closed form disagrees at (n={n}, t={t})")
    return form_a


def q_coord_tcycle_to_e(n: int, k: int, t: int):
    """Q(g, e) = Q(g, g) for g a single t-cycle: k^{t-1} Q(e, g)."""
    if not 2 <= t <= n:
        raise ValueError("need 2 <= t <= n")
    m = n - t
    value = k ** (t - 1) * q_coord_id_to_tcycle(n, k, t)
    direct = sum(
        (
            comb(m, j) * Rat(factorial(m - j), factorial(t + j)) * kappa(k - 1, m - j)
            for j in range(m + 1)
        ),
        Rat(0),
    ) / Rat(k**m)
    if value != direct:
        raise AssertionError(f"t-cycle forms disagree at (n={n}, k={k}, t={t})")
    if k == 2:
        binary = Rat(comb(2 * n - t, n), factorial(n) * 2**m)
        if value != binary:
            raise AssertionError(f"binary Q(g,e) closed form disagrees at (n={n}, t={t})")
    return value


def pi_coord(n: int, k: int, g: Permutation):
    """Dual stationary mass k^{c(g)} / (n! C(n+k-1, k-1)) = k^{c(g)} / k^(n rising)."""
    denom = factorial(n) * comb(n + k - 1, k - 1)
    if denom != rising_factorial(k, n):
        raise AssertionError("rising-factorial normalizer mismatch")
    return Rat(k ** g.cycle_count(), denom)


def uniform_floor_coord(n: int, k: int, g: Permutation):
    """Pointwise floor k^{1-c(g)} / n! for every row entry of the dual kernel."""
    return Rat(k, k ** g.cycle_count() * factorial(n))


def verify_uniform_floor(n: int, k: int, g: Permutation) -> bool:
    """Check the floor over every h in S_n, with equality exactly when
    <g,h> is transitive."""
    floor = uniform_floor_coord(n, k, g)
    for h in enumerate_sym(n):
        q = q_coord_colorings(n, k, g, h)
        if q < floor:
            raise AssertionError(f"floor violated at h = {h}")
        transitive = len(joint_orbits(g, h)) == 1
        if (q == floor) != transitive:
            raise AssertionError(f"floor equality/transitivity mismatch at h = {h}")
    return True
