"""Exact characteristic polynomials, spectra, and eigen-structure checks.

char_poly runs an exact similarity reduction to Hessenberg form followed by
the standard determinant recurrence, all over rationals.  Rational roots are
peeled off with candidate denominators taken from the matrix entries; the
remaining factor is handed to a float companion-matrix solver.

For kernel pairs too large for exact elimination, nonzero_spectrum_equal
falls back to a factorization certificate: it verifies Q == A B and
K == B A entrywise in exact arithmetic, which pins the two nonzero spectra
to the same product pair (the report records which mode ran).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb, gcd
from typing import Optional

import numpy as np

from ._rat import Rat, rat_str
from .kernels import ChainBundle, check_detailed_balance
from .ratmat import RationalMatrix

__all__ = [
    "CharPoly",
    "char_poly",
    "extract_rational_roots",
    "nonzero_spectrum_equal",
    "spectrum_equal_report",
    "eigen_nullspace",
    "intertwine_check",
    "dz_eigenvalues",
    "dz_check",
    "SpectrumReport",
    "gap_report",
    "bundle_gap_report",
    "EXACT_DIM_CAP",
    "DIRECT_COMPARE_CAP",
]

EXACT_DIM_CAP = 512
# Above this dimension the exact elimination route is too slow and the
# shared-spectrum check switches to the factorization certificate.
DIRECT_COMPARE_CAP = 512


@dataclass
class CharPoly:
    """det(xI - P) with exact coefficients, ascending powers, leading 1."""

    coeffs: list

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Rat(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, CharPoly) and self.coeffs == other.coeffs

    def shifted(self, extra_zeros: int) -> "CharPoly":
        """Multiply by x^extra_zeros."""
        return CharPoly([Rat(0)] * extra_zeros + list(self.coeffs))

    def deflate(self, root) -> "CharPoly":
        """Exact synthetic division by (x - root); the root must be exact."""
        out = [Rat(0)] * self.degree
        acc = Rat(0)
        for i in range(self.degree, 0, -1):
            acc = self.coeffs[i] + acc * root
            out[i - 1] = acc
        if self.coeffs[0] + acc * root != 0:
            raise ValueError(f"{root} is not a root")
        return CharPoly(out)


def _hessenberg(data: list[list]) -> list[list]:
    n = len(data)
    h = [list(row) for row in data]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for row in h:
                row[j + 1], row[piv] = row[piv], row[j + 1]
        pivot = h[j + 1][j]
        for i in range(j + 2, n):
            if not h[i][j]:
                continue
            m = h[i][j] / pivot
            hi, hj = h[i], h[j + 1]
            for c in range(j, n):
                if hj[c]:
                    hi[c] -= m * hj[c]
            for row in h:
                if row[i]:
                    row[j + 1] += m * row[i]
    return h


def char_poly(p: RationalMatrix, cap: int = EXACT_DIM_CAP) -> CharPoly:
    """Exact characteristic polynomial of a square rational matrix."""
    if p.rows != p.cols:
        raise ValueError("matrix is not square")
    n = p.rows
    if n > cap:
        raise ValueError(f"dimension {n} exceeds the exact char-poly cap {cap}")
    if n == 0:
        return CharPoly([Rat(1)])
    h = _hessenberg(p.data)
    zero, one = Rat(0), Rat(1)
    polys = [[one]]  # p_0 = 1
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [zero] * (m + 1)
        hm = h[m - 1][m - 1]
        for i, c in enumerate(prev):  # (x - h_mm) * p_{m-1}
            cur[i + 1] += c
            if hm:
                cur[i] -= hm * c
        prod = one
        for i in range(m - 1, 0, -1):
            prod *= h[i][i - 1]
            if not prod:
                break
            coeff = h[i - 1][m - 1]
            if coeff:
                scale = coeff * prod
                for d, c in enumerate(polys[i - 1]):
                    if c:
                        cur[d] -= scale * c
        polys.append(cur)
    return CharPoly(polys[n])


def _divisors(d: int, cap: int = 10_000_000) -> list[int]:
    if d <= 0 or d > cap:
        return []
    out = set()
    i = 1
    while i * i <= d:
        if d % i == 0:
            out.add(i)
            out.add(d // i)
        i += 1
    return sorted(out)


def _lcm_denominators(p: RationalMatrix) -> int:
    out = 1
    for row in p.data:
        for v in row:
            den = v.denominator
            out = out * den // gcd(out, den)
    return out


def extract_rational_roots(poly: CharPoly, denominator_hint: int = 1):
    """Peel off rational roots in [-1, 1] using candidate denominators from
    the matrix entries; returns ({root: multiplicity}, remaining CharPoly)."""
    qs = set(range(1, 13)) | set(_divisors(denominator_hint))
    candidates = {Rat(0)}
    for q in qs:
        for p in range(-q, q + 1):
            if gcd(abs(p), q) == 1 or p == 0:
                candidates.add(Rat(p, q))
    roots: dict = {}
    rem = poly
    # largest first so the report reads top-down
    for cand in sorted(candidates, reverse=True):
        while rem.degree > 0 and rem(cand) == 0:
            roots[cand] = roots.get(cand, 0) + 1
            rem = rem.deflate(cand)
    return roots, rem


def _verify_products(bundle_or_legs) -> bool:
    if isinstance(bundle_or_legs, ChainBundle):
        a, b, q, k = bundle_or_legs.A, bundle_or_legs.B, bundle_or_legs.Q, bundle_or_legs.K
    else:
        a, b, q, k = bundle_or_legs
    return (a @ b) == q and (b @ a) == k


@dataclass
class SpectrumEqualReport:
    equal: bool
    mode: str
    dim_q: int
    dim_k: int
    detail: str = ""


def spectrum_equal_report(
    q: RationalMatrix,
    k: RationalMatrix,
    legs: Optional[tuple[RationalMatrix, RationalMatrix]] = None,
    direct_cap: int = DIRECT_COMPARE_CAP,
) -> SpectrumEqualReport:
    """Decide whether Q and K share their nonzero spectra exactly.

    Direct mode compares full exact characteristic polynomials (the larger
    must be x^delta times the smaller).  Certificate mode, used above the
    elimination cap, verifies the exact factorizations through the legs.
    """
    if q.rows != q.cols or k.rows != k.cols:
        raise ValueError("kernels must be square")
    big_dim = max(q.rows, k.rows)
    if big_dim <= direct_cap:
        cq = char_poly(q, cap=max(direct_cap, EXACT_DIM_CAP))
        ck = char_poly(k, cap=max(direct_cap, EXACT_DIM_CAP))
        if q.rows <= k.rows:
            equal = ck == cq.shifted(k.rows - q.rows)
        else:
            equal = cq == ck.shifted(q.rows - k.rows)
        return SpectrumEqualReport(equal, "direct", q.rows, k.rows)
    if legs is None:
        raise ValueError(
            f"dimension {big_dim} exceeds the direct cap {direct_cap} and no "
            "legs were supplied for the factorization certificate"
        )
    a, b = legs
    ok = _verify_products((a, b, q, k))
    detail = "verified Q == A@B and K == B@A entrywise"
    small = min(q.rows, k.rows)
    if ok and small <= direct_cap:
        # Exact char poly of the small side for the record; evaluating it at 1
        # must give 0 (stochasticity), a cheap independent sanity anchor.
        cs = char_poly(q if q.rows <= k.rows else k, cap=max(direct_cap, EXACT_DIM_CAP))
        if cs(Rat(1)) != 0:
            return SpectrumEqualReport(False, "certificate", q.rows, k.rows, "char(1) != 0")
        detail += f"; char poly of the {small}-dim side computed exactly"
    return SpectrumEqualReport(ok, "certificate", q.rows, k.rows, detail)


def nonzero_spectrum_equal(
    q: RationalMatrix,
    k: RationalMatrix,
    legs: Optional[tuple[RationalMatrix, RationalMatrix]] = None,
    direct_cap: int = DIRECT_COMPARE_CAP,
) -> bool:
    return spectrum_equal_report(q, k, legs, direct_cap).equal


def eigen_nullspace(p: RationalMatrix, lam) -> list[list]:
    """Exact basis of ker(P - lam I) via rational Gauss-Jordan elimination."""
    if p.rows != p.cols:
        raise ValueError("matrix is not square")
    n = p.rows
    lam = Rat(lam)
    m = [[p.data[i][j] - (lam if i == j else Rat(0)) for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if m[r][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Rat(0)] * n
        v[fc] = Rat(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def intertwine_check(bundle: ChainBundle, direct_cap: int = DIRECT_COMPARE_CAP) -> dict:
    """Verify QA == AK and KB == BQ exactly, then transport eigenvectors.

    For every nonzero rational eigenvalue lambda found exactly, the map
    v -> Av must carry ker(K - lambda I) into ker(Q - lambda I) without
    killing anything, and B must map back as multiplication by lambda.
    """
    a, b, q, k = bundle.A, bundle.B, bundle.Q, bundle.K
    report: dict = {
        "QA_eq_AK": (q @ a) == (a @ k),
        "KB_eq_BQ": (k @ b) == (b @ q),
        "eigenvalues": {},
    }
    small = q if q.rows <= k.rows else k
    poly = char_poly(small, cap=direct_cap)
    hint = _lcm_denominators(small)
    roots, _ = extract_rational_roots(poly, hint)
    for lam in sorted((r for r in roots if r != 0), reverse=True):
        vk = eigen_nullspace(k, lam)
        vq = eigen_nullspace(q, lam)
        entry = {"dim_K": len(vk), "dim_Q": len(vq), "dims_equal": len(vk) == len(vq)}
        transported = True
        for v in vk:
            w = a.mul_vec(v)
            if all(c == 0 for c in w):
                transported = False
                break
            if q.mul_vec(w) != [lam * c for c in w]:
                transported = False
                break
            if b.mul_vec(w) != [lam * c for c in v]:
                transported = False
                break
        for w in vq:
            v = b.mul_vec(w)
            if all(c == 0 for c in v):
                transported = False
                break
            if k.mul_vec(v) != [lam * c for c in v]:
                transported = False
                break
            if a.mul_vec(v) != [lam * c for c in w]:
                transported = False
                break
        entry["transported"] = transported
        report["eigenvalues"][lam] = entry
    report["ok"] = (
        report["QA_eq_AK"]
        and report["KB_eq_BQ"]
        and all(e["dims_equal"] and e["transported"] for e in report["eigenvalues"].values())
    )
    return report


def dz_eigenvalues(n: int) -> list:
    """Nontrivial spectrum of the binary coordinate chain:
    (C(2m,m)/2^(2m))^2 for 1 <= m <= floor(n/2)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return [Rat(comb(2 * m, m) ** 2, 16**m) for m in range(1, n // 2 + 1)]


def dz_check(n: int, k_matrix: RationalMatrix, tol: float = 1e-9) -> bool:
    """Distinct nontrivial nonzero eigenvalues of K match the closed list."""
    eigs = np.linalg.eigvalsh(_symmetrized(k_matrix, _uniformish_pi(k_matrix)))
    nontrivial = [x for x in eigs if abs(x - 1.0) > 1e-6 and abs(x) > 1e-6]
    found = sorted(set(round(float(x), 12) for x in nontrivial), reverse=True)
    expected = sorted((float(v) for v in dz_eigenvalues(n)), reverse=True)
    if len(found) != len(expected):
        return False
    return all(abs(f - e) <= tol for f, e in zip(found, expected))


def _uniformish_pi(p: RationalMatrix):
    """A positive stationary vector for symmetrization, solved in floats."""
    a = p.to_float_array()
    w, v = np.linalg.eig(a.T)
    idx = int(np.argmin(np.abs(w - 1.0)))
    pi = np.real(v[:, idx])
    pi = np.abs(pi)
    return pi / pi.sum()


def _symmetrized(p: RationalMatrix, pi) -> np.ndarray:
    a = p.to_float_array()
    d = np.sqrt(np.asarray([float(x) for x in pi], dtype=float))
    return (a * d[:, None]) / d[None, :]


@dataclass
class SpectrumReport:
    name: str
    dim: int
    exact_roots: list = field(default_factory=list)  # (Rat, multiplicity)
    remaining_degree: int = 0
    float_roots: list = field(default_factory=list)  # descending
    gamma: float = 0.0
    gamma_star: float = 0.0
    relaxation_time: float = 0.0
    mode: str = "exact"

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "dim": self.dim,
                "exact_roots": [
                    {"value": rat_str(r), "multiplicity": m} for r, m in self.exact_roots
                ],
                "remaining_degree": self.remaining_degree,
                "float_roots": [f"{x:.12g}" for x in self.float_roots],
                "gamma": f"{self.gamma:.12g}",
                "gamma_star": f"{self.gamma_star:.12g}",
                "relaxation_time": f"{self.relaxation_time:.12g}",
                "mode": self.mode,
            },
            indent=2,
        )


def bundle_gap_report(bundle: ChainBundle, tol: float = 1e-9) -> tuple[SpectrumReport, SpectrumReport]:
    """Gap reports for Q and K together; their absolute gaps must agree."""
    rep_q = gap_report(bundle.Q, bundle.piQ, "Q", tol=tol)
    rep_k = gap_report(bundle.K, bundle.piK, "K", tol=tol)
    if abs(rep_q.gamma_star - rep_k.gamma_star) > tol:
        raise AssertionError(
            f"absolute gaps differ: Q gives {rep_q.gamma_star}, K gives {rep_k.gamma_star}"
        )
    return rep_q, rep_k


def gap_report(
    p: RationalMatrix,
    pi,
    name: str = "",
    direct_cap: int = DIRECT_COMPARE_CAP,
    tol: float = 1e-9,
) -> SpectrumReport:
    """Spectral gap, absolute gap and relaxation time of a reversible kernel."""
    if not check_detailed_balance(p, pi):
        raise ValueError("kernel is not reversible with respect to pi")
    if p.rows == 1:
        # single-state chain: gaps are 1 by convention
        return SpectrumReport(name, 1, [(Rat(1), 1)], 0, [1.0], 1.0, 1.0, 1.0)
    exact_roots: list = []
    remaining_degree = 0
    if p.rows <= direct_cap:
        poly = char_poly(p)
        if poly(Rat(1)) != 0:
            raise AssertionError("characteristic polynomial does not vanish at 1")
        roots, rem = extract_rational_roots(poly, _lcm_denominators(p))
        exact_roots = sorted(roots.items(), reverse=True)
        remaining_degree = rem.degree
        floats = []
        for r, m in exact_roots:
            floats.extend([float(r)] * m)
        if rem.degree > 0:
            floats.extend(float(np.real(z)) for z in np.roots([float(c) for c in reversed(rem.coeffs)]))
        mode = "exact" if remaining_degree == 0 else "exact+float"
    else:
        floats = [float(x) for x in np.linalg.eigvalsh(_symmetrized(p, pi))]
        mode = "float"
    floats.sort(reverse=True)
    below_one = [x for x in floats if x < 1.0 - tol]
    lam1 = max(below_one) if below_one else 1.0
    lam_star = max((abs(x) for x in floats[1:]), default=0.0)
    gamma = 1.0 - lam1
    gamma_star = 1.0 - lam_star
    t_rel = float("inf") if gamma_star <= 0 else 1.0 / gamma_star
    return SpectrumReport(
        name, p.rows, exact_roots, remaining_degree, floats, gamma, gamma_star, t_rel, mode
    )
