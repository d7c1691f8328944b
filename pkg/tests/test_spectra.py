"""Characteristic polynomials, shared spectra, intertwining, gap reports."""

import pytest

from burnside._rat import Rat
from burnside.actions import random_tabled_action, value_spec
from burnside.kernels import build_bundle
from burnside.ratmat import RationalMatrix
from burnside.sampler import make_rng
from burnside.spectra import (
    char_poly,
    dz_check,
    dz_eigenvalues,
    eigen_nullspace,
    extract_rational_roots,
    gap_report,
    intertwine_check,
    nonzero_spectrum_equal,
    spectrum_equal_report,
)

import goldens


def charpoly_oracle(m: RationalMatrix):
    """Cofactor-expansion determinant of xI - M over polynomial coefficients."""

    def poly_mul(a, b):
        out = [Rat(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return out

    def poly_add(a, b):
        n = max(len(a), len(b))
        a = list(a) + [Rat(0)] * (n - len(a))
        b = list(b) + [Rat(0)] * (n - len(b))
        return [x + y for x, y in zip(a, b)]

    def det(rows):
        n = len(rows)
        if n == 1:
            return rows[0][0]
        out = [Rat(0)]
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = poly_mul(rows[0][j], det(minor))
            if j % 2:
                term = [-c for c in term]
            out = poly_add(out, term)
        return out

    n = m.rows
    entries = [
        [
            [-m.data[i][j], Rat(1)] if i == j else [-m.data[i][j]]
            for j in range(n)
        ]
        for i in range(n)
    ]
    coeffs = det(entries)
    return coeffs + [Rat(0)] * (n + 1 - len(coeffs))


class TestCharPoly:
    def test_identity(self):
        cp = char_poly(RationalMatrix.identity(2))
        assert cp.coeffs == [Rat(1), Rat(-2), Rat(1)]

    def test_cofactor_oracle(self):
        rng = make_rng(31)
        for _ in range(6):
            n = int(rng.integers(2, 6))
            data = [
                [Rat(int(rng.integers(-3, 4)), int(rng.integers(1, 4))) for _ in range(n)]
                for _ in range(n)
            ]
            m = RationalMatrix(data)
            assert char_poly(m).coeffs == charpoly_oracle(m)

    def test_vanishes_at_one_for_stochastic(self, bundles):
        for key in [("value", 3, 2), ("value", 4, 3), ("coord", 2, 4), ("coord", 3, 3)]:
            b = bundles(*key)
            assert char_poly(b.Q)(Rat(1)) == 0
            assert char_poly(b.K)(Rat(1)) == 0

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            char_poly(RationalMatrix.identity(4), cap=3)


class TestRationalRoots:
    def test_golden_value_spectrum(self, golden_value):
        roots, rem = extract_rational_roots(char_poly(golden_value.Q), 18)
        assert rem.degree == 0
        assert {str(r): m for r, m in roots.items()} == goldens.VALUE_32_SPEC_Q
        roots_k, rem_k = extract_rational_roots(char_poly(golden_value.K), 18)
        assert rem_k.degree == 0
        assert {str(r): m for r, m in roots_k.items()} == goldens.VALUE_32_SPEC_K

    def test_golden_coord_spectrum(self, golden_coord):
        roots, rem = extract_rational_roots(char_poly(golden_coord.Q), 24)
        assert rem.degree == 0
        assert {str(r): m for r, m in roots.items()} == goldens.COORD_23_SPEC_Q
        roots_k, rem_k = extract_rational_roots(char_poly(golden_coord.K), 24)
        assert {str(r): m for r, m in roots_k.items()} == goldens.COORD_23_SPEC_K

    def test_deflation_reconstructs(self, golden_value):
        poly = char_poly(golden_value.Q)
        roots, rem = extract_rational_roots(poly, 18)
        rebuilt = rem.coeffs
        for r, m in roots.items():
            for _ in range(m):
                rebuilt = [Rat(0)] + rebuilt
                for i in range(len(rebuilt) - 1):
                    rebuilt[i] -= r * rebuilt[i + 1]
        assert rebuilt == poly.coeffs


class TestSpectrumEqual:
    def test_goldens(self, golden_value, golden_coord):
        assert nonzero_spectrum_equal(golden_value.Q, golden_value.K)
        assert nonzero_spectrum_equal(golden_coord.Q, golden_coord.K)

    def test_certificate_agrees_with_direct(self, bundles):
        for key in [("value", 4, 3), ("coord", 2, 4), ("coord", 3, 3)]:
            b = bundles(*key)
            direct = spectrum_equal_report(b.Q, b.K, legs=(b.A, b.B))
            assert direct.mode == "direct" and direct.equal
            cert = spectrum_equal_report(b.Q, b.K, legs=(b.A, b.B), direct_cap=2)
            assert cert.mode == "certificate" and cert.equal

    def test_certificate_rejects_wrong_product(self, golden_value):
        b = golden_value
        data = [list(row) for row in b.Q.data]
        data[0][0] += Rat(1, 18)
        data[0][1] -= Rat(1, 18)
        wrong = RationalMatrix.from_rows(data)
        rep = spectrum_equal_report(wrong, b.K, legs=(b.A, b.B), direct_cap=2)
        assert not rep.equal

    def test_random_tabled_actions(self):
        rng = make_rng(555)
        for _ in range(6):
            b = build_bundle(random_tabled_action(rng))
            assert nonzero_spectrum_equal(b.Q, b.K, legs=(b.A, b.B))


class TestIntertwine:
    def test_golden_value(self, golden_value):
        report = intertwine_check(golden_value)
        assert report["ok"]
        dims = {str(lam): e["dim_K"] for lam, e in report["eigenvalues"].items()}
        assert dims == {"1": 1, "1/2": 2, "1/3": 1}

    def test_golden_coord(self, golden_coord):
        report = intertwine_check(golden_coord)
        assert report["ok"]
        dims = {str(lam): e["dim_K"] for lam, e in report["eigenvalues"].items()}
        assert dims == {"1": 1, "1/4": 3}

    def test_stochastic_eigenvector(self, golden_value):
        # lambda = 1: the all-ones vector maps to the all-ones vector
        ones = [Rat(1)] * golden_value.num_states
        assert golden_value.A.mul_vec(ones) == [Rat(1)] * golden_value.num_duals

    def test_nullspace_dimensions(self, golden_coord):
        vq = eigen_nullspace(golden_coord.Q, Rat(1, 4))
        vk = eigen_nullspace(golden_coord.K, Rat(1, 4))
        assert len(vq) == len(vk) == 3


class TestDZ:
    def test_closed_values(self):
        assert dz_eigenvalues(3) == [Rat(1, 4)]
        assert dz_eigenvalues(4) == [Rat(1, 4), Rat(9, 64)]
        assert dz_eigenvalues(5)[1] == Rat(6, 16) ** 2

    def test_check_small(self, golden_coord, bundles):
        assert dz_check(3, golden_coord.K)
        assert dz_check(4, bundles("coord", 2, 4).K)

    def test_exact_roots_contain_dz_values(self, bundles):
        b = bundles("coord", 2, 4)
        roots, rem = extract_rational_roots(char_poly(b.K), 2 * 16 * 24)
        assert rem.degree == 0
        nontrivial = {r for r in roots if r not in (Rat(0), Rat(1))}
        assert nontrivial == set(dz_eigenvalues(4))


class TestGapReport:
    def test_golden_value(self, golden_value):
        rep = gap_report(golden_value.Q, golden_value.piQ, "Q")
        assert rep.gamma == pytest.approx(0.5)
        assert rep.gamma_star == pytest.approx(0.5)
        assert rep.relaxation_time == pytest.approx(2.0)
        rep_k = gap_report(golden_value.K, golden_value.piK, "K")
        assert rep_k.gamma_star == pytest.approx(rep.gamma_star)

    def test_paguyo_gap_bound(self, bundles):
        # lambda_1 <= 1 - 1/(2k) whenever k >= n in the symbol model
        for k, n in [(3, 2), (4, 3), (4, 4)]:
            b = bundles("value", k, n)
            rep = gap_report(b.Q, b.piQ)
            lam1 = 1.0 - rep.gamma
            assert lam1 <= 1 - 1 / (2 * k) + 1e-12

    def test_single_state_convention(self):
        b = build_bundle(value_spec(2, 3))
        assert b.num_duals == 1
        rep = gap_report(b.Q, b.piQ)
        assert rep.gamma == rep.gamma_star == rep.relaxation_time == 1.0

    def test_rejects_non_reversible(self):
        p = RationalMatrix([[Rat(0), Rat(1)], [Rat(1, 2), Rat(1, 2)]])
        with pytest.raises(ValueError):
            gap_report(p, [Rat(1, 2), Rat(1, 2)])

    def test_eigenvalues_real_and_contractive(self, bundles):
        for key in [("value", 4, 3), ("coord", 2, 4), ("coord", 3, 3)]:
            b = bundles(*key)
            for mat, pi in ((b.Q, b.piQ), (b.K, b.piK)):
                rep = gap_report(mat, pi)
                assert all(abs(x) <= 1 + 1e-9 for x in rep.float_roots)
                lam_star = max(abs(x) for x in rep.float_roots[1:])
                assert lam_star < 1 - 1e-9

    def test_json_round_trip(self, golden_value):
        import json

        rep = gap_report(golden_value.Q, golden_value.piQ, "Q")
        payload = json.loads(rep.to_json())
        assert payload["exact_roots"][0] == {"value": "1", "multiplicity": 1}
        assert payload["name"] == "Q"


def test_bundle_gap_agreement(bundles):
    from burnside.spectra import bundle_gap_report

    for key in [("value", 3, 2), ("value", 4, 3), ("coord", 2, 4), ("coord", 3, 3)]:
        rep_q, rep_k = bundle_gap_report(bundles(*key))
        assert rep_q.gamma_star == pytest.approx(rep_k.gamma_star, abs=1e-9)


def test_spectrum_check_requires_legs_above_cap(golden_value):
    with pytest.raises(ValueError):
        spectrum_equal_report(golden_value.Q, golden_value.K, legs=None, direct_cap=2)
