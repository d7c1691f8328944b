"""Command-line interface: build, verify, mix, sample, closedform.

Exit codes: 0 all checks passed / output written, 1 a verification failed,
2 usage error.  All reports are deterministic for a fixed (config, seed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._rat import Rat, parse_rat, rat_str
from .actions import ActionSpec, word_from_str
from .closedforms import (
    pi_coord,
    pi_value,
    q_brute,
    q_coord_binary,
    q_coord_colorings,
    q_coord_expectation,
    q_value_coefficient,
    q_value_expectation,
    q_value_stirling,
    qbar_value,
)
from .dynamics import (
    StrongLumpabilityFailure,
    bound_suite,
    bundle_profiles,
    conjugacy_lump_Q,
    cycle_count_partition,
    d_profile,
    fixedpoint_lump_value,
    lump,
    orbit_lump_K,
    stationarity_transfer_check,
)
from .kernels import (
    CapExceeded,
    build_bundle,
    build_q_direct,
    check_detailed_balance,
    diagonal_equals_e_column,
    doeblin_floor,
)
from .permgroup import parse_perm
from .ratmat import matrix_to_csv, matrix_to_json
from .sampler import ChainRun, dump_trajectory, run_chain, summary_json
from .spectra import bundle_gap_report, intertwine_check, spectrum_equal_report

# bound name -> which worst-case curve it constrains ("K", "Q", or None)
_BOUND_CHAIN = {
    "rosenthal_K": "K",
    "rosenthal_Q": "Q",
    "chen_model_free_K": "K",
    "chen_orbit_coupling": "K",
    "two_step_transfer": "Q",
    "paguyo_K": "K",
    "paguyo_Q_transfer": "Q",
    "aldous_K": "K",
    "aldous_Q_transfer": "Q",
    "dz_upper_K_allequal": "K",
    "dz_lower_K_allequal": "K",
    "dz_dual_lower": "Q",
    "dz_Q_ncycle_upper": "Q",
}


def _spec_from_args(args) -> ActionSpec:
    return ActionSpec(args.model, args.n, args.k)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=["value", "coord"])
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--n", required=True, type=int)


def cmd_build(args) -> int:
    spec = _spec_from_args(args)
    bundle = build_bundle(spec)
    os.makedirs(args.out, exist_ok=True)
    dl, sl = bundle.dual_labels, bundle.state_labels
    matrices = {
        "A": (bundle.A, dl, sl),
        "B": (bundle.B, sl, dl),
        "Q": (bundle.Q, dl, dl),
        "K": (bundle.K, sl, sl),
    }
    if bundle.num_duals + bundle.num_states <= 1024:
        matrices["M"] = (bundle.M, dl + sl, dl + sl)
    fmts = ["json", "csv"] if args.format == "both" else [args.format]
    for name, (mat, rows, cols) in matrices.items():
        for fmt in fmts:
            path = os.path.join(args.out, f"{name}.{fmt}")
            if fmt == "json":
                with open(path, "w") as fh:
                    json.dump(matrix_to_json(mat, rows, cols), fh, indent=1)
                    fh.write("\n")
            else:
                with open(path, "w") as fh:
                    fh.write(matrix_to_csv(mat, rows, cols))
    for name, vec, labels in (("piQ", bundle.piQ, dl), ("piK", bundle.piK, sl)):
        with open(os.path.join(args.out, f"{name}.json"), "w") as fh:
            json.dump(
                {"labels": labels, "entries": [rat_str(v) for v in vec]}, fh, indent=1
            )
            fh.write("\n")
    print(f"wrote {', '.join(sorted(matrices))}, piQ, piK to {args.out}")
    return 0


class _Checker:
    def __init__(self) -> None:
        self.failures = 0

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        tag = "PASS" if ok else "FAIL"
        if not ok:
            self.failures += 1
        suffix = f": {detail}" if detail else ""
        print(f"{tag} {name}{suffix}")


def _closed_form_pairs(bundle, limit: int = 40):
    """All dual pairs when the dual space is small, else a deterministic
    sample that always includes the identity row and column."""
    nd = bundle.num_duals
    if nd <= limit:
        for gi in range(nd):
            for hi in range(nd):
                yield gi, hi
        return
    idx = sorted(set(range(0, nd, max(1, nd // limit))) | {bundle.e_index})
    for gi in idx:
        for hi in idx:
            yield gi, hi


def cmd_verify(args) -> int:
    spec = _spec_from_args(args)
    try:
        bundle = build_bundle(spec)
    except CapExceeded as exc:
        print(f"FAIL build: {exc}")
        return 1
    ck = _Checker()

    ck.check(
        "legs_row_stochastic",
        bundle.A.is_row_stochastic() and bundle.B.is_row_stochastic(),
    )
    ck.check(
        "kernels_row_stochastic",
        bundle.Q.is_row_stochastic() and bundle.K.is_row_stochastic(),
    )
    ck.check("factorization_Q_eq_AB", bundle.Q == bundle.A @ bundle.B)
    ck.check("factorization_K_eq_BA", bundle.K == bundle.B @ bundle.A)
    if bundle.num_duals + bundle.num_states <= 300:
        m2 = bundle.M @ bundle.M
        nd = bundle.num_duals
        ok = True
        for i in range(m2.rows):
            for j in range(m2.cols):
                if i < nd and j < nd:
                    want = bundle.Q.data[i][j]
                elif i >= nd and j >= nd:
                    want = bundle.K.data[i - nd][j - nd]
                else:
                    want = Rat(0)
                if m2.data[i][j] != want:
                    ok = False
        ck.check("block_flip_square", ok)

    ck.check(
        "stationary_piQ", bundle.Q.vec_mul(list(bundle.piQ)) == list(bundle.piQ)
    )
    ck.check(
        "stationary_piK", bundle.K.vec_mul(list(bundle.piK)) == list(bundle.piK)
    )
    ck.check("stationarity_transfer", stationarity_transfer_check(bundle))
    ck.check("detailed_balance_Q", check_detailed_balance(bundle.Q, bundle.piQ))
    ck.check("detailed_balance_K", check_detailed_balance(bundle.K, bundle.piK))
    ck.check("diagonal_equals_e_column", diagonal_equals_e_column(bundle))
    try:
        delta = doeblin_floor(bundle)
        ck.check("doeblin_floor", True, f"delta = {delta}")
    except AssertionError as exc:
        ck.check("doeblin_floor", False, str(exc))

    rep = spectrum_equal_report(bundle.Q, bundle.K, legs=(bundle.A, bundle.B))
    ck.check("nonzero_spectrum_equal", rep.equal, f"mode = {rep.mode}")
    if bundle.num_duals + bundle.num_states <= 200:
        rep_i = intertwine_check(bundle)
        ck.check("eigenvector_intertwining", rep_i["ok"])
        try:
            rep_q, rep_k = bundle_gap_report(bundle)
            ck.check(
                "absolute_gaps_agree", True,
                f"gamma* = {rep_q.gamma_star:.6g}, t_rel = {rep_q.relaxation_time:.6g}",
            )
        except AssertionError as exc:
            ck.check("absolute_gaps_agree", False, str(exc))

    ok = True
    detail = ""
    for gi, hi in _closed_form_pairs(bundle):
        g, h = bundle.duals[gi], bundle.duals[hi]
        expected = bundle.Q.data[gi][hi]
        if spec.model == "value":
            forms = (
                q_value_stirling(spec.k, spec.n, g, h),
                q_value_expectation(spec.k, spec.n, g, h),
                q_value_coefficient(spec.k, spec.n, g, h),
            )
        else:
            forms = (
                q_coord_colorings(spec.n, spec.k, g, h),
                q_coord_expectation(spec.n, spec.k, g, h),
            ) + ((q_coord_binary(spec.n, g, h),) if spec.k == 2 else ())
        brute = q_brute(spec, g, h)
        if brute != expected or any(f != expected for f in forms):
            ok = False
            detail = f"mismatch at ({g}, {h})"
            break
    ck.check("closed_forms_match_kernel", ok, detail)
    if bundle.num_duals <= 200:
        ck.check("direct_q_construction", build_q_direct(spec) == bundle.Q)
    else:
        print(f"SKIP direct_q_construction: {bundle.num_duals} dual states (> 200)")

    try:
        lumped = conjugacy_lump_Q(bundle)
        ck.check("conjugacy_lump_Q", True, f"{lumped.kernel.rows} classes")
    except (AssertionError, StrongLumpabilityFailure) as exc:
        ck.check("conjugacy_lump_Q", False, str(exc))
    try:
        lumped = orbit_lump_K(bundle)
        ck.check("orbit_lump_K", True, f"{lumped.kernel.rows} orbits")
    except (AssertionError, StrongLumpabilityFailure) as exc:
        ck.check("orbit_lump_K", False, str(exc))

    if spec.model == "value":
        try:
            lumped = fixedpoint_lump_value(bundle)
            counts = sorted({len(g.fixed_points()) for g in bundle.duals}, reverse=True)
            ok = True
            for i, r in enumerate(counts):
                for j, s in enumerate(counts):
                    if lumped.kernel.data[i][j] != qbar_value(spec.k, spec.n, r, s):
                        ok = False
            ck.check("fixedpoint_lump_matches_closed_form", ok)
        except StrongLumpabilityFailure as exc:
            ck.check("fixedpoint_lump_matches_closed_form", False, str(exc))

    if args.expect_lump_failure == "cycle-count":
        if spec.model != "coord":
            ck.check("expected_lump_failure", False, "cycle-count partition needs the coordinate model")
        else:
            try:
                lump(bundle.Q, bundle.piQ, cycle_count_partition(bundle))
                ck.check("expected_lump_failure", False, "cycle-count lumping unexpectedly succeeded")
            except StrongLumpabilityFailure as exc:
                gi, gj = bundle.dual_labels[exc.state_i], bundle.dual_labels[exc.state_j]
                pieces = "; ".join(
                    f"sums over c={label}: {si} vs {sj}" for label, si, sj in exc.mismatches
                )
                ck.check("expected_lump_failure", True, f"witnesses {gi} vs {gj}; {pieces}")

    profiles = bundle_profiles(bundle, args.tmax)
    for res in bound_suite(bundle, args.tmax, profiles):
        if not res.applicable:
            print(f"SKIP bound {res.name}: {res.reason}")
        else:
            ck.check(f"bound_{res.name}", bool(res.verified), res.reason)

    print(f"{'PASS' if ck.failures == 0 else 'FAIL'} total: {ck.failures} failure(s)")
    return 0 if ck.failures == 0 else 1


def _parse_eps(values) -> list:
    out = [parse_rat(v) for v in (values or ["1/4", "1/10"])]
    for eps in out:
        if not 0 < eps < 1:
            raise SystemExit(2)
    return out


def cmd_mix(args) -> int:
    spec = _spec_from_args(args)
    bundle = build_bundle(spec)
    eps_list = _parse_eps(args.eps)
    profiles = bundle_profiles(bundle, args.tmax)
    results = bound_suite(bundle, args.tmax, profiles, eps_list=eps_list)
    d_k = profiles.k.worst
    d_q = profiles.q.worst
    bar_k = orbit_lump_K(bundle, verify_formula=False)
    bar_q = conjugacy_lump_Q(bundle, verify_formula=False)
    dbar_k = d_profile(bar_k.kernel, bar_k.pi, args.tmax).worst
    dbar_q = d_profile(bar_q.kernel, bar_q.pi, args.tmax).worst

    rows = [("t", "d_fine", "d_lumped", "bound_name", "bound_value", "ok")]
    for t in range(args.tmax + 1):
        rows.append((t, rat_str(d_k[t]), rat_str(dbar_k[t]), "d_K", "", ""))
        rows.append((t, rat_str(d_q[t]), rat_str(dbar_q[t]), "d_Q", "", ""))
    for res in results:
        chain = _BOUND_CHAIN.get(res.name)
        if res.curve is None or chain is None:
            continue
        fine, lumped = (d_k, dbar_k) if chain == "K" else (d_q, dbar_q)
        for t in range(args.tmax + 1):
            rows.append(
                (t, rat_str(fine[t]), rat_str(lumped[t]), res.name,
                 rat_str(res.curve[t]), str(bool(res.verified)).lower())
            )
    summary = {
        "model": spec.model,
        "n": spec.n,
        "k": spec.k,
        "t_max": args.tmax,
        "mixing_times": {
            str(eps): {
                "Q": profiles.q.mixing_time(eps),
                "K": profiles.k.mixing_time(eps),
            }
            for eps in eps_list
        },
        "bounds": [
            {
                "name": r.name,
                "applicable": r.applicable,
                "verified": r.verified,
                "reason": r.reason,
            }
            for r in results
        ],
    }
    if args.format == "csv":
        text = "\n".join(",".join(str(c) for c in row) for row in rows) + "\n"
    else:
        text = json.dumps(
            {
                "summary": summary,
                "curves": {
                    "d_K": [rat_str(v) for v in d_k],
                    "d_Q": [rat_str(v) for v in d_q],
                    "d_K_orbit_lumped": [rat_str(v) for v in dbar_k],
                    "d_Q_class_lumped": [rat_str(v) for v in dbar_q],
                    **{
                        r.name: [rat_str(v) for v in r.curve]
                        for r in results
                        if r.curve is not None
                    },
                },
            },
            indent=1,
        ) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for eps, times in summary["mixing_times"].items():
        print(f"eps={eps}: t_mix(Q)={times['Q']} t_mix(K)={times['K']}", file=sys.stderr)
    bad = [r.name for r in results if r.applicable and not r.verified]
    return 1 if bad else 0


def cmd_sample(args) -> int:
    spec = _spec_from_args(args)
    if args.chain == "primal":
        start = word_from_str(spec, args.start) if args.start else (1,) * spec.n
    else:
        from .actions import group_degree

        start = (
            parse_perm(args.start, group_degree(spec))
            if args.start
            else parse_perm("e", group_degree(spec))
        )
        if spec.model == "value" and not start.fixed_points():
            print(f"invalid start: {start} is a derangement", file=sys.stderr)
            return 2
    run = ChainRun(spec, args.chain, start, args.steps, args.seed, thin=args.thin)
    keep = args.out is not None
    result = run_chain(run, keep_trajectory=keep)
    if args.out:
        dump_trajectory(args.out, result, gzip=args.out.endswith(".gz"))
    text = summary_json(result)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_closedform(args) -> int:
    spec = _spec_from_args(args)
    from .actions import group_degree

    deg = group_degree(spec)
    g = parse_perm(args.g, deg)
    h = parse_perm(args.h, deg)
    rows = []
    if spec.model == "value":
        rows.append(("stirling_sum", q_value_stirling(spec.k, spec.n, g, h)))
        rows.append(("expectation", q_value_expectation(spec.k, spec.n, g, h)))
        rows.append(("coefficient", q_value_coefficient(spec.k, spec.n, g, h)))
        pi_g = pi_value(spec.k, spec.n, g)
    else:
        rows.append(("colorings_sum", q_coord_colorings(spec.n, spec.k, g, h)))
        rows.append(("expectation", q_coord_expectation(spec.n, spec.k, g, h)))
        if spec.k == 2:
            rows.append(("binary", q_coord_binary(spec.n, g, h)))
        pi_g = pi_coord(spec.n, spec.k, g)
    brute = q_brute(spec, g, h)
    rows.append(("brute_force", brute))
    payload = {
        "model": spec.model,
        "n": spec.n,
        "k": spec.k,
        "g": str(g),
        "h": str(h),
        "Q(g,h)": {name: rat_str(v) for name, v in rows},
        "pi(g)": rat_str(pi_g),
        "all_equal": len({v for _, v in rows}) == 1,
    }
    print(json.dumps(payload, indent=1))
    return 0 if payload["all_equal"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="burnside",
        description="Exact kernels, spectra, mixing bounds and samplers for the "
        "classical and dual orbit-sampling chains on two symmetric-group actions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write A, B, Q, K, M and both stationary laws")
    _add_common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", default="both", choices=["json", "csv", "both"])
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run every exact identity check and bound")
    _add_common(p)
    p.add_argument("--tmax", type=int, default=60)
    p.add_argument("--expect-lump-failure", choices=["cycle-count"], default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mix", help="TV profiles, bound curves, mixing times")
    _add_common(p)
    p.add_argument("--tmax", type=int, default=60)
    p.add_argument("--eps", action="append", help="threshold like 1/4 (repeatable)")
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("sample", help="simulate the primal or dual chain")
    _add_common(p)
    p.add_argument("--chain", default="dual", choices=["primal", "dual"])
    p.add_argument("--start", default=None, help="word (primal) or permutation (dual)")
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--out", default=None, help="trajectory path (.gz compresses)")
    p.add_argument("--summary", default=None, help="summary JSON path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("closedform", help="evaluate one dual-kernel entry all ways")
    _add_common(p)
    p.add_argument("--g", default="e")
    p.add_argument("--h", default="e")
    p.set_defaults(func=cmd_closedform)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
