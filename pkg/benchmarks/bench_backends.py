#!/usr/bin/env python3
"""Compare the compiled (gmpy2) and pure-Python (fractions) exact backends.

The backend is chosen at import time, so each measurement runs in a fresh
subprocess with BURNSIDE_EXACT_BACKEND set.  The workload covers the three
hot paths: kernel assembly, the TV profile walk, and an exact char poly.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import burnside
from burnside.actions import coord_spec, value_spec
from burnside.dynamics import bundle_profiles
from burnside.kernels import build_bundle
from burnside.spectra import char_poly

timings = {"backend": burnside.EXACT_BACKEND}

t0 = time.perf_counter()
b35 = build_bundle(coord_spec(3, 5))
b54 = build_bundle(value_spec(5, 4))
timings["build_kernels"] = time.perf_counter() - t0

t0 = time.perf_counter()
bundle_profiles(b35, 40)
timings["tv_profiles_t40"] = time.perf_counter() - t0

t0 = time.perf_counter()
char_poly(b35.Q)
timings["char_poly_120"] = time.perf_counter() - t0

print(json.dumps(timings))
"""


def run_once(backend: str) -> dict:
    env = dict(os.environ, BURNSIDE_EXACT_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(f"workload failed under {backend}:\n{out.stderr}")
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=1)
    args = parser.parse_args()
    rows = []
    for backend in ("gmpy2", "fractions"):
        try:
            best = None
            for _ in range(args.repeat):
                t = run_once(backend)
                if best is None:
                    best = t
                else:
                    for key, val in t.items():
                        if key != "backend" and val < best[key]:
                            best[key] = val
            rows.append(best)
        except RuntimeError as exc:
            print(f"skipping {backend}: {exc}", file=sys.stderr)
    if not rows:
        return 1
    keys = [k for k in rows[0] if k != "backend"]
    header = f"{'stage':<18}" + "".join(f"{r['backend']:>12}" for r in rows)
    print(header)
    print("-" * len(header))
    for key in keys:
        line = f"{key:<18}" + "".join(f"{r[key]:>11.2f}s" for r in rows)
        print(line)
    if len(rows) == 2:
        print("-" * len(header))
        for key in keys:
            ratio = rows[1][key] / rows[0][key]
            print(f"{key:<18}{'':>12}{ratio:>10.1f}x slower pure")
    return 0


if __name__ == "__main__":
    sys.exit(main())
