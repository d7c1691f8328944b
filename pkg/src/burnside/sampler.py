"""Stochastic simulation of the primal and dual two-stage updates.

One primal step from a word x: draw g uniform in the stabilizer of x, then a
uniform word fixed by g.  One dual step from g: draw a uniform fixed word,
then a uniform stabilizer element.  Neither step materializes a matrix.

Randomness comes from numpy's counter-based Philox generator keyed by a
64-bit seed; independent chains use disjoint streams of the same seed, so
any (seed, config) pair reproduces its trajectory bit-for-bit.
"""

from __future__ import annotations

import gzip as gzip_mod
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._rat import Rat
from .actions import (
    ActionSpec,
    count_orbits,
    dual_states,
    group_degree,
    sample_fixed_word_uniform,
    sample_stabilizer_uniform,
    stabilizer_size,
    word_to_str,
    words,
)
from .closedforms import pi_coord, pi_value
from .permgroup import Permutation

__all__ = [
    "make_rng",
    "step_primal",
    "step_dual",
    "ChainRun",
    "EmpiricalLaw",
    "RunResult",
    "run_chain",
    "empirical_one_step_row",
    "estimate_orbit_count",
    "dump_trajectory",
]

PRIMAL = "primal"
DUAL = "dual"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator; streams of one seed never collide."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in 64 bits")
    return np.random.Generator(np.random.Philox(key=seed + (stream << 64)))


def step_primal(spec: ActionSpec, x, rng) -> tuple:
    """One step of the orbit-sampling chain on words."""
    g = sample_stabilizer_uniform(spec, x, rng)
    return sample_fixed_word_uniform(spec, g, rng)


def step_dual(spec: ActionSpec, g: Permutation, rng) -> Permutation:
    """One step of the dual chain on permutations with nonempty fixed sets."""
    x = sample_fixed_word_uniform(spec, g, rng)
    return sample_stabilizer_uniform(spec, x, rng)


@dataclass(frozen=True)
class ChainRun:
    spec: ActionSpec
    chain: str  # "primal" | "dual"
    start: object
    steps: int
    seed: int
    stream: int = 0
    thin: int = 1

    def __post_init__(self) -> None:
        if self.chain not in (PRIMAL, DUAL):
            raise ValueError("chain must be 'primal' or 'dual'")
        if self.steps < 0 or self.thin < 1:
            raise ValueError("need steps >= 0 and thin >= 1")


@dataclass
class EmpiricalLaw:
    counts: dict
    total: int

    def tv_to(self, law: dict) -> float:
        """TV between the empirical frequencies and an exact law."""
        acc = 0.0
        for state in set(self.counts) | set(law):
            emp = self.counts.get(state, 0) / self.total
            acc += abs(emp - float(law.get(state, 0)))
        return acc / 2


@dataclass
class RunResult:
    run: ChainRun
    law: EmpiricalLaw
    final_state: object
    tv_to_stationary: Optional[float] = None
    trajectory: Optional[list] = field(default=None, repr=False)


def _stationary_law(spec: ActionSpec, chain: str) -> Optional[dict]:
    if chain == DUAL:
        if group_degree(spec) > 9:
            return None
        if spec.model == "value":
            return {g: pi_value(spec.k, spec.n, g) for g in dual_states(spec)}
        return {g: pi_coord(spec.n, spec.k, g) for g in dual_states(spec)}
    if spec.num_states > 65536:
        return None
    total = 0
    sizes = {}
    for x in words(spec):
        s = stabilizer_size(spec, x)
        sizes[x] = s
        total += s
    return {x: Rat(s, total) for x, s in sizes.items()}


def run_chain(run: ChainRun, keep_trajectory: bool = False) -> RunResult:
    """Run the chain; occupation counts cover every visited state (t = 0..steps)."""
    rng = make_rng(run.seed, run.stream)
    state = run.start
    counts: dict = {state: 1}
    trajectory = [state] if keep_trajectory else None
    step = step_primal if run.chain == PRIMAL else step_dual
    for t in range(1, run.steps + 1):
        state = step(run.spec, state, rng)
        if t % run.thin == 0:
            counts[state] = counts.get(state, 0) + 1
            if keep_trajectory:
                trajectory.append(state)
    total = sum(counts.values())
    law = EmpiricalLaw(counts, total)
    stationary = _stationary_law(run.spec, run.chain)
    tv_stat = law.tv_to(stationary) if stationary is not None else None
    return RunResult(run, law, state, tv_stat, trajectory)


def empirical_one_step_row(
    spec: ActionSpec, chain: str, start, draws: int, seed: int, stream: int = 0
) -> EmpiricalLaw:
    """Law of a single step from a fixed start, over independent draws."""
    rng = make_rng(seed, stream)
    step = step_primal if chain == PRIMAL else step_dual
    counts: dict = {}
    for _ in range(draws):
        y = step(spec, start, rng)
        counts[y] = counts.get(y, 0) + 1
    return EmpiricalLaw(counts, draws)


def estimate_orbit_count(spec: ActionSpec, samples: int, rng=None, seed: int = 0):
    """Monte Carlo orbit count: the mean of |X_g| over uniform g, with its
    standard error.  samples == 0 falls back to the exact count."""
    if samples == 0:
        exact = count_orbits(spec)
        return float(exact), 0.0
    if rng is None:
        rng = make_rng(seed)
    m = group_degree(spec)
    vals = np.empty(samples, dtype=float)
    for i in range(samples):
        images = rng.permutation(m) + 1
        if spec.model == "value":
            fixed = int(np.count_nonzero(images == np.arange(1, m + 1)))
            vals[i] = float(fixed**spec.n)
        else:
            seen = np.zeros(m, dtype=bool)
            cycles = 0
            for start in range(m):
                if not seen[start]:
                    cycles += 1
                    j = start
                    while not seen[j]:
                        seen[j] = True
                        j = int(images[j]) - 1
            vals[i] = float(spec.k**cycles)
    # z = (1/|G|) sum_g |X_g| is the expectation of |X_g| under uniform g
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("inf")
    return est, se


def dump_trajectory(path: str, result: RunResult, gzip: bool = False) -> None:
    """One state per line in the text formats; optional gzip."""
    if result.trajectory is None:
        raise ValueError("run_chain was called without keep_trajectory")
    spec = result.run.spec
    if result.run.chain == PRIMAL:
        lines = (word_to_str(spec, x) for x in result.trajectory)
    else:
        lines = (str(g) for g in result.trajectory)
    text = "\n".join(lines) + "\n"
    if gzip:
        with gzip_mod.open(path, "wt") as fh:
            fh.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def summary_json(result: RunResult) -> str:
    spec = result.run.spec
    if result.run.chain == PRIMAL:
        label = lambda s: word_to_str(spec, s)
    else:
        label = str
    payload = {
        "model": spec.model,
        "n": spec.n,
        "k": spec.k,
        "chain": result.run.chain,
        "start": label(result.run.start),
        "steps": result.run.steps,
        "seed": result.run.seed,
        "stream": result.run.stream,
        "thin": result.run.thin,
        "final_state": label(result.final_state),
        "total_counted": result.law.total,
        "distinct_states_visited": len(result.law.counts),
        "counts": {label(s): c for s, c in sorted(result.law.counts.items(), key=lambda kv: str(kv[0]))},
        "tv_to_stationary": result.tv_to_stationary,
    }
    return json.dumps(payload, indent=2)
