#!/usr/bin/env python3
"""Randomized sweeps of the two core pointwise inequalities.

Runs the L^p subset-norm bound for trigonometric polynomials and the
|sin| window-integral lower bound, reporting worst-case slack.
"""

import argparse
import time

import numpy as np

from obslab.trigpoly import (SineBoundCase, TrigPoly, random_interval_union,
                             remez_check, sine_integral_bound)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    t0 = time.perf_counter()
    worst = 0.0
    violations = 0
    for _ in range(args.cases):
        f = TrigPoly.random(rng, int(rng.integers(1, 9)))
        E = random_interval_union(rng)
        p = float(rng.uniform(1.0, 8.0))
        res = remez_check(f, E, p)
        worst = max(worst, res.lhs / res.rhs)
        violations += not res.holds
    print(f"subset-norm bound: {args.cases} cases, {violations} violations, "
          f"worst lhs/rhs {worst:.3e} [{time.perf_counter() - t0:.1f}s]")

    t0 = time.perf_counter()
    worst = 0.0
    violations = 0
    for _ in range(args.cases):
        res = sine_integral_bound(SineBoundCase.random(rng))
        worst = max(worst, res.lhs / res.rhs)
        violations += not res.holds
    print(f"sine-integral bound: {args.cases} cases, {violations} violations, "
          f"worst lhs/rhs {worst:.3e} [{time.perf_counter() - t0:.1f}s]")
    return 0 if violations == 0 else 4


if __name__ == "__main__":
    raise SystemExit(main())
