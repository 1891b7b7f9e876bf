#!/usr/bin/env python3
"""Solve the time-optimal steering problem and check the bang-bang shape."""

import argparse
import math

import numpy as np

from obslab import control as ctl
from obslab.semigroup import SpectralState
from obslab.spectral import PhysicalParams, interval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", type=int, default=4)
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--radius", type=float, default=0.15)
    ap.add_argument("--bound", type=float, default=1.0,
                    help="symmetric control bound nu2 = -nu1")
    ap.add_argument("--t-max", type=float, default=1.0)
    ap.add_argument("--scan", type=int, default=0,
                    help="also run a dense grid-scan oracle with this many points")
    args = ap.parse_args()

    domain = interval(math.pi, n_modes=args.modes, n_cells=args.grid)
    params = PhysicalParams(1.0, 1.0)
    v0 = SpectralState.single_mode(domain, 1, (1.0, 0.0))
    problem = ctl.ControlProblem(domain, params, v0, args.t_max,
                                 omega=np.ones(domain.n_cells, dtype=bool),
                                 bounds=(-args.bound, args.bound),
                                 radius=args.radius, n_time=64)
    res = ctl.solve_time_optimal(problem, args.t_max)
    fraction, holds = ctl.verify_bang_bang(res.control)
    print(f"optimal horizon:   {res.t_star:.5f}  "
          f"({len(res.trace)} feasibility solves)")
    print(f"terminal norm:     {res.terminal_norm:.5f} (target {args.radius})")
    print(f"interior fraction: {fraction:.4f}  bang-bang: {holds}")
    if args.scan:
        oracle = ctl.grid_scan_time_optimal(problem, args.t_max, args.scan)
        print(f"grid-scan oracle:  {oracle:.5f}  "
              f"(difference {abs(oracle - res.t_star):.2e})")


if __name__ == "__main__":
    main()
