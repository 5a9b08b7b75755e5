#!/usr/bin/env python3
"""Sweep the pointwise identity suites over the built-in manifolds.

Runs the Bochner-type residual suite and the divergence identity suite with a
chosen sample budget, printing the worst defect per case.  Useful for spotting
regressions in the curvature or jet code at higher sample counts than the
test suite uses.
"""

import argparse

from spectra_bochner import harness as hz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    rep = hz.bochner_suite(samples=args.samples, seed=args.seed)
    print("Bochner-type residuals (max over points, spread over c values):")
    for case in rep["cases"]:
        print(f"  {case['manifold']:<18} phi={case['phi']:<16} "
              f"residual={case['max_residual']:.3e} "
              f"c-spread={case['max_c_spread']:.3e}")
    print(f"  worst residual {rep['max_residual']:.3e}, "
          f"worst c-spread {rep['max_c_spread']:.3e}\n")

    rep = hz.divergence_suite(samples=args.samples, seed=args.seed)
    print("Divergence identities (max defect per case):")
    for mname, sub in sorted(rep["manifolds"].items()):
        for key, val in sorted(sub.items()):
            if key.startswith("item") and isinstance(val, float):
                print(f"  {mname + ' ' + key:<44} {val:.3e}")
    for sname, val in sorted(rep["div_p1"].items()):
        print(f"  {sname + ' div_p1':<44} {val:.3e}")
    print(f"  worst defect {rep['max_defect']:.3e}\n")

    rep = hz.fd_order_study(samples=max(4, args.samples // 25))
    print(f"Finite-difference defect order (two step sizes): "
          f"{rep['observed_order']:.4f}")


if __name__ == "__main__":
    main()
