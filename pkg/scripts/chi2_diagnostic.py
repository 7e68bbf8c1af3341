"""Chi-square curves from the collision-MGF formula.

Matching model: Poisson(1/2) diagnostic. Tree model: binomial upper bound.
Both over n = 2^lo .. 2^hi at p = c * n^-a.
"""

import argparse

from planted.analytics import chi2_bound_tree, chi2_diagnostic_matching
from planted.samplers import ModelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=3.0)
    ap.add_argument("--a", type=float, default=1 / 3)
    ap.add_argument("--lo", type=int, default=8)
    ap.add_argument("--hi", type=int, default=20)
    args = ap.parse_args()

    print("n,p,matching_diagnostic,tree_bound")
    for e in range(args.lo, args.hi + 1):
        n = 2 ** e
        p = args.c * n ** -args.a
        if not 0 < p < 1:
            continue
        m = chi2_diagnostic_matching(ModelParams(n, "matching", p))
        t = chi2_bound_tree(ModelParams(n, "tree", p))
        print(f"{n},{p:.6g},{m:.6g},{t:.6g}")


if __name__ == "__main__":
    main()
