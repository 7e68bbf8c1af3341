"""Distance between the matching collision law and Poisson(1/2).

Total variation on {0..10}: exact from the inclusion-exclusion pmf (for
n <= --exact-max, where the big-integer sums stay cheap) next to a Monte
Carlo estimate from sampled matching pairs.
"""

import argparse
import math

import numpy as np

from planted.analytics import collision_pmf_matching
from planted.harness import sample_collisions


def poisson_pmf(k: int, lam: float = 0.5) -> float:
    return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-list", default="10,20,50,100,500,2000")
    ap.add_argument("--pairs", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--exact-max", type=int, default=200)
    args = ap.parse_args()

    print("n,tv_exact,tv_monte_carlo")
    for n in (int(x) for x in args.n_list.split(",")):
        tv_exact = math.nan
        if n <= args.exact_max:
            exact = [float(collision_pmf_matching(n, k)) if k <= n // 2 else 0.0 for k in range(11)]
            tv_exact = 0.5 * sum(abs(exact[k] - poisson_pmf(k)) for k in range(11))
        emp = np.bincount(sample_collisions(n, "matching", args.pairs, args.seed), minlength=11)[:11]
        tv_mc = 0.5 * sum(abs(emp[k] / args.pairs - poisson_pmf(k)) for k in range(11))
        print(f"{n},{tv_exact:.6f},{tv_mc:.6f}", flush=True)


if __name__ == "__main__":
    main()
