"""Risk of the degree-variance test across the n^-1/2 threshold.

Sweeps p = n^-a over a grid of exponents for each n and writes one CSV row per
cell (same columns as ``planted risk-sweep``).
"""

import argparse
import sys

from planted.harness import ExperimentConfig, records_to_csv, risk_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-list", default="1024,4096,16384")
    ap.add_argument("--exponents", default="0.9,0.8,0.75,0.7,0.6,0.55,0.5,0.45,0.4,0.3")
    ap.add_argument("--model", default="matching", choices=("matching", "tree"))
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--engine", default="counts", choices=("graph", "counts"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    p_expr = ",".join(f"n^-{a}" for a in args.exponents.split(","))
    config = ExperimentConfig(
        n_list=[int(x) for x in args.n_list.split(",")], p_expr=p_expr, model=args.model,
        trials=args.trials, seed=args.seed, engine=args.engine, threads=args.threads,
    )
    sys.stdout.write(records_to_csv(risk_sweep(config)))


if __name__ == "__main__":
    main()
