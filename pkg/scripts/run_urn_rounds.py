#!/usr/bin/env python3
"""Rounds-urn replicates: final box-0 count vs the closed-form limit."""
import argparse
import json

from axsim import ExperimentConfig, execute


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--F", type=int, default=2)
    ap.add_argument("--q", type=int, default=4)
    ap.add_argument("--N", type=int, default=500, help="number of path edges")
    ap.add_argument("--replicates", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    config = ExperimentConfig(
        kind="urn-rounds", F=args.F, q=args.q, topology="path", N=args.N,
        replicates=args.replicates, master_seed=args.seed,
        output_dir=args.out, workers=args.workers)
    summary = execute(config)
    print(json.dumps({"aggregates": summary.aggregates,
                      "checks": summary.checks}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
