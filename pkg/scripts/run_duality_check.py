#!/usr/bin/env python3
"""Pathwise duality check: voter trajectories vs backward coalescing walks."""
import argparse
import json

from axsim import ExperimentConfig, execute


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--topology", choices=("path", "cycle"), default="cycle")
    ap.add_argument("--N", type=int, default=16)
    ap.add_argument("--t", type=float, default=5.0)
    ap.add_argument("--replicates", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    config = ExperimentConfig(
        kind="duality-check", topology=args.topology, N=args.N,
        t_query=args.t, replicates=args.replicates, master_seed=args.seed,
        output_dir=args.out, workers=args.workers)
    summary = execute(config)
    print(json.dumps({"aggregates": summary.aggregates,
                      "checks": summary.checks}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
