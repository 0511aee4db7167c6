"""Command-line experiment harness.

Subcommands: simulate, bounds, urn-rounds, duality-check, lemma5-estimate,
table1. A flat key=value config file can seed any flag; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .bounds import table1_generate
from .core import InvalidInput
from .experiments import ExperimentConfig, execute


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


_BOOL_KEYS = {"attach_urn", "save_events"}
_INT_KEYS = {"F", "q", "N", "max_events", "replicates", "seed", "workers"}
_FLOAT_KEYS = {"t_max", "t", "theta"}


def _coerce(key: str, val: str):
    if key in _BOOL_KEYS:
        return val.lower() in ("1", "true", "yes")
    if key in _INT_KEYS:
        return int(val)
    if key in _FLOAT_KEYS:
        return float(val)
    if key == "snapshots":
        return val
    return val


def _add_common(p):
    p.add_argument("--config", help="key=value file supplying flag defaults")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--workers", type=int, default=None)


def _add_model_flags(p):
    p.add_argument("--model", choices=("axelrod", "voter", "cvm"), default=None)
    p.add_argument("--F", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--topology", choices=("path", "cycle"), default=None)
    p.add_argument("--N", type=int, default=None,
                   help="path: edge count; cycle: vertex count")
    p.add_argument("--replicates", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="axsim")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="replicated trajectories with aggregation")
    _add_common(p)
    _add_model_flags(p)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--max-events", type=int, default=None)
    p.add_argument("--snapshots", default=None, help="comma-separated sample times")
    p.add_argument("--attach-urn", action="store_true", default=None)
    p.add_argument("--save-events", action="store_true", default=None)

    p = sub.add_parser("bounds", help="single bound / psi query")
    _add_common(p)
    p.add_argument("--F", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)

    p = sub.add_parser("table1", help="full reference table (CSV + text)")
    _add_common(p)
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("urn-rounds", help="standalone rounds-urn replicates")
    _add_common(p)
    p.add_argument("--F", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)

    p = sub.add_parser("duality-check", help="pathwise voter duality over seeds")
    _add_common(p)
    p.add_argument("--topology", choices=("path", "cycle"), default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--replicates", type=int, default=None)

    p = sub.add_parser("lemma5-estimate",
                       help="conditional feature-agreement probability on a path")
    _add_common(p)
    p.add_argument("--F", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--y", type=int, default=None)
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--replicates", type=int, default=None)
    return ap


_DEFAULTS = {
    "model": "axelrod", "F": 2, "q": 2, "topology": "path", "N": 100,
    "replicates": 1, "seed": 0, "workers": 1, "attach_urn": False,
    "save_events": False, "t_max": None, "max_events": None, "snapshots": None,
    "out": None, "theta": None, "t": None, "x": None, "y": None, "z": None,
}


def _resolve(args) -> dict:
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for k, v in _parse_config_file(args.config).items():
            merged[k] = _coerce(k, v)
    for k, v in vars(args).items():
        if k in ("command", "config"):
            continue
        if v is not None:
            merged[k] = v
    return merged


def _snapshot_times(spec) -> tuple:
    if not spec:
        return ()
    return tuple(float(s) for s in str(spec).split(",") if s.strip())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = _resolve(args)
    try:
        config = ExperimentConfig(
            kind=args.command,
            model=opts["model"],
            F=opts["F"],
            q=opts["q"],
            topology=opts["topology"],
            N=opts["N"],
            t_max=opts["t_max"],
            max_events=opts["max_events"],
            replicates=opts["replicates"],
            master_seed=opts["seed"],
            snapshot_times=_snapshot_times(opts["snapshots"]),
            attach_urn=bool(opts["attach_urn"]),
            save_events=bool(opts["save_events"]),
            output_dir=opts["out"],
            workers=opts["workers"],
            theta=opts["theta"],
            xyz=tuple(v for v in (opts["x"], opts["y"], opts["z"]) if v is not None),
            t_query=opts["t"],
        )
        summary = execute(config)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "table1" and getattr(args, "format", "text") == "text":
        print(table1_generate().render_text())
    else:
        print(json.dumps({"aggregates": summary.aggregates, "checks": summary.checks},
                         indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
