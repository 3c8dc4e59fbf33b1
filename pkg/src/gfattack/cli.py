"""Command-line entry point: run one attack experiment and write a JSON report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import CSV_HEADER, ExperimentConfig, measure_runtime, run_experiment, write_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, code=2)


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(code)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="gfattack",
        description="Targeted graph-filter attack against graph embedding victims.",
    )
    p.add_argument("--edges", required=True, help="whitespace-separated edge list")
    p.add_argument("--features", help="CSV feature table, one row per vertex")
    p.add_argument("--labels", required=True, help="one integer label per line")
    p.add_argument("--victim", default="sgc", choices=["sgc", "netmf-deepwalk", "netmf-line"])
    p.add_argument("--victim-order", type=int, default=None,
                   help="SGC layers or DeepWalk window (default 2 / 5 / 1)")
    p.add_argument("--dim", type=int, default=32, help="NetMF embedding dimension")
    p.add_argument("--negatives", type=int, default=1, help="negative samples b")
    p.add_argument("--attack", default="gf-sym", choices=["gf-sym", "gf-rw", "random", "degree"])
    p.add_argument("--order", type=int, default=2, help="filter order K of the attack loss")
    p.add_argument("--tail", type=int, default=128, help="number of smallest eigenvalues (n - T)")
    p.add_argument("--budget", type=int, default=1, help="edge flips per target")
    p.add_argument("--mode", default="evasion", choices=["evasion", "poisoning"])
    p.add_argument("--targets", type=int, default=40, help="number of attacked test vertices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attack-seed", type=int, default=None, help="seed of the random baseline")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--csv", help="append a one-line summary to this CSV file")
    p.add_argument("--record-time", action="store_true",
                   help="include per-target wall times in the report (breaks byte-reproducibility)")
    p.add_argument("--runtime-reps", type=int, default=0,
                   help="also time the attack phase this many times per target")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig(
            edges=args.edges, features=args.features, labels=args.labels,
            victim=args.victim, victim_order=args.victim_order, dim=args.dim,
            negatives=args.negatives, attack=args.attack, order=args.order,
            tail=args.tail, budget=args.budget, mode=args.mode,
            num_targets=args.targets, seed=args.seed, attack_seed=args.attack_seed,
            out=args.out,
        )
        report = run_experiment(cfg)
        if args.out:
            write_report(report, args.out, include_timing=args.record_time)
        else:
            sys.stdout.write(report.to_json(include_timing=args.record_time))
        if args.csv:
            path = Path(args.csv)
            new = not path.exists() or path.stat().st_size == 0
            with path.open("a") as fh:
                if new:
                    fh.write(CSV_HEADER + "\n")
                fh.write(report.csv_row() + "\n")
        if args.runtime_reps:
            timing = measure_runtime(cfg, args.runtime_reps)
            sys.stderr.write(json.dumps({"runtime": timing}) + "\n")
    except (ValueError, ArithmeticError, OSError) as exc:
        _fail(type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
