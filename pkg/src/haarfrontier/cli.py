"""Command-line interface: simulate, estimate, experiment, list-presets.

Experiment configuration is layered: preset defaults, then a flat key=value
config file, then command-line flags. Report CSVs are deterministic for a
fixed configuration regardless of the worker count; the JSON manifest
carries the config echo, a content hash, and the wall time.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .estimators import corrected_estimate
from .experiments import PRESETS, ExperimentConfig, run_experiment
from .frontiers import parse_frontier
from .process import PartitionConfig, PointSample, cell_stats, simulate
from .report import config_hash, summarize, write_manifest, write_report_csv

USAGE_ERROR = 1
TOLERANCE_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="haarfrontier", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="draw a point sample and write it as CSV")
    sim.add_argument("--frontier", required=True, help="e.g. constant:a=1.0 or affine:a=1.0,b=0.5")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--c", type=float, default=1.0)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default=".")

    est = sub.add_parser("estimate", help="estimate a frontier from a sample CSV")
    est.add_argument("sample", help="path to a PointSample CSV")
    est.add_argument("--hprime", type=int, required=True)
    est.add_argument("--dn", type=int, required=True)
    est.add_argument("--out", default=".")

    exp = sub.add_parser("experiment", help="run a named experiment preset")
    exp.add_argument("name", help="preset name; see list-presets")
    exp.add_argument("--config", help="flat key=value config file; flags override it")
    exp.add_argument("--frontier")
    exp.add_argument("--c", type=float)
    exp.add_argument("--n", type=int)
    exp.add_argument("--hprime", type=int)
    exp.add_argument("--dn", type=int)
    exp.add_argument("--schedule", help="semicolon-separated n:hprime:dn triples")
    exp.add_argument("--replicates", type=int)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--x", type=float, action="append")
    exp.add_argument("--variant")
    exp.add_argument("--workers", type=int)
    exp.add_argument("--out", default=".")
    exp.add_argument("--strict", action="store_true", help="exit 2 on any tolerance failure")

    sub.add_parser("list-presets", help="list experiment presets")
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed config line {raw!r}")
        values[key.strip()] = value.strip()
    return values


def _parse_schedule(text: str) -> tuple:
    entries = []
    for part in text.split(";"):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise ValueError(f"malformed schedule entry {part!r}; expected n:hprime:dn")
        entries.append(tuple(int(v) for v in fields))
    return tuple(entries)


def _merge_experiment_config(base: ExperimentConfig, file_vals: dict, args) -> ExperimentConfig:
    cfg = base
    if "frontier" in file_vals:
        cfg = replace(cfg, frontier=file_vals["frontier"])
    if "c" in file_vals:
        cfg = replace(cfg, c=float(file_vals["c"]))
    if "schedule" in file_vals:
        cfg = replace(cfg, schedule=_parse_schedule(file_vals["schedule"]))
    elif {"n", "hprime", "dn"} <= file_vals.keys():
        entry = (int(file_vals["n"]), int(file_vals["hprime"]), int(file_vals["dn"]))
        cfg = replace(cfg, schedule=(entry,))
    if "replicates" in file_vals:
        cfg = replace(cfg, replicates=int(file_vals["replicates"]))
    if "seed" in file_vals:
        cfg = replace(cfg, base_seed=int(file_vals["seed"]))
    if "x" in file_vals:
        cfg = replace(cfg, xs=tuple(float(v) for v in file_vals["x"].split(",")))
    if "variant" in file_vals:
        cfg = replace(cfg, variant=file_vals["variant"])
    if "workers" in file_vals:
        cfg = replace(cfg, workers=int(file_vals["workers"]))

    if args.frontier is not None:
        cfg = replace(cfg, frontier=args.frontier)
    if args.c is not None:
        cfg = replace(cfg, c=args.c)
    if args.schedule is not None:
        cfg = replace(cfg, schedule=_parse_schedule(args.schedule))
    elif args.n is not None or args.hprime is not None or args.dn is not None:
        if None in (args.n, args.hprime, args.dn):
            raise ValueError("--n, --hprime and --dn must be given together")
        cfg = replace(cfg, schedule=((args.n, args.hprime, args.dn),))
    if args.replicates is not None:
        cfg = replace(cfg, replicates=args.replicates)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.x:
        cfg = replace(cfg, xs=tuple(args.x))
    if args.variant is not None:
        cfg = replace(cfg, variant=args.variant)
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    return cfg


def _config_payload(name: str, kind: str, cfg: ExperimentConfig) -> dict:
    return {
        "preset": name,
        "experiment": kind,
        "frontier": cfg.frontier,
        "schedule": [list(entry) for entry in cfg.schedule],
        "c": cfg.c,
        "replicates": cfg.replicates,
        "base_seed": cfg.base_seed,
        "xs": list(cfg.xs),
        "regimes": list(cfg.regimes),
        "variant": cfg.variant,
        "sup_eps": list(cfg.sup_eps),
    }


def _cmd_simulate(args) -> int:
    frontier = parse_frontier(args.frontier)
    sample = simulate(frontier, args.n, args.c, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "sample.csv"
    sample.to_csv(path)
    print(f"wrote {len(sample)} points to {path}")
    return 0


def _cmd_estimate(args) -> int:
    sample = PointSample.from_csv(args.sample)
    frontier = parse_frontier(sample.frontier_label)
    cfg = PartitionConfig(n=sample.n, h_prime=args.hprime, d_n=args.dn)
    bundle = corrected_estimate(cell_stats(sample, cfg, frontier), cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "estimate.json"
    path.write_text(bundle.to_json() + "\n")
    print(f"wrote estimate (k_n={cfg.k_n}, z_n={bundle.z_n!r}) to {path}")
    return 0


def _cmd_experiment(args) -> int:
    if args.name not in PRESETS:
        print(f"unknown preset {args.name!r}; see list-presets", file=sys.stderr)
        return USAGE_ERROR
    preset = PRESETS[args.name]
    file_vals = _read_config_file(args.config) if args.config else {}
    cfg = _merge_experiment_config(preset.config, file_vals, args)
    payload = _config_payload(args.name, preset.kind, cfg)

    start = time.perf_counter()
    rows = run_experiment(preset.kind, cfg)
    elapsed = time.perf_counter() - start

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{args.name}.csv"
    manifest_path = out_dir / f"{args.name}_manifest.json"
    write_report_csv(rows, csv_path)
    summary = summarize(rows)
    write_manifest(
        manifest_path,
        {
            "config": payload,
            "input_hash": config_hash(payload),
            "wall_time_s": elapsed,
            "version": __version__,
            **summary,
        },
    )
    print(f"wrote {summary['rows']} rows to {csv_path} ({summary['failures']} failures)")
    if args.strict and summary["failures"] > 0:
        return TOLERANCE_FAILURE
    return 0


def _cmd_list_presets() -> int:
    width = max(len(name) for name in PRESETS)
    for name, preset in PRESETS.items():
        cfgs = ", ".join(f"n={n},h'={hp},d={dn}" for n, hp, dn in preset.config.schedule)
        print(f"{name:<{width}}  {preset.note} [{cfgs}]")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        if args.command == "list-presets":
            return _cmd_list_presets()
    except (ValueError, OSError) as exc:
        print(f"haarfrontier: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
