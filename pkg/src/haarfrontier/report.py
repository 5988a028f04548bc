"""Report rows, CSV emission, and run manifests.

Every row carries its oracle comparator, a Monte Carlo standard error, and
the declared tolerance alongside the pass verdict, so the CSV contains no
bare numbers. Floats are written with shortest round-trip formatting, which
makes re-runs byte-comparable.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from typing import Optional

CSV_COLUMNS = [
    "experiment",
    "frontier",
    "n",
    "c",
    "h_n",
    "d_n",
    "k_n",
    "x",
    "statistic",
    "estimate",
    "std_err",
    "comparator",
    "tolerance",
    "pass",
]


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    frontier: str
    n: int
    c: float
    h_n: int
    d_n: int
    k_n: int
    x: Optional[float]
    statistic: str
    estimate: float
    std_err: float
    comparator: float
    tolerance: float
    passed: bool


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row.experiment,
                    row.frontier,
                    _fmt(row.n),
                    _fmt(row.c),
                    _fmt(row.h_n),
                    _fmt(row.d_n),
                    _fmt(row.k_n),
                    _fmt(row.x),
                    row.statistic,
                    _fmt(row.estimate),
                    _fmt(row.std_err),
                    _fmt(row.comparator),
                    _fmt(row.tolerance),
                    _fmt(row.passed),
                ]
            )


def read_report_csv(path) -> list:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                ReportRow(
                    experiment=rec["experiment"],
                    frontier=rec["frontier"],
                    n=int(rec["n"]),
                    c=float(rec["c"]),
                    h_n=int(rec["h_n"]),
                    d_n=int(rec["d_n"]),
                    k_n=int(rec["k_n"]),
                    x=float(rec["x"]) if rec["x"] else None,
                    statistic=rec["statistic"],
                    estimate=float(rec["estimate"]),
                    std_err=float(rec["std_err"]),
                    comparator=float(rec["comparator"]),
                    tolerance=float(rec["tolerance"]),
                    passed=rec["pass"] == "true",
                )
            )
    return rows


def config_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_manifest(path, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def summarize(rows) -> dict:
    return {
        "rows": len(rows),
        "failures": sum(1 for r in rows if not r.passed),
        "statistics": sorted({r.statistic for r in rows}),
    }
