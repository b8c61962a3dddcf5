"""CSV and manifest writers for experiment outputs.

Column layouts (header row first, fixed order, floats as ``%.12e``):

``aggregate.csv``
    iteration, mean_e_b, mean_historic, std_historic
``optimal_iteration_cdf.csv`` / ``all_explored_cdf.csv``
    iteration, fraction  -- fraction of *all* repetitions at or below the
    iteration; censored/never repetitions only count in the denominator.
``repetitions.csv``
    repetition, seed, optimal_iteration, all_explored_iteration,
    infeasible_actions, explorations, best_action, final_historic --
    ``optimal_iteration`` is ``iterations + 1`` when censored and
    ``all_explored_iteration`` is ``never`` when exploration never finished.
``similarity_ratio.csv``
    iteration, mean_historic_plain, mean_historic_similarity, ratio
``report.csv`` (one row per ring)
    action, ring, e_tx, e_rx, e, bottleneck_ring, e_b
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .config import config_to_dict
from .energy import EnergyReport
from .harness import NEVER, ExperimentLog, distribution_stats

FLOAT_FMT = "{:.12e}"

AGGREGATE_COLUMNS = ["iteration", "mean_e_b", "mean_historic", "std_historic"]
CDF_COLUMNS = ["iteration", "fraction"]
REPETITION_COLUMNS = [
    "repetition",
    "seed",
    "optimal_iteration",
    "all_explored_iteration",
    "infeasible_actions",
    "explorations",
    "best_action",
    "final_historic",
]
RATIO_COLUMNS = ["iteration", "mean_historic_plain", "mean_historic_similarity", "ratio"]
REPORT_COLUMNS = ["action", "ring", "e_tx", "e_rx", "e", "bottleneck_ring", "e_b"]


def fmt(x: float) -> str:
    return FLOAT_FMT.format(float(x))


def _write_rows(path: Path, columns: list[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def read_csv(path: str | Path) -> list[dict]:
    """Parse one of the CSVs above back into dicts of int/float/str values."""

    def convert(value: str):
        for cast in (int, float):
            try:
                return cast(value)
            except ValueError:
                pass
        return value

    with open(path, newline="") as fh:
        return [{k: convert(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def write_experiment(log: ExperimentLog, out_dir: str | Path, json_mirror: bool = False) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stats = distribution_stats(log)
    files = {}

    files["aggregate"] = _write_rows(
        out / "aggregate.csv",
        AGGREGATE_COLUMNS,
        (
            [i + 1, fmt(eb), fmt(h), fmt(s)]
            for i, (eb, h, s) in enumerate(zip(stats.mean_e_b, stats.mean_historic, stats.std_historic))
        ),
    )
    for key, (values, fractions) in (
        ("optimal_iteration_cdf", stats.optimal_cdf),
        ("all_explored_cdf", stats.all_explored_cdf),
    ):
        files[key] = _write_rows(
            out / f"{key}.csv", CDF_COLUMNS, ([int(v), fmt(f)] for v, f in zip(values, fractions))
        )

    space = log.table.space
    rows = []
    for k in range(log.repetitions):
        done = log.all_explored_iteration[k]
        best = log.best_action[k]
        rows.append(
            [
                k,
                int(log.seeds[k]),
                int(log.optimal_iteration[k]),
                "never" if done == NEVER else int(done),
                int(log.infeasible_count[k]),
                int(log.explore_count[k]),
                "none" if best == NEVER else str(space[int(best)]),
                fmt(log.historic[k, -1]),
            ]
        )
    files["repetitions"] = _write_rows(out / "repetitions.csv", REPETITION_COLUMNS, rows)

    manifest = {
        "config": config_to_dict(log.config),
        "seeds": [int(s) for s in log.seeds],
        "action_count": len(space),
        "oracle": {"action": str(space[log.table.optimum]), "e_b": log.table.min_e_b},
        "optimal_iteration_censored": stats.optimal_censored,
        "all_explored_never": stats.all_explored_never,
        "infeasible_actions": int((~log.table.feasible).sum()),
    }
    files["manifest"] = out / "manifest.json"
    files["manifest"].write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    if json_mirror:
        mirror = {
            "iteration": list(range(1, log.iterations + 1)),
            "mean_e_b": stats.mean_e_b.tolist(),
            "mean_historic": stats.mean_historic.tolist(),
            "std_historic": stats.std_historic.tolist(),
        }
        files["aggregate_json"] = out / "aggregate.json"
        files["aggregate_json"].write_text(json.dumps(mirror) + "\n")
    return files


def write_ratio(plain: ExperimentLog, sim: ExperimentLog, ratio: np.ndarray, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = (
        [i + 1, fmt(a), fmt(b), fmt(r)]
        for i, (a, b, r) in enumerate(zip(plain.mean_historic(), sim.mean_historic(), ratio))
    )
    return _write_rows(path, RATIO_COLUMNS, rows)


def report_rows(report: EnergyReport) -> list[list]:
    return [
        [str(report.action), r, fmt(tx), fmt(rx), fmt(tx + rx), report.bottleneck_ring, fmt(report.e_b)]
        for r, (tx, rx) in enumerate(zip(report.e_tx, report.e_rx), start=1)
    ]


def report_csv(report: EnergyReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    writer.writerows(report_rows(report))
    return buf.getvalue()
