"""Report serialization: canonical JSON, plot-ready CSV and rendered figures.

The JSON file is canonical (sorted keys, shortest round-trip float repr) and
excludes wall-clock runtime, so identical seeded runs produce byte-identical
files.  Every fitted slope's (x, y) series is emitted to a single CSV with a
``series,x,y`` header at 17 significant digits, which round-trips float64
exactly, and rendered to a PNG alongside.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from akl.verify import VerificationReport


def reports_to_json(reports: list[VerificationReport]) -> str:
    payload = [r.to_dict() for r in reports]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def iter_series(reports: list[VerificationReport]):
    for rep in reports:
        for name, data in rep.series.items():
            yield f"{rep.test_name}.{name}", data


def write_series_csv(reports: list[VerificationReport], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "x", "y"])
        for full_name, data in iter_series(reports):
            for x, y in zip(data["x"], data["y"]):
                writer.writerow([full_name, f"{float(x):.17g}", f"{float(y):.17g}"])


def read_series_csv(path) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Read a series CSV back into {name: (x, y)} without precision loss."""
    series: dict[str, tuple[list, list]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["series", "x", "y"]:
            raise ValueError(f"{path}: unexpected header {header}")
        for name, x, y in reader:
            xs, ys = series.setdefault(name, ([], []))
            xs.append(float(x))
            ys.append(float(y))
    return {k: (np.asarray(v[0]), np.asarray(v[1])) for k, v in series.items()}


def write_report_files(
    reports: list[VerificationReport],
    json_path,
    figures: bool = True,
) -> list[Path]:
    """Write the JSON report, the series CSV and one figure per series.

    Returns the list of paths written.  ``json_path`` names the report file;
    the CSV lands alongside with suffix ``.series.csv`` and figures as
    ``<stem>.<series>.png``.
    """
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(reports_to_json(reports))
    written = [json_path]

    csv_path = json_path.with_name(json_path.stem + ".series.csv")
    write_series_csv(reports, csv_path)
    written.append(csv_path)

    if figures:
        from akl.plots import render_series_figure

        for full_name, data in iter_series(reports):
            fig_path = json_path.with_name(f"{json_path.stem}.{full_name}.png")
            render_series_figure(
                fig_path,
                full_name,
                np.asarray(data["x"], dtype=float),
                np.asarray(data["y"], dtype=float),
                slope=data.get("slope"),
                intercept=data.get("intercept"),
            )
            written.append(fig_path)
    return written


def summary_lines(reports: list[VerificationReport]) -> list[str]:
    lines = []
    for rep in reports:
        tag = "PASS" if rep.passed else "FAIL"
        keys = ("slope", "target", "ratio", "k_emp", "moyal_err", "rel_gap", "roundtrip_err")
        details = ", ".join(
            f"{k}={rep.measurements[k]:.6g}"
            for k in keys
            if k in rep.measurements and isinstance(rep.measurements[k], (int, float))
        )
        lines.append(f"[{tag}] {rep.test_name}" + (f": {details}" if details else ""))
    return lines
