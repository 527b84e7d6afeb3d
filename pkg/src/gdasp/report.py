"""Timing benchmark over the bundled cases: delimited output plus figures.

``run_report`` checks every bundled case, writes ``timings.csv`` with the
per-phase durations and verdicts, and renders a bar chart of the same
numbers to ``timings.png`` next to it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .compliance import Recommendation, check_compliance
from .heart_failure import bundled_cases, load_case_profile
from .syntax import Program


def run_report(out_dir: Path, kb: Program | None = None) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for case in bundled_cases():
        profile = load_case_profile(case["profile"])
        proposed = Recommendation(case["treatment"], case["cor_class"])
        report = check_compliance(profile, proposed, kb=kb)
        rows.append(
            {
                "case": case["id"],
                "treatment": proposed.treatment,
                "cor_class": proposed.cor_class,
                "verdict": report.verdict.value,
                "enumerate_ms": report.timings_ms.get("enumerate_ms", ""),
                "abduce_ms": report.timings_ms.get("abduce_ms", ""),
                "abducibles": "; ".join(
                    str(a) for e in report.explanations for a in e.assumed_true
                ),
            }
        )

    csv_path = out_dir / "timings.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    png_path = out_dir / "timings.png"
    _render_figure(rows, png_path)
    return [csv_path, png_path]


def _render_figure(rows: list[dict], path: Path) -> None:
    labels = [r["case"] for r in rows]
    enumerate_ms = [float(r["enumerate_ms"] or 0) for r in rows]
    abduce_ms = [float(r["abduce_ms"] or 0) for r in rows]

    fig, ax = plt.subplots(figsize=(8, 4.5))
    positions = range(len(labels))
    width = 0.4
    ax.bar([p - width / 2 for p in positions], enumerate_ms, width,
           label="recommendation enumeration")
    ax.bar([p + width / 2 for p in positions], abduce_ms, width,
           label="abductive check")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels)
    ax.set_xlabel("case")
    ax.set_ylabel("wall-clock time (ms)")
    ax.set_title("Advisory workflow timings per bundled case")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
