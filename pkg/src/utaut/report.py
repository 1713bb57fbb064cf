"""Run reports: stable JSON plus an optional class-size CSV."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any


@dataclass
class Report:
    command: str
    params: dict[str, Any]
    group_order: int | None = None
    center_order: int | None = None
    class_count: int | None = None
    class_size_histogram: list[list[int]] | None = None
    inn_order: int | None = None
    autc_order: int | None = None
    cb_order: int | None = None
    outc_order: int | None = None
    formula_autc: int | None = None
    formula_outc: int | None = None
    verdict: str = "SKIPPED"
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    certificates: list[Any] = field(default_factory=list)
    timings: dict[str, float] | None = None

    def set_verdict_from_checks(self) -> None:
        if self.checks:
            self.verdict = "PASS" if all(self.checks.values()) else "FAIL"

    def to_dict(self, with_timings: bool = False) -> dict[str, Any]:
        out = {}
        for f in fields(self):
            if f.name == "timings" and not with_timings:
                continue
            out[f.name] = getattr(self, f.name)
        return out

    def to_json(self, with_timings: bool = False) -> str:
        return json.dumps(self.to_dict(with_timings), indent=2) + "\n"

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class_size", "count"])
        for size, count in sorted(self.class_size_histogram or []):
            w.writerow([size, count])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        lines.append("params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        for name in ("group_order", "center_order", "class_count", "inn_order", "autc_order",
                     "cb_order", "outc_order", "formula_autc", "formula_outc"):
            v = getattr(self, name)
            if v is not None:
                lines.append(f"{name:>14}: {v}")
        if self.class_size_histogram:
            hist = " ".join(f"{s}x{c}" for s, c in self.class_size_histogram)
            lines.append(f"{'class sizes':>14}: {hist}")
        for k, v in self.details.items():
            lines.append(f"{k:>14}: {v}")
        for k, ok in self.checks.items():
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {k}")
        if self.timings:
            for k, v in self.timings.items():
                lines.append(f"  time {k}: {v:.3f}s")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def emit_report(report: Report, path: str | Path, csv_too: bool = False,
                with_timings: bool = False) -> list[Path]:
    """Write ``path`` (JSON) and, with ``csv_too``, the histogram CSV beside it."""
    path = Path(path)
    path.write_text(report.to_json(with_timings))
    written = [path]
    if csv_too:
        cpath = path.with_suffix(".csv")
        cpath.write_text(report.histogram_csv())
        written.append(cpath)
    return written
