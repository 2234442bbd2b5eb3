"""
CSV reports and JSON run summaries.

A report is a table of checks. Every row carries the route that produced each of its two
sides, one of ``closed-form``, ``spectral`` or ``oracle``. Files hold no timestamps, so
identical runs write identical bytes.
"""

import csv
import io
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)

CLOSED_FORM = "closed-form"
SPECTRAL = "spectral"
ORACLE = "oracle"
ROUTES = (CLOSED_FORM, SPECTRAL, ORACLE)


@dataclass(frozen=True)
class ReportRow:
    cells: Sequence[str]
    lhs_route: str
    rhs_route: str
    passed: bool

    def __post_init__(self) -> None:
        for route in (self.lhs_route, self.rhs_route):
            if route not in ROUTES:
                raise ValueError(f"unknown route: {route}")

    def as_list(self) -> List[str]:
        return [str(c) for c in self.cells] + [self.lhs_route, self.rhs_route]


@dataclass
class Report:
    """
    The rows of one suite.

    Args:
        name: The suite name; also the stem of the written files.
        header: Column names of the cells, without the two route columns.
    """

    name: str
    header: Sequence[str]
    rows: List[ReportRow] = field(default_factory=list)
    notes: Dict[str, object] = field(default_factory=dict)

    def add(self, cells: Sequence[object], passed: bool, lhs_route: str, rhs_route: str) -> None:
        if len(cells) != len(self.header):
            raise ValueError(f"{self.name}: expected {len(self.header)} cells, got {len(cells)}")
        self.rows.append(ReportRow([str(c) for c in cells], lhs_route, rhs_route, bool(passed)))

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failures(self) -> List[ReportRow]:
        return [row for row in self.rows if not row.passed]

    def columns(self) -> List[str]:
        return list(self.header) + ["lhs route", "rhs route"]

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "rows": len(self.rows),
            "failed": len(self.failures()),
            "passed": self.passed,
            "notes": {k: str(v) for k, v in self.notes.items()},
        }

    def to_dict(self) -> dict:
        """The summary with every row keyed by column name."""
        return {**self.summary(), "rows": [dict(zip(self.columns(), r.as_list())) for r in self.rows]}

    def table(self, rows: Optional[Sequence[ReportRow]] = None) -> str:
        """``rows`` (all rows by default) as aligned text under the column names."""
        body = [row.as_list() for row in (self.rows if rows is None else rows)]
        table = [self.columns()] + body
        widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table)

    def diff_table(self, limit: int = 20) -> str:
        """The failed rows as aligned text, at most ``limit`` of them."""
        failures = self.failures()
        if not failures:
            return ""
        text = self.table(failures[:limit])
        if len(failures) > limit:
            text += f"\n... {len(failures) - limit} more"
        return text


def format_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns())
    for row in report.rows:
        writer.writerow(row.as_list())
    return buffer.getvalue()


def write_csv(report: Report, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(format_csv(report))
    logger.debug(f"wrote {len(report.rows)} rows to {path}")
    return path


def write_summary(reports: Sequence[Report], config: dict, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    data = {
        "config": config,
        "passed": all(r.passed for r in reports),
        "suites": [r.summary() for r in reports],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True, default=str)
        f.write("\n")
    return path


def write_reports(reports: Sequence[Report], config: dict, out_dir: Optional[str]) -> List[str]:
    """
    Write one CSV per report and a ``summary.json`` into ``out_dir``.

    Returns:
        The written paths; nothing is written when ``out_dir`` is None.
    """
    if out_dir is None:
        return []
    paths = [write_csv(r, os.path.join(out_dir, f"{r.name}.csv")) for r in reports]
    paths.append(write_summary(reports, config, os.path.join(out_dir, "summary.json")))
    return paths
