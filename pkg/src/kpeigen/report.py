"""Tabular reports and their text, csv and json renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields
from typing import Any, Sequence

__all__ = ["ComparisonRow", "Report", "render", "NOT_APPLICABLE", "SKIPPED", "FORMATS"]

NOT_APPLICABLE = "NOT_APPLICABLE"
SKIPPED = "SKIPPED"
FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class ComparisonRow:
    """One index of a solver/oracle/asymptotics comparison.

    ``total_bound`` is None when the bound is not applicable; ``bound_ok`` is
    then None as well (rendered SKIPPED).
    """

    n: int
    fixed_point: float
    oracle: float
    thm2: float
    sharp: float
    total_bound: float | None
    observed_err: float
    bound_ok: bool | None

    @classmethod
    def build(cls, n, fixed_point, oracle, thm2, sharp, total_bound):
        err = abs(oracle - fixed_point)
        ok = None if total_bound is None else bool(err <= total_bound)
        return cls(n, fixed_point, oracle, thm2, sharp, total_bound, err, ok)

    def as_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


COMPARISON_COLUMNS = tuple(f.name for f in fields(ComparisonRow))

# columns whose missing value means "skipped" rather than "not applicable"
_SKIP_COLUMNS = {"bound_ok"}


@dataclass
class Report:
    columns: tuple[str, ...]
    rows: list[dict[str, Any]]
    title: str = ""

    @classmethod
    def from_comparisons(cls, rows: Sequence[ComparisonRow], title: str = "") -> "Report":
        return cls(COMPARISON_COLUMNS, [r.as_dict() for r in rows], title)


def _missing(col: str) -> str:
    return SKIPPED if col in _SKIP_COLUMNS else NOT_APPLICABLE


def _cell_text(col, v) -> str:
    if v is None:
        return _missing(col)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            return repr(v)
        return f"{v:.12f}" if abs(v) < 1e6 else f"{v:.12e}"
    return str(v)


def _cell_csv(col, v) -> str:
    if v is None:
        return _missing(col)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _render_text(report: Report) -> str:
    cells = [[_cell_text(c, row.get(c)) for c in report.columns] for row in report.rows]
    widths = [len(c) for c in report.columns]
    for line in cells:
        widths = [max(w, len(x)) for w, x in zip(widths, line)]
    out = []
    if report.title:
        out.append(report.title)
    out.append("  ".join(c.rjust(w) for c, w in zip(report.columns, widths)))
    out.append("  ".join("-" * w for w in widths))
    for line in cells:
        out.append("  ".join(x.rjust(w) for x, w in zip(line, widths)))
    return "\n".join(out) + "\n"


def _render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell_csv(c, row.get(c)) for c in report.columns])
    return buf.getvalue()


def _render_json(report: Report) -> str:
    rows = [{c: row.get(c) for c in report.columns} for row in report.rows]
    return json.dumps(rows, indent=2, allow_nan=False) + "\n"


def render(report: Report, fmt: str = "text") -> bytes:
    if fmt == "text":
        out = _render_text(report)
    elif fmt == "csv":
        out = _render_csv(report)
    elif fmt == "json":
        out = _render_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    return out.encode("utf-8")
