"""CSV emission for CPF curves and demo reports.

Floats are written with 17 significant digits so a round trip through
the file reproduces the doubles bit for bit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

CSV_HEADER = "family,argument,estimate,stderr,n,closed_form,lower_bound,upper_bound"


@dataclass(frozen=True)
class CsvRow:
    """One CPF curve sample; Monte Carlo and analytic columns are optional."""

    family: str
    argument: float
    estimate: Optional[float] = None
    stderr: Optional[float] = None
    n: Optional[int] = None
    closed_form: Optional[float] = None
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return format_float(v)


def rows_to_csv(rows: list[CsvRow]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        family = r.family
        if "," in family or '"' in family:
            family = '"' + family.replace('"', '""') + '"'
        cells = [
            family,
            format_float(r.argument),
            _cell(r.estimate),
            _cell(r.stderr),
            _cell(r.n),
            _cell(r.closed_form),
            _cell(r.lower_bound),
            _cell(r.upper_bound),
        ]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def write_csv(path: str, rows: list[CsvRow]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))
