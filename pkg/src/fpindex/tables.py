"""Side-by-side browser comparison tables, as aligned text and CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .ranking import FingerprintabilityScore
from .rubric import APPLICABLE_KINDS
from .types import AttributeKind, PlatformClass, Rank, ValidationError

CORNER_LABEL = "Attribute / Browser"
TOTALS_LABEL = "Total attributes"
FI_LABEL = "Fingerprintability Index"


@dataclass(frozen=True)
class ComparisonTable:
    platform: PlatformClass
    attributes: tuple[AttributeKind, ...]
    browsers: tuple[str, ...]
    # cells[row][col] follows attributes x browsers
    cells: tuple[tuple[Rank, ...], ...]
    totals: tuple[int, ...]
    fi_totals: tuple[int, ...]


def compare_browsers(scores: list[FingerprintabilityScore]) -> ComparisonTable:
    """Arrange scores column-per-browser in input order; dash = not ranked."""
    if not scores:
        raise ValidationError("no scores to compare", field="scores")
    platform = scores[0].platform
    if any(s.platform is not platform for s in scores):
        raise ValidationError("scores mix desktop and mobile platforms", field="scores")
    attributes = APPLICABLE_KINDS[platform]
    cells = []
    for kind in attributes:
        row = []
        for s in scores:
            by_kind = {a.kind: a.rank for a in s.assessments}
            row.append(by_kind.get(kind, Rank.NONE))
        cells.append(tuple(row))
    return ComparisonTable(
        platform=platform,
        attributes=attributes,
        browsers=tuple(s.browser.browser_name for s in scores),
        cells=tuple(cells),
        totals=tuple(s.total_attributes for s in scores),
        fi_totals=tuple(s.fi_total for s in scores),
    )


def _rows(table: ComparisonTable) -> list[list[str]]:
    rows = [[CORNER_LABEL, *table.browsers]]
    for kind, rank_row in zip(table.attributes, table.cells):
        rows.append([kind.label, *(rank.cell for rank in rank_row)])
    rows.append([TOTALS_LABEL, *(str(t) for t in table.totals)])
    rows.append([FI_LABEL, *(str(t) for t in table.fi_totals)])
    return rows


def render_text(table: ComparisonTable) -> str:
    """Space-aligned table, one line per attribute row plus the two totals."""
    rows = _rows(table)
    widths = [max(len(row[col]) for row in rows) for col in range(len(rows[0]))]
    lines = []
    for row in rows:
        padded = [cell.ljust(width) for cell, width in zip(row, widths)]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(table: ComparisonTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in _rows(table):
        writer.writerow(row)
    return buf.getvalue()
