"""Presentation artifacts: term-frequency rankings, aspect-by-month polarity
grids, sector-filtered record views, and delimited/SVG exports.

The SVG heatmap encodes positive=green, neutral=orange, negative=red and
leaves no-data positions blank, with month labels along the x axis.
"""
from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from .aspects import AspectMention, TermIndex, extract
from .corpus import MonthKey, TweetRecord
from .textprep import CleanText
from .trend import AspectMonthCell, CellKey
from .valence import Polarity

logger = logging.getLogger(__name__)

CELL_COLORS = {
    Polarity.POSITIVE: "#3aa35a",
    Polarity.NEUTRAL: "#f2a33c",
    Polarity.NEGATIVE: "#d23d3d",
}


@dataclass(frozen=True)
class SectorFilter:
    """A named sector defined by lowercase keyword phrases."""

    name: str
    keywords: tuple[str, ...]

    def __post_init__(self):
        if not self.keywords:
            raise ValueError(f"sector {self.name!r} has an empty keyword list")

    @classmethod
    def from_file(cls, path: str | Path) -> "SectorFilter":
        with Path(path).open(encoding="utf-8") as handle:
            raw = json.load(handle)
        return cls(name=raw["name"], keywords=tuple(raw["keywords"]))


@dataclass(frozen=True)
class GridCell:
    label: Polarity
    counts: Mapping[Polarity, int]


@dataclass(frozen=True)
class TimelineGrid:
    aspects: tuple[str, ...]
    months: tuple[MonthKey, ...]
    cells: Mapping[tuple[str, MonthKey], GridCell]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimelineGrid):
            return NotImplemented
        return (self.aspects == other.aspects and self.months == other.months
                and dict(self.cells) == dict(other.cells))


def top_terms(mentions: Iterable[AspectMention], k: int) -> list[tuple[str, int]]:
    """Terms ranked by record-level frequency, ties lexicographic."""
    if k < 1:
        raise ValueError("k must be at least 1")
    counts = Counter(m.term for m in mentions)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def build_grid(
    cells: Mapping[CellKey, AspectMonthCell],
    aspect_filter: Sequence[str] | None = None,
    month_range: tuple[MonthKey, MonthKey] | None = None,
) -> TimelineGrid:
    """Restrict cells to the requested aspects and month span.

    Missing positions stay unmapped ("no data"). An empty intersection is a
    warning, not an error.
    """
    present_terms = sorted({term for term, _ in cells})
    if aspect_filter is not None:
        aspects = tuple(dict.fromkeys(aspect_filter))
    else:
        aspects = tuple(present_terms)

    month_keys = sorted({month for _, month in cells
                         if isinstance(month, MonthKey)})
    if month_range is not None:
        months = tuple(MonthKey.range(month_range[0], month_range[1]))
    elif month_keys:
        months = tuple(MonthKey.range(month_keys[0], month_keys[-1]))
    else:
        months = ()

    wanted = set(aspects)
    span = set(months)
    grid_cells: dict[tuple[str, MonthKey], GridCell] = {}
    for (term, month), cell in cells.items():
        if term in wanted and month in span:
            grid_cells[(term, month)] = GridCell(label=cell.label, counts=dict(cell.counts))
    if not grid_cells:
        logger.warning("grid is empty: no cells match the requested aspects/months")
    return TimelineGrid(aspects=aspects, months=months, cells=grid_cells)


def sector_view(
    records: Iterable[tuple[TweetRecord, CleanText]],
    sector: SectorFilter,
) -> list[tuple[TweetRecord, CleanText]]:
    """Records whose matching view mentions at least one sector keyword."""
    index = TermIndex(sector.keywords, source_name=f"sector:{sector.name}")
    return [(record, clean) for record, clean in records
            if extract(clean, index, record.id)]


GRID_HEADER = ("term", "month", "label", "pos_count", "neg_count", "neu_count")


def export_grid_csv(grid: TimelineGrid, path: str | Path) -> None:
    """Delimited export covering every aspect-month position.

    No-data positions emit an empty label so the axes round-trip exactly.
    """
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(GRID_HEADER)
        for term in grid.aspects:
            for month in grid.months:
                cell = grid.cells.get((term, month))
                if cell is None:
                    writer.writerow([term, str(month), "", "", "", ""])
                else:
                    writer.writerow([
                        term, str(month), cell.label.value,
                        cell.counts.get(Polarity.POSITIVE, 0),
                        cell.counts.get(Polarity.NEGATIVE, 0),
                        cell.counts.get(Polarity.NEUTRAL, 0),
                    ])


def read_grid_csv(path: str | Path) -> TimelineGrid:
    aspects: dict[str, None] = {}
    months: dict[MonthKey, None] = {}
    cells: dict[tuple[str, MonthKey], GridCell] = {}
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            term = row["term"]
            month = MonthKey.parse(row["month"])
            aspects[term] = None
            months[month] = None
            if row["label"]:
                cells[(term, month)] = GridCell(
                    label=Polarity(row["label"]),
                    counts={
                        Polarity.POSITIVE: int(row["pos_count"]),
                        Polarity.NEGATIVE: int(row["neg_count"]),
                        Polarity.NEUTRAL: int(row["neu_count"]),
                    },
                )
    return TimelineGrid(aspects=tuple(aspects), months=tuple(sorted(months)),
                        cells=cells)


def export_grid_svg(grid: TimelineGrid, path: str | Path, *, cell_size: int = 14,
                    label_width: int = 170, label_height: int = 60) -> None:
    """Render the polarity heatmap as a standalone vector graphic."""
    cols = len(grid.months)
    rows = len(grid.aspects)
    width = label_width + cols * cell_size + 10
    height = label_height + rows * cell_size + 10
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<style>text{font-family:sans-serif;font-size:9px;fill:#333}</style>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for col, month in enumerate(grid.months):
        x = label_width + col * cell_size + cell_size / 2
        parts.append(
            f'<text x="{x}" y="{label_height - 6}" '
            f'transform="rotate(-60 {x} {label_height - 6})" '
            f'text-anchor="start">{escape(str(month))}</text>')
    for row, term in enumerate(grid.aspects):
        y = label_height + row * cell_size
        parts.append(
            f'<text x="{label_width - 6}" y="{y + cell_size - 4}" '
            f'text-anchor="end">{escape(term)}</text>')
        for col, month in enumerate(grid.months):
            cell = grid.cells.get((term, month))
            if cell is None:
                continue
            x = label_width + col * cell_size
            color = CELL_COLORS[cell.label]
            total = sum(cell.counts.values())
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell_size - 1}" height="{cell_size - 1}" '
                f'fill="{color}"><title>{escape(term)} {escape(str(month))}: '
                f'{cell.label.value}, n={total}</title></rect>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts), encoding="utf-8")


def export(grid: TimelineGrid, path: str | Path, fmt: str = "csv") -> None:
    """Write the grid in the requested format ("csv" or "svg")."""
    if fmt == "csv":
        export_grid_csv(grid, path)
    elif fmt == "svg":
        export_grid_svg(grid, path)
    else:
        raise ValueError(f"unknown export format: {fmt!r}")
