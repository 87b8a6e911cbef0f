"""
Persistent results catalog and table rendering.

The catalog is a tab-separated file with a header line, one CageRecord per
line, appended to by a single process. Graphs live next to it in graph6
files named after the triple and the order.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Iterable

from pydantic import BaseModel, Field, model_validator

from cages.generator import GenerationResult
from cages.graphcore import read_graph6_file, write_graph6_file
from catalog.reference import agreement

logger = logging.getLogger(__name__)

CATALOG_FILE = "catalog.tsv"
UNRESOLVED = "unresolved"


class CageRecord(BaseModel):
    """One computed table row"""

    k: int = Field(description="Degree")
    g: int = Field(description="Girth")
    d: int = Field(description="Diameter")
    lower_bound: int = Field(description="M(k;g,d)")
    order: int | None = Field(default=None, description="n(k;g,d), absent when unresolved")
    count: int | None = Field(default=None, description="Number of cages found at that order")
    exhaustive: bool = Field(default=False, description="Whether the search at that order completed")
    all_bipartite: bool | None = Field(default=None, description="Whether every cage found is bipartite")
    runtime_seconds: float = Field(default=0.0, description="Wall time spent on the row")
    graph_file: str | None = Field(default=None, description="graph6 file relative to the catalog directory")

    @model_validator(mode="after")
    def _check_consistency(self) -> "CageRecord":
        if self.order is not None:
            if self.order < self.lower_bound:
                raise ValueError(f"order {self.order} below lower bound {self.lower_bound}")
            if self.count is None or self.count < 1:
                raise ValueError("a resolved row needs at least one cage")
        return self

    @property
    def resolved(self) -> bool:
        return self.order is not None


COLUMNS = list(CageRecord.model_fields)


def graph_file_name(k: int, g: int, d: int, n: int) -> str:
    return f"cages_k{k}_g{g}_d{d}_n{n}.g6"


def _encode(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def append_record(catalog_dir: str | Path, record: CageRecord) -> Path:
    """Append one record to the catalog, writing the header on first use"""
    path = Path(catalog_dir) / CATALOG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists() or path.stat().st_size == 0
    with open(path, "a", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        if fresh:
            writer.writerow(COLUMNS)
        writer.writerow([_encode(getattr(record, column)) for column in COLUMNS])
    return path


def read_catalog(catalog_dir: str | Path) -> list[CageRecord]:
    path = Path(catalog_dir) / CATALOG_FILE
    if not path.exists():
        return []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t")
        return [CageRecord.model_validate({key: value or None for key, value in row.items()}) for row in reader]


def latest_records(records: Iterable[CageRecord]) -> dict[tuple[int, int, int], CageRecord]:
    """Later lines win; an unresolved line never replaces a resolved one"""
    latest: dict[tuple[int, int, int], CageRecord] = {}
    for record in records:
        key = (record.k, record.g, record.d)
        if record.resolved or key not in latest or not latest[key].resolved:
            latest[key] = record
    return latest


def record_from_result(
    catalog_dir: str | Path, result: GenerationResult | None, k: int, g: int, d: int, lower: int, runtime: float
) -> CageRecord:
    """Store the cages of a search result and build the matching record"""
    if result is None or not result.cages:
        return CageRecord(
            k=k, g=g, d=d, lower_bound=lower, exhaustive=bool(result and result.exhaustive), runtime_seconds=runtime
        )
    name = graph_file_name(k, g, d, result.order)
    written = write_graph6_file(Path(catalog_dir) / name, result.cages)
    logger.info(f"Wrote {written} graphs to {name}")
    return CageRecord(
        k=k,
        g=g,
        d=d,
        lower_bound=lower,
        order=result.order,
        count=result.count,
        exhaustive=result.exhaustive,
        all_bipartite=result.all_bipartite,
        runtime_seconds=round(runtime, 3),
        graph_file=name,
    )


def check_graph_file(catalog_dir: str | Path, record: CageRecord) -> bool:
    """An exhaustive record's graph file holds exactly `count` graphs"""
    if not record.graph_file:
        return not record.resolved
    graphs = read_graph6_file(Path(catalog_dir) / record.graph_file)
    if record.exhaustive:
        return len(graphs) == record.count
    return len(graphs) >= 1


# ==================== RENDERING ====================

TABLE_HEADER = ["k", "g", "d", "M(k;g,d)", "n(k;g,d)", "cages", "all_bipartite", "runtime_s"]


def _table_cells(record: CageRecord) -> list[str]:
    if not record.resolved:
        order = count = bipartite = UNRESOLVED
    else:
        order = str(record.order)
        count = str(record.count) if record.exhaustive else f">={record.count}"
        bipartite = "" if record.all_bipartite is None else ("Yes" if record.all_bipartite else "No")
        if record.g % 2:
            bipartite = ""
    return [
        str(record.k),
        str(record.g),
        str(record.d),
        str(record.lower_bound),
        order,
        count,
        bipartite,
        f"{record.runtime_seconds:.2f}",
    ]


def render_csv(records: Iterable[CageRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for record in records:
        writer.writerow(_table_cells(record))
    return buffer.getvalue()


def render_text(records: Iterable[CageRecord]) -> str:
    """Aligned table with a trailing column comparing each row to the published value"""
    header = TABLE_HEADER + ["published"]
    rows = []
    for record in records:
        status = agreement(record.k, record.g, record.d, record.order, record.count if record.exhaustive else None)
        rows.append(_table_cells(record) + [status])
    widths = [max([len(header[i])] + [len(row[i]) for row in rows]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(header, widths))]
    lines.append("  ".join("-" * width for width in widths))
    for row in rows:
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(row, widths)))
    return "\n".join(lines) + "\n"
