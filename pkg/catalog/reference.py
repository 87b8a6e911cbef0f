"""Published girth-diameter cage values bundled with the package"""

import csv
from functools import cache
from pathlib import Path

from pydantic import BaseModel, Field

REFERENCE_TSV = Path(__file__).parent / "reference_tables.tsv"


class ReferenceRow(BaseModel):
    k: int = Field(description="Degree")
    g: int = Field(description="Girth")
    d: int = Field(description="Diameter")
    lower: int = Field(description="Published lower bound M(k;g,d)")
    order: int = Field(description="Published order n(k;g,d)")
    count: int = Field(description="Number of cages, or a lower bound on it")
    count_is_lower_bound: bool = Field(default=False, description="True when the search was not exhaustive")
    bipartite: bool | None = Field(default=None, description="All cages bipartite; blank for odd girth")


@cache
def reference_rows() -> tuple[ReferenceRow, ...]:
    with open(REFERENCE_TSV, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t")
        return tuple(
            ReferenceRow.model_validate({key: value or None for key, value in row.items()})
            for row in reader
        )


def reference_row(k: int, g: int, d: int) -> ReferenceRow | None:
    for row in reference_rows():
        if (row.k, row.g, row.d) == (k, g, d):
            return row
    return None


def agreement(k: int, g: int, d: int, order: int | None, count: int | None) -> str:
    """
    Compare a computed row with the published one.

    Returns:
        "match", "mismatch", "unpublished", or "unresolved" when there is
        nothing computed to compare
    """
    row = reference_row(k, g, d)
    if row is None:
        return "unpublished"
    if order is None:
        return "unresolved"
    if order != row.order:
        return "mismatch"
    if count is None:
        return "match"
    if row.count_is_lower_bound:
        return "match" if count >= row.count else "mismatch"
    return "match" if count == row.count else "mismatch"
