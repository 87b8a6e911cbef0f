"""Cage table catalog: published values, stored results and the table pipeline"""

from catalog.state import TableState
from catalog.reference import ReferenceRow, agreement, reference_row, reference_rows
from catalog.records import CageRecord, append_record, latest_records, read_catalog, render_csv, render_text
from catalog.coordinator import create_table_pipeline, initial_table_state
from catalog.fetch import ReferenceGraphClient, fetch_reference_graph

__all__ = [
    "TableState",
    "ReferenceRow",
    "agreement",
    "reference_row",
    "reference_rows",
    "CageRecord",
    "append_record",
    "latest_records",
    "read_catalog",
    "render_csv",
    "render_text",
    "create_table_pipeline",
    "initial_table_state",
    "ReferenceGraphClient",
    "fetch_reference_graph",
]
