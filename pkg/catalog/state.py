from typing import TypedDict


class TableState(TypedDict, total=False):
    """Shared state for the table reproduction pipeline"""

    # Table request
    k: int  # Degree
    g: int  # Girth
    d_values: list[int]  # Diameters, one table row each
    budget_seconds: float | None  # Search budget per row
    search: dict  # SearchOptions fields, kept plain for checkpointing
    catalog_dir: str  # Where records and graph6 files live
    use_catalog: bool  # Reuse resolved rows already in the catalog
    output_prefix: str | None  # Write <prefix>.csv and <prefix>.txt when set

    # Results per phase
    bounds: list[dict]  # BoundsReport dumps
    records: list[dict]  # CageRecord dumps, one per row

    # Workflow control
    current_phase: str  # Current pipeline phase
    completed_phases: list[str]  # Phases we've finished
    errors: list[str]  # Any errors encountered

    # Final output
    csv: str  # CSV rendering
    text: str  # Aligned text rendering
