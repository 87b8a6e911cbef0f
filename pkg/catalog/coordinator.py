import logging
import time
from pathlib import Path

from langgraph.graph import END, START, StateGraph
from langgraph.types import Command

from cages.bounds import BoundsReport, bounds_report
from cages.errors import CageError
from cages.generator import SearchOptions, find_cage
from cages.graphcore import is_kgd_graph, read_graph6_file
from catalog.records import (
    CageRecord,
    append_record,
    check_graph_file,
    latest_records,
    read_catalog,
    record_from_result,
    render_csv,
    render_text,
)
from catalog.state import TableState

logger = logging.getLogger(__name__)


def thread_id(k: int, g: int) -> str:
    return f"table-k{k}-g{g}"


def create_table_pipeline(checkpointer=None):
    """
    Create the table reproduction pipeline.

    The supervisor walks the rows through bounds -> search -> verify -> render.
    A failing row is recorded in `errors` and left unresolved; the table is
    always rendered.
    """

    # ==================== NODES ====================

    def supervisor_node(state: TableState) -> Command:
        """Route to the next phase based on current progress"""
        completed = state.get("completed_phases", [])

        logger.info(f"Supervisor: completed phases = {completed}")

        if "bounds" not in completed:
            return Command(goto="bounds_node", update={"current_phase": "bounds"})
        elif "search" not in completed:
            return Command(goto="search_node", update={"current_phase": "search"})
        elif "verify" not in completed:
            if state.get("records"):
                return Command(goto="verify_node", update={"current_phase": "verify"})
            return Command(
                goto="render_node",
                update={"current_phase": "render", "completed_phases": completed + ["verify"]},
            )
        else:
            return Command(goto="render_node", update={"current_phase": "render"})

    def bounds_node(state: TableState) -> dict:
        """Lower bounds and closed-form values for every requested row"""
        k, g = state["k"], state["g"]
        reports, errors = [], []
        for d in state.get("d_values", []):
            try:
                reports.append(bounds_report(k, g, d).model_dump())
            except CageError as e:
                logger.error(f"Bounds failed for ({k};{g},{d}): {e}")
                errors.append(f"Bounds error ({k};{g},{d}): {e}")
        return {
            "bounds": reports,
            "errors": state.get("errors", []) + errors,
            "completed_phases": state.get("completed_phases", []) + ["bounds"],
        }

    def search_node(state: TableState) -> dict:
        """Find each cage order, reusing resolved catalog rows"""
        catalog_dir = state["catalog_dir"]
        known = latest_records(read_catalog(catalog_dir)) if state.get("use_catalog", True) else {}
        options = SearchOptions(**state.get("search", {}))
        records, errors = [], []

        for raw in state.get("bounds", []):
            report = BoundsReport.model_validate(raw)
            key = (report.k, report.g, report.d)
            if key in known and known[key].resolved:
                logger.info(f"({report.k};{report.g},{report.d}) loaded from catalog")
                records.append(known[key].model_dump())
                continue

            started = time.time()
            try:
                _, result = find_cage(
                    report.k, report.g, report.d, options=options, budget_seconds=state.get("budget_seconds")
                )
                record = record_from_result(
                    catalog_dir, result, report.k, report.g, report.d, report.combined, time.time() - started
                )
                if not record.resolved:
                    logger.warning(f"({report.k};{report.g},{report.d}) unresolved")
                append_record(catalog_dir, record)
            except CageError as e:
                logger.error(f"Search failed for ({report.k};{report.g},{report.d}): {e}")
                errors.append(f"Search error ({report.k};{report.g},{report.d}): {e}")
                record = CageRecord(
                    k=report.k,
                    g=report.g,
                    d=report.d,
                    lower_bound=report.combined,
                    runtime_seconds=round(time.time() - started, 3),
                )
            records.append(record.model_dump())

        return {
            "records": records,
            "errors": state.get("errors", []) + errors,
            "completed_phases": state.get("completed_phases", []) + ["search"],
        }

    def verify_node(state: TableState) -> dict:
        """Re-check stored graphs; a row that fails is downgraded to unresolved"""
        catalog_dir = state["catalog_dir"]
        records, errors = [], []

        for raw in state.get("records", []):
            record = CageRecord.model_validate(raw)
            if record.resolved:
                try:
                    graphs = read_graph6_file(Path(catalog_dir) / record.graph_file)
                    ok = check_graph_file(catalog_dir, record) and all(
                        g.n == record.order and is_kgd_graph(g, record.k, record.g, record.d) for g in graphs
                    )
                except (CageError, OSError, TypeError) as e:
                    logger.error(f"Could not read graphs for ({record.k};{record.g},{record.d}): {e}")
                    ok = False
                if not ok:
                    errors.append(f"Verify error ({record.k};{record.g},{record.d}): stored graphs do not check out")
                    record = CageRecord(
                        k=record.k,
                        g=record.g,
                        d=record.d,
                        lower_bound=record.lower_bound,
                        runtime_seconds=record.runtime_seconds,
                    )
            records.append(record.model_dump())

        return {
            "records": records,
            "errors": state.get("errors", []) + errors,
            "completed_phases": state.get("completed_phases", []) + ["verify"],
        }

    def render_node(state: TableState) -> dict:
        """Render the CSV and aligned-text tables"""
        logger.info("Rendering table")

        records = sorted(
            (CageRecord.model_validate(raw) for raw in state.get("records", [])), key=lambda r: r.d
        )
        csv_text = render_csv(records)
        text = render_text(records)

        prefix = state.get("output_prefix")
        if prefix:
            Path(prefix).parent.mkdir(parents=True, exist_ok=True)
            for suffix, body in ((".csv", csv_text), (".txt", text)):
                with open(f"{prefix}{suffix}", "w", encoding="utf-8", newline="") as f:
                    f.write(body)

        return {"csv": csv_text, "text": text}

    # ==================== BUILD GRAPH ====================

    builder = StateGraph(TableState)

    # Add nodes
    builder.add_node("supervisor", supervisor_node)
    builder.add_node("bounds_node", bounds_node)
    builder.add_node("search_node", search_node)
    builder.add_node("verify_node", verify_node)
    builder.add_node("render_node", render_node)

    # Define edges
    builder.add_edge(START, "supervisor")
    builder.add_edge("bounds_node", "supervisor")
    builder.add_edge("search_node", "supervisor")
    builder.add_edge("verify_node", "supervisor")
    builder.add_edge("render_node", END)

    # Compile with optional checkpointer
    if checkpointer:
        return builder.compile(checkpointer=checkpointer)
    return builder.compile()


def initial_table_state(
    k: int,
    g: int,
    d_values: list[int],
    catalog_dir: str,
    budget_seconds: float | None = None,
    search: dict | None = None,
    use_catalog: bool = True,
    output_prefix: str | None = None,
) -> TableState:
    return {
        "k": k,
        "g": g,
        "d_values": list(d_values),
        "budget_seconds": budget_seconds,
        "search": search or {},
        "catalog_dir": catalog_dir,
        "use_catalog": use_catalog,
        "output_prefix": output_prefix,
        "bounds": [],
        "records": [],
        "current_phase": "start",
        "completed_phases": [],
        "errors": [],
        "csv": "",
        "text": "",
    }
