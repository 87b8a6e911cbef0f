from langgraph.checkpoint.memory import MemorySaver

from cages.fixtures import petersen_graph
from cages.graphcore import write_graph6_file
from catalog.coordinator import create_table_pipeline, initial_table_state, thread_id
from catalog.records import CATALOG_FILE, CageRecord, append_record, read_catalog


def _run(catalog_dir, d_values, **kwargs):
    pipeline = create_table_pipeline()
    return pipeline.invoke(initial_table_state(3, 4, d_values, str(catalog_dir), **kwargs))


def test_pipeline_resolves_small_rows(catalog_dir):
    state = _run(catalog_dir, [2, 3])
    assert state["completed_phases"] == ["bounds", "search", "verify"]
    assert not state["errors"]
    assert [(r["d"], r["order"], r["count"]) for r in state["records"]] == [(2, 6, 1), (3, 8, 1)]
    lines = state["csv"].splitlines()
    assert lines[1].startswith("3,4,2,6,6,1,Yes,")
    assert "match" in state["text"]
    assert len(read_catalog(catalog_dir)) == 2


def test_catalog_rows_are_reused(catalog_dir):
    _run(catalog_dir, [2])
    state = _run(catalog_dir, [2])
    assert state["records"][0]["order"] == 6
    assert len(read_catalog(catalog_dir)) == 1


def test_catalog_can_be_ignored(catalog_dir):
    _run(catalog_dir, [2])
    _run(catalog_dir, [2], use_catalog=False)
    assert len(read_catalog(catalog_dir)) == 2


def test_empty_range_renders_header(catalog_dir):
    state = _run(catalog_dir, [])
    assert state["records"] == []
    assert state["csv"] == 'k,g,d,"M(k;g,d)","n(k;g,d)",cages,all_bipartite,runtime_s\n'
    assert not (catalog_dir / CATALOG_FILE).exists()


def test_invalid_row_is_reported(catalog_dir):
    state = _run(catalog_dir, [1, 2])
    assert len(state["errors"]) == 1
    assert "(3;4,1)" in state["errors"][0]
    assert [r["d"] for r in state["records"]] == [2]


def test_bad_stored_graphs_are_downgraded(catalog_dir):
    write_graph6_file(catalog_dir / "bogus.g6", [petersen_graph()])
    append_record(
        catalog_dir,
        CageRecord(k=3, g=4, d=2, lower_bound=6, order=10, count=1, exhaustive=True, graph_file="bogus.g6"),
    )
    state = _run(catalog_dir, [2])
    assert state["records"][0]["order"] is None
    assert any(error.startswith("Verify error (3;4,2)") for error in state["errors"])
    assert "unresolved" in state["csv"]


def test_output_files(catalog_dir, tmp_path):
    prefix = tmp_path / "tables" / "k3_g4"
    state = _run(catalog_dir, [2], output_prefix=str(prefix))
    assert (tmp_path / "tables" / "k3_g4.csv").read_text(encoding="utf-8") == state["csv"]
    assert (tmp_path / "tables" / "k3_g4.txt").read_text(encoding="utf-8") == state["text"]


def test_checkpointed_run(catalog_dir):
    pipeline = create_table_pipeline(checkpointer=MemorySaver())
    run_config = {"configurable": {"thread_id": thread_id(3, 4)}}
    state = pipeline.invoke(initial_table_state(3, 4, [2], str(catalog_dir)), run_config)
    assert state["records"][0]["order"] == 6
    snapshot = pipeline.get_state(run_config)
    assert snapshot.values["csv"] == state["csv"]
    assert thread_id(3, 4) == "table-k3-g4"
