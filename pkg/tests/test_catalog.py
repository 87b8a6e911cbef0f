import pydantic
import pytest

from cages.generator import generate_all
from cages.graphcore import read_graph6_file
from catalog.records import (
    CATALOG_FILE,
    CageRecord,
    append_record,
    check_graph_file,
    graph_file_name,
    latest_records,
    read_catalog,
    record_from_result,
    render_csv,
    render_text,
)
from catalog.reference import agreement, reference_row


def _resolved(**overrides) -> CageRecord:
    fields = dict(k=3, g=5, d=2, lower_bound=10, order=10, count=1, exhaustive=True, runtime_seconds=0.5)
    fields.update(overrides)
    return CageRecord(**fields)


class TestCatalogFile:
    def test_round_trip(self, catalog_dir):
        records = [_resolved(), CageRecord(k=3, g=6, d=12, lower_bound=38, runtime_seconds=600.0)]
        for record in records:
            append_record(catalog_dir, record)
        assert read_catalog(catalog_dir) == records
        lines = (catalog_dir / CATALOG_FILE).read_text(encoding="utf-8").splitlines()
        assert lines[0].split("\t")[:3] == ["k", "g", "d"]
        assert len(lines) == 3

    def test_missing_catalog(self, tmp_path):
        assert read_catalog(tmp_path / "nowhere") == []

    def test_resolved_line_wins(self):
        resolved = _resolved()
        unresolved = CageRecord(k=3, g=5, d=2, lower_bound=10)
        later = _resolved(runtime_seconds=0.1)
        assert latest_records([resolved, unresolved])[(3, 5, 2)] == resolved
        assert latest_records([unresolved, resolved, later])[(3, 5, 2)] == later

    def test_graph_file_name(self):
        assert graph_file_name(3, 5, 13, 34) == "cages_k3_g5_d13_n34.g6"

    def test_record_from_result(self, catalog_dir):
        result = generate_all(3, 5, 3, 12)
        record = record_from_result(catalog_dir, result, 3, 5, 3, 11, 1.23456)
        assert record.order == 12
        assert record.count == 2
        assert record.all_bipartite is False
        assert record.runtime_seconds == 1.235
        assert record.graph_file == graph_file_name(3, 5, 3, 12)
        assert read_graph6_file(catalog_dir / record.graph_file) == result.cages
        assert check_graph_file(catalog_dir, record)
        assert not check_graph_file(catalog_dir, record.model_copy(update={"count": 3}))

    def test_record_from_empty_result(self, catalog_dir):
        record = record_from_result(catalog_dir, None, 3, 6, 12, 38, 5.0)
        assert not record.resolved
        assert record.graph_file is None
        assert check_graph_file(catalog_dir, record)


class TestRecordValidation:
    def test_order_below_lower_bound(self):
        with pytest.raises(pydantic.ValidationError):
            _resolved(order=8)

    def test_resolved_row_needs_cages(self):
        with pytest.raises(pydantic.ValidationError):
            _resolved(count=0)


class TestRendering:
    def test_header_only(self):
        assert render_csv([]) == 'k,g,d,"M(k;g,d)","n(k;g,d)",cages,all_bipartite,runtime_s\n'

    def test_rows(self):
        records = [
            _resolved(),
            _resolved(g=6, d=3, lower_bound=14, order=14, all_bipartite=True),
            _resolved(g=6, d=6, lower_bound=28, order=28, count=2000, exhaustive=False, all_bipartite=True),
            CageRecord(k=3, g=6, d=12, lower_bound=38, runtime_seconds=600.0),
        ]
        lines = render_csv(records).splitlines()
        assert lines[1] == "3,5,2,10,10,1,,0.50"
        assert lines[2] == "3,6,3,14,14,1,Yes,0.50"
        assert lines[3] == "3,6,6,28,28,>=2000,Yes,0.50"
        assert lines[4] == "3,6,12,38,unresolved,unresolved,unresolved,600.00"

    def test_text_compares_with_published_values(self):
        text = render_text([_resolved(), _resolved(d=3, lower_bound=11, order=12, count=3)])
        lines = text.splitlines()
        assert lines[0].split()[-1] == "published"
        assert lines[2].split()[-1] == "match"
        assert lines[3].split()[-1] == "mismatch"


class TestReference:
    def test_reference_row(self):
        row = reference_row(3, 6, 6)
        assert (row.lower, row.order, row.count) == (28, 28, 3016)
        assert row.bipartite is True
        assert reference_row(3, 5, 5).bipartite is None
        assert reference_row(9, 9, 30) is None

    def test_agreement(self):
        assert agreement(3, 5, 13, 34, 4) == "match"
        assert agreement(3, 5, 13, 36, 4) == "mismatch"
        assert agreement(3, 5, 13, 34, None) == "match"
        assert agreement(3, 5, 13, None, None) == "unresolved"
        assert agreement(9, 9, 30, 100, 1) == "unpublished"

    def test_agreement_with_lower_bound_count(self):
        assert reference_row(3, 7, 7).count_is_lower_bound
        assert agreement(3, 7, 7, 44, 2) == "match"
