import pytest

from cages.canon import canonical_key
from cages.errors import ParameterError
from cages.fixtures import complete_bipartite, petersen_graph
from cages.graphcore import is_connected
from cages.oracle import brute_force_regular, cross_validate, oracle_report


@pytest.mark.parametrize("k, n, count", [(3, 4, 1), (3, 6, 2), (3, 8, 5), (4, 5, 1), (4, 6, 1), (4, 7, 2), (4, 8, 6)])
def test_connected_regular_counts(k, n, count):
    graphs = brute_force_regular(n, k)
    assert len(graphs) == count
    for g in graphs:
        assert set(g.degrees()) == {k}
        assert is_connected(g)


@pytest.mark.slow
def test_cubic_order_ten():
    assert len(brute_force_regular(10, 3)) == 19


def test_graphs_are_canonical_and_sorted():
    graphs = brute_force_regular(8, 3)
    keys = [canonical_key(g) for g in graphs]
    assert keys == sorted(set(keys))


def test_too_small_for_any_graph():
    assert brute_force_regular(2, 3) == []


def test_rejects_odd_degree_sum():
    with pytest.raises(ParameterError):
        brute_force_regular(7, 3)


def test_ceiling():
    with pytest.raises(ParameterError):
        brute_force_regular(14, 3)
    with pytest.raises(ParameterError):
        brute_force_regular(8, 3, ceiling=6)


def test_report_buckets():
    report = oracle_report(3, 6)
    assert set(report.graphs_by_gd) == {(3, 2), (4, 2)}
    assert report.graphs_by_gd[(4, 2)] == [canonical_key(complete_bipartite(3, 3)).decode("ascii")]
    assert report.total == 2


@pytest.mark.slow
def test_report_finds_petersen():
    report = oracle_report(3, 10)
    assert report.graphs_by_gd[(5, 2)] == [canonical_key(petersen_graph()).decode("ascii")]


def test_cross_validation_agrees():
    report = cross_validate(3, 8)
    assert report.agreed, report.mismatches
    assert report.graphs_compared == 1 + 2 + 5
    assert report.buckets_checked > 0


def test_cross_validation_quartic():
    report = cross_validate(4, 7, g_range=(3, 4), d_max=3)
    assert report.agreed, report.mismatches


@pytest.mark.slow
def test_cross_validation_cubic_ten():
    assert cross_validate(3, 10).agreed
