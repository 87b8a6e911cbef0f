from fractions import Fraction

import pytest

from cages.bounds import exact_order_3_4, exact_order_3_5, exact_order_k_3_3
from cages.canon import are_isomorphic
from cages.constructions import (
    almost_regular_chain_ratio,
    build_3_4_extremal,
    build_3_5_extremal,
    build_k_3_3,
    chain_construction,
    projective_plane_incidence,
    ratio_bounds,
    shortest_cycles,
)
from cages.errors import ConstructionError, ParameterError, VerificationError
from cages.fixtures import complete_bipartite, complete_graph, heawood_graph, petersen_graph, reference_cage
from cages.graphcore import diameter, girth, is_kgd_graph
from cages.repeatable import RepeatableBlock


@pytest.mark.parametrize("k", range(3, 8))
def test_k_3_3(k):
    g = build_k_3_3(k)
    assert g.n == exact_order_k_3_3(k)
    assert is_kgd_graph(g, k, 3, 3)


@pytest.mark.parametrize("d", range(9, 41))
def test_extremal_3_4(d):
    g = build_3_4_extremal(d)
    assert g.n == exact_order_3_4(d)
    assert is_kgd_graph(g, 3, 4, d)


@pytest.mark.parametrize("d", range(5, 41))
def test_extremal_3_5(d):
    g = build_3_5_extremal(d)
    assert g.n == exact_order_3_5(d)
    assert is_kgd_graph(g, 3, 5, d)


def test_extremal_domains():
    with pytest.raises(ParameterError):
        build_3_4_extremal(8)
    with pytest.raises(ParameterError):
        build_3_5_extremal(4)


class TestChains:
    @pytest.mark.parametrize("r", range(1, 6))
    def test_cubic_chain(self, r):
        result = chain_construction(3, 4, r, complete_bipartite(3, 3), petersen_graph())
        assert result.copies == r
        assert set(result.graph.degrees()) == {3}
        assert girth(result.graph) == 4
        assert result.diameter == diameter(result.graph)
        assert result.diameter >= 4 * r

    def test_cubic_chain_grows(self):
        diameters = [
            chain_construction(3, 4, r, complete_bipartite(3, 3), petersen_graph()).diameter for r in (1, 2, 3)
        ]
        assert diameters == sorted(set(diameters))

    def test_quartic_chain(self):
        aux = projective_plane_incidence(3)
        results = [chain_construction(4, 4, r, complete_bipartite(4, 4), aux) for r in (1, 2, 3)]
        for result in results:
            assert set(result.graph.degrees()) == {4}
            assert girth(result.graph) == 4
        diameters = [result.diameter for result in results]
        assert diameters == sorted(set(diameters))

    @pytest.mark.parametrize("r", [1, 2])
    def test_sextic_chain(self, r):
        # K6,6 is the (6,4)-cage, PG(2,5) gives the (6,6)-cage
        result = chain_construction(6, 4, r, complete_bipartite(6, 6), projective_plane_incidence(5))
        assert set(result.graph.degrees()) == {6}
        assert girth(result.graph) == 4
        # r glued copies, the cage minus a vertex and a subdivided cage, two vertices shared
        assert result.graph.n == (12 * r + 1) + 61 + 13 - 2
        assert result.diameter >= 4 * r

    def test_cubic_girth_five_chain(self):
        result = chain_construction(3, 5, 2, petersen_graph(), heawood_graph())
        assert set(result.graph.degrees()) == {3}
        assert girth(result.graph) == 5

    def test_rejects_bad_input(self):
        with pytest.raises(ParameterError):
            chain_construction(3, 4, 0, complete_bipartite(3, 3), petersen_graph())
        with pytest.raises(ConstructionError):
            chain_construction(6, 4, 1, complete_bipartite(6, 6), complete_bipartite(6, 6))
        with pytest.raises(ConstructionError):
            chain_construction(3, 4, 1, petersen_graph(), petersen_graph())
        with pytest.raises(ConstructionError):
            chain_construction(3, 4, 1, complete_bipartite(3, 3), complete_bipartite(3, 3))


def test_almost_regular_chain_ratio():
    # K4,4 with one vertex split into two vertices of degree 2
    g = complete_bipartite(4, 4).remove_vertices([0])[0]
    v = g.add_vertices(1)
    w = g.add_vertices(1)
    for b in (3, 4):
        g.add_edge(v, b)
    for b in (5, 6):
        g.add_edge(w, b)
    assert almost_regular_chain_ratio(g, 4) == Fraction(2)
    with pytest.raises(ParameterError):
        almost_regular_chain_ratio(g, 3)
    with pytest.raises(ParameterError):
        almost_regular_chain_ratio(complete_bipartite(4, 4), 4)


class TestProjectivePlanes:
    def test_fano_plane_gives_heawood(self):
        assert are_isomorphic(projective_plane_incidence(2), heawood_graph())

    def test_order_three(self):
        g = projective_plane_incidence(3)
        assert g.n == 26
        assert set(g.degrees()) == {4}
        assert girth(g) == 6
        assert diameter(g) == 3

    def test_non_prime_rejected(self):
        with pytest.raises(ParameterError):
            projective_plane_incidence(4)

    def test_girth_six_reference_cages(self):
        g = reference_cage(6, 6)
        assert g.n == 62
        assert set(g.degrees()) == {6}
        assert girth(g) == 6
        with pytest.raises(ParameterError):
            reference_cage(5, 6)


@pytest.mark.parametrize(
    "builder, count",
    [(petersen_graph, 12), (lambda: complete_graph(4), 4), (lambda: complete_bipartite(3, 3), 9)],
)
def test_shortest_cycles(builder, count):
    g = builder()
    cycles = shortest_cycles(g)
    assert len(cycles) == count
    assert all(len(cycle) == girth(g) for cycle in cycles)


class TestRatioBounds:
    def test_lower_bound_only(self):
        bound = ratio_bounds(3, 5)
        assert bound.lower == Fraction(2)
        assert bound.upper is None

    def test_block_ratio_is_tight_for_girth_four(self, block_example):
        graph, source = block_example
        block = RepeatableBlock.from_source(graph, source, 3, 4)
        bound = ratio_bounds(3, 4, n_kg=6, block=block)
        assert bound.lower == bound.upper == Fraction(3, 2)

    def test_smallest_upper_bound_wins(self):
        bound = ratio_bounds(3, 6, n_kg=14, block_ratio=Fraction(5, 2))
        assert bound.upper == Fraction(7, 3)

    def test_inconsistent_bounds(self):
        with pytest.raises(VerificationError):
            ratio_bounds(3, 5, block_ratio=Fraction(1))
