import pytest

from cages.canon import canonical_key
from cages.errors import CapacityError, ParameterError
from cages.fixtures import complete_bipartite, heawood_graph, path_graph, petersen_graph
from cages.generator import (
    SearchOptions,
    SearchState,
    choose_active_vertex,
    expected_start_tree_order,
    far_vertex_rule,
    feasibility_prune,
    find_cage,
    generate_all,
    key_text,
    make_start_tree,
    start_tree_order,
    valid_addable_edges,
)
from cages.graphcore import Graph, distances, girth, is_connected
from catalog.reference import reference_row


class TestStartTree:
    @pytest.mark.parametrize(
        "k, g, d",
        [(3, 4, 2), (3, 4, 5), (3, 5, 2), (3, 5, 5), (3, 5, 13), (3, 6, 3), (3, 6, 5), (3, 6, 9), (4, 4, 7), (4, 5, 4)],
    )
    def test_tree_shape(self, k, g, d):
        tree, u, v = make_start_tree(k, g, d)
        assert (u, v) == (0, d)
        assert is_connected(tree)
        assert tree.num_edges == tree.n - 1
        assert max(tree.degrees()) <= k
        assert distances(tree, u)[v] == d
        assert tree.n == expected_start_tree_order(k, g, d)

    @pytest.mark.parametrize("k, g, d, order", [(3, 4, 2, 6), (3, 5, 2, 10), (3, 5, 5, 20), (3, 6, 3, 14)])
    def test_known_orders(self, k, g, d, order):
        assert start_tree_order(k, g, d) == order

    def test_fallback_tree_is_smaller(self):
        assert start_tree_order(3, 5, 13, fallback=True) < start_tree_order(3, 5, 13)

    def test_rejects_short_diameter(self):
        with pytest.raises(ParameterError):
            make_start_tree(3, 6, 2)


class TestSearchState:
    def test_addable_edges_respect_constraints(self):
        tree, u, v = make_start_tree(3, 5, 2)
        state = SearchState.from_graph(tree, 3, 5, 2, u, v)
        pairs = valid_addable_edges(state)
        assert pairs == sorted(pairs)
        assert [tuple(p) for p in state.e_add.tolist()] == pairs
        dist = [distances(tree, a) for a in range(tree.n)]
        for a, b in pairs:
            assert dist[a][b] >= 4
            assert tree.degree(a) < 3 and tree.degree(b) < 3

    def test_child_state_updates_distances(self):
        tree, u, v = make_start_tree(3, 5, 2)
        state = SearchState.from_graph(tree, 3, 5, 2, u, v)
        a, b = state.e_add[0].tolist()
        child = state.with_edge(a, b, state.e_add[:0])
        assert child.graph.has_edge(a, b)
        assert child.dist[a, b] == 1
        assert child.depth == 1
        assert (a, b) not in {tuple(p) for p in child.e_add.tolist()}
        assert len(child.e_add) < len(state.e_add)

    def test_active_vertex_has_fewest_options(self):
        tree, u, v = make_start_tree(3, 4, 2)
        state = SearchState.from_graph(tree, 3, 4, 2, u, v)
        x = choose_active_vertex(state)
        counts = state.addable_counts()
        deficient = [w for w in range(tree.n) if state.degrees[w] < 3]
        assert x in deficient
        assert counts[x] == min(counts[w] for w in deficient)

    def test_feasibility_prune(self):
        g = Graph(4, [(0, 1), (2, 3)])
        state = SearchState.from_graph(g, 4, 3, 1, 0, 1)
        # each vertex needs three more neighbours but has only two candidates
        assert feasibility_prune(state)

    def test_far_vertex_rule(self):
        state = SearchState.from_graph(path_graph(5), 3, 3, 2, 0, 4)
        assert not far_vertex_rule(2)(state)
        assert far_vertex_rule(3)(state)
        assert far_vertex_rule(3).__name__ == "far_vertex_3"


@pytest.mark.parametrize(
    "k, g, d, n, count",
    [
        (3, 4, 2, 6, 1),
        (3, 4, 3, 8, 1),
        (3, 5, 2, 10, 1),
        (3, 5, 3, 12, 2),
        (3, 4, 4, 12, 4),
        (3, 6, 3, 14, 1),
        (4, 4, 2, 8, 1),
        (3, 3, 1, 4, 1),
    ],
)
def test_small_counts(k, g, d, n, count):
    result = generate_all(k, g, d, n)
    assert result.exhaustive
    assert result.count == count
    for cage in result.cages:
        assert cage.degrees() == [k] * n
        assert girth(cage) == g


def test_known_cages_found():
    assert [key_text(c) for c in generate_all(3, 5, 2, 10).cages] == [key_text(petersen_graph())]
    assert [key_text(c) for c in generate_all(3, 6, 3, 14).cages] == [key_text(heawood_graph())]
    result = generate_all(3, 4, 2, 6)
    assert [key_text(c) for c in result.cages] == [key_text(complete_bipartite(3, 3))]
    assert result.all_bipartite


def test_results_sorted_and_distinct():
    result = generate_all(3, 4, 4, 12)
    keys = [canonical_key(c) for c in result.cages]
    assert keys == sorted(set(keys))


def test_empty_orders():
    # n = 12 is the lower bound for (3;4,5) but the cages have 14 vertices
    result = generate_all(3, 4, 5, 12)
    assert result.exhaustive and result.count == 0
    assert result.all_bipartite is None
    assert generate_all(3, 5, 3, 12).all_bipartite is False


INSTANCES = [(3, 4, 4, 12), (3, 5, 3, 12), (3, 6, 3, 14), (4, 4, 2, 8), (3, 4, 3, 8)]


@pytest.mark.parametrize("instance", INSTANCES, ids=lambda t: "-".join(map(str, t)))
@pytest.mark.parametrize(
    "options",
    [
        SearchOptions(use_memo=False),
        SearchOptions(use_prune=False),
        SearchOptions(fallback_tree=True),
        SearchOptions(memo_cap=0),
        SearchOptions(extra_rules=(far_vertex_rule(2),)),
    ],
    ids=["no-memo", "no-prune", "fallback", "memo-capped", "far-vertex"],
)
def test_options_do_not_change_the_answer(instance, options):
    baseline = [key_text(c) for c in generate_all(*instance).cages]
    assert [key_text(c) for c in generate_all(*instance, options).cages] == baseline


@pytest.mark.parametrize("instance", [(3, 5, 3, 12), (3, 4, 4, 12), (3, 6, 3, 14)], ids=lambda t: "-".join(map(str, t)))
@pytest.mark.parametrize("workers, split_depth", [(2, 2), (3, 1), (4, 3)])
def test_parallel_matches_serial(instance, workers, split_depth):
    serial = generate_all(*instance)
    parallel = generate_all(*instance, SearchOptions(workers=workers, split_depth=split_depth))
    assert parallel.exhaustive
    assert [key_text(c) for c in parallel.cages] == [key_text(c) for c in serial.cages]
    # worker seen-sets are counted too, and they are never smaller than one shared set
    assert parallel.stats.memo_size >= serial.stats.memo_size > 0


def test_observer_sees_diametral_pair():
    seen = []

    def observer(state):
        assert state.dist[state.u, state.v] == state.d
        seen.append(state.depth)

    generate_all(3, 4, 3, 8, observer=observer)
    assert seen and seen[0] == 0


def test_memo_hits_recorded():
    result = generate_all(3, 4, 4, 12)
    assert result.stats.nodes > 0
    assert result.stats.memo_hits >= 0
    assert result.stats.wall_time >= 0


def test_budget_exhaustion():
    result = generate_all(3, 5, 5, 20, budget_seconds=0)
    assert not result.exhaustive
    assert result.diagnostic == "budget exhausted"


class TestRequests:
    def test_odd_degree_sum(self):
        result = generate_all(3, 5, 2, 11)
        assert result.count == 0
        assert result.exhaustive
        assert "odd" in result.diagnostic

    def test_below_lower_bound(self):
        result = generate_all(3, 5, 2, 8)
        assert result.count == 0
        assert "below the lower bound" in result.diagnostic

    def test_invalid_triple(self):
        with pytest.raises(ParameterError):
            generate_all(3, 6, 2, 14)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            generate_all(3, 5, 2, 10_000)


class TestFindCage:
    def test_petersen(self):
        n, result = find_cage(3, 5, 2)
        assert n == 10
        assert result.count == 1

    def test_skips_empty_orders(self):
        n, result = find_cage(3, 4, 5)
        assert n == 14
        assert result.count == 4

    def test_limit_below_bound(self):
        assert find_cage(3, 5, 2, n_max=9) == (None, None)


@pytest.mark.slow
@pytest.mark.parametrize(
    "k, g, d, n, count",
    [
        (3, 4, 5, 14, 4),
        (3, 4, 6, 16, 7),
        (3, 4, 7, 18, 20),
        (3, 4, 8, 20, 38),
        (3, 5, 4, 14, 2),
        (3, 5, 5, 20, 470),
        (3, 5, 6, 22, 6),
        (3, 6, 4, 16, 1),
        (3, 6, 5, 20, 6),
        (4, 4, 3, 10, 1),
        (4, 4, 4, 16, 102),
        (4, 5, 3, 19, 1),
        (4, 5, 4, 22, 4),
    ],
)
def test_published_rows(k, g, d, n, count):
    n_found, result = find_cage(k, g, d)
    assert n_found == n
    assert result.count == count
    published = reference_row(k, g, d)
    assert (published.order, published.count) == (n, count)
    if published.bipartite is not None:
        assert result.all_bipartite == published.bipartite
    if g % 2:
        assert result.all_bipartite is False
