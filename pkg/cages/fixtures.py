"""Named reference graphs and the bundled graph6 fixtures"""

import logging
from functools import cache
from pathlib import Path
from typing import Sequence

from cages.errors import ParameterError
from cages.graphcore import Graph, graph6_decode

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"


def complete_graph(n: int) -> Graph:
    return Graph(n, ((a, b) for a in range(n) for b in range(a + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    """Left side 0..a-1, right side a..a+b-1"""
    return Graph(a + b, ((x, a + y) for x in range(a) for y in range(b)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def generalized_petersen(n: int, k: int) -> Graph:
    """Outer cycle 0..n-1, inner vertices n..2n-1 with i ~ i+k, spokes j ~ n+j"""
    g = Graph(2 * n)
    for j in range(n):
        g.add_edge(j, (j + 1) % n)
        g.add_edge(j, n + j)
        inner = n + (j + k) % n
        if not g.has_edge(n + j, inner):
            g.add_edge(n + j, inner)
    return g


def petersen_graph() -> Graph:
    return generalized_petersen(5, 2)


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    """Hamiltonian cubic graph from LCF notation [shifts]^repeats"""
    if len(shifts) * repeats != n:
        raise ParameterError(f"LCF {list(shifts)}^{repeats} does not describe {n} vertices")
    g = cycle_graph(n)
    for i in range(n):
        j = (i + shifts[i % len(shifts)]) % n
        if not g.has_edge(i, j):
            g.add_edge(i, j)
    return g


def heawood_graph() -> Graph:
    return lcf_graph(14, [5, -5], 7)


def mcgee_graph() -> Graph:
    return lcf_graph(24, [12, 7, -7], 8)


def tutte_coxeter_graph() -> Graph:
    return lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5)


def repeatable_block_example() -> tuple[Graph, tuple[int, ...]]:
    """
    Layered block repeatable for k=3, g=4 with layer sizes 2,1,1,2,2,1,1,2.

    Returns:
        (graph, source) where source is the first layer
    """
    edges = [
        (2, 0), (2, 1), (3, 2), (4, 3), (5, 3),
        (6, 4), (6, 5), (7, 5), (7, 4),
        (8, 6), (8, 7), (9, 8), (10, 9), (11, 9),
    ]  # fmt: skip
    return Graph(12, edges), (0, 1)


def spliceable_host_example() -> tuple[Graph, tuple[int, ...]]:
    """
    Cubic girth-4 host containing the repeatable block between two 4-cycle caps.

    Vertices 0..3 form the left cap, 4..15 the block (relabeled from
    repeatable_block_example), 16..19 the right cap. Returns the graph
    and the left cap as layering source; the block then spans layers 1..8.
    """
    block, _ = repeatable_block_example()
    g = cycle_graph(4)
    g, offset = g.disjoint_union(block)
    g, right = g.disjoint_union(cycle_graph(4))
    a0, a1 = offset, offset + 1
    h0, h1 = offset + 10, offset + 11
    for x, y in ((a0, 1), (a0, 3), (a1, 0), (a1, 2)):
        g.add_edge(x, y)
    for x, y in ((h0, right + 1), (h0, right + 3), (h1, right), (h1, right + 2)):
        g.add_edge(x, y)
    return g, (0, 1, 2, 3)


def nonbipartite_4_4_5_cage() -> Graph:
    """An 18-vertex 4-regular graph of girth 4 and diameter 5 with 5-cycles"""
    g = Graph(18)
    left, a_side, squares, b_side, right = range(0, 3), range(3, 7), range(7, 11), range(11, 15), range(15, 18)
    for x in left:
        for y in a_side:
            g.add_edge(x, y)
    for x in b_side:
        for y in right:
            g.add_edge(x, y)
    s1, s2, s3, s4 = squares
    for a, b in ((s2, s1), (s1, s3), (s3, s4), (s4, s2)):
        g.add_edge(a, b)
    for a, s in zip(a_side, (s1, s1, s2, s2)):
        g.add_edge(a, s)
    for b, s in zip(b_side, (s3, s3, s4, s4)):
        g.add_edge(b, s)
    return g


def reference_cage(k: int, g: int) -> Graph:
    """A small (k,g)-cage for the families with a closed construction; g=6 needs k-1 prime"""
    if g == 3:
        return complete_graph(k + 1)
    if g == 4:
        return complete_bipartite(k, k)
    cubic = {5: petersen_graph, 6: heawood_graph, 7: mcgee_graph, 8: tutte_coxeter_graph}
    if k == 3 and g in cubic:
        return cubic[g]()
    if g == 6 and k >= 3 and all((k - 1) % p for p in range(2, k - 1)):
        from cages.constructions import projective_plane_incidence

        return projective_plane_incidence(k - 1)
    raise ParameterError(f"No bundled ({k},{g})-cage")


@cache
def _bundled(name: str) -> str:
    return (DATA_DIR / f"{name}.g6").read_text(encoding="utf-8").strip()


def load_bundled(name: str) -> Graph:
    """Decode one of the graph6 fixtures shipped in cages/data"""
    try:
        return graph6_decode(_bundled(name))
    except FileNotFoundError:
        raise ParameterError(f"No bundled graph named {name!r}") from None


def bundled_names() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.g6"))
