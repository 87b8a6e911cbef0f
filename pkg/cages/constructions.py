import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from pydantic import BaseModel, ConfigDict, Field

from cages.bounds import exact_order_3_4, exact_order_3_5, exact_order_k_3_3, moore
from cages.errors import ConstructionError, ParameterError, VerificationError
from cages.graphcore import Graph, diameter, distances, girth, is_kgd_graph, iter_bits
from cages.repeatable import RepeatableBlock, repeatable_ratio

logger = logging.getLogger(__name__)


class _Assembler:
    """Glue graphs together, identifying vertices as needed"""

    def __init__(self):
        self.graph = Graph()
        self.dead: set[int] = set()

    def add(self, piece: Graph) -> int:
        self.graph, offset = self.graph.disjoint_union(piece)
        return offset

    def connect(self, a: int, b: int) -> None:
        self.graph.add_edge(a, b)

    def identify(self, keep: int, drop: int) -> None:
        for w in self.graph.neighbors(drop):
            self.graph.remove_edge(drop, w)
            self.graph.add_edge(keep, w)
        self.dead.add(drop)

    def delete(self, v: int) -> None:
        for w in self.graph.neighbors(v):
            self.graph.remove_edge(v, w)
        self.dead.add(v)

    def finish(self) -> Graph:
        return self.graph.remove_vertices(self.dead)[0]


def _verify(graph: Graph, k: int, g: int, d: int, what: str) -> Graph:
    if not is_kgd_graph(graph, k, g, d):
        raise VerificationError(
            f"{what}: got n={graph.n}, girth {girth(graph)}, diameter {diameter(graph)}, "
            f"degrees {sorted(set(graph.degrees()))}; expected ({k};{g},{d})"
        )
    return graph


# ==================== SHORTEST CYCLES ====================


def shortest_cycles(graph: Graph) -> list[frozenset[int]]:
    """Vertex sets of all shortest cycles"""
    length = girth(graph)
    if length == float("inf"):
        return []
    cycles: set[frozenset[int]] = set()

    def extend(path: list[int]) -> None:
        last = path[-1]
        if len(path) == length:
            if graph.has_edge(last, path[0]):
                cycles.add(frozenset(path))
            return
        for w in iter_bits(graph.row(last)):
            if w > path[0] and w not in path:
                extend(path + [w])

    for start in range(graph.n):
        extend([start])
    return sorted(cycles, key=sorted)


def _avoids_a_shortest_cycle(vertices: Iterable[int], cycles: list[frozenset[int]]) -> bool:
    touched = set(vertices)
    return any(not cycle & touched for cycle in cycles)


# ==================== CHAINS ====================


@dataclass
class ChainResult:
    graph: Graph
    diameter: float
    copies: int


def _odd_chain(k: int, g: int, r: int, cage: Graph, aux: Graph) -> Graph:
    cycles = shortest_cycles(cage)
    removable = next((e for e in cage.edges() if _avoids_a_shortest_cycle(e, cycles)), None)
    if removable is None:
        raise ConstructionError("No edge of the cage avoids a shortest cycle")
    piece = cage.copy()
    piece.remove_edge(*removable)
    v, w = removable

    x = 0
    nbrs = aux.neighbors(x)
    head, y = nbrs[:-1], nbrs[-1]
    end, index = aux.remove_vertices([x])
    for p, q in zip(head[0::2], head[1::2]):
        end.add_edge(index[p], index[q])

    asm = _Assembler()
    offsets = [asm.add(piece) for _ in range(r)]
    for prev, cur in zip(offsets, offsets[1:]):
        asm.connect(cur + v, prev + w)
    left, right = asm.add(end), asm.add(end)
    asm.connect(left + index[y], offsets[0] + v)
    asm.connect(right + index[y], offsets[-1] + w)
    return asm.finish()


def _matching_keeping_girth(graph: Graph, vertices: list[int], g: int) -> list[tuple[int, int]] | None:
    if not vertices:
        return [] if girth(graph) >= g else None
    a = vertices[0]
    for b in vertices[1:]:
        if graph.has_edge(a, b):
            continue
        graph.add_edge(a, b)
        if girth(graph) >= g:
            rest = _matching_keeping_girth(graph, [x for x in vertices[1:] if x != b], g)
            if rest is not None:
                graph.remove_edge(a, b)
                return [(a, b)] + rest
        graph.remove_edge(a, b)
    return None


def _even_chain(k: int, g: int, r: int, cage: Graph, aux: Graph) -> Graph:
    cycles = shortest_cycles(cage)
    u = next((x for x in range(cage.n) if _avoids_a_shortest_cycle([x], cycles)), None)
    if u is None:
        raise ConstructionError("No vertex of the cage avoids a shortest cycle")
    nbrs = cage.neighbors(u)
    base, index = cage.remove_vertices([u])
    piece = base.copy()
    v = piece.add_vertices(1)
    w = piece.add_vertices(1)
    # v takes two of u's neighbours, w the other k-2
    for z in nbrs[:2]:
        piece.add_edge(v, index[z])
    for z in nbrs[2:]:
        piece.add_edge(w, index[z])

    x = 0
    y = aux.neighbors(x)[0]
    # y drops to degree k-2 and absorbs the first copy's v
    z = next(c for c in aux.neighbors(y) if c != x)
    end = aux.copy()
    end.remove_edge(y, z)
    deficient = [c for c in aux.neighbors(x) if c != y] + [z]
    end, end_index = end.remove_vertices([x])
    matching = _matching_keeping_girth(end, sorted(end_index[c] for c in deficient), g)
    if matching is None:
        raise ConstructionError("No matching on the auxiliary cage keeps girth g")
    for p, q in matching:
        end.add_edge(p, q)

    tail = cage.copy()
    a, b = tail.edges()[0]
    tail.remove_edge(a, b)
    s = tail.add_vertices(1)
    tail.add_edge(a, s)
    tail.add_edge(b, s)

    asm = _Assembler()
    offsets = [asm.add(piece) for _ in range(r)]
    for prev, cur in zip(offsets, offsets[1:]):
        asm.identify(cur + v, prev + w)
    end_offset = asm.add(end)
    asm.identify(offsets[0] + v, end_offset + end_index[y])
    tail_offset = asm.add(tail)
    asm.identify(offsets[-1] + w, tail_offset + s)
    return asm.finish()


def chain_construction(k: int, g: int, r: int, cage: Graph, aux_cage: Graph) -> ChainResult:
    """
    Build a k-regular girth-g graph whose diameter grows like g*r.

    Args:
        k: Degree
        g: Girth
        r: Number of chained cage copies
        cage: A (k,g)-graph
        aux_cage: A (k,g+1)-graph for odd k, a (k,g+2)-graph for even k

    Returns:
        ChainResult with the graph and its measured diameter
    """
    if r < 1:
        raise ParameterError(f"Need at least one copy, got r={r}")
    if set(cage.degrees()) != {k} or girth(cage) != g:
        raise ConstructionError(f"Cage is not a ({k},{g})-graph")
    aux_girth = g + 1 if k % 2 else g + 2
    if set(aux_cage.degrees()) != {k} or girth(aux_cage) < aux_girth:
        raise ConstructionError(f"Auxiliary cage is not a ({k},{aux_girth})-graph")
    graph = (_odd_chain if k % 2 else _even_chain)(k, g, r, cage, aux_cage)
    if set(graph.degrees()) != {k} or girth(graph) != g:
        raise VerificationError(f"Chain has degrees {sorted(set(graph.degrees()))} and girth {girth(graph)}")
    measured = diameter(graph)
    logger.info(f"Chain ({k},{g}) r={r}: {graph.n} vertices, diameter {measured}")
    return ChainResult(graph=graph, diameter=measured, copies=r)


def almost_regular_chain_ratio(graph: Graph, k: int) -> Fraction:
    """
    Slope of the chain obtained by gluing copies of a graph at its two
    degree-k/2 vertices: vertices added per copy over distance added per copy.
    """
    if k % 2:
        raise ParameterError("Gluing at half-degree vertices needs even k")
    half = [v for v, deg in enumerate(graph.degrees()) if deg != k]
    if len(half) != 2 or any(graph.degree(v) != k // 2 for v in half):
        raise ParameterError(f"Expected exactly two vertices of degree {k // 2}")
    gap = distances(graph, half[0])[half[1]]
    return Fraction(graph.n - 1, int(gap))


# ==================== EXTREMAL FAMILIES ====================


def build_k_3_3(k: int) -> Graph:
    """Smallest k-regular graph of girth 3 and diameter 3"""
    order = exact_order_k_3_3(k)
    side = k + 1
    g = Graph(order)
    for i in range(side):
        for j in range(side):
            if i != j:
                g.add_edge(i, side + j)
    u1, u2, v1, v2 = 0, 1, side, side + 1
    g.remove_edge(u1, v2)
    g.remove_edge(u2, v1)
    g.add_edge(u1, u2)
    g.add_edge(v1, v2)
    return _verify(g, k, 3, 3, f"K({k};3,3) construction")


def _piece(n: int, edges: list[tuple[int, int]]) -> Graph:
    return Graph(n, edges)


# cubic girth-4 end blocks: vertex 0 is the far end, the last vertex is the port
_END_133 = _piece(7, [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3), (6, 1), (6, 5), (5, 3), (5, 2)])
_END_1341 = _piece(
    9,
    [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 7), (3, 4), (3, 6), (8, 5), (8, 7), (4, 7), (5, 6)],
)


def _k33_minus_edge() -> tuple[Graph, int, int]:
    g = Graph(6, ((a, b) for a in range(3) for b in range(3, 6) if (a, b) != (0, 3)))
    return g, 0, 3


def _long_gadget() -> tuple[Graph, int, int]:
    """Cubic girth-4 gadget with ports 0 and 11 at distance 6"""
    edges = [(0, 1), (0, 2)]
    edges += [(a, b) for a in (1, 2) for b in (3, 4)]
    edges += [(3, 5), (4, 6), (5, 6), (5, 7), (6, 8)]
    edges += [(a, b) for a in (7, 8) for b in (9, 10)]
    edges += [(9, 11), (10, 11)]
    return Graph(12, edges), 0, 11


def _chain_with_bridges(left: Graph, gadgets: list[tuple[Graph, int, int]], right: Graph) -> Graph:
    asm = _Assembler()
    port = asm.add(left) + left.n - 1
    for gadget, entry, exit_ in gadgets:
        offset = asm.add(gadget)
        asm.connect(port, offset + entry)
        port = offset + exit_
    offset = asm.add(right)
    asm.connect(port, offset + right.n - 1)
    return asm.finish()


def build_3_4_extremal(d: int) -> Graph:
    """Cubic girth-4 graph of diameter d at the smallest possible order, d >= 9"""
    if d < 9:
        raise ParameterError(f"Extremal (3;4,d) construction needs d >= 9, got {d}")
    residue = d % 4
    if residue == 1:
        left, right, middle = _END_133, _END_133, [_k33_minus_edge()] * ((d - 5) // 4)
    elif residue == 2:
        left, right, middle = _END_1341, _END_133, [_k33_minus_edge()] * ((d - 6) // 4)
    elif residue == 3:
        left, right, middle = _END_1341, _END_1341, [_k33_minus_edge()] * ((d - 7) // 4)
    else:
        left, right = _END_133, _END_133
        middle = [_long_gadget()] + [_k33_minus_edge()] * ((d - 12) // 4)
    graph = _chain_with_bridges(left, middle, right)
    if graph.n != exact_order_3_4(d):
        raise VerificationError(f"(3;4,{d}) construction has {graph.n} vertices")
    return _verify(graph, 3, 4, d, f"(3;4,{d}) construction")


def _petersen_parts() -> tuple[Graph, Graph, Graph]:
    """Spoke-subdivided end (port last), the 13-vertex end (port last), Petersen minus a spoke"""
    from cages.fixtures import petersen_graph

    petersen = petersen_graph()
    minus_spoke = petersen.copy()
    minus_spoke.remove_edge(0, 5)

    subdivided = minus_spoke.copy()
    z = subdivided.add_vertices(1)
    subdivided.add_edge(0, z)
    subdivided.add_edge(5, z)

    wide = Graph(
        13,
        [
            (0, 1), (0, 2), (0, 3),
            (1, 4), (1, 5), (2, 6), (2, 7), (3, 8), (3, 9),
            (5, 6), (7, 8), (5, 8), (4, 9),
            (10, 7), (10, 4), (11, 6), (11, 9),
            (12, 10), (12, 11),
        ],
    )  # fmt: skip
    return subdivided, wide, minus_spoke


def build_3_5_extremal(d: int) -> Graph:
    """Cubic girth-5 graph of diameter d at the smallest possible order, d >= 5"""
    if d < 5:
        raise ParameterError(f"Extremal (3;5,d) construction needs d >= 5, got {d}")
    short_end, wide_end, gadget = _petersen_parts()
    residue = d % 5
    merge = residue in (0, 1)
    reach = d + 2 if merge else d
    left = wide_end if reach % 5 in (3, 4) else short_end
    right = wide_end if reach % 5 == 4 else short_end
    left_reach = 4 if left is wide_end else 3
    right_reach = 4 if right is wide_end else 3
    copies, rest = divmod(reach - left_reach - right_reach - 1, 5)
    if rest or copies < 0:
        raise VerificationError(f"No assembly for (3;5,{d})")

    asm = _Assembler()
    port = asm.add(left) + left.n - 1
    for _ in range(copies):
        offset = asm.add(gadget)
        asm.connect(port, offset)
        port = offset + 5
    offset = asm.add(right)
    right_port = offset + right.n - 1
    if merge:
        ends = sorted(asm.graph.neighbors(port))
        asm.delete(port)
        asm.delete(right_port)
        asm.connect(ends[0], offset)
        asm.connect(ends[1], offset + 5)
    else:
        asm.connect(port, right_port)
    graph = asm.finish()
    if graph.n != exact_order_3_5(d):
        raise VerificationError(f"(3;5,{d}) construction has {graph.n} vertices")
    return _verify(graph, 3, 5, d, f"(3;5,{d}) construction")


# ==================== PROJECTIVE PLANES ====================


def projective_plane_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2,q) for prime q: a (q+1,6)-cage"""
    if q < 2 or any(q % p == 0 for p in range(2, int(q**0.5) + 1)):
        raise ParameterError(f"Only prime q supported, got {q}")
    points = []
    for x in range(q):
        for y in range(q):
            points.append((x, y, 1))
    for x in range(q):
        points.append((x, 1, 0))
    points.append((1, 0, 0))
    count = len(points)
    g = Graph(2 * count)
    for i, p in enumerate(points):
        for j, line in enumerate(points):
            if sum(a * b for a, b in zip(p, line)) % q == 0:
                g.add_edge(i, count + j)
    return g


# ==================== RATIO BOUNDS ====================


class RatioBound(BaseModel):
    """Bounds on the limiting order/diameter slope f(k,g)"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = Field(description="Degree")
    g: int = Field(description="Girth")
    lower: Fraction = Field(description="M(k,g)/g")
    upper: Fraction | None = Field(default=None, description="Best known upper bound")


def ratio_bounds(
    k: int,
    g: int,
    n_kg: int | None = None,
    block: RepeatableBlock | None = None,
    block_ratio: Fraction | None = None,
) -> RatioBound:
    """
    Combine the Moore-type lower bound with every supplied upper bound.

    Args:
        k, g: Degree and girth
        n_kg: Known order of a (k,g)-cage
        block: A repeatable block, contributing its chaining ratio
        block_ratio: A slope obtained some other way, e.g. from a glued chain
    """
    if k < 3 or g < 3:
        raise ParameterError(f"Ratio bounds need k, g >= 3, got k={k} g={g}")
    candidates = []
    if n_kg is not None:
        candidates.append(Fraction(n_kg, g))
    if block is not None:
        candidates.append(repeatable_ratio(block))
    if block_ratio is not None:
        candidates.append(block_ratio)
    lower = Fraction(moore(k, g), g)
    upper = min(candidates) if candidates else None
    if upper is not None and upper < lower:
        raise VerificationError(f"Upper bound {upper} below lower bound {lower}")
    return RatioBound(k=k, g=g, lower=lower, upper=upper)
