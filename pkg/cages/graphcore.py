import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import networkx as nx

from cages.errors import CapacityError, Graph6Error, ParameterError

logger = logging.getLogger(__name__)

MAX_VERTICES = 512
INF = math.inf
GRAPH6_HEADER = ">>graph6<<"


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of mask in increasing order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    Each vertex owns an adjacency row stored as an int bitmask, so
    neighbourhood unions and intersections are single integer operations.
    """

    __slots__ = ("_rows",)

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = ()):
        if n < 0 or n > MAX_VERTICES:
            raise CapacityError(f"Vertex count {n} outside 0..{MAX_VERTICES}")
        self._rows = [0] * n
        for a, b in edges:
            self.add_edge(a, b)

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        g = cls(len(rows))
        for v, row in enumerate(rows):
            if row >> v & 1:
                raise ParameterError(f"Self-loop at vertex {v}")
            if row >> len(rows):
                raise ParameterError(f"Row {v} references a missing vertex")
            for w in iter_bits(row):
                if not rows[w] >> v & 1:
                    raise ParameterError(f"Asymmetric adjacency between {v} and {w}")
        g._rows = list(rows)
        return g

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(self._rows)

    def row(self, v: int) -> int:
        return self._rows[v]

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self._rows):
            raise ParameterError(f"Vertex {v} not in graph of order {self.n}")

    def add_edge(self, a: int, b: int) -> None:
        self._check_vertex(a)
        self._check_vertex(b)
        if a == b:
            raise ParameterError(f"Self-loop at vertex {a}")
        if self._rows[a] >> b & 1:
            raise ParameterError(f"Edge {a}-{b} already present")
        self._rows[a] |= 1 << b
        self._rows[b] |= 1 << a

    def remove_edge(self, a: int, b: int) -> None:
        if not self.has_edge(a, b):
            raise ParameterError(f"Edge {a}-{b} not present")
        self._rows[a] &= ~(1 << b)
        self._rows[b] &= ~(1 << a)

    def has_edge(self, a: int, b: int) -> bool:
        return 0 <= a < self.n and 0 <= b < self.n and bool(self._rows[a] >> b & 1)

    def add_vertices(self, count: int = 1) -> int:
        """Append isolated vertices and return the index of the first one"""
        first = self.n
        if first + count > MAX_VERTICES:
            raise CapacityError(f"Vertex count {first + count} exceeds {MAX_VERTICES}")
        self._rows.extend([0] * count)
        return first

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self._rows]

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self._rows[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, row in enumerate(self._rows) for b in iter_bits(row >> a + 1 << a + 1)]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def copy(self) -> "Graph":
        g = Graph()
        g._rows = list(self._rows)
        return g

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which vertex v is renamed perm[v]"""
        if sorted(perm) != list(range(self.n)):
            raise ParameterError("Relabeling is not a permutation of the vertices")
        g = Graph(self.n)
        for a, b in self.edges():
            g._rows[perm[a]] |= 1 << perm[b]
            g._rows[perm[b]] |= 1 << perm[a]
        return g

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertices[i] becomes vertex i"""
        position = {v: i for i, v in enumerate(vertices)}
        g = Graph(len(vertices))
        for i, v in enumerate(vertices):
            for w in iter_bits(self._rows[v]):
                j = position.get(w)
                if j is not None:
                    g._rows[i] |= 1 << j
        return g

    def remove_vertices(self, removed: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Delete vertices, compacting labels; returns the graph and old->new map"""
        gone = set(removed)
        kept = [v for v in range(self.n) if v not in gone]
        return self.induced(kept), {v: i for i, v in enumerate(kept)}

    def disjoint_union(self, other: "Graph") -> tuple["Graph", int]:
        """Return self + other and the offset added to other's labels"""
        offset = self.n
        g = self.copy()
        g.add_vertices(other.n)
        for a, b in other.edges():
            g.add_edge(a + offset, b + offset)
        return g, offset

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


# ==================== METRICS ====================


def distances(g: Graph, root: int) -> list[float]:
    """Single-source BFS distances, INF for unreachable vertices"""
    g._check_vertex(root)
    dist: list[float] = [INF] * g.n
    dist[root] = 0
    seen = frontier = 1 << root
    level = 0
    rows = g._rows
    while frontier:
        level += 1
        reached = 0
        for v in iter_bits(frontier):
            reached |= rows[v]
        reached &= ~seen
        for v in iter_bits(reached):
            dist[v] = level
        seen |= reached
        frontier = reached
    return dist


def all_distances(g: Graph) -> list[list[float]]:
    return [distances(g, v) for v in range(g.n)]


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or INF not in distances(g, 0)


def girth(g: Graph) -> float:
    """Length of a shortest cycle, INF for forests"""
    best: float = INF
    rows = g._rows
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for x in queue:
            # a cycle found deeper than this cannot beat best
            if 2 * dist[x] >= best:
                break
            for w in iter_bits(rows[x]):
                if w not in dist:
                    dist[w] = dist[x] + 1
                    parent[w] = x
                    queue.append(w)
                elif w != parent[x]:
                    best = min(best, dist[x] + dist[w] + 1)
    return best


def diameter(g: Graph) -> float:
    """Largest distance between two vertices, INF if disconnected"""
    if g.n <= 1:
        return 0
    longest: float = 0
    for v in range(g.n):
        longest = max(longest, max(distances(g, v)))
        if longest == INF:
            break
    return longest


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for start in range(g.n):
        if side[start] >= 0:
            continue
        side[start] = 0
        queue = [start]
        for x in queue:
            for w in iter_bits(g._rows[x]):
                if side[w] < 0:
                    side[w] = 1 - side[x]
                    queue.append(w)
                elif side[w] == side[x]:
                    return False
    return True


@dataclass(frozen=True)
class LayerPartition:
    """Distance layers N_0, N_1, ... around a source set"""

    source: frozenset[int]
    layers: tuple[tuple[int, ...], ...]
    unreachable: frozenset[int] = frozenset()

    @property
    def depth(self) -> int:
        """Index d of the last layer"""
        return len(self.layers) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def layer_index(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def vertices(self, start: int = 0, stop: int | None = None) -> list[int]:
        """Vertices of layers start..stop-1 in layer order"""
        return [v for layer in self.layers[start:stop] for v in layer]


def layers(g: Graph, source: Iterable[int]) -> LayerPartition:
    """Multi-source BFS layering"""
    source_set = frozenset(source)
    if not source_set:
        raise ParameterError("Layer partition needs a non-empty source set")
    for v in source_set:
        g._check_vertex(v)
    seen = frontier = bits_to_mask(source_set)
    result = [tuple(sorted(source_set))]
    while True:
        reached = 0
        for v in iter_bits(frontier):
            reached |= g._rows[v]
        reached &= ~seen
        if not reached:
            break
        result.append(tuple(iter_bits(reached)))
        seen |= reached
        frontier = reached
    unreachable = frozenset(v for v in range(g.n) if not seen >> v & 1)
    return LayerPartition(source=source_set, layers=tuple(result), unreachable=unreachable)


def is_kgd_graph(g: Graph, k: int, gi: int, d: int) -> bool:
    """True iff g is k-regular with girth exactly gi and diameter exactly d"""
    if g.n == 0 or any(deg != k for deg in g.degrees()):
        return False
    return girth(g) == gi and diameter(g) == d


def far_vertex_filter(g: Graph, k: int, distance: int) -> bool:
    """True iff every vertex of degree < k has some vertex at least `distance` away"""
    for v in range(g.n):
        if g.degree(v) < k and max(distances(g, v)) < distance:
            return False
    return True


# ==================== GRAPH6 ====================


def _size_header(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    return "~" + "".join(chr((n >> shift & 63) + 63) for shift in (12, 6, 0))


def graph6_encode(g: Graph) -> str:
    """Standard graph6 text without header or newline"""
    if g.n > MAX_VERTICES:
        raise CapacityError(f"Cannot encode {g.n} vertices")
    chars = [_size_header(g.n)]
    acc = nbits = 0
    rows = g._rows
    for j in range(1, g.n):
        for i in range(j):
            acc = acc << 1 | (rows[i] >> j & 1)
            nbits += 1
            if nbits == 6:
                chars.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        chars.append(chr((acc << 6 - nbits) + 63))
    return "".join(chars)


def graph6_decode(text: str) -> Graph:
    data = text.strip()
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
    if not data:
        raise Graph6Error("Empty graph6 string")
    values = [ord(c) - 63 for c in data]
    if any(not 0 <= x < 64 for x in values):
        raise Graph6Error(f"Character outside 63..126 in {data!r}")
    if values[0] < 63:
        n, body = values[0], values[1:]
    elif len(values) >= 4 and values[1] < 63:
        n, body = values[1] << 12 | values[2] << 6 | values[3], values[4:]
    elif len(values) >= 8 and values[1] == 63:
        n = 0
        for x in values[2:8]:
            n = n << 6 | x
        body = values[8:]
    else:
        raise Graph6Error(f"Malformed size header in {data!r}")
    if n > MAX_VERTICES:
        raise CapacityError(f"graph6 string encodes {n} vertices, maximum is {MAX_VERTICES}")
    total = n * (n - 1) // 2
    if len(body) != (total + 5) // 6:
        raise Graph6Error(f"Expected {(total + 5) // 6} data bytes for n={n}, got {len(body)}")
    pad = len(body) * 6 - total
    if pad and body[-1] & (1 << pad) - 1:
        raise Graph6Error("Non-zero padding bits")
    g = Graph(n)
    bit = 0
    for j in range(1, n):
        for i in range(j):
            if body[bit // 6] >> 5 - bit % 6 & 1:
                g.add_edge(i, j)
            bit += 1
    return g


def read_graph6_file(path: str | Path) -> list[Graph]:
    graphs = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                graphs.append(graph6_decode(line))
    return graphs


def write_graph6_file(path: str | Path, graphs: Iterable[Graph]) -> int:
    """Write one graph6 line per graph; returns the number written"""
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for g in graphs:
            f.write(graph6_encode(g) + "\n")
            count += 1
    logger.debug(f"Wrote {count} graphs to {path}")
    return count


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    return G


def from_networkx(G: nx.Graph) -> Graph:
    """Convert, labeling nodes 0..n-1 in the graph's node order"""
    index = {node: i for i, node in enumerate(G.nodes())}
    return Graph(len(index), ((index[a], index[b]) for a, b in G.edges()))
