"""
Repeatable layered blocks and the extension lemmas.

A block is a graph with a BFS layering N_0..N_d whose first g layers and
last g layers are isomorphic layer by layer; such blocks can be chained
to build arbitrarily long graphs, and a chain can be shortened again by
splicing a block out. Deficient boundaries are closed with multigraph
realization plus girth repair.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from cages.canon import canonical_key, canonical_labeling
from cages.errors import ConstructionError, ParameterError, VerificationError
from cages.graphcore import Graph, LayerPartition, distances, girth, layers

logger = logging.getLogger(__name__)


@dataclass
class RepeatableBlock:
    graph: Graph
    layers: LayerPartition
    k: int
    g: int

    @classmethod
    def from_source(cls, graph: Graph, source: Sequence[int], k: int, g: int) -> "RepeatableBlock":
        return cls(graph, layers(graph, source), k, g)

    @property
    def d(self) -> int:
        return self.layers.depth


@dataclass
class Multigraph:
    """Loops and parallel edges allowed; a loop adds 2 to its vertex's degree"""

    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    @classmethod
    def from_graph(cls, g: Graph) -> "Multigraph":
        return cls(g.n, g.edges())

    def add_edge(self, a: int, b: int) -> None:
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ParameterError(f"Edge {a}-{b} outside multigraph of order {self.n}")
        self.edges.append((min(a, b), max(a, b)))

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


# ==================== RECOGNITION ====================


def boundary_isomorphism(block: RepeatableBlock) -> dict[int, int] | None:
    """
    Layer-respecting isomorphism from the first g layers onto the last g layers.

    Returns:
        Map from each vertex of N_0..N_{g-1} to its image in N_{d-g+1}..N_d,
        or None when the two boundary graphs differ
    """
    g, d = block.g, block.d
    if d + 1 < g:
        return None
    head = block.layers.vertices(0, g)
    tail = block.layers.vertices(d - g + 1, d + 1)
    index = block.layers.layer_index()
    head_colors = [index[v] for v in head]
    tail_colors = [index[v] - (d - g + 1) for v in tail]
    head_graph = block.graph.induced(head)
    tail_graph = block.graph.induced(tail)
    if canonical_key(head_graph, head_colors) != canonical_key(tail_graph, tail_colors):
        return None
    head_lab = canonical_labeling(head_graph, head_colors)
    tail_lab = canonical_labeling(tail_graph, tail_colors)
    tail_at = {label: tail[i] for i, label in enumerate(tail_lab)}
    return {head[i]: tail_at[label] for i, label in enumerate(head_lab)}


def _layers_consistent(block: RepeatableBlock) -> bool:
    recomputed = layers(block.graph, block.layers.source)
    return (
        not recomputed.unreachable
        and [set(layer) for layer in recomputed.layers] == [set(layer) for layer in block.layers.layers]
    )


def is_repeatable(block: RepeatableBlock) -> bool:
    """Check the six conditions for chaining a block with itself"""
    graph, k, g, d = block.graph, block.k, block.g, block.d
    if not _layers_consistent(block):
        return False
    if girth(graph) < g:
        return False
    interior = block.layers.vertices(1, d)
    if any(graph.degree(v) != k for v in interior):
        return False
    if k % 2 == 0:
        for end in (block.layers.layers[0], block.layers.layers[d]):
            if sum(graph.degree(v) for v in end) % 2:
                return False
    if d + 1 < 2 * g:
        return False
    return boundary_isomorphism(block) is not None


def _require_repeatable(block: RepeatableBlock) -> dict[int, int]:
    if not is_repeatable(block):
        raise ParameterError(f"Block with layer sizes {block.layers.sizes} is not repeatable for k={block.k}, g={block.g}")
    return boundary_isomorphism(block)


def repeatable_ratio(block: RepeatableBlock) -> Fraction:
    """Vertices gained per unit of diameter when the block is chained"""
    _require_repeatable(block)
    gained = len(block.layers.vertices(0, block.d - block.g + 1))
    return Fraction(gained, block.d + 1 - block.g)


def double_repeatable(block: RepeatableBlock) -> RepeatableBlock:
    """
    Chain two copies: the first g layers of the second copy are glued onto
    the last g layers of the first copy.
    """
    phi = _require_repeatable(block)
    g, d = block.g, block.d
    graph = block.graph.copy()
    head = set(block.layers.vertices(0, g))
    # vertex of the second copy -> vertex of the result
    image = {v: phi[v] for v in head}
    for v in block.layers.vertices(g):
        image[v] = graph.add_vertices(1)
    for a, b in block.graph.edges():
        if a in head and b in head:
            continue
        graph.add_edge(image[a], image[b])
    doubled = RepeatableBlock.from_source(graph, block.layers.source, block.k, g)
    expected = block.layers.sizes + block.layers.sizes[g:]
    if doubled.layers.sizes != expected or doubled.d != 2 * d - g + 1:
        raise VerificationError(f"Doubled block has layer sizes {doubled.layers.sizes}, expected {expected}")
    logger.debug(f"Doubled block: {block.graph.n} -> {graph.n} vertices, d {d} -> {doubled.d}")
    return doubled


def splice_out_repeatable(host: Graph, host_layers: LayerPartition, a: int, b: int, k: int, g: int) -> Graph:
    """
    Remove the repeatable block spanning layers a..b of host.

    Layers 0..a+g-2 and b..end are kept; N_{a+g-2} is joined to N_b exactly
    as the block's last g layers are joined, so the junction looks like
    the removed block's tail.
    """
    if not 0 <= a < b <= host_layers.depth:
        raise ParameterError(f"Layer range {a}..{b} outside 0..{host_layers.depth}")
    slice_vertices = host_layers.vertices(a, b + 1)
    sub = host.induced(slice_vertices)
    position = {v: i for i, v in enumerate(slice_vertices)}
    block = RepeatableBlock.from_source(sub, [position[v] for v in host_layers.layers[a]], k, g)
    expected = [{position[v] for v in layer} for layer in host_layers.layers[a:b + 1]]
    if [set(layer) for layer in block.layers.layers] != expected:
        raise ParameterError("Block's own layering differs from the host's layers")
    phi = _require_repeatable(block)

    kept = host_layers.vertices(0, a + g - 1) + host_layers.vertices(b)
    result = host.induced(kept)
    new_index = {v: i for i, v in enumerate(kept)}
    for x in host_layers.layers[a + g - 2]:
        partner = slice_vertices[phi[position[x]]]
        for y in host_layers.layers[b]:
            if host.has_edge(partner, y):
                result.add_edge(new_index[x], new_index[y])
    removed = len(slice_vertices) - len(block.layers.vertices(0, g))
    if result.n != host.n - removed:
        raise VerificationError(f"Spliced graph has {result.n} vertices, expected {host.n - removed}")
    # every kept vertex keeps its host degree, so a k-regular host stays k-regular
    changed = [v for v in kept if result.degree(new_index[v]) != host.degree(v)]
    if changed:
        raise VerificationError(f"Splicing changed the degree of host vertices {changed}")
    if set(host.degrees()) == {k} and set(result.degrees()) != {k}:
        raise VerificationError(f"Spliced graph is not {k}-regular")
    if girth(result) < g:
        raise VerificationError(f"Spliced graph has girth {girth(result)} < {g}")
    return result


# ==================== EXTENSION LEMMAS ====================


def realize_degree_sequence(seq: Sequence[int]) -> Multigraph:
    """Greedy multigraph with the given degrees; a lone deficient vertex gets loops"""
    if any(x < 0 for x in seq):
        raise ParameterError("Degrees must be non-negative")
    if sum(seq) % 2:
        raise ParameterError(f"Degree sum {sum(seq)} is odd")
    remaining = list(seq)
    mg = Multigraph(len(seq))
    while True:
        open_vertices = [v for v, r in enumerate(remaining) if r > 0]
        if not open_vertices:
            return mg
        a = open_vertices[0]
        if len(open_vertices) > 1:
            b = open_vertices[1]
            remaining[b] -= 1
            remaining[a] -= 1
        else:
            b = a
            remaining[a] -= 2
        mg.add_edge(a, b)


@dataclass(frozen=True)
class _Gadget:
    graph: Graph
    ports: tuple[int, int]


def _gadget(template: Graph, g: int) -> _Gadget:
    """Template minus one edge, preferring an edge whose removal keeps a g-cycle"""
    edges = template.edges()
    if not edges:
        raise ConstructionError("Template graph has no edges")
    for a, b in edges:
        trial = template.copy()
        trial.remove_edge(a, b)
        if girth(trial) == g:
            return _Gadget(trial, (a, b))
    a, b = edges[0]
    trial = template.copy()
    trial.remove_edge(a, b)
    return _Gadget(trial, (a, b))


def _attach(graph: Graph, a: int, b: int, gadget: _Gadget) -> Graph:
    merged, offset = graph.disjoint_union(gadget.graph)
    p, q = gadget.ports
    merged.add_edge(a, p + offset)
    merged.add_edge(b, q + offset)
    return merged


def _short_cycle_edge(graph: Graph, g: int, original: set[tuple[int, int]]) -> tuple[int, int] | None:
    """An original edge lying on a cycle shorter than g"""
    for a, b in sorted(original):
        graph.remove_edge(a, b)
        try:
            if distances(graph, a)[b] + 1 < g:
                return a, b
        finally:
            graph.add_edge(a, b)
    return None


def repair_girth(mg: Multigraph, k: int, g: int, template: Graph) -> Graph:
    """
    Turn a k-regular multigraph into a simple k-regular graph of girth exactly g.

    Loops, every copy of a repeated edge and every edge on a short cycle
    are replaced by a copy of the template minus one edge.

    When no replacement can create a g-cycle (no simple edge is left, or
    the template minus any edge has girth above g) a disjoint copy of the
    template is added instead. That result is disconnected, so callers
    that need a finite diameter must check connectivity themselves.
    """
    if any(deg != k for deg in mg.degrees()):
        raise ParameterError(f"Multigraph is not {k}-regular")
    if any(deg != k for deg in template.degrees()) or girth(template) != g:
        raise ParameterError(f"Template is not a ({k},{g})-graph")
    gadget = _gadget(template, g)

    multiplicity: dict[tuple[int, int], int] = {}
    for e in mg.edges:
        multiplicity[e] = multiplicity.get(e, 0) + 1
    graph = Graph(mg.n)
    original: set[tuple[int, int]] = set()
    for (a, b), count in sorted(multiplicity.items()):
        if a != b and count == 1:
            graph.add_edge(a, b)
            original.add((a, b))
    replaced = 0
    for (a, b), count in sorted(multiplicity.items()):
        if a == b or count > 1:
            for _ in range(count):
                graph = _attach(graph, a, b, gadget)
                replaced += 1

    while (edge := _short_cycle_edge(graph, g, original)) is not None:
        graph.remove_edge(*edge)
        original.discard(edge)
        graph = _attach(graph, *edge, gadget)
        replaced += 1

    if girth(graph) > g:
        if original and girth(gadget.graph) == g:
            edge = min(original)
            graph.remove_edge(*edge)
            graph = _attach(graph, *edge, gadget)
            replaced += 1
        else:
            graph, _ = graph.disjoint_union(template)
            logger.warning(f"Girth repair added a disjoint ({k},{g}) template; result is disconnected")

    if any(deg != k for deg in graph.degrees()) or girth(graph) != g:
        raise VerificationError(f"Girth repair produced a graph of girth {girth(graph)}")
    logger.debug(f"Girth repair: {replaced} gadget replacements, {graph.n} vertices")
    return graph


def complete_repeatable_to_kgd(block: RepeatableBlock, template: Graph | None = None) -> Graph:
    """
    Close both boundary layers of a repeatable block into a k-regular graph
    of girth exactly g that contains the block as an induced subgraph.
    """
    _require_repeatable(block)
    k, g = block.k, block.g
    if template is None:
        from cages.fixtures import reference_cage

        template = reference_cage(k, g)
    gadget = _gadget(template, g)
    graph = block.graph.copy()
    for end in (block.layers.layers[0], block.layers.layers[block.d]):
        seq = [k - graph.degree(v) for v in end]
        targets = list(end)
        if sum(seq) % 2:
            seq.append(k)
            targets.append(graph.add_vertices(1))
        for x, y in realize_degree_sequence(seq).edges:
            graph = _attach(graph, targets[x], targets[y], gadget)
    completed = repair_girth(Multigraph.from_graph(graph), k, g, template)
    if completed.induced(range(block.graph.n)) != block.graph:
        raise VerificationError("Completion does not contain the block as an induced subgraph")
    return completed
