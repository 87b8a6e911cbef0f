"""
Canonical labeling for isomorphism rejection.

Equitable-partition refinement with individualization, searching the
whole tree of target-cell choices and keeping the lexicographically
largest relabeled adjacency. Automorphisms discovered from equal leaves
and interchangeable twin vertices prune sibling branches.
"""

import logging
from typing import Iterable, Sequence

from cages.errors import ParameterError
from cages.graphcore import Graph, bits_to_mask, graph6_encode, iter_bits

logger = logging.getLogger(__name__)

# colours used by the decorated keys
PLAIN = 0
PAIR_END = 1
PENDANT = 2
EXCLUDED_MARK = 3


def _refine(rows: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbour counts into every cell until the partition is equitable"""
    while True:
        masks = [bits_to_mask(cell) for cell in cells]
        refined: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                signature = tuple((rows[v] & mask).bit_count() for mask in masks)
                groups.setdefault(signature, []).append(v)
            if len(groups) == 1:
                refined.append(cell)
            else:
                changed = True
                refined.extend(groups[signature] for signature in sorted(groups))
        cells = refined
        if not changed:
            return cells


def _individualize(cells: list[list[int]], index: int, v: int) -> list[list[int]]:
    rest = [w for w in cells[index] if w != v]
    return cells[:index] + [[v], rest] + cells[index + 1:]


def _certificate(rows: Sequence[int], order: Sequence[int], lab: Sequence[int]) -> tuple[int, ...]:
    cert = []
    for v in order:
        row = 0
        for w in iter_bits(rows[v]):
            row |= 1 << lab[w]
        cert.append(row)
    return tuple(cert)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _LabelingSearch:
    def __init__(self, rows: Sequence[int]):
        self.rows = rows
        self.n = len(rows)
        self.first: tuple[tuple[int, ...], list[int]] | None = None
        self.best: tuple[tuple[int, ...], list[int]] | None = None
        self.automorphisms: list[list[int]] = []
        self.leaves = 0

    def _leaf(self, cells: list[list[int]]) -> None:
        self.leaves += 1
        order = [cell[0] for cell in cells]
        lab = [0] * self.n
        for position, v in enumerate(order):
            lab[v] = position
        cert = _certificate(self.rows, order, lab)
        if self.first is None:
            self.first = self.best = (cert, order)
            return
        for known_cert, known_order in (self.first, self.best):
            if cert == known_cert:
                # vertex -> its counterpart in the known leaf
                self.automorphisms.append([known_order[lab[v]] for v in range(self.n)])
                return
        if cert > self.best[0]:
            self.best = (cert, order)

    def _orbits(self, fixed: Sequence[int]) -> _UnionFind:
        orbits = _UnionFind(self.n)
        for gamma in self.automorphisms:
            if all(gamma[f] == f for f in fixed):
                for v, image in enumerate(gamma):
                    orbits.union(v, image)
        return orbits

    def _is_twin(self, a: int, b: int) -> bool:
        return self.rows[a] & ~(1 << b) == self.rows[b] & ~(1 << a)

    def visit(self, cells: list[list[int]], fixed: list[int]) -> None:
        cells = _refine(self.rows, cells)
        target = -1
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target < 0 or len(cell) > len(cells[target])):
                target = i
        if target < 0:
            self._leaf(cells)
            return
        tried: list[int] = []
        for v in sorted(cells[target]):
            if any(self._is_twin(v, t) for t in tried):
                continue
            if tried and self.automorphisms:
                orbits = self._orbits(fixed)
                if any(orbits.find(v) == orbits.find(t) for t in tried):
                    continue
            self.visit(_individualize(cells, target, v), fixed + [v])
            tried.append(v)


def _initial_cells(n: int, colors: Sequence[int] | None) -> list[list[int]]:
    if colors is None:
        return [list(range(n))] if n else []
    if len(colors) != n:
        raise ParameterError(f"Got {len(colors)} colours for {n} vertices")
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    return [classes[c] for c in sorted(classes)]


def canonical_labeling(g: Graph, colors: Sequence[int] | None = None) -> list[int]:
    """
    Compute a canonical labeling of a vertex-coloured graph.

    Args:
        g: The graph
        colors: Optional colour per vertex; colour classes keep their
            relative order in the canonical labeling

    Returns:
        lab where lab[v] is the canonical label of vertex v
    """
    search = _LabelingSearch(g.rows)
    cells = _initial_cells(g.n, colors)
    if not cells:
        return []
    search.visit(cells, [])
    _, order = search.best
    lab = [0] * g.n
    for position, v in enumerate(order):
        lab[v] = position
    logger.debug(f"Canonical labeling of {g!r}: {search.leaves} leaves, {len(search.automorphisms)} automorphisms")
    return lab


def canonical_form(g: Graph, colors: Sequence[int] | None = None) -> Graph:
    return g.relabel(canonical_labeling(g, colors))


def canonical_key(g: Graph, colors: Sequence[int] | None = None) -> bytes:
    """
    Isomorphism-invariant key; for uncoloured graphs it is the graph6 text
    of the canonical form.
    """
    body = graph6_encode(canonical_form(g, colors)).encode("ascii")
    if colors is None:
        return body
    counts: dict[int, int] = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    prefix = ",".join(f"{c}:{counts[c]}" for c in sorted(counts))
    return prefix.encode("ascii") + b"|" + body


def canonical_key_with_pair(
    g: Graph, u: int, v: int, excluded: Iterable[tuple[int, int]] = ()
) -> bytes:
    """
    Key that is equal for two graphs iff an isomorphism maps {u, v} onto {u', v'}.

    A pendant vertex is attached to u and to v. Each excluded pair (a, b)
    becomes a marker vertex of its own colour adjacent to a and b, so the
    key also respects a set of forbidden pairs.
    """
    if u == v:
        raise ParameterError("Distinguished pair needs two distinct vertices")
    marks = list(excluded)
    decorated = g.copy()
    first = decorated.add_vertices(2 + len(marks))
    decorated.add_edge(u, first)
    decorated.add_edge(v, first + 1)
    colors = [PLAIN] * g.n + [PENDANT, PENDANT] + [EXCLUDED_MARK] * len(marks)
    colors[u] = colors[v] = PAIR_END
    for i, (a, b) in enumerate(marks):
        decorated.add_edge(a, first + 2 + i)
        decorated.add_edge(b, first + 2 + i)
    return canonical_key(decorated, colors)


def are_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_key(a) == canonical_key(b)
