import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from cages.bounds import lower_bound, lower_bound_m_prime
from cages.canon import canonical_key, canonical_key_with_pair
from cages.errors import CapacityError, ParameterError, VerificationError
from cages.graphcore import (
    MAX_VERTICES,
    Graph,
    all_distances,
    diameter,
    far_vertex_filter,
    girth,
    graph6_decode,
    is_bipartite,
)

logger = logging.getLogger(__name__)

PruneRule = Callable[["SearchState"], bool]


# ==================== START TREE ====================


@dataclass(frozen=True)
class _Ball:
    """A Moore tree grown around one path vertex or one path edge"""

    centers: tuple[int, ...]
    radius: int

    def covers(self, last: int) -> range:
        """Path vertices 0..last inside the ball"""
        return range(max(0, self.centers[0] - self.radius), min(last, self.centers[-1] + self.radius) + 1)

    def depth(self, p: int) -> int:
        return max(0, self.centers[0] - p, p - self.centers[-1])


def _centered_ball(lo: int, span: int, radius_odd: int, radius_even: int) -> _Ball:
    """Ball covering path vertices lo..lo+span-1, vertex-rooted for odd span"""
    half = span // 2
    if span % 2:
        return _Ball((lo + half,), radius_odd)
    return _Ball((lo + half - 1, lo + half), radius_even)


def _start_balls(k: int, g: int, d: int, fallback: bool) -> list[_Ball]:
    t = g // 2
    recipe_girth = g - 1 if g % 2 == 0 and d == g - 1 else g
    tr = recipe_girth // 2
    odd = recipe_girth % 2 == 1

    balls = [_Ball((0,), tr) if odd else _Ball((0, 1), tr - 1)]
    if d <= 2 * tr:
        if d - tr - 1 >= 0:
            balls.append(_Ball((d,), d - tr - 1))
        return balls

    balls.append(_Ball((d,), tr) if odd else _Ball((d - 1, d), tr - 1))
    if fallback:
        return balls
    r, s = divmod(d - 2 * tr - 1, recipe_girth)
    for j in range(r):
        lo = tr + 1 + j * recipe_girth
        balls.append(_centered_ball(lo, recipe_girth, tr, tr - 1))
    if s:
        lo = tr + 1 + r * recipe_girth
        balls.append(_centered_ball(lo, s, s // 2, s // 2 - 1))
    logger.debug(f"Start tree balls for ({k};{g},{d}) with t={t}: {balls}")
    return balls


def make_start_tree(k: int, g: int, d: int, fallback: bool = False) -> tuple[Graph, int, int]:
    """
    Build the tree every (k;g,d)-graph contains around a diametral pair.

    A u-v path of length d is covered by vertex-disjoint Moore trees
    rooted on path vertices or path edges. In fallback mode only the
    trees at u and v are grown.

    Returns:
        (tree, u, v) with u = 0 and v = d
    """
    if k < 3 or g < 3 or d < g // 2:
        raise ParameterError(f"No start tree for ({k};{g},{d})")
    tree = Graph(d + 1, ((i, i + 1) for i in range(d)))
    for ball in _start_balls(k, g, d, fallback):
        covered = ball.covers(d)
        for p in covered:
            delta = ball.depth(p)
            if delta >= ball.radius:
                continue
            in_ball = sum(1 for q in (p - 1, p + 1) if q in covered)
            for _ in range(k - in_ball):
                _grow_subtree(tree, p, k, ball.radius - delta - 1)
    return tree, 0, d


def _grow_subtree(tree: Graph, parent: int, k: int, height: int) -> None:
    child = tree.add_vertices(1)
    tree.add_edge(parent, child)
    if height > 0:
        for _ in range(k - 1):
            _grow_subtree(tree, child, k, height - 1)


# ==================== SEARCH STATE ====================


@dataclass
class SearchState:
    """A partial graph together with the pairs that may still be added"""

    graph: Graph
    k: int
    g: int
    d: int
    u: int
    v: int
    dist: np.ndarray  # all-pairs distances, inf between components
    degrees: np.ndarray
    e_add: np.ndarray  # shape (m, 2), rows (a, b) with a < b, sorted
    excluded: np.ndarray  # tried sibling pairs, shape (x, 2)
    depth: int = 0
    seen: set[bytes] = field(default_factory=set, repr=False)

    @classmethod
    def from_graph(cls, graph: Graph, k: int, g: int, d: int, u: int, v: int) -> "SearchState":
        dist = np.array(all_distances(graph), dtype=float).reshape(graph.n, graph.n)
        state = cls(
            graph=graph,
            k=k,
            g=g,
            d=d,
            u=u,
            v=v,
            dist=dist,
            degrees=np.array(graph.degrees(), dtype=int),
            e_add=_no_pairs(),
            excluded=_no_pairs(),
        )
        state.e_add = _pairs(valid_addable_edges(state))
        return state

    def pair_mask(self, pairs: np.ndarray) -> np.ndarray:
        """Which pairs currently satisfy the degree, girth and u-v distance constraints"""
        if not len(pairs):
            return np.zeros(0, dtype=bool)
        a, b = pairs[:, 0], pairs[:, 1]
        D = self.dist
        through = np.minimum(D[self.u, a] + 1 + D[b, self.v], D[self.u, b] + 1 + D[a, self.v])
        return (
            (self.degrees[a] < self.k)
            & (self.degrees[b] < self.k)
            & (D[a, b] >= self.g - 1)
            & (through >= self.d)
        )

    def addable_counts(self) -> np.ndarray:
        return np.bincount(self.e_add.ravel(), minlength=self.graph.n)

    def deficiency(self) -> np.ndarray:
        return self.k - self.degrees

    def with_edge(self, a: int, b: int, skipped: np.ndarray) -> "SearchState":
        """Child state after adding a-b, forbidding the earlier siblings in `skipped`"""
        graph = self.graph.copy()
        graph.add_edge(a, b)
        D = self.dist
        dist = np.minimum(
            D,
            np.minimum(D[:, a, None] + 1 + D[None, b, :], D[:, b, None] + 1 + D[None, a, :]),
        )
        degrees = self.degrees.copy()
        degrees[a] += 1
        degrees[b] += 1
        child = SearchState(
            graph=graph,
            k=self.k,
            g=self.g,
            d=self.d,
            u=self.u,
            v=self.v,
            dist=dist,
            degrees=degrees,
            e_add=self.e_add,
            excluded=np.concatenate([self.excluded, skipped]) if len(skipped) else self.excluded,
            depth=self.depth + 1,
            seen=self.seen,
        )
        keep = child.pair_mask(self.e_add)
        keep &= ~((self.e_add[:, 0] == a) & (self.e_add[:, 1] == b))
        if len(skipped):
            keep &= ~_row_membership(self.e_add, skipped)
        child.e_add = self.e_add[keep]
        child.excluded = child.excluded[child.pair_mask(child.excluded)]
        return child

    def snapshot(self) -> tuple:
        return (self.graph.rows, self.e_add.tolist(), self.excluded.tolist(), self.depth)


def _no_pairs() -> np.ndarray:
    return np.zeros((0, 2), dtype=int)


def _pairs(pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    array = np.array(sorted(pairs), dtype=int)
    return array.reshape(-1, 2)


def _row_membership(pairs: np.ndarray, subset: np.ndarray) -> np.ndarray:
    n = int(max(pairs.max(initial=0), subset.max(initial=0))) + 1
    codes = pairs[:, 0] * n + pairs[:, 1]
    return np.isin(codes, subset[:, 0] * n + subset[:, 1])


def valid_addable_edges(state: SearchState) -> list[tuple[int, int]]:
    """Every pair that can be added without breaking degree, girth or u-v distance"""
    graph = state.graph
    dist = all_distances(graph)
    du, dv = dist[state.u], dist[state.v]
    valid = []
    for a in range(graph.n):
        if graph.degree(a) >= state.k:
            continue
        for b in range(a + 1, graph.n):
            if graph.degree(b) >= state.k or dist[a][b] < state.g - 1:
                continue
            if min(du[a] + 1 + dv[b], du[b] + 1 + dv[a]) >= state.d:
                valid.append((a, b))
    return valid


def choose_active_vertex(state: SearchState) -> int:
    """Deficient vertex with the fewest addable edges, smallest index on ties"""
    deficient = state.degrees < state.k
    if not deficient.any():
        raise ParameterError("No deficient vertex to extend")
    counts = np.where(deficient, state.addable_counts(), np.iinfo(int).max)
    return int(np.argmin(counts))


# ==================== PRUNING ====================


def _deficit_rule(state: SearchState) -> bool:
    need = state.deficiency()
    return bool(((need > 0) & (state.addable_counts() < need)).any())


def _parity_rule(state: SearchState) -> bool:
    return int(state.deficiency().sum()) % 2 == 1


def _capacity_rule(state: SearchState) -> bool:
    return int(state.deficiency().sum()) > 2 * len(state.e_add)


FEASIBILITY_RULES: dict[str, PruneRule] = {
    "deficit": _deficit_rule,
    "parity": _parity_rule,
    "capacity": _capacity_rule,
}


def feasibility_prune(state: SearchState) -> bool:
    """True when the state provably has no completion"""
    return any(rule(state) for rule in FEASIBILITY_RULES.values())


class FarVertexRule:
    """
    Optional rule: prune when a deficient vertex has nothing at distance >= `distance`.

    Only sound for callers who know every deficient vertex of a completion
    must reach that far; not part of the default rule set.
    """

    def __init__(self, distance: int):
        self.distance = distance
        self.__name__ = f"far_vertex_{distance}"

    def __call__(self, state: SearchState) -> bool:
        return not far_vertex_filter(state.graph, state.k, self.distance)


def far_vertex_rule(distance: int) -> FarVertexRule:
    return FarVertexRule(distance)


# ==================== RESULTS ====================


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    memo_size: int = 0
    leaves: int = 0
    prunes: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.memo_hits += other.memo_hits
        self.memo_size += other.memo_size
        self.leaves += other.leaves
        for name, count in other.prunes.items():
            self.prunes[name] = self.prunes.get(name, 0) + count


@dataclass
class GenerationResult:
    """All (k;g,d)-graphs of one order, pairwise non-isomorphic"""

    k: int
    g: int
    d: int
    order: int
    cages: list[Graph]
    exhaustive: bool
    stats: SearchStats
    diagnostic: str | None = None

    @property
    def count(self) -> int:
        return len(self.cages)

    @property
    def all_bipartite(self) -> bool | None:
        if not self.cages:
            return None
        return all(is_bipartite(c) for c in self.cages)


class _BudgetExhausted(Exception):
    pass


@dataclass
class SearchOptions:
    use_memo: bool = True
    use_prune: bool = True
    memo_cap: int = 1_000_000
    fallback_tree: bool = False
    workers: int = 1
    split_depth: int = 4
    extra_rules: Sequence[PruneRule] = ()


class _Search:
    def __init__(
        self,
        options: SearchOptions,
        deadline: float | None,
        observer: Callable[[SearchState], None] | None = None,
        split_depth: int | None = None,
    ):
        self.options = options
        self.deadline = deadline
        self.observer = observer
        self.split_depth = split_depth
        self.stats = SearchStats()
        self.found: dict[bytes, None] = {}
        self.frontier: list[tuple] = []

    def _count(self, name: str) -> None:
        self.stats.prunes[name] = self.stats.prunes.get(name, 0) + 1

    def _pruned(self, state: SearchState) -> bool:
        if self.options.use_prune:
            for name, rule in FEASIBILITY_RULES.items():
                if rule(state):
                    self._count(name)
                    return True
        for rule in self.options.extra_rules:
            if rule(state):
                self._count(getattr(rule, "__name__", type(rule).__name__))
                return True
        return False

    def _accept(self, state: SearchState) -> None:
        self.stats.leaves += 1
        graph = state.graph
        if girth(graph) != state.g or diameter(graph) != state.d:
            return
        self.found.setdefault(canonical_key(graph))

    def expand(self, state: SearchState) -> None:
        self.stats.nodes += 1
        if self.deadline is not None and self.stats.nodes % 64 == 0 and time.time() > self.deadline:
            raise _BudgetExhausted
        if self.observer is not None:
            self.observer(state)
        if not (state.degrees < state.k).any():
            self._accept(state)
            return
        if self._pruned(state):
            return
        if self.options.use_memo:
            key = canonical_key_with_pair(
                state.graph, state.u, state.v, map(tuple, state.excluded.tolist())
            )
            if key in state.seen:
                self.stats.memo_hits += 1
                return
            if len(state.seen) < self.options.memo_cap:
                state.seen.add(key)
        if self.split_depth is not None and state.depth == self.split_depth:
            self.frontier.append(state.snapshot())
            return

        x = choose_active_vertex(state)
        at_x = state.e_add[(state.e_add[:, 0] == x) | (state.e_add[:, 1] == x)]
        partners = np.where(at_x[:, 0] == x, at_x[:, 1], at_x[:, 0])
        at_x = at_x[np.argsort(partners, kind="stable")]
        for i, (a, b) in enumerate(at_x.tolist()):
            self.expand(state.with_edge(a, b, at_x[:i]))


def _check_request(k: int, g: int, d: int, n: int) -> str | None:
    if k < 3 or g < 3 or d < g // 2:
        raise ParameterError(f"Unsupported triple ({k};{g},{d})")
    if n > MAX_VERTICES:
        raise CapacityError(f"Order {n} exceeds capacity {MAX_VERTICES}")
    if n * k % 2:
        return f"n*k = {n * k} is odd, no {k}-regular graph on {n} vertices"
    bound = lower_bound(k, g, d)
    if n < bound:
        return f"n = {n} is below the lower bound {bound}"
    return None


def _initial_state(k: int, g: int, d: int, n: int, fallback: bool) -> SearchState:
    tree, u, v = make_start_tree(k, g, d, fallback=fallback)
    if tree.n > n:
        raise VerificationError(f"Start tree has {tree.n} vertices, more than n = {n}")
    tree.add_vertices(n - tree.n)
    return SearchState.from_graph(tree, k, g, d, u, v)


def _state_from_snapshot(k: int, g: int, d: int, u: int, v: int, snapshot: tuple) -> SearchState:
    rows, e_add, excluded, depth = snapshot
    graph = Graph.from_rows(rows)
    state = SearchState.from_graph(graph, k, g, d, u, v)
    state.e_add = _pairs(map(tuple, e_add))
    state.excluded = _pairs(map(tuple, excluded))
    state.depth = depth
    return state


def _run_subtree(
    params: tuple[int, int, int, int, int], snapshot: tuple, options: SearchOptions, deadline: float | None
) -> tuple[list[bytes], SearchStats, bool]:
    """Worker entry point: exhaust one frontier state with a private seen-set"""
    k, g, d, u, v = params
    search = _Search(options, deadline)
    state = _state_from_snapshot(k, g, d, u, v, snapshot)
    complete = True
    try:
        search.expand(state)
    except _BudgetExhausted:
        complete = False
    search.stats.memo_size = len(state.seen)
    return list(search.found), search.stats, complete


def generate_all(
    k: int,
    g: int,
    d: int,
    n: int,
    options: SearchOptions | None = None,
    budget_seconds: float | None = None,
    observer: Callable[[SearchState], None] | None = None,
) -> GenerationResult:
    """
    Generate every (k;g,d)-graph on n vertices up to isomorphism.

    Args:
        k, g, d: Degree, girth and diameter
        n: Order of the graphs
        options: Search tunables (memo, pruning, start tree, parallelism)
        budget_seconds: Wall-clock budget; when exceeded the result is not exhaustive
        observer: Called with every expanded state (serial part only)

    Returns:
        GenerationResult with cages sorted by canonical key
    """
    options = options or SearchOptions()
    started = time.time()
    diagnostic = _check_request(k, g, d, n)
    if diagnostic:
        logger.info(f"({k};{g},{d}) n={n}: {diagnostic}")
        return GenerationResult(k, g, d, n, [], True, SearchStats(), diagnostic)

    deadline = started + budget_seconds if budget_seconds is not None else None
    state = _initial_state(k, g, d, n, options.fallback_tree)
    parallel = options.workers > 1
    search = _Search(options, deadline, observer, options.split_depth if parallel else None)
    logger.info(
        f"Generating ({k};{g},{d}) graphs on {n} vertices from a tree of "
        f"{n - int((state.degrees == 0).sum())} vertices, {len(state.e_add)} addable pairs"
    )

    exhaustive = True
    try:
        search.expand(state)
    except _BudgetExhausted:
        exhaustive = False

    if parallel and search.frontier and exhaustive:
        logger.info(f"Dispatching {len(search.frontier)} subproblems to {options.workers} workers")
        params = (k, g, d, state.u, state.v)
        worker_options = SearchOptions(
            use_memo=options.use_memo,
            use_prune=options.use_prune,
            memo_cap=options.memo_cap,
            extra_rules=options.extra_rules,
        )
        with ProcessPoolExecutor(max_workers=options.workers) as pool:
            futures = [
                pool.submit(_run_subtree, params, snapshot, worker_options, deadline)
                for snapshot in search.frontier
            ]
            for future in futures:
                keys, stats, complete = future.result()
                search.found.update(dict.fromkeys(keys))
                search.stats.merge(stats)
                exhaustive &= complete

    keys = sorted(search.found)
    cages = [graph6_decode(key.decode("ascii")) for key in keys]
    for cage in cages:
        if cage.degrees() != [k] * n or girth(cage) != g or diameter(cage) != d:
            raise VerificationError(f"Generated graph {key_text(cage)} is not a ({k};{g},{d})-graph")

    search.stats.memo_size += len(state.seen)
    search.stats.wall_time = time.time() - started
    logger.info(
        f"({k};{g},{d}) n={n}: {len(cages)} graphs, {search.stats.nodes} nodes, "
        f"{search.stats.memo_hits} memo hits, prunes {search.stats.prunes}, "
        f"{search.stats.wall_time:.2f}s{'' if exhaustive else ' (budget exhausted)'}"
    )
    return GenerationResult(
        k, g, d, n, cages, exhaustive, search.stats, None if exhaustive else "budget exhausted"
    )


def key_text(g: Graph) -> str:
    return canonical_key(g).decode("ascii")


def find_cage(
    k: int,
    g: int,
    d: int,
    n_max: int | None = None,
    options: SearchOptions | None = None,
    budget_seconds: float | None = None,
) -> tuple[int | None, GenerationResult | None]:
    """
    Scan orders upward from the lower bound for the smallest non-empty one.

    Returns:
        (n, result) for the cage order, or (None, last result) when n_max or
        the budget is reached first
    """
    n = lower_bound(k, g, d)
    if n * k % 2:
        n += 1
    n_max = n_max if n_max is not None else MAX_VERTICES
    deadline = time.time() + budget_seconds if budget_seconds is not None else None
    result = None
    while n <= n_max:
        remaining = None if deadline is None else deadline - time.time()
        if remaining is not None and remaining <= 0:
            break
        result = generate_all(k, g, d, n, options, budget_seconds=remaining)
        if result.cages:
            return n, result
        if not result.exhaustive:
            logger.warning(f"({k};{g},{d}) unresolved at n={n}: budget exhausted")
            return None, result
        n += 2 if k % 2 else 1
    logger.warning(f"({k};{g},{d}) unresolved up to n={n_max}")
    return None, result


def start_tree_order(k: int, g: int, d: int, fallback: bool = False) -> int:
    return make_start_tree(k, g, d, fallback)[0].n


def expected_start_tree_order(k: int, g: int, d: int) -> int:
    """Order the optimized start tree attains"""
    if g % 2 == 0 and d == g - 1:
        return lower_bound_m_prime(k, g - 1, d)
    return lower_bound_m_prime(k, g, d)
