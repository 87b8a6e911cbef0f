"""
Brute-force baseline for small regular graphs.

Enumerates connected k-regular graphs by plain edge backtracking over
BFS-ordered labelings, deduplicated by canonical key. Nothing here uses
the generator's start trees, pruning or seen-set, so agreement between
the two is real evidence of the generator's completeness.
"""

import logging
import time
from itertools import combinations

import networkx as nx
from pydantic import BaseModel, Field

from cages.bounds import lower_bound
from cages.canon import canonical_key
from cages.errors import ParameterError
from cages.graphcore import Graph, graph6_decode, to_networkx

logger = logging.getLogger(__name__)

DEFAULT_CEILINGS = {3: 12, 4: 10, 5: 10}


class OracleReport(BaseModel):
    """Oracle graphs of one order split by (girth, diameter)"""

    k: int = Field(description="Degree")
    n: int = Field(description="Order")
    graphs_by_gd: dict[tuple[int, int], list[str]] = Field(
        default_factory=dict, description="Sorted canonical keys per (girth, diameter) bucket"
    )

    @property
    def total(self) -> int:
        return sum(len(keys) for keys in self.graphs_by_gd.values())


class BucketMismatch(BaseModel):
    n: int = Field(description="Order")
    g: int = Field(description="Girth")
    d: int = Field(description="Diameter")
    oracle_only: list[str] = Field(default_factory=list, description="Keys the generator missed")
    generator_only: list[str] = Field(default_factory=list, description="Keys the oracle never produced")
    reason: str = Field(default="", description="Short explanation")


class CrossValidationReport(BaseModel):
    k: int = Field(description="Degree")
    n_ceiling: int = Field(description="Largest order compared")
    buckets_checked: int = Field(default=0, description="Number of (n, g, d) buckets compared")
    graphs_compared: int = Field(default=0, description="Oracle graphs across all buckets")
    mismatches: list[BucketMismatch] = Field(default_factory=list, description="Disagreements")
    elapsed: float = Field(default=0.0, description="Wall time in seconds")

    @property
    def agreed(self) -> bool:
        return not self.mismatches


def _check_ceiling(n: int, k: int, ceiling: int | None) -> None:
    if k < 1:
        raise ParameterError(f"Degree must be positive, got {k}")
    if n * k % 2:
        raise ParameterError(f"n*k = {n * k} is odd, no {k}-regular graph on {n} vertices")
    limit = ceiling if ceiling is not None else DEFAULT_CEILINGS.get(k, 8)
    if n > limit:
        raise ParameterError(f"Oracle ceiling for k={k} is n={limit}, got n={n}")


def brute_force_regular(n: int, k: int, ceiling: int | None = None) -> list[Graph]:
    """
    Every connected k-regular graph on n vertices, one per isomorphism class.

    Vertices are saturated in label order; each picks its missing neighbours
    among later, already discovered vertices and the next undiscovered
    labels. Every connected graph has such a (breadth-first) labeling, so
    the enumeration is complete.

    Args:
        n: Order
        k: Degree
        ceiling: Largest order accepted; defaults per degree

    Returns:
        Graphs in canonical form sorted by canonical key
    """
    _check_ceiling(n, k, ceiling)
    if n <= k:
        return []
    graph = Graph(n)
    degree = [0] * n
    found: set[bytes] = set()
    leaves = 0

    def fill(v: int, discovered: int) -> None:
        nonlocal leaves
        if v == n:
            leaves += 1
            found.add(canonical_key(graph))
            return
        if v >= discovered:
            return
        need = k - degree[v]
        known = [w for w in range(v + 1, discovered) if degree[w] < k and not graph.has_edge(v, w)]
        for fresh in range(min(need, n - discovered) + 1):
            new = list(range(discovered, discovered + fresh))
            for chosen in combinations(known, need - fresh):
                partners = list(chosen) + new
                for w in partners:
                    graph.add_edge(v, w)
                    degree[w] += 1
                degree[v] = k
                fill(v + 1, discovered + fresh)
                for w in partners:
                    graph.remove_edge(v, w)
                    degree[w] -= 1
                degree[v] = k - need

    fill(0, 1)
    keys = sorted(found)
    logger.debug(f"Oracle n={n} k={k}: {leaves} labeled leaves, {len(keys)} classes")
    return [graph6_decode(key.decode("ascii")) for key in keys]


def oracle_report(k: int, n: int, ceiling: int | None = None) -> OracleReport:
    """Bucket the oracle graphs by girth and diameter, both measured with networkx"""
    buckets: dict[tuple[int, int], list[str]] = {}
    for g in brute_force_regular(n, k, ceiling):
        G = to_networkx(g)
        bucket = (int(nx.girth(G)), int(nx.diameter(G)))
        buckets.setdefault(bucket, []).append(canonical_key(g).decode("ascii"))
    return OracleReport(k=k, n=n, graphs_by_gd={gd: sorted(keys) for gd, keys in sorted(buckets.items())})


def cross_validate(
    k: int,
    n_ceiling: int,
    g_range: tuple[int, int] = (3, 6),
    d_max: int = 6,
    options=None,
    ceiling: int | None = None,
) -> CrossValidationReport:
    """
    Compare oracle buckets with generate_all for every order up to n_ceiling.

    Every (g, d) with g in g_range (inclusive) and g//2 <= d <= d_max is
    compared, plus any bucket the oracle produces outside that grid. An
    oracle graph below the lower bound is reported as a mismatch too.
    """
    from cages.generator import generate_all

    started = time.time()
    report = CrossValidationReport(k=k, n_ceiling=n_ceiling)
    grid = {(g, d) for g in range(g_range[0], g_range[1] + 1) for d in range(g // 2, d_max + 1)}
    for n in range(k + 1, n_ceiling + 1):
        if n * k % 2:
            continue
        oracle = oracle_report(k, n, ceiling)
        report.graphs_compared += oracle.total
        logger.info(f"Oracle k={k} n={n}: {oracle.total} graphs in {len(oracle.graphs_by_gd)} buckets")
        for g, d in sorted(grid | set(oracle.graphs_by_gd)):
            expected = set(oracle.graphs_by_gd.get((g, d), []))
            report.buckets_checked += 1
            if n < lower_bound(k, g, d):
                if expected:
                    report.mismatches.append(
                        BucketMismatch(n=n, g=g, d=d, oracle_only=sorted(expected), reason="below lower bound")
                    )
                continue
            result = generate_all(k, g, d, n, options)
            produced = {canonical_key(c).decode("ascii") for c in result.cages}
            if produced != expected:
                mismatch = BucketMismatch(
                    n=n,
                    g=g,
                    d=d,
                    oracle_only=sorted(expected - produced),
                    generator_only=sorted(produced - expected),
                    reason="key sets differ",
                )
                logger.error(f"Mismatch at n={n} ({k};{g},{d}): {mismatch.model_dump()}")
                report.mismatches.append(mismatch)
    report.elapsed = time.time() - started
    return report
