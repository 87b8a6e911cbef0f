import argparse
import logging
import sys
import time
from pathlib import Path

from dotenv import load_dotenv
from langgraph.checkpoint.memory import MemorySaver

from cages.bounds import bounds_report, lower_bound
from cages.constructions import (
    build_3_4_extremal,
    build_3_5_extremal,
    build_k_3_3,
    chain_construction,
    ratio_bounds,
)
from cages.errors import CageError, ParameterError, VerificationError
from cages.fixtures import reference_cage, repeatable_block_example
from cages.generator import SearchOptions, find_cage, generate_all
from cages.graphcore import Graph, diameter, girth, graph6_encode, is_kgd_graph, read_graph6_file, write_graph6_file
from cages.oracle import cross_validate
from cages.repeatable import (
    RepeatableBlock,
    complete_repeatable_to_kgd,
    double_repeatable,
    splice_out_repeatable,
)
from catalog.coordinator import create_table_pipeline, initial_table_state, thread_id
from catalog.fetch import ReferenceGraphClient
from catalog.records import append_record, record_from_result
from config import config

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)

load_dotenv()

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3

CONSTRUCTIONS = ("k33", "extremal-3-4", "extremal-3-5", "chain", "repeatable-demo")


def search_options(args: argparse.Namespace) -> SearchOptions:
    return SearchOptions(
        use_memo=not args.no_memo,
        use_prune=not args.no_prune,
        memo_cap=args.memo_cap,
        fallback_tree=args.fallback_tree,
        workers=args.workers,
        split_depth=args.split_depth,
    )


def emit_graphs(graphs: list[Graph], output: str | None) -> None:
    """Write graph6 lines to the output file, or to stdout"""
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        written = write_graph6_file(output, graphs)
        print(f"[*] Wrote {written} graph6 line(s) to: {output}")
    else:
        for g in graphs:
            print(graph6_encode(g))


def _check_order(n: int) -> None:
    if n > config.max_vertices:
        raise ParameterError(f"Order {n} exceeds the configured capacity {config.max_vertices}")


# ==================== COMMANDS ====================


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds_report(args.k, args.g, args.d)
    print(f"[*] Bounds for ({report.k};{report.g},{report.d})")
    print(f"    M(k,g)        = {report.moore_kg}")
    print(f"    M'(k;g,d)     = {report.m_prime}")
    if report.m_double_prime is not None:
        print(f"    M''(k;g,d)    = {report.m_double_prime}")
    print(f"    lower bound   = {report.combined}")
    if report.exact_order is not None:
        print(f"    exact order   = {report.exact_order}")
    if report.exact_count is not None:
        print(f"    exact count   = {report.exact_count}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    _check_order(args.n)
    result = generate_all(args.k, args.g, args.d, args.n, search_options(args), budget_seconds=args.budget_seconds)
    if not result.exhaustive:
        print(f"[!] Budget exhausted: {result.count} graph(s) found so far, set is incomplete")
    if result.diagnostic and result.exhaustive:
        print(f"[!] {result.diagnostic}")
    if not result.cages:
        print(f"[!] No ({args.k};{args.g},{args.d})-graph on {args.n} vertices")
        return EXIT_NOT_FOUND
    print(f"[OK] {result.count} ({args.k};{args.g},{args.d})-graph(s) on {args.n} vertices")
    emit_graphs(result.cages, args.output)
    return EXIT_OK


def cmd_cage(args: argparse.Namespace) -> int:
    n_max = min(args.n_max, config.max_vertices) if args.n_max else config.max_vertices
    started = time.time()
    n, result = find_cage(args.k, args.g, args.d, n_max, search_options(args), budget_seconds=args.budget_seconds)
    lower = lower_bound(args.k, args.g, args.d)
    record = record_from_result(args.catalog, result if n else None, args.k, args.g, args.d, lower, time.time() - started)
    append_record(args.catalog, record)
    if n is None:
        print(f"[!] ({args.k};{args.g},{args.d}) unresolved up to n={n_max}")
        return EXIT_NOT_FOUND
    print(f"[OK] n({args.k};{args.g},{args.d}) = {n}, {result.count} cage(s), all bipartite: {result.all_bipartite}")
    print(f"[*] Catalog entry: {Path(args.catalog) / record.graph_file}")
    emit_graphs(result.cages, args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    graphs = read_graph6_file(args.file)
    if not graphs:
        print(f"[!] No graphs in {args.file}")
        return EXIT_NOT_FOUND
    failures = 0
    for i, g in enumerate(graphs):
        if is_kgd_graph(g, args.k, args.g, args.d):
            print(f"[OK] graph {i}: n={g.n}")
        else:
            failures += 1
            print(f"[!] graph {i}: n={g.n}, girth {girth(g)}, diameter {diameter(g)}, degrees {sorted(set(g.degrees()))}")
    if failures:
        print(f"[!] {failures} of {len(graphs)} graph(s) are not ({args.k};{args.g},{args.d})-graphs")
        return EXIT_NOT_FOUND
    return EXIT_OK


def _construct_chain(params: list[int]) -> Graph:
    if len(params) != 3:
        raise ParameterError("chain needs k g r")
    k, g, r = params
    aux = reference_cage(k, g + 1 if k % 2 else g + 2)
    result = chain_construction(k, g, r, reference_cage(k, g), aux)
    print(f"[*] Chain of {r} copies: measured diameter {result.diameter}")
    return result.graph


def _construct_repeatable_demo(params: list[int]) -> Graph:
    graph, source = repeatable_block_example()
    block = RepeatableBlock.from_source(graph, source, 3, 4)
    doubled = double_repeatable(block)
    spliced = splice_out_repeatable(doubled.graph, doubled.layers, 0, block.d, 3, 4)
    bound = ratio_bounds(3, 4, n_kg=6, block=block)
    print(f"[*] Block layer sizes {block.layers.sizes}, doubled {doubled.layers.sizes}")
    print(f"[*] Splice round trip: {doubled.graph.n} -> {spliced.n} vertices")
    print(f"[*] Slope bounds for (3,4): {bound.lower} <= f <= {bound.upper}")
    return complete_repeatable_to_kgd(block)


def cmd_construct(args: argparse.Namespace) -> int:
    params = args.params
    if args.kind == "k33":
        if len(params) != 1:
            raise ParameterError("k33 needs k")
        graph = build_k_3_3(params[0])
    elif args.kind == "extremal-3-4":
        if len(params) != 1:
            raise ParameterError("extremal-3-4 needs d")
        graph = build_3_4_extremal(params[0])
    elif args.kind == "extremal-3-5":
        if len(params) != 1:
            raise ParameterError("extremal-3-5 needs d")
        graph = build_3_5_extremal(params[0])
    elif args.kind == "chain":
        graph = _construct_chain(params)
    else:
        graph = _construct_repeatable_demo(params)
    print(f"[OK] {args.kind}: {graph.n} vertices, girth {girth(graph)}, diameter {diameter(graph)}")
    emit_graphs([graph], args.output)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    report = cross_validate(
        args.k,
        args.n_ceiling,
        options=search_options(args),
        ceiling=config.oracle_ceiling(args.k),
    )
    print(f"[*] Compared {report.buckets_checked} buckets, {report.graphs_compared} oracle graphs")
    if report.agreed:
        print(f"[OK] Generator and oracle agree for k={args.k}, n <= {args.n_ceiling}")
        return EXIT_OK
    for mismatch in report.mismatches:
        print(
            f"[!] n={mismatch.n} ({args.k};{mismatch.g},{mismatch.d}) {mismatch.reason}: "
            f"oracle only {mismatch.oracle_only}, generator only {mismatch.generator_only}"
        )
    return EXIT_VERIFICATION


def run_table(
    k: int,
    g: int,
    d_values: list[int],
    catalog_dir: str,
    budget_seconds: float | None = None,
    search: dict | None = None,
    output_prefix: str | None = None,
    use_checkpointing: bool = False,
) -> dict:
    """
    Reproduce one table: bounds, cage search, verification and rendering.

    Returns:
        The final pipeline state
    """
    checkpointer = MemorySaver() if use_checkpointing else None
    pipeline = create_table_pipeline(checkpointer=checkpointer)
    state = initial_table_state(
        k, g, d_values, catalog_dir, budget_seconds=budget_seconds, search=search, output_prefix=output_prefix
    )
    run_config = {"configurable": {"thread_id": thread_id(k, g)}} if use_checkpointing else {}

    print(f"[*] Reproducing table for k={k}, g={g}, d in {d_values}\n")
    final_state = dict(state)
    for event in pipeline.stream(state, run_config):
        for node_name, node_output in event.items():
            final_state.update(node_output or {})
            if node_name == "supervisor":
                phase = (node_output or {}).get("current_phase", "")
                if phase:
                    print(f"[->] Moving to phase: {phase}")
            elif node_name == "bounds_node":
                print(f"[OK] Bounds computed for {len(node_output.get('bounds', []))} rows")
            elif node_name == "search_node":
                resolved = sum(1 for r in node_output.get("records", []) if r.get("order") is not None)
                print(f"[OK] Search complete: {resolved} of {len(node_output.get('records', []))} rows resolved")
            elif node_name == "verify_node":
                print("[OK] Stored graphs verified")
            elif node_name == "render_node":
                print("[OK] Table rendered")
    return final_state


def cmd_table(args: argparse.Namespace) -> int:
    d_values = list(range(args.d_from, args.d_to + 1))
    search = {
        "use_memo": not args.no_memo,
        "use_prune": not args.no_prune,
        "memo_cap": args.memo_cap,
        "fallback_tree": args.fallback_tree,
        "workers": args.workers,
        "split_depth": args.split_depth,
    }
    final_state = run_table(
        args.k,
        args.g,
        d_values,
        args.catalog,
        budget_seconds=args.budget_seconds,
        search=search,
        output_prefix=args.output,
        use_checkpointing=args.checkpoint,
    )
    print("\n" + final_state.get("text", ""))
    for error in final_state.get("errors", []):
        print(f"[!] {error}")
    if args.output:
        print(f"[*] Table saved to: {args.output}.csv and {args.output}.txt")
    return EXIT_OK


def cmd_fetch(args: argparse.Namespace) -> int:
    client = ReferenceGraphClient(config.hog_url_template, config.cache_dir, config.http_timeout)
    graph = client.fetch(args.id, refresh=args.refresh)
    degrees = sorted(set(graph.degrees()))
    print(f"[OK] Graph {args.id}: {graph.n} vertices, degrees {degrees}, girth {girth(graph)}, diameter {diameter(graph)}")
    emit_graphs([graph], args.output)
    return EXIT_OK


# ==================== PARSER ====================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Debug logging")
    common.add_argument("--budget-seconds", type=float, default=config.budget_seconds, help="Wall-clock budget")
    common.add_argument("--workers", type=int, default=config.workers, help="Worker processes for the search")
    common.add_argument("--split-depth", type=int, default=config.split_depth, help="Depth at which work is split")
    common.add_argument("--memo-cap", type=int, default=config.memo_cap, help="Maximum seen-set entries")
    common.add_argument("--no-memo", action="store_true", help="Disable the seen-set")
    common.add_argument("--no-prune", action="store_true", help="Disable feasibility pruning")
    common.add_argument("--fallback-tree", action="store_true", default=config.fallback_tree, help="Minimal start tree")
    common.add_argument("--catalog", default=config.catalog_dir, help="Catalog directory")
    common.add_argument("--output", default=None, help="Output file (or prefix for tables)")

    parser = argparse.ArgumentParser(description="Girth-diameter cages: bounds, generation and constructions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="Lower bounds and closed forms")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("generate", parents=[common], help="All (k;g,d)-graphs on n vertices")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("cage", parents=[common], help="Smallest order and all cages")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--n-max", type=int, default=None, help="Largest order to try")
    p.set_defaults(handler=cmd_cage)

    p = sub.add_parser("verify", parents=[common], help="Check graphs in a graph6 file")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="Build a graph from an explicit construction")
    p.add_argument("kind", choices=CONSTRUCTIONS)
    p.add_argument("params", type=int, nargs="*")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("oracle-check", parents=[common], help="Cross-validate against brute force")
    p.add_argument("k", type=int)
    p.add_argument("n_ceiling", type=int)
    p.set_defaults(handler=cmd_oracle_check)

    p = sub.add_parser("table", parents=[common], help="Reproduce a table of cage values")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.add_argument("d_from", type=int)
    p.add_argument("d_to", type=int)
    p.add_argument("--checkpoint", action="store_true", help="Enable state persistence")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("fetch", parents=[common], help="Download a House of Graphs graph")
    p.add_argument("id", type=int)
    p.add_argument("--refresh", action="store_true", help="Ignore the local cache")
    p.set_defaults(handler=cmd_fetch)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        config.validate()
        return args.handler(args)

    except KeyboardInterrupt:
        print("\n[!] Interrupted by user")
        return 1
    except ParameterError as e:
        print(f"[!] Invalid parameters: {e}")
        return EXIT_USAGE
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        print(f"[!] Verification failed: {e}")
        return EXIT_VERIFICATION
    except CageError as e:
        print(f"[!] Error: {e}")
        return 1
    except ValueError as e:
        print(f"[!] Configuration error: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.exception("Command failed")
        print(f"\n[!] Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
