"""Command-line entry point: ``simprune --db data.nt --query q.rq --emit-pruned out.nt``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import OracleRefusal, ParseError, UnsupportedFeature, VerificationFailure
from .graphstore import GraphDatabase, load_ntriples, write_ntriples
from .oracle import DEFAULT_MAX_NODES, bindings, enumerate_matches, required_triples
from .prune import PruneReport, prune_query
from .solver import Strategy
from .sparql import parse_query

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_PARSE = 4
EXIT_UNSUPPORTED = 5
EXIT_VERIFY = 6
EXIT_ORACLE_REFUSAL = 7


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simprune",
        description="Prune an N-Triples database to the triples that can contribute to a query's matches.",
    )
    p.add_argument("--db", required=True, help="N-Triples database file")
    p.add_argument("--query", required=True, action="append", help="query file (repeatable)")
    p.add_argument("--algorithm", choices=("soi", "ma", "naive"), default="soi")
    p.add_argument("--order", choices=("sparsity", "textual"), default="sparsity")
    p.add_argument("--eval", choices=("auto", "row", "col"), default="auto", dest="eval_mode")
    p.add_argument("--emit-pruned", metavar="PATH", help="write retained triples as N-Triples")
    p.add_argument("--emit-candidates", metavar="PATH", help="write candidate nodes per variable as JSON")
    p.add_argument("--stats", metavar="PATH", help="write per-query statistics as JSON")
    p.add_argument("--verify", action="store_true", help="cross-check against the brute-force oracle")
    p.add_argument("--oracle-max-nodes", type=int, default=DEFAULT_MAX_NODES, metavar="N")
    return p


def output_path(base: str, stem: str, many: bool) -> Path:
    """With several queries, ``out.nt`` becomes ``out.<query stem>.nt``."""
    path = Path(base)
    if not many:
        return path
    return path.with_name(f"{path.stem}.{stem}{path.suffix}")


def verify(report: PruneReport, ast, db: GraphDatabase, max_nodes: int) -> dict:
    matches = enumerate_matches(ast, db, max_nodes=max_nodes)
    bound = bindings(matches)
    missing = {
        v: sorted(nodes - set(report.candidates[v].indices()))
        for v, nodes in bound.items()
        if not nodes <= set(report.candidates[v].indices())
    }
    required = required_triples(ast, db, max_nodes=max_nodes)
    lost = required - report.pruned
    if missing or lost:
        raise VerificationFailure(
            f"{report.query_id}: unsound result, {sum(map(len, missing.values()))} bindings and "
            f"{len(lost)} required triples missing"
        )
    extra = sum(report.candidates[v].popcount() - len(bound.get(v, ())) for v in report.candidates)
    return {
        "matches": len(matches),
        "required_triples": len(required),
        "overapproximation": extra > 0 or len(report.pruned) > len(required),
        "extra_candidates": extra,
        "extra_triples": len(report.pruned) - len(required),
    }


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.oracle_max_nodes < 0:
        print("simprune: --oracle-max-nodes must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    strategy = Strategy(args.order, args.eval_mode)
    try:
        for path in [args.db, *args.query]:
            if not Path(path).is_file():
                raise FileNotFoundError(path)
        db = load_ntriples(args.db)
        queries = [(Path(q).stem, parse_query(Path(q).read_text(encoding="utf-8"))) for q in args.query]
        many = len(queries) > 1
        summaries, candidates = [], {}
        for stem, ast in queries:
            report = prune_query(ast, db, stem, args.algorithm, strategy, args.oracle_max_nodes)
            if args.verify:
                report.verified = verify(report, ast, db, args.oracle_max_nodes)
                note = " (over-approximation: candidates exceed match bindings)" if report.verified["overapproximation"] else ""
                print(f"{stem}: verified sound{note}", file=sys.stderr)
            summaries.append(report.summary())
            candidates[stem] = {v: [db.term(i) for i in vec.indices()] for v, vec in sorted(report.candidates.items())}
            if args.emit_pruned:
                with open(output_path(args.emit_pruned, stem, many), "w", encoding="utf-8", newline="\n") as fh:
                    write_ntriples(db, sorted(report.pruned), fh)
            print(f"{stem}: {report.pruned_count}/{db.triple_count} triples retained", file=sys.stderr)
        if args.stats:
            Path(args.stats).write_text(json.dumps(summaries, indent=2) + "\n", encoding="utf-8")
        if args.emit_candidates:
            Path(args.emit_candidates).write_text(json.dumps(candidates, indent=2) + "\n", encoding="utf-8")
    except FileNotFoundError as exc:
        print(f"simprune: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except UnsupportedFeature as exc:
        print(f"simprune: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ParseError as exc:
        print(f"simprune: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except VerificationFailure as exc:
        print(f"simprune: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OracleRefusal as exc:
        print(f"simprune: {exc}", file=sys.stderr)
        return EXIT_ORACLE_REFUSAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
