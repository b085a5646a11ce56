"""``broker`` command: load, query, generate, serve.

Exit codes: 0 success (for ``query``: at least one provider), 1 empty
query result, 2 any error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .broker import BrokerRequest, BrokerResponse, broker_query, response_to_json
from .errors import BrokerError
from .generate import GenSpec, generate
from .graph import SocialGraph
from .registry import Registry, ServiceRequirements, canonical_key, parse_category
from .requirements import parse_social_requirement
from .server import load_config, serve
from .snapshot import KINDS, apply_records, load_snapshot, parse_lines, write_snapshot

EXIT_OK, EXIT_EMPTY, EXIT_ERROR = 0, 1, 2


def _open_stores(path: str) -> tuple[Registry, SocialGraph]:
    if Path(path).exists():
        return load_snapshot(path)
    return Registry(), SocialGraph()


def cmd_load(snapshot_path: str, input_path: str) -> dict[str, int]:
    """Merge ``input_path`` into the snapshot; nothing is written on error."""
    registry, graph = _open_stores(snapshot_path)
    records = parse_lines(Path(input_path).read_text(encoding="utf-8").splitlines())
    counts = apply_records(records, registry, graph)
    write_snapshot(snapshot_path, registry, graph)
    return counts


def cmd_query(
    snapshot_path: str,
    consumer: str,
    categories: Sequence[str] = (),
    social_text: str = "",
    keywords: Sequence[str] = (),
    tmodels: Sequence[str] = (),
) -> BrokerResponse:
    registry, graph = load_snapshot(snapshot_path)
    request = BrokerRequest(
        consumer=canonical_key(consumer),
        service_req=ServiceRequirements(
            categories=[parse_category(c, registry) for c in categories],
            keywords=list(keywords),
            required_tmodels=[canonical_key(t) for t in tmodels],
        ),
        social_req=parse_social_requirement(social_text),
    )
    return broker_query(request, registry, graph)


def cmd_generate(spec: GenSpec, out_path: str) -> dict[str, int]:
    registry, graph = generate(spec)
    write_snapshot(out_path, registry, graph)
    return {**registry.counts(), "actor": len(graph), "edge": graph.edge_count()}


def format_value(value: float | int | None) -> str:
    if value is None:
        return "unreachable"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_table(response: BrokerResponse) -> str:
    header = ("RANK", "PROVIDER", "SERVICES", "SCORES")
    rows = [
        (
            str(p.rank),
            p.provider.name,
            ", ".join(s.name for s in p.matched_services),
            "; ".join(f"{c}={format_value(v)}" for c, v in p.scores),
        )
        for p in response.providers
    ]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]
    lines.append(f"({len(rows)} provider(s), {response.excluded_count} excluded by social requirements)")
    return "\n".join(lines)


def _format_counts(counts: dict[str, int]) -> str:
    return " ".join(f"{kind}:{counts.get(kind, 0)}" for kind in KINDS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="broker", description="Social service broker")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="merge records into a snapshot")
    p.add_argument("snapshot")
    p.add_argument("input")

    p = sub.add_parser("query", help="run one broker query against a snapshot")
    p.add_argument("snapshot")
    p.add_argument("--consumer", required=True)
    p.add_argument("--category", action="append", default=[], metavar="TMODEL:VALUE")
    p.add_argument("--keyword", action="append", default=[])
    p.add_argument("--tmodel", action="append", default=[])
    p.add_argument("--social", default="")
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("generate", help="write a seeded synthetic snapshot")
    p.add_argument("--actors", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--providers", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("out")

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--config")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    try:
        if args.command == "load":
            print(_format_counts(cmd_load(args.snapshot, args.input)))
        elif args.command == "query":
            response = cmd_query(
                args.snapshot, args.consumer, args.category, args.social, args.keyword, args.tmodel
            )
            if args.format == "json":
                print(json.dumps(response_to_json(response), sort_keys=True, separators=(",", ":")))
            else:
                print(render_table(response))
            return EXIT_OK if response.providers else EXIT_EMPTY
        elif args.command == "generate":
            spec = GenSpec(args.actors, args.edges, args.providers, args.seed)
            print(_format_counts(cmd_generate(spec, args.out)))
        elif args.command == "serve":
            serve(load_config(args.config))
    except BrokerError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
