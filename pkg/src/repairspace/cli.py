"""Command-line interface mirroring the HTTP API.

Each subcommand loads a knowledge base file, runs the pipeline and
prints either a human-oriented rendering or, with --json, the same
serialized document the HTTP service returns for the matching request.

Exit codes: 0 on success, 1 on domain errors (unparseable input,
invalid parameters, non-terminating saturation, I/O), 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .chase import RoundCapExceeded
from .metric import WeightScheme
from .parser import ParseError
from .session import (
    ClusteringSpec,
    Session,
    SessionConfig,
    analysis_document,
    answer_document,
    create_session,
    matrix_csv,
    parse_scope,
    to_json,
)

DEFAULT_PORT = 8000


def _parse_weights(text: str) -> WeightScheme:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("weights must be four comma-separated numbers: p,c,v,penalty")
    p, c, v, penalty = (float(x) for x in parts)
    return WeightScheme(
        predicate_weight=p, constant_weight=c, variable_weight=v, unmatched_penalty=penalty
    )


def _load_session(args: argparse.Namespace) -> Session:
    with open(args.kb, "r", encoding="utf-8") as fh:
        kb_text = fh.read()
    weights = _parse_weights(args.weights) if getattr(args, "weights", None) else None
    config = SessionConfig(max_rounds=args.max_rounds, **(
        {"weights": weights} if weights else {}
    ))
    return create_session(kb_text, config)


def _clustering_spec(args: argparse.Namespace, session: Session) -> Optional[ClusteringSpec]:
    method = getattr(args, "method", None)
    if method is None:
        if any(getattr(args, name, None) is not None for name in ("k", "sigma", "tau")):
            raise ValueError("clustering parameters require --method")
        return None
    if method == "spectral":
        k = args.k if args.k is not None else min(3, len(session.repairs))
        return ClusteringSpec(method="spectral", k=k, sigma=args.sigma, seed=args.seed)
    return ClusteringSpec(method=method, tau=args.tau)


def cmd_repairs(args: argparse.Namespace) -> int:
    session = _load_session(args)
    if args.json:
        doc = analysis_document(session)
        print(to_json({"repairs": doc["repairs"]}), end="")
        return 0
    for label, repair in zip(session.repairs.labels, session.repairs):
        print(f"{label}: " + ", ".join(str(a) for a in repair.facts))
    return 0


def cmd_distances(args: argparse.Namespace) -> int:
    session = _load_session(args)
    if args.json:
        print(
            to_json(
                {
                    "labels": list(session.matrix.labels),
                    "values": session.matrix.to_lists(),
                }
            ),
            end="",
        )
        return 0
    print(matrix_csv(session), end="")
    return 0


def cmd_embed(args: argparse.Namespace) -> int:
    session = _load_session(args)
    emb = session.embedding
    if args.json:
        print(
            to_json(
                {
                    "points": emb.to_records(),
                    "achieved_stress": float(emb.achieved_stress),
                    "iterations_used": emb.iterations_used,
                }
            ),
            end="",
        )
        return 0
    for rec in emb.to_records():
        print(f"{rec['label']} {rec['x']!r} {rec['y']!r}")
    print(f"stress: {emb.achieved_stress!r}")
    return 0


def cmd_cluster(args: argparse.Namespace) -> int:
    session = _load_session(args)
    spec = _clustering_spec(args, session)
    doc = analysis_document(session, spec)
    if args.json:
        print(to_json(doc), end="")
        return 0
    for i, block in enumerate(doc["partition"]["blocks"]):
        print(f"{i}: " + " ".join(block))
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    session = _load_session(args)
    spec = _clustering_spec(args, session)
    if spec is not None:
        resolved, _ = session.partition_for(spec)
        session.set_current(resolved)
    doc = answer_document(session, args.q, args.semantics, parse_scope(args.scope))
    if args.json:
        print(to_json(doc), end="")
        return 0
    if "blocks" in doc:
        for i, block in enumerate(doc["blocks"]):
            print(f"block {i} (" + " ".join(block["repairs"]) + f"): {block['answer']}")
    else:
        print(doc["answer"])
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_kb_argument(p: argparse.ArgumentParser) -> None:
    p.add_argument("kb", help="knowledge base file")
    p.add_argument("--max-rounds", type=int, default=64, help="saturation round cap")
    p.add_argument("--json", action="store_true", help="print the full JSON document")


def _add_clustering_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=["spectral", "threshold"], help="clustering method")
    p.add_argument("--k", type=int, help="number of spectral clusters")
    p.add_argument("--sigma", type=float, help="similarity kernel width")
    p.add_argument("--seed", type=int, default=0, help="k-means seed")
    p.add_argument("--tau", type=float, help="threshold distance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repairspace",
        description="Query inconsistent knowledge bases through clusters of repairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repairs", help="list all repairs")
    _add_kb_argument(p)
    p.set_defaults(fn=cmd_repairs)

    p = sub.add_parser("distances", help="print the repair distance matrix as CSV")
    _add_kb_argument(p)
    p.add_argument("--weights", help="weight scheme as p,c,v,penalty (default 1,1,0,5)")
    p.set_defaults(fn=cmd_distances)

    p = sub.add_parser("embed", help="print planar coordinates for every repair")
    _add_kb_argument(p)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("cluster", help="partition the repair set")
    _add_kb_argument(p)
    _add_clustering_arguments(p)
    p.set_defaults(fn=cmd_cluster)

    p = sub.add_parser("query", help="answer a Boolean conjunctive query")
    _add_kb_argument(p)
    _add_clustering_arguments(p)
    p.add_argument("--q", required=True, help='query, e.g. "baby(X), get_ill(X)"')
    p.add_argument(
        "--semantics", default="AR", help="AR, IAR or ICR (default AR)"
    )
    p.add_argument(
        "--scope",
        default="all",
        help="all, partition, cluster:<i> or repairs:<label,...> (default all)",
    )
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("REPAIRSPACE_PORT", DEFAULT_PORT)),
        help="port (default $REPAIRSPACE_PORT or 8000)",
    )
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, RoundCapExceeded, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
