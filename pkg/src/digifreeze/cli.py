"""Command-line front end.

Exit codes: 0 success (for ``verify``: the set freezes), 1 the set does
not freeze (a witness is printed), 2 parse or validation error, 3 the node
budget ran out before a verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .construct import (
    c1_freezing_set,
    cn_freezing_set,
    mandatory_points,
    trivial_decomposition,
    validate_decomposition,
)
from .documents import (
    DocumentError,
    format_point_set,
    load_decomposition,
    load_image_document,
    load_point_set,
    parse_adjacency,
)
from .errors import DigifreezeError, InconclusiveError, NotFrozenError
from .lattice import boundary, is_connected
from .verify import RULES, greedy_minimize, is_minimal_freezing, verify_freezing

EXIT_OK, EXIT_NOT_FROZEN, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        payload = {"tool": "digifreeze", "version": __version__, "command": args.command, **payload}
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(text)


def _pairs(f, moved_only: bool = False):
    pairs = f.moved() if moved_only else f.pairs()
    return [{"from": list(p), "to": list(q)} for p, q in pairs]


def _witness_text(f, indent: str = "  ") -> str:
    lines = []
    for p, q in f.pairs():
        mark = " *" if p != q else ""
        lines.append(f"{indent}{' '.join(map(str, p))} -> {' '.join(map(str, q))}{mark}")
    return "\n".join(lines) + "\n"


def _load_image(args):
    doc = load_image_document(args.image)
    u = None
    if args.adjacency is not None:
        u = parse_adjacency(int(args.adjacency) if args.adjacency.isdigit() else args.adjacency, doc.dim,
                            "--adjacency")
    return doc, doc.image(u)


def _search_options(args) -> dict:
    return {"budget": args.budget, "threads": args.threads, "disabled": tuple(args.no_prune or ())}


def cmd_info(args) -> int:
    _, X = _load_image(args)
    info = {
        "size": len(X),
        "dim": X.dim,
        "u": X.u,
        "connected": is_connected(X),
        "boundary_size": len(boundary(X)),
        "mandatory_size": len(mandatory_points(X)),
    }
    text = "".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in info.items())
    _emit(args, info, text)
    return EXIT_OK


def cmd_construct(args) -> int:
    doc, X = _load_image(args)
    method = args.method
    if args.decomposition:
        D = load_decomposition(args.decomposition, X.dim)
    elif method == "trivial":
        D = trivial_decomposition(X)
    else:
        D = doc.decomposition()
        if D is None or not validate_decomposition(X, D):
            print("warning: image has no exact cube list; using the one-point-per-cube decomposition",
                  file=sys.stderr)
            D = trivial_decomposition(X)
    if not validate_decomposition(X, D):
        raise DocumentError("decomposition does not cover the image exactly")
    if method == "trivial":
        # A = X freezes any image, connected or not
        A = set(X.points)
    elif method == "corners":
        if X.u != 1:
            print(f"warning: corner sets are guaranteed to freeze under c1, image uses c{X.u}",
                  file=sys.stderr)
        A = c1_freezing_set(D, X.with_adjacency(1))
    else:
        if X.u != X.dim:
            print(f"warning: boundary sets are guaranteed to freeze under c{X.dim}, image uses c{X.u}",
                  file=sys.stderr)
        A = cn_freezing_set(D, X.with_adjacency(X.dim))
    pts = sorted(A)
    _emit(args, {"method": method, "size": len(pts), "points": [list(p) for p in pts]},
          format_point_set(pts, [f"method: {method}", f"size: {len(pts)}"]))
    return EXIT_OK


def cmd_verify(args) -> int:
    _, X = _load_image(args)
    A = load_point_set(args.points, X.dim)
    out = verify_freezing(X, A, **_search_options(args))
    payload = {
        "status": out.status.value,
        "witness": _pairs(out.witness) if out.witness is not None else None,
        "stats": out.stats.as_dict(),
    }
    text = f"status: {out.status.value}\n"
    if out.witness is not None:
        text += "witness (* = moved):\n" + _witness_text(out.witness)
    text += f"nodes: {out.stats.nodes}\nseeds: {out.stats.seeds}\ncertificate: {out.stats.certificate}\n"
    _emit(args, payload, text)
    return EXIT_OK if out.frozen else EXIT_NOT_FROZEN


def cmd_minimize(args) -> int:
    _, X = _load_image(args)
    A = load_point_set(args.points, X.dim)
    opts = _search_options(args)
    try:
        M = greedy_minimize(X, A, **opts)
    except NotFrozenError as exc:
        w = exc.outcome.witness
        payload = {"status": "not_frozen", "witness": _pairs(w)}
        _emit(args, payload, "status: not_frozen\nwitness (* = moved):\n" + _witness_text(w))
        return EXIT_NOT_FROZEN
    report = is_minimal_freezing(X, M, **opts)
    removed = sorted(set(A) - M)
    payload = {
        "status": "frozen",
        "minimal": report.minimal,
        "size": len(M),
        "points": [list(p) for p in sorted(M)],
        "removed": [list(p) for p in removed],
        "witnesses": [
            {"point": list(p), "source": report.sources[p], "moved": _pairs(w, moved_only=True)}
            for p, w in sorted(report.witnesses.items())
        ],
    }
    text = format_point_set(M, [f"minimal: {str(report.minimal).lower()}", f"size: {len(M)}",
                                f"removed: {len(removed)}"])
    for p, w in sorted(report.witnesses.items()):
        moved = ", ".join(f"{' '.join(map(str, a))} -> {' '.join(map(str, b))}" for a, b in w.moved())
        text += f"# without {' '.join(map(str, p))}: {moved}\n"
    _emit(args, payload, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--adjacency", help="override the document's adjacency (c1, cN or an integer)")
    common.add_argument("--budget", type=int, default=None, help="node budget for the search")
    common.add_argument("--threads", type=int, default=1, help="parallel seed searches")
    common.add_argument("--no-prune", action="append", choices=RULES, metavar="RULE",
                        help=f"disable a pruning rule ({', '.join(RULES)}); repeatable")

    parser = argparse.ArgumentParser(prog="digifreeze", description="Freezing sets of digital images.")
    parser.add_argument("--version", action="version", version=f"digifreeze {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="summarize an image")
    p.add_argument("image")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("construct", parents=[common], help="build a candidate freezing set")
    p.add_argument("image")
    p.add_argument("decomposition", nargs="?", help="cube decomposition file")
    p.add_argument("--method", choices=("corners", "boundary", "trivial"), default="corners")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="decide whether a set freezes the image")
    p.add_argument("image")
    p.add_argument("points")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minimize", parents=[common], help="shrink a freezing set to an inclusion-minimal one")
    p.add_argument("image")
    p.add_argument("points")
    p.set_defaults(func=cmd_minimize)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.budget is not None and args.budget < 1:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_INVALID
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except DigifreezeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
