"""Command line front end.

Exit codes: 0 success, 1 usage, 2 schema or data validation failure,
3 query failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .data import Dataset, load_directory
from .errors import DataError, OlapError, QueryError, SchemaError
from .grid import materialize, render
from .query import Workspace, iter_statements, line_col


class _ArgumentParser(argparse.ArgumentParser):
    # usage problems are exit code 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="startab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"startab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a constellation directory and report")
    p.add_argument("directory")

    p = sub.add_parser("query", help="run statements and print the last table")
    p.add_argument("directory")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("-e", "--expression", help="one statement")
    source.add_argument("-f", "--file", help="script with one statement per line")
    p.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("repl", help="interactive statement loop")
    p.add_argument("directory")

    p = sub.add_parser("serve", help="serve sessions over HTTP")
    p.add_argument("directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _load(directory: str) -> Dataset:
    try:
        return load_directory(directory)
    except (SchemaError, DataError, OSError) as exc:
        print(f"startab: {type(exc).__name__}: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc


def cmd_validate(args) -> int:
    ds = _load(args.directory)
    c = ds.constellation
    print(f"constellation {c.name}: {len(c.facts)} facts, {len(c.dimensions)} dimensions")
    for d in c.dimensions:
        rows = len(ds.dim_instances[d.name])
        hiers = ", ".join(h.name for h in d.hierarchies)
        print(f"  dimension {d.name}: {len(d.attributes)} attributes, {rows} members ({hiers})")
    for f in c.facts:
        rows = len(ds.fact_instances[f.name])
        stars = ", ".join(c.star[f.name])
        print(f"  fact {f.name}: {len(f.measures)} measures, {rows} rows -> {stars}")
    return 0


def _fail_query(message: str, where: str) -> int:
    print(f"{where}: error: {message}", file=sys.stderr)
    return 3


def cmd_query(args) -> int:
    ds = _load(args.directory)
    ws = Workspace(ds)
    last = None
    if args.expression is not None:
        statements = [(1, s) for _, s in iter_statements(args.expression)]
        origin = "<expression>"
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"startab: {exc}", file=sys.stderr)
            return 2
        statements = list(iter_statements(text))
        origin = args.file
    if not statements:
        return _fail_query("no statements", origin)
    for lineno, stmt in statements:
        try:
            _, tm = ws.run(stmt)
            last = tm
        except QueryError as exc:
            col = line_col(stmt, exc.span[0])[1] if exc.span else 0
            return _fail_query(str(exc), f"{origin}:{lineno}:{col}")
        except OlapError as exc:
            return _fail_query(str(exc), f"{origin}:{lineno}")
    sys.stdout.write(render(materialize(ds, last), args.format))
    return 0


def cmd_repl(args) -> int:
    ds = _load(args.directory)
    ws = Workspace(ds)
    print(f"{ds.constellation.name} loaded; enter statements, 'quit' to leave")
    while True:
        try:
            line = input("startab> ")
        except EOFError:
            print()
            return 0
        stmt = line.strip()
        if not stmt or stmt.startswith("#"):
            continue
        if stmt in ("quit", "exit"):
            return 0
        try:
            name, tm = ws.run(stmt)
        except OlapError as exc:
            print(f"error: {exc}")
            continue
        print(f"{name} =")
        sys.stdout.write(render(materialize(ds, tm), "text"))


def cmd_serve(args) -> int:
    _load(args.directory)  # fail fast with a validation exit code
    from .service import serve

    serve(args.directory, args.host, args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "query": cmd_query,
        "repl": cmd_repl,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
