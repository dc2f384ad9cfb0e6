"""Command line entry point ``ralab``.

::

    ralab run --file f.ral                 run every task in a session
    ralab <kind> [ARG ...] --file f.ral    one task built from ARGs, or every task of that kind
    ralab paper-suite [ID]                 replay the worked examples
    ralab sessions                         list the bundled session files

``--file`` also accepts the stem of a bundled session (``ex4_3``).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from ralab.poly import DEGREVLEX, MonomialOrder
from ralab.registry import REGISTRY, UnknownExample, paper_suite
from ralab.report import exit_code, to_json
from ralab.session.ast import TaskDecl, print_session
from ralab.session.lexer import SessionError
from ralab.session.parser import TASK_KINDS, parse_session
from ralab.session.runner import Options, run_session

EXIT_USAGE = 2


def bundled_sessions() -> dict[str, str]:
    root = resources.files("ralab") / "sessions"
    return {p.name[:-4]: p.read_text(encoding="utf-8")
            for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".ral")}


def _read_session(spec: str) -> tuple[str, str]:
    path = Path(spec)
    if path.exists():
        return str(path), path.read_bytes().decode("utf-8")
    bundled = bundled_sessions()
    stem = spec[:-4] if spec.endswith(".ral") else spec
    if stem in bundled:
        return f"<bundled {stem}>", bundled[stem]
    raise FileNotFoundError(f"no session file {spec!r}")


def _order(value: str):
    if value in ("lex", "degrevlex"):
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or lex/degrevlex") from None
    if n < 1:
        raise argparse.ArgumentTypeError("order must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ralab", description="Exact verification of retracts, "
                                "derivations and exponential maps over Q.")
    p.add_argument("command", help="run, paper-suite, sessions, or a task kind: "
                   + ", ".join(TASK_KINDS))
    p.add_argument("args", nargs="*", help="task arguments, or an example id for paper-suite")
    p.add_argument("--file", "-f", help="session file (.ral) or bundled session name")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--degree", type=int, help="degree bound for invariants, kernel, principality")
    p.add_argument("--cap", type=int, help="nilpotency cap for lnd and exp")
    p.add_argument("--order", type=_order,
                   help="jet truncation order (integer) or monomial order (lex, degrevlex)")
    p.add_argument("--allow-unknown", action="store_true", help="exit 0 when statuses are unknown")
    p.add_argument("--no-timing", action="store_true",
                   help="omit timing fields (comparison mode, byte-stable output)")
    p.add_argument("--jobs", "-j", type=int, default=4, help="worker threads for tasks")
    p.add_argument("--print", dest="print_ast", action="store_true",
                   help="print the parsed session in canonical form and exit")
    return p


def _emit(reports, ns, out) -> int:
    if ns.format == "json":
        out.write(to_json(reports, timing=not ns.no_timing) + "\n")
    else:
        for r in reports:
            out.write(r.to_text() + "\n")
        counts = {}
        for r in reports:
            counts[r.status] = counts.get(r.status, 0) + 1
        out.write("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())) + "\n")
    return exit_code(reports, ns.allow_unknown)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        if ns.command == "sessions":
            for name in bundled_sessions():
                out.write(name + "\n")
            return 0
        if ns.command == "paper-suite":
            if len(ns.args) > 1:
                raise SessionError("paper-suite takes at most one example id")
            reports = paper_suite(ns.args[0] if ns.args else None)
            return _emit(reports, ns, out)
        if ns.command != "run" and ns.command not in TASK_KINDS:
            raise SessionError(f"unknown command {ns.command!r}")
        if not ns.file:
            raise SessionError("--file is required")
        where, text = _read_session(ns.file)
        if ns.command != "run" and ns.args:
            text += f"\ntask {ns.command}({', '.join(ns.args)})\n"
        try:
            ast = parse_session(text)
        except SessionError as e:
            raise SessionError(f"{where}: {e}") from None
        if ns.print_ast:
            out.write(print_session(ast))
            return 0
        if ns.command != "run":
            keep = [d for d in ast.declarations if not isinstance(d, TaskDecl)]
            tasks = [t for t in ast.tasks if t.kind == ns.command]
            if ns.args:
                tasks = tasks[-1:]
            ast = type(ast)(tuple(keep + tasks))
        opts = Options(degree=ns.degree, cap=ns.cap, workers=ns.jobs)
        if isinstance(ns.order, int):
            opts.order = ns.order
        elif ns.order == "lex":
            opts.monomial_order = MonomialOrder.lex()
        elif ns.order == "degrevlex":
            opts.monomial_order = DEGREVLEX
        reports = run_session(ast, opts)
        return _emit(reports, ns, out)
    except UnknownExample as e:
        sys.stderr.write(f"ralab: unknown example {e.args[0]!r}; known: {', '.join(REGISTRY)}\n")
        return EXIT_USAGE
    except (SessionError, FileNotFoundError, UnicodeDecodeError) as e:
        sys.stderr.write(f"ralab: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
