"""``gpa`` command line: ``gpa SUBCOMMAND --session FILE [options]``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .commands import CHECK_FAILURES, COMMANDS, Options, Record
from .session import Session
from .syntax import SessionError, parse, print_session

__all__ = ["main", "run", "parse", "print_session", "SessionError"]


def run(text: str, command: str, opt: Options | None = None, report: str = "text") -> tuple[str, int]:
    """Run one subcommand on session text; returns the report and the exit code."""
    opt = opt or Options()
    try:
        ast = parse(text)
        if command == "fmt":
            return print_session(ast), 0
        records, ok = COMMANDS[command](Session(ast), opt)
        code = 0 if ok else 1
    except CHECK_FAILURES as exc:
        records, code = [Record([("error", type(exc).__name__), ("message", str(exc))])], 1
    except SessionError as exc:
        return f"error: {exc}\n", 2
    except ValueError as exc:
        return f"error: {exc}\n", 2
    status = "ok" if code == 0 else "fail"
    if report == "json":
        body = {"command": command, "status": status,
                "records": [dict(r.fields) for r in records]}
        return json.dumps(body, indent=2, ensure_ascii=False) + "\n", code
    lines = [f"command={command}"] + [r.render() for r in records] + [f"status={status}"]
    return "\n".join(lines) + "\n", code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="gpa", description="graded Poisson algebra workbench")
    ap.add_argument("command", choices=sorted(COMMANDS) + ["fmt"])
    ap.add_argument("--session", required=True, help="session file, or - for stdin")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--report", choices=("text", "json"), default="text")
    args = ap.parse_args(argv)
    try:
        if args.session == "-":
            text = sys.stdin.read()
        else:
            with open(args.session, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    out, code = run(text, args.command, Options(args.max_degree, args.seed), args.report)
    (sys.stderr if code == 2 else sys.stdout).write(out)
    return code
