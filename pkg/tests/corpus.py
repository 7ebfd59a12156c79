"""Golden-file corpus of CLI sessions.

Each ``tests/golden/sessions/*.gpa`` names its subcommand in a ``# command:``
header and optional flags in ``# args:``. Running this file regenerates the
expected outputs.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent / "golden"
SESSIONS = ROOT / "sessions"
EXPECTED = ROOT / "expected"


def sessions() -> list[Path]:
    return sorted(SESSIONS.glob("*.gpa"))


def header(path: Path) -> tuple[str, list[str]]:
    command, args = None, []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("# command:"):
            command = line.split(":", 1)[1].strip()
        elif line.startswith("# args:"):
            args = shlex.split(line.split(":", 1)[1])
    if command is None:
        raise ValueError(f"{path.name} has no command header")
    return command, args


def run_cli(path: Path, threads: int = 1, hashseed: str = "0") -> bytes:
    command, args = header(path)
    env = dict(os.environ, GPA_THREADS=str(threads), PYTHONHASHSEED=hashseed)
    proc = subprocess.run([sys.executable, "-m", "gpa", command, "--session", str(path), *args],
                          capture_output=True, env=env, timeout=120)
    return proc.stdout + proc.stderr + f"exit={proc.returncode}\n".encode()


def expected(path: Path) -> bytes:
    return (EXPECTED / (path.stem + ".out")).read_bytes()


if __name__ == "__main__":
    EXPECTED.mkdir(exist_ok=True)
    for p in sessions():
        (EXPECTED / (p.stem + ".out")).write_bytes(run_cli(p))
        print("wrote", p.stem)
