#!/usr/bin/env python3
"""Regenerate the committed golden CSVs from the bundled corpus.

Run from the repository root after an intentional behavior change:

    python3 tools/regen_goldens.py

Timing values differ run to run; the golden comparison ignores them.
"""

from pathlib import Path

from augdist.cli import main

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "data" / "corpus"
GOLDEN = ROOT / "tests" / "data" / "golden"

ALGORITHMS = ("hungarian-ged", "exas-l1")


def regenerate() -> None:
    for algorithm in ALGORITHMS:
        out_dir = GOLDEN / algorithm
        out_dir.mkdir(parents=True, exist_ok=True)
        code = main(
            [
                "evaluate",
                str(CORPUS / "rules"),
                str(CORPUS),
                "--algorithm",
                algorithm,
                "--out",
                str(out_dir),
            ]
        )
        if code != 0:
            raise SystemExit(f"evaluation failed for {algorithm} (exit {code})")
        print(f"regenerated {out_dir}")


if __name__ == "__main__":
    regenerate()
