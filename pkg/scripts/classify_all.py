"""Sweep the classification over a gonality range and summarize the outcomes.

Writes one JSON report per gonality when --out-dir is given, and always
prints a one-line summary per m: realized families, then the seeds settled
by nonexistence evidence or subsumption.

    python3 scripts/classify_all.py --m-min 5 --m-max 12 --out-dir reports/
"""

import argparse
import json
import pathlib
import time

from spheretile.cli import report_payload
from spheretile.combinatorics import (
    FamilyOutcome,
    NonexistenceEvidence,
    SubsumedNote,
    classify,
    vertex_label,
)


def summarize(m: int) -> tuple[str, dict]:
    start = time.perf_counter()
    report = classify(m)
    elapsed = time.perf_counter() - start

    families = []
    eliminated = []
    subsumed = []
    for entry in report.entries:
        label = vertex_label(entry.seed)
        if isinstance(entry.outcome, FamilyOutcome):
            suffix = ""
            if entry.outcome.variants > 1:
                suffix = f" x{entry.outcome.variants}"
            if entry.outcome.parameterized:
                suffix += " (1-param)"
            families.append(f"{entry.outcome.name}[{label}]{suffix}")
        elif isinstance(entry.outcome, NonexistenceEvidence):
            eliminated.append(label)
        elif isinstance(entry.outcome, SubsumedNote):
            subsumed.append(label)

    line = (
        f"m={m:>2}  families: {', '.join(families) or 'none'}"
        f"  | no root: {', '.join(eliminated) or '-'}"
    )
    if subsumed:
        line += f"  | subsumed: {', '.join(subsumed)}"
    line += f"  ({elapsed:.2f} s)"
    return line, report_payload(report)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m-min", type=int, default=5)
    parser.add_argument("--m-max", type=int, default=12)
    parser.add_argument("--out-dir", type=pathlib.Path, default=None)
    args = parser.parse_args()

    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)

    for m in range(args.m_min, args.m_max + 1):
        line, payload = summarize(m)
        print(line)
        if args.out_dir is not None:
            path = args.out_dir / f"classification_m{m}.json"
            path.write_text(json.dumps(payload, indent=1) + "\n")


if __name__ == "__main__":
    main()
