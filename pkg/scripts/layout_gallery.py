#!/usr/bin/env python3
"""Print the layout graphs and verdicts for the curated implication suite.

With --dot-dir, also write one DOT file per entry for rendering.
"""

import argparse
import os

from seplift.catalog import CURATED_SUITE
from seplift.layout import compute_layout, to_dot
from seplift.lifting import lift_check, witness_search
from seplift.normalize import format_implication


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dot-dir", help="write one .dot file per entry here")
    parser.add_argument(
        "--witnesses", action="store_true",
        help="also search witness packages for the rejected layouts",
    )
    args = parser.parse_args()
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)

    for entry in CURATED_SUITE:
        verdict = lift_check(entry.form)
        print(f"{entry.name}: {verdict.describe()}")
        print(f"  {format_implication(entry.form)}")
        if args.dot_dir:
            path = os.path.join(args.dot_dir, f"{entry.name}.dot")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(to_dot(compute_layout(entry.form)) + "\n")
            print(f"  wrote {path}")
        if args.witnesses and verdict.result == "no_guarantee":
            pkg = witness_search(entry.form)
            if pkg is None:
                print("  no witness package within budget")
            else:
                for line in pkg.describe().splitlines():
                    print(f"  {line}")


if __name__ == "__main__":
    main()
