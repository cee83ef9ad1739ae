#!/usr/bin/env python3
"""Run the packaged representation-independence demos and print the reports."""

import sys

from seplift.scenarios import DEMO_NAMES, demo


def main() -> int:
    ok = True
    for name in DEMO_NAMES:
        report = demo(name)
        print(report.text())
        print()
        ok = ok and report.ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
