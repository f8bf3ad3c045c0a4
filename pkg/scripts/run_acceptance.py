#!/usr/bin/env python3
"""Run the acceptance gate and print one verdict line per criterion.

Thin wrapper over the pytest module so the lines land on stdout:

    python scripts/run_acceptance.py
"""

import subprocess
import sys


def main():
    cmd = [sys.executable, "-m", "pytest", "tests/test_acceptance.py",
           "-v", "-s", "-rA"]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())
