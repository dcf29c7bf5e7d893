#!/usr/bin/env python3
"""
run_logkit.py

Checkout entry point for the ``logkit`` CLI, so ``python3 run_logkit.py check
graph.log`` works without installation.

Install as a console script instead with:  pip install -e .  ->  logkit ...
"""

import os
import sys

# Allow running directly from a checkout without `pip install`.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from logkit.cli import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
