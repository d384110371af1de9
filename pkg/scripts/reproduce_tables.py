#!/usr/bin/env python3
"""Write the dimension-table bundle for the standard parameter points.

Default output directory is ./tables; pass any `report` flags to override,
e.g. `python scripts/reproduce_tables.py --out /tmp/t --format json`.
"""

import sys

from virhoch.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["--out", "tables"]
    sys.exit(main(["report", *argv]))
