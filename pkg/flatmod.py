"""
Overview:
Entry point of the flatmod command line.

    python flatmod.py generate --gamma 2.5 --mu 0.5 --seed 0 --out results
    python flatmod.py cluster graph.edges --r 0.39
    python flatmod.py sweep --seeds 0..24 --workers 4
    python flatmod.py report

Everything lives in src.cli.main; this file only makes the project root
importable when run as a script (spawned sweep workers rely on it too).
"""

import sys

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
