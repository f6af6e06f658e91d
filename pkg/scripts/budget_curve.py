#!/usr/bin/env python3
"""Emit the photon-number-vs-length curves for all three calibration
stages into out/budget_curve.csv."""

import sys
from pathlib import Path

from qkdsync.cli import main

OUT = Path("out")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    sys.exit(
        main(
            [
                "budget",
                "--length-max", "100000",
                "--step", "1000",
                "--out", str(OUT / "budget_curve.csv"),
            ]
        )
    )
