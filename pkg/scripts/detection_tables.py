#!/usr/bin/env python3
"""Detection-probability tables over selection size and dark-count rate,
one CSV per detector preset, into out/."""

import sys
from pathlib import Path

from qkdsync.cli import main

OUT = Path("out")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    rc = 0
    for preset in ("id210", "id230"):
        rc |= main(
            [
                "pd",
                "--preset", preset,
                "--n", "32,64,128,256,512,800,1024",
                "--out", str(OUT / f"pd_{preset}.csv"),
            ]
        )
    rc |= main(
        [
            "pd",
            "--dcp", "25,50,100,150,200,400",
            "--out", str(OUT / "pd_dcp_sweep.csv"),
        ]
    )
    sys.exit(rc)
