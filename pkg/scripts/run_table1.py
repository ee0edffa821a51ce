"""Reproduce the bootstrap-dilation coverage table.

Desk scale (default) runs 500 worlds x 500 replicates per sample size and
takes a few minutes for n=500.  --full switches to the 5000 x 5000 design,
which is an overnight job on one core; use --workers if you have more.
"""

import argparse
import sys

from bootdilate.cli import main

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--full", action="store_true", help="5000 worlds x 5000 replicates")
parser.add_argument("--seed", type=int, default=7)
parser.add_argument("--workers", type=int, default=1)
parser.add_argument("--outdir", type=str, default=".")
args = parser.parse_args()

mc = 5000 if args.full else 500
reps = 5000 if args.full else 500

for n in (50, 100, 500):
    code = main([
        "table1", "--n", str(n), "--mc-reps", str(mc), "--bootstrap-reps", str(reps),
        "--seed", str(args.seed), "--workers", str(args.workers),
        "--out", f"{args.outdir}/table1_n{n}.csv",
    ])
    if code != 0:
        sys.exit(code)
