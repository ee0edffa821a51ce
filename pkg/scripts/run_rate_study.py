"""Matching-radius scaling check for point clouds in d=2 and d=3.

Reports the median bootstrap radius at n in {100, 400, 1600} together with
the normalization that the theory says should be flat in n.  The n=1600
replicates dominate the runtime; the defaults keep this under an hour."""

import argparse
import sys

from bootdilate.cli import main

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--seed", type=int, default=7)
parser.add_argument("--mc-reps", type=int, default=2)
parser.add_argument("--bootstrap-reps", type=int, default=100)
parser.add_argument("--workers", type=int, default=1)
parser.add_argument("--outdir", type=str, default=".")
args = parser.parse_args()

for d in (2, 3):
    code = main([
        "rate-study", "--dimension", str(d), "--mc-reps", str(args.mc_reps),
        "--bootstrap-reps", str(args.bootstrap_reps),
        "--seed", str(args.seed), "--workers", str(args.workers),
        "--out", f"{args.outdir}/rates_d{d}.csv",
    ])
    if code != 0:
        sys.exit(code)
