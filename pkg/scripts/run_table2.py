"""Reproduce the criterion-subsampling comparison table.

Subsample sizes follow the benchmark design: {40,45,48} at n=50,
{85,92,95} at n=100, {425,450,475} at n=500 (the driver defaults)."""

import argparse
import sys

from bootdilate.cli import main

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--seed", type=int, default=7)
parser.add_argument("--mc-reps", type=int, default=500)
parser.add_argument("--num-subsamples", type=int, default=500)
parser.add_argument("--workers", type=int, default=1)
parser.add_argument("--outdir", type=str, default=".")
args = parser.parse_args()

for n in (50, 100, 500):
    code = main([
        "table2", "--n", str(n), "--mc-reps", str(args.mc_reps),
        "--num-subsamples", str(args.num_subsamples),
        "--seed", str(args.seed), "--workers", str(args.workers),
        "--out", f"{args.outdir}/table2_n{n}.csv",
    ])
    if code != 0:
        sys.exit(code)
