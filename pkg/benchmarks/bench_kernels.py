"""Compare the numba and numpy kernel flavours.

    python benchmarks/bench_kernels.py --size 2000 --repeat 5
"""

import argparse

from spectral_sketch.bench import run_all

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run_all(args.size, args.repeat, args.seed)
