"""Time the coupled-chain kernel under numba and under the plain fallback.

The backend is fixed at import time, so each measurement runs in a fresh
interpreter with ``NCSTFLIP_DISABLE_NUMBA`` set accordingly. Both runs use the
same seed, so the coalescence times (and therefore the work done) are
identical; the script checks that before printing the speed-up.

    python3 benchmarks/bench_kernels.py --n 10 --seeds 50
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from ncstflip import _kernels
from ncstflip.spectral import coalescence_experiment
n, seeds = int(sys.argv[1]), int(sys.argv[2])
coalescence_experiment(4, 1)  # compile / warm up
t0 = time.perf_counter()
stats = coalescence_experiment(n, seeds)
dt = time.perf_counter() - t0
print(json.dumps({"backend": _kernels.BACKEND, "seconds": dt, "steps": sum(stats.times), "times": stats.times}))
"""


def run(disable: bool, n: int, seeds: int) -> dict:
    env = dict(os.environ, NCSTFLIP_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", CHILD, str(n), str(seeds)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args()

    fast = run(False, args.n, args.seeds)
    slow = run(True, args.n, args.seeds)
    if fast["times"] != slow["times"]:
        sys.exit("backends disagree on coalescence times")
    for r in (fast, slow):
        rate = r["steps"] / r["seconds"] if r["seconds"] else float("inf")
        print(f"{r['backend']:>6}: {r['seconds']:8.3f} s  {r['steps']:>10d} steps  {rate:12.0f} steps/s")
    if fast["backend"] == slow["backend"]:
        print("numba unavailable; both runs used the fallback")
    else:
        print(f"speed-up: {slow['seconds'] / fast['seconds']:.1f}x")


if __name__ == "__main__":
    main()
