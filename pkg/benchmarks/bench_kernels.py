"""Compare the numba and numpy batch-evaluation backends.

    python benchmarks/bench_kernels.py [--sizes 15 1000 100000] [--repeat 5]

Reports the median time per call for each batch size, then one full design
run (default settings, synthetic test device) per backend.
"""

import argparse
import statistics
import time
from pathlib import Path

import numpy as np

from lnaswarm import _backend
from lnaswarm.design import DesignSpec, default_swarm, design_amplifier
from lnaswarm.kernels import evaluate_batch
from lnaswarm.touchstone import device_at, load_device

DEVICE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "synthetic_lna.s2p"
FREQ = 4e9


def timed(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[15, 1000, 100_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-design", action="store_true", help="skip the full design runs")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _backend.HAVE_NUMBA else [])
    device = load_device(DEVICE)
    s, n = device_at(device, FREQ)
    rng = np.random.default_rng(0)

    if "numba" in backends:
        t0 = time.perf_counter()
        evaluate_batch(rng.uniform(0, 0.5, (2, 4)), s, n, 50.0, "numba")
        print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f} s")

    print(f"{'rows':>8}  " + "  ".join(f"{b:>12}" for b in backends) + "   speedup")
    for size in args.sizes:
        x = rng.uniform(0, 0.5, (size, 4))
        t = {b: timed(lambda b=b: evaluate_batch(x, s, n, 50.0, b), args.repeat) for b in backends}
        cells = "  ".join(f"{t[b] * 1e6:10.1f}us" for b in backends)
        ratio = t["numpy"] / t["numba"] if "numba" in t else float("nan")
        print(f"{size:8d}  {cells}   {ratio:6.1f}x")

    if not args.no_design:
        for b in backends:
            spec = DesignSpec(device, FREQ, swarm=default_swarm(0))
            t0 = time.perf_counter()
            r = design_amplifier(spec, backend=b)
            dt = time.perf_counter() - t0
            print(f"design run ({b}): {dt:.2f} s, gain {r.metrics.gain_db:.3f} dB, feasible {r.feasible}")


if __name__ == "__main__":
    main()
