"""Time the compiled and pure-Python replication kernels on identical inputs.

    python3 benchmarks/bench_kernel.py [--reps N] [--multiplier X]

Both kernels receive the same pre-drawn variates; their outputs are checked
for exact equality before any timing is reported.
"""

import argparse
import time
from dataclasses import replace

import numpy as np

from caresim.arrivals import scale_rates
from caresim.des.streams import StreamFactory
from caresim.model import CareModel
from caresim.model.engine import HAVE_COMPILED, draw_inputs, get_kernel, kernel_args, shift_table


def _same(a: dict, b: dict) -> bool:
    return all(np.array_equal(np.asarray(a[k]), np.asarray(b[k]), equal_nan=np.asarray(a[k]).dtype.kind == "f")
               for k in a)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--multiplier", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    model = CareModel()
    model = replace(model, rates=scale_rates(model.rates, args.multiplier))
    table = shift_table(model)
    inputs = [kernel_args(model, draw_inputs(model, StreamFactory(args.seed, r)), table) for r in range(args.reps)]
    events = 0
    timings = {}
    kernels = ["python"] + (["compiled"] if HAVE_COMPILED else [])
    outputs: dict[str, list] = {}
    for name in kernels:
        fn = get_kernel(name)
        t0 = time.perf_counter()
        outputs[name] = [fn(*a) for a in inputs]
        timings[name] = time.perf_counter() - t0
        events = sum(o["n_events"] for o in outputs[name])

    print(f"{args.reps} replications x 30 days, multiplier {args.multiplier:g}, {events / args.reps:.0f} events/rep")
    for name in kernels:
        t = timings[name]
        print(f"  {name:<9} {t:8.3f} s total  {1e3 * t / args.reps:8.2f} ms/rep  {events / t / 1e6:7.2f} Mevents/s")
    if HAVE_COMPILED:
        ok = all(_same(a, b) for a, b in zip(outputs["python"], outputs["compiled"]))
        print(f"  speedup   {timings['python'] / timings['compiled']:8.1f}x   outputs identical: {ok}")
    else:
        print("  compiled kernel not built; only the Python path was timed")


if __name__ == "__main__":
    main()
