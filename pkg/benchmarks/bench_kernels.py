"""Compare the numba and numpy kernel backends.

Kernel timings run in-process on both backends. The end-to-end timing (a
201-point heat-valve flux sweep) runs once per backend in a subprocess, since
the backend is fixed at import time by QHEATNET_BACKEND.

    python benchmarks/bench_kernels.py [--sizes 1000 100000] [--repeat 5]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qheatnet import _kernels

SWEEP = """
import time
import numpy as np
from qheatnet import QhvDevice, ThermalPort, _kernels
from qheatnet.devices import sweep_flux
_kernels.warm_up()
ports = (ThermalPort(12.0, 0.35), ThermalPort(12.0, 0.12))
t = time.perf_counter()
sweep_flux(QhvDevice.published(), np.linspace(-0.5, 0.5, 201), ports)
print(time.perf_counter() - t)
"""


def inputs(n, rng):
    stack = rng.normal(size=(6, n, 2, 2)) + 1j * rng.normal(size=(6, n, 2, 2))
    f = np.geomspace(1.0, 1e11, n)
    tau = rng.uniform(0, 1, n)
    y = rng.normal(size=(max(n // 15, 1), 15))
    hw = rng.uniform(0.1, 1.0, y.shape[0])
    m = stack[0]
    return {
        "cascade": (stack,),
        "s21": (m, 12.0, 30.0),
        "net_psd": (f, tau, 0.35, 0.12),
        "gk_reduce": (y, hw),
    }


def best_time(func, args, repeat):
    func(*args)  # compile / warm caches
    timer = timeit.Timer(lambda: func(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def end_to_end(backend):
    env = dict(os.environ, QHEATNET_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", type=int, nargs="+", default=[1_000, 100_000])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-sweep", action="store_true", help="kernel timings only")
    args = parser.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10} {'n':>8} " + " ".join(f"{b + ' [us]':>14}" for b in backends) + f" {'speedup':>8}")
    for n in args.sizes:
        data = inputs(n, rng)
        for name, fargs in data.items():
            times = [best_time(_kernels.kernels(b)[name], fargs, args.repeat) for b in backends]
            speed = times[0] / times[-1]
            print(f"{name:<10} {n:>8} " + " ".join(f"{t * 1e6:>14.1f}" for t in times) + f" {speed:>7.2f}x")

    if not args.skip_sweep:
        print("\n201-point flux sweep, end to end")
        for b in backends:
            print(f"  {b:<6} {end_to_end(b):8.3f} s")


if __name__ == "__main__":
    main()
