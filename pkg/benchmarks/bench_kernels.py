"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-call times for each kernel under both backends, then the wall
time of a full ``qortho report --all`` with each backend selected.
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from qortho import _pykernels as P

try:
    from qortho import _ckernels as C
except ImportError:
    C = None


def cases():
    rng = np.random.default_rng(0)
    x = rng.uniform(-2, 2, 64)
    a, b, c = rng.uniform(0.5, 2, 40), rng.uniform(-1, 1, 40), rng.uniform(-1, 1, 40)
    log_w = rng.uniform(-40, 5, 400)
    sign_w = rng.choice([-1.0, 1.0], 400)
    vals = rng.normal(size=(400, 16))
    return {
        "phi_sum 4phi3 n=20": lambda k: k.phi_sum([0.3, -0.2], [0.4], [(0.5, 0.25)], [], 0.5, 20, 0.5, 0),
        "recurrence_table 64x40": lambda k: k.recurrence_table(x, a, b, c),
        "log_qpoch_inf q=0.95": lambda k: k.log_qpoch_inf(0.7, 0.95, 1e-16, 4096),
        "gram_accumulate 400x16": lambda k: k.gram_accumulate(log_w, sign_w, vals),
    }


def per_call(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def report_wall(pure):
    env = dict(os.environ)
    if pure:
        env["QORTHO_PURE_PYTHON"] = "1"
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "qortho", "report", "--all", "--no-timestamp"],
                   env=env, check=True, stdout=subprocess.DEVNULL)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-report", action="store_true")
    args = ap.parse_args()

    if C is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'kernel':<26}{'python':>12}{'cython':>12}{'speedup':>9}")
    for name, call in cases().items():
        tp = per_call(lambda: call(P), args.repeat)
        if C is None:
            print(f"{name:<26}{tp * 1e6:>10.1f}us")
            continue
        tc = per_call(lambda: call(C), args.repeat)
        print(f"{name:<26}{tp * 1e6:>10.1f}us{tc * 1e6:>10.1f}us{tp / tc:>8.1f}x")

    if not args.skip_report:
        print()
        for pure in (False, True):
            label = "python" if pure or C is None else "cython"
            print(f"report --all ({label}): {report_wall(pure):.2f} s")


if __name__ == "__main__":
    main()
