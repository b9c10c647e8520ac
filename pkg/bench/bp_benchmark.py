#!/usr/bin/env python3
"""Throughput benchmark of the BP decoder kernels: numba vs pure numpy.

Decodes the bundled rate-0.1 code at its characterized operating SNR with
both backends on identical inputs and reports per-frame times and
iteration counts.  The numpy path is the fallback selected by setting
CVQKDSIM_NO_NUMBA=1; this script forces each backend explicitly.

    python bench/bp_benchmark.py [--frames 10] [--max-iters 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cvqkdsim._accel import NUMBA_AVAILABLE
from cvqkdsim.codes import load_characterization, load_example_code
from cvqkdsim.postproc.ldpc import bp_decode, ldpc_syndrome


def run(backend: str, code, frames, max_iters):
    times = []
    iters_all = []
    converged = 0
    for llr, syn, bits in frames:
        t0 = time.perf_counter()
        dec, conv, iters = bp_decode(code, llr, syn, max_iters=max_iters,
                                     force_backend=backend)
        times.append(time.perf_counter() - t0)
        iters_all.append(iters)
        converged += int(conv and np.array_equal(dec, bits))
    return np.array(times), np.array(iters_all), converged


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=10)
    ap.add_argument("--max-iters", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    code = load_example_code()
    snr = load_characterization()["operating_snr"]
    sigma = 1.0 / np.sqrt(snr)
    rng = np.random.default_rng(args.seed)
    frames = []
    for _ in range(args.frames):
        bits = rng.integers(0, 2, size=code.n, dtype=np.uint8)
        y = (1.0 - 2.0 * bits) + sigma * rng.standard_normal(code.n)
        frames.append((2.0 * y / sigma ** 2, ldpc_syndrome(code, bits), bits))

    print(f"code n={code.n} m={code.m} edges={code.n_edges}, snr={snr:.4f}, "
          f"{args.frames} frames, max_iters={args.max_iters}")
    backends = (["numba"] if NUMBA_AVAILABLE else []) + ["numpy"]
    results = {}
    for backend in backends:
        if backend == "numba":     # trigger JIT outside the timed region
            bp_decode(code, frames[0][0], frames[0][1], max_iters=2,
                      force_backend="numba")
        times, iters, conv = run(backend, code, frames, args.max_iters)
        per_iter = times.sum() / max(iters.sum(), 1)
        results[backend] = per_iter
        print(f"{backend:>6}: {times.mean()*1e3:8.1f} ms/frame, "
              f"{per_iter*1e6:8.1f} us/iteration, "
              f"{conv}/{args.frames} converged")
    if len(results) == 2:
        print(f"speedup (numpy/numba per iteration): "
              f"{results['numpy'] / results['numba']:.1f}x")


if __name__ == "__main__":
    main()
