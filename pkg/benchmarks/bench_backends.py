"""Throughput comparison of the compiled and pure-numpy kernel backends.

Run directly: ``python3 benchmarks/bench_backends.py [frames]``.  The
backend is chosen at import time from DWBF_NUMBA, so this script re-execs
itself once with the flag inverted and prints both timings.
"""

import os
import subprocess
import sys
import time

import numpy as np


def bench(frames):
    from dwbf import channel, engine, kernels, presets, tanner

    graph = tanner.generate_regular(816, 3, 6, seed=11, min_girth=6)
    cfg = presets.preset("m1-dwbf-a-code1", l_max=50)
    u = np.zeros(graph.N, dtype=np.uint8)
    sigma = channel.ebn0_to_sigma(4.0, graph.rate)

    # warm-up decode to amortize any compilation cost
    fr = channel.transmit(u, sigma, channel.frame_rng(0, 0))
    engine.decode(graph, fr, cfg)

    t0 = time.perf_counter()
    iters = 0
    for i in range(frames):
        fr = channel.transmit(u, sigma, channel.frame_rng(0, i))
        out = engine.decode(graph, fr, cfg)
        iters += out.iterations_used
    dt = time.perf_counter() - t0
    print(f"{kernels.backend_name():>6s}: {frames} frames, {iters} decoder "
          f"iterations in {dt:.3f} s "
          f"({frames / dt:.1f} frames/s, {iters / dt:.0f} iters/s)")


def main():
    frames = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    if os.environ.get("_DWBF_BENCH_CHILD"):
        bench(frames)
        return
    for flag in ("1", "0"):
        env = dict(os.environ, DWBF_NUMBA=flag, _DWBF_BENCH_CHILD="1")
        subprocess.run([sys.executable, __file__, str(frames)], env=env,
                       check=True)


if __name__ == "__main__":
    main()
