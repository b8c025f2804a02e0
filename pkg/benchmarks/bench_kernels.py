"""Compare the compiled kernels with the numpy reference.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from coherence_forge import _kernels_py as pyk
from coherence_forge.random_povm import sample_effects_batch
from coherence_forge.state import from_bloch

try:
    from coherence_forge import _ckernels as ck
except ImportError:
    ck = None


def cases():
    rho = from_bloch((0.3, -0.4, 0.5))
    eff2 = sample_effects_batch(2, 0, range(20_000))
    eff8 = sample_effects_batch(8, 0, range(5_000))
    mags = np.linspace(0, 1, 400)
    phases = np.linspace(0, 2 * np.pi, 90, endpoint=False)
    lams = np.linspace(0, 1, 100)
    return [
        ("luders_l1 n=2 x20000", "luders_l1_batch", (eff2, rho)),
        ("luders_l1 n=8 x5000", "luders_l1_batch", (eff8, rho)),
        ("luders n=2 x20000", "luders_batch", (eff2, rho)),
        ("one_param grid 400x90x100", "one_param_grid_max", (rho, mags, phases, lams)),
    ]


def best_of(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':32s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for label, name, fargs in cases():
        tp = best_of(getattr(pyk, name), fargs, args.repeat)
        if ck is None:
            print(f"{label:32s} {tp * 1e3:10.2f} {'n/a':>10s} {'n/a':>8s}")
            continue
        tc = best_of(getattr(ck, name), fargs, args.repeat)
        print(f"{label:32s} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
