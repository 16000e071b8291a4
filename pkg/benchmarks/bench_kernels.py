"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Inputs are drawn from a fixed seed, and every case first checks that both
backends return the same answer.
"""

import argparse
import random
import timeit

from bellframe import _kernels_py

try:
    from bellframe import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    for nbits in (8, 32, 64):
        weights = [rng.randint(0, 1000) for _ in range(nbits)]
        full = (1 << nbits) - 1
        masks = [rng.getrandbits(nbits) for _ in range(16)]
        atoms = _kernels_py.refine(nbits, masks[:6])
        lefts = list(_kernels_py.refine(nbits, masks[6:8]))
        rights = list(_kernels_py.refine(nbits, masks[8:10]))
        yield f"mask_weight n={nbits}", "mask_weight", (weights, full)
        yield f"refine n={nbits} masks=16", "refine", (nbits, masks)
        yield (f"screen n={nbits} conds={len(atoms)} {len(lefts)}x{len(rights)}", "screen",
               (weights, list(atoms), lefts, rights))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the Python kernels are available")
    rng = random.Random(args.seed)
    print(f"{'case':42s} {'python us':>10s} {'cython us':>10s} {'speedup':>8s}")
    for label, fn, call in cases(rng):
        py = getattr(_kernels_py, fn)
        t_py = timeit.timeit(lambda: py(*call), number=args.repeat) / args.repeat * 1e6
        if _kernels is None:
            print(f"{label:42s} {t_py:10.2f} {'-':>10s} {'-':>8s}")
            continue
        cy = getattr(_kernels, fn)
        same = py(*call) == cy(*call) if fn != "refine" else set(py(*call)) == set(cy(*call))
        if not same:
            raise SystemExit(f"backends disagree on {label}")
        t_cy = timeit.timeit(lambda: cy(*call), number=args.repeat) / args.repeat * 1e6
        print(f"{label:42s} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
