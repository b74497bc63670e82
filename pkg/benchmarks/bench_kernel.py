"""Compare the compiled and pure-Python explorers on the same rasters.

    python3 benchmarks/bench_kernel.py [--res 64] [--repeat 3]

Both backends must produce identical class codes; the script exits non-zero
if they do not.
"""
import argparse
import sys
import time

import numpy as np

from bungee import kernel
from bungee.grid import Viewport
from bungee.orbit import OrbitConfig, Semigroup

CASES = [
    ("1/z^2", ["1/z^2"], Viewport(0j, 2.0, 2.0, 1, 1)),
    ("exp pair", ["exp(z)", "exp(exp(z)) + 2*pi*i"], Viewport(0j, 3.0, 3.0, 1, 1)),
    ("z^2, z^3", ["z^2", "z^3"], Viewport(0j, 1.5, 1.5, 1, 1)),
]


def time_backend(backend, H, re, im, params, repeat):
    prog = backend.prepare(H.generators)
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = np.asarray(backend.classify_many(prog, H.has_pole, re, im, params), dtype=np.int8)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--res", type=int, default=64, help="raster side in pixels")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--depth", type=int, default=40)
    args = ap.parse_args()

    if not kernel.compiled_available():
        print("compiled kernel not built; only the Python fallback is available")
        return 1
    py = kernel.get_backend("python")
    cc = kernel.get_backend("compiled")
    cfg = OrbitConfig(max_depth=args.depth)
    ok = True
    print(f"{'case':<10} {'points':>7} {'python s':>9} {'compiled s':>11} {'speedup':>8}")
    for label, texts, base in CASES:
        H = Semigroup.from_texts(texts)
        vp = Viewport(base.center, base.half_width, base.half_height, args.res, args.res)
        re, im = (np.ascontiguousarray(a).ravel() for a in vp.pixel_centers())
        t_py, a = time_backend(py, H, re, im, cfg.params(), args.repeat)
        t_cc, b = time_backend(cc, H, re, im, cfg.params(), args.repeat)
        same = np.array_equal(a, b)
        ok &= same
        print(f"{label:<10} {re.size:>7} {t_py:>9.3f} {t_cc:>11.4f} {t_py / t_cc:>7.0f}x{'' if same else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
