"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from qlitho import _kernels_py, preset_fig2
from qlitho.kernel import pixel_offset
from qlitho.render import cell_centers

try:
    from qlitho import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    else:
        print("compiled extension not built; timing numpy fallback only")

    rng = np.random.default_rng(0)
    offsets = rng.uniform(-20, 20, 1_000_000)
    plan = preset_fig2()
    R = 2048
    coords = cell_centers(R)
    kx = np.array([_kernels_py.dirichlet(pixel_offset(6, s.ell_x, coords), 7) for s in plan.shots])
    ky = np.array([_kernels_py.dirichlet(pixel_offset(6, s.ell_y, coords), 7) for s in plan.shots])

    px = np.ascontiguousarray(np.tile(kx, 489)[:, :1_000_000])
    py = np.ascontiguousarray(np.tile(ky, 489)[:, :1_000_000])

    cases = [
        ("dirichlet 1e6 points, N=6", lambda k: k.dirichlet(offsets, 7)),
        ("dirichlet 1e5 points, N=64", lambda k: k.dirichlet(offsets[:100_000], 65)),
        (f"accumulate_grid fig2, R={R}", lambda k: k.accumulate_grid(kx, ky, plan.doses)),
        ("accumulate_points fig2, 1e6 points", lambda k: k.accumulate_points(px, py, plan.doses)),
    ]
    print(f"{'case':40s}" + "".join(f"{name:>12s}" for name in backends) + "     speedup")
    for label, fn in cases:
        times = {name: best_of(lambda: fn(mod), args.repeat) for name, mod in backends.items()}
        row = f"{label:40s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
