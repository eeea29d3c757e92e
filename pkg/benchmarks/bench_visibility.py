"""Compare the compiled visibility kernel against the numpy fallback.

Run from the repo root:

    python3 benchmarks/bench_visibility.py [--sizes 50,100,200,400] [--reps 5]

Each size times `visibility_edges` over a seeded random scatter dense
enough that occlusion checks dominate, plus one `fence_coverage` call
shaped like a fence computation (360 boundary samples per member).
Implementations are imported directly so one process can time both.
"""

import argparse
import time

import numpy as np

from contamsim import _visibility_py
from contamsim.geometry import WorldConfig

try:
    from contamsim import _visibility
except ImportError:
    _visibility = None

CFG = WorldConfig()


def scatter(rng, n):
    # ~1.3 agents per unit^2 of side keeps most pairs in band
    box = max(6.0, 1.3 * np.sqrt(n) * CFG.s_min)
    pts = []
    while len(pts) < n:
        x, y = rng.uniform(0.0, box, size=2)
        if all((x - p) ** 2 + (y - q) ** 2 > (2 * CFG.d_r) ** 2 for p, q in pts):
            pts.append((x, y))
    return np.array([p for p, _ in pts]), np.array([q for _, q in pts])


def time_edges(impl, xs, ys, reps):
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        impl.visibility_edges(xs, ys, CFG.s_min, CFG.s_max, CFG.d_r, CFG.eps)
        best = min(best, time.perf_counter() - t0)
    return best


def time_fence(impl, xs, ys, reps, samples=360):
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    sx = xs[:, None] + CFG.s_min * np.cos(theta)[None, :]
    sy = ys[:, None] + CFG.s_min * np.sin(theta)[None, :]
    idx = np.arange(len(xs), dtype=np.int32)
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        impl.fence_coverage(
            xs, ys, sx, sy, xs, ys, idx, CFG.s_min, CFG.s_max, CFG.d_r, CFG.eps
        )
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="50,100,200,400")
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _visibility is None:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)
    header = f"{'n':>6} {'kernel':>12} {'edges (ms)':>12} {'fence (ms)':>12}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        xs, ys = scatter(rng, n)
        rows = [("numpy", _visibility_py)]
        if _visibility is not None:
            rows.append(("compiled", _visibility))
        timings = {}
        for name, impl in rows:
            te = time_edges(impl, xs, ys, args.reps)
            tf = time_fence(impl, xs, ys, args.reps) if n <= 200 else float("nan")
            timings[name] = (te, tf)
            print(
                f"{n:>6} {name:>12} {1e3 * te:>12.3f} {1e3 * tf:>12.3f}"
            )
        if len(timings) == 2:
            se = timings["numpy"][0] / timings["compiled"][0]
            sf = timings["numpy"][1] / timings["compiled"][1]
            print(f"{'':>6} {'speedup':>12} {se:>11.2f}x {sf:>11.2f}x")


if __name__ == "__main__":
    main()
