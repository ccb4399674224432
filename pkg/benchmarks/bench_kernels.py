"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--scale 1.0] [--repeat 3]

Each kernel runs on identical inputs under both backends; outputs are
checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from finealign import _backend
from finealign.suffix_index import joined_text


def _best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(x, y) -> bool:
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def cases(scale: float, rng: np.random.Generator):
    n = int(20_000 * scale)
    a = rng.integers(0, 4, n).astype(np.uint8)
    b = a.copy()
    flip = rng.random(n) < 0.05
    b[flip] = (b[flip] + 1) % 4
    text = joined_text(a, b)
    k = _backend.compiled or _backend.pure
    start, end, link, child = k.build_tree(text)
    depth, lo, hi, suffix, order = k.annotate_tree(len(text), start, end, child)
    starts = suffix[order]
    in1 = np.concatenate([[0], np.cumsum(starts < n)])
    in2 = np.concatenate([[0], np.cumsum(starts > n)])
    cnt1 = (in1[hi] - in1[lo]).astype(np.int32)
    cnt2 = (in2[hi] - in2[lo]).astype(np.int32)

    g = int(1_500 * scale)
    ga, gb = a[:g], b[:g]
    gtext = joined_text(np.empty(0, np.uint8), gb)
    gs, ge, _, gc = k.build_tree(gtext)
    gd, glo, ghi, gsuf, gord = k.annotate_tree(len(gtext), gs, ge, gc)
    queries = np.ascontiguousarray(np.lib.stride_tricks.sliding_window_view(ga, 20)[:200]).ravel()

    m = int(400 * scale)
    x, y = a[:m], np.concatenate([b[:m // 2], b[m // 2 + 7:m + 3]])

    yield f"build_tree ({len(text)} symbols)", lambda kk: kk.build_tree(text)
    yield "annotate_tree", lambda kk: kk.annotate_tree(len(text), start, end, child)
    yield "enumerate_mems (min 10)", lambda kk: kk.enumerate_mems(
        text, n, end, child, depth, suffix, cnt1, cnt2, 10, False)
    yield f"descend (200 x 20-mers, {g}-base gap, 6 mm)", lambda kk: kk.descend(
        gtext, gs, ge, gc, glo, ghi, gord, gsuf, queries, 20, 6)
    yield "xdrop_extend (x1000)", lambda kk: [
        kk.xdrop_extend(a, b, i, i, 1, 500, 10, 1, -1) for i in range(0, 1000)]
    yield f"global_affine ({m} x {len(y)}, band 40)", lambda kk: kk.global_affine(
        x, y, 40, 1, -1, -2, -1)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--scale", type=float, default=1.0, help="input size multiplier")
    p.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if _backend.compiled is None:
        print("compiled extension not built; only the pure backend is available", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<48}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, fn in cases(args.scale, rng):
        tc, oc = _best_of(lambda: fn(_backend.compiled), args.repeat)
        tp, op = _best_of(lambda: fn(_backend.pure), max(1, args.repeat // 3))
        if not _same(oc, op):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<48}{tc:>12.4f}{tp:>12.4f}{tp / max(tc, 1e-9):>9.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
