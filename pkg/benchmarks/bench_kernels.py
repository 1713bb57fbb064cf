"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs once to warm the JIT, then ``--repeat`` timed runs; the
best time is reported.  Both backends must return identical arrays.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from utaut import _backend, field_create, group_create, kernels
from utaut.conjugacy import build_class_table
from utaut.enumeration import CandidateSpace


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(ctx):
    tab = build_class_table(ctx)
    space = CandidateSpace(ctx, tab)
    imgs = space.images(0, min(space.total, 1 << 14))
    perms = ctx.conjugation_perms(ctx.generator_codes)
    mul, tree = ctx.mul, ctx.spanning
    return {
        "cayley_table": lambda: kernels.cayley_table(ctx.digits, ctx.q, ctx.layout),
        "orbits": lambda: kernels.orbits(perms)[0],
        f"extend_status x{imgs.shape[0]}": lambda: kernels.extend_status(imgs, mul, tree, tab.class_id),
        f"extend_tables x{min(imgs.shape[0], 2048)}": lambda: kernels.extend_tables(imgs[:2048], mul, tree),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    groups = [(2, 2, 4, 3), (3, 1, 5, 3), (2, 1, 6, 4)]
    print(f"{'group':<16}{'kernel':<24}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for p, m, n, k in groups:
        ctx = group_create(field_create(p, m), n, k)
        ctx.mul, ctx.spanning  # shared inputs built once
        for name, fn in cases(ctx).items():
            res = {}
            for backend in ("numba", "numpy"):
                _backend.set_backend(backend)
                res[backend] = best_of(fn, args.repeat)
            _backend.set_backend("numba")
            assert np.array_equal(res["numba"][1], res["numpy"][1]), name
            tn, tp = res["numba"][0], res["numpy"][0]
            print(f"{f'({p},{m},{n},{k})':<16}{name:<24}{tn:>10.4f}{tp:>10.4f}{tp / tn:>8.1f}x")


if __name__ == "__main__":
    main()
