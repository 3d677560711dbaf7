"""Benchmark the compiled batch kernels against the numpy reference backend.

Workloads mirror the two hot paths: Dirichlet probability vectors over a
small ordered support (discrete model) and sorted atom/weight rows from
truncated stick-breaking (process model). Parity is asserted on every run,
so a speedup number here is also a correctness check.

Usage: python3 benchmarks/bench_kernels.py [--rows N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rbroc._kernels import HAVE_COMPILED, MODE_ERROR, MODE_FNDR, MODE_WEIGHTED, _ref

if HAVE_COMPILED:
    from rbroc._kernels import _fast
else:
    _fast = None


def make_discrete(rng: np.random.Generator, rows: int, levels: int = 5):
    p_nd = rng.dirichlet(np.ones(levels), size=rows)
    p_d = rng.dirichlet(np.ones(levels), size=rows)
    w = rng.uniform(0.05, 0.95, size=rows)
    return p_nd, p_d, w


def make_process(rng: np.random.Generator, rows: int, trunc: int = 500):
    def one(size):
        v = rng.beta(1.0, 20.0, size=(rows, size))
        logs = np.concatenate(
            [np.zeros((rows, 1)), np.cumsum(np.log1p(-v[:, :-1]), axis=1)], axis=1
        )
        wts = v * np.exp(logs)
        wts /= wts.sum(axis=1, keepdims=True)
        atoms = np.sort(rng.normal(0.0, 1.0, size=(rows, size)), axis=1)
        return np.ascontiguousarray(wts), atoms

    w_nd, a_nd = one(trunc)
    w_d, a_d = one(trunc)
    w = rng.uniform(0.05, 0.95, size=rows)
    c = rng.normal(0.0, 1.0, size=rows)
    return w_nd, a_nd, w_d, a_d, w, c


def bench(label: str, fn_ref, fn_fast, args, repeats: int, check):
    t0 = time.perf_counter()
    for _ in range(repeats):
        ref_out = fn_ref(*args)
    t_ref = (time.perf_counter() - t0) / repeats

    if fn_fast is None:
        print(f"{label:28s} ref {t_ref * 1e3:9.2f} ms   (no compiled backend)")
        return

    t0 = time.perf_counter()
    for _ in range(repeats):
        fast_out = fn_fast(*args)
    t_fast = (time.perf_counter() - t0) / repeats

    check(ref_out, fast_out)
    speedup = t_ref / t_fast if t_fast > 0 else float("inf")
    print(
        f"{label:28s} ref {t_ref * 1e3:9.2f} ms   compiled {t_fast * 1e3:9.2f} ms"
        f"   x{speedup:.1f}"
    )


def eq_arrays(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    assert a.shape == b.shape
    assert np.array_equal(a, b, equal_nan=True), "backend outputs differ"


def eq_tuples(a, b):
    for x, y in zip(a, b):
        eq_arrays(x, y)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=4000, help="batch rows per call")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats")
    ap.add_argument("--trunc", type=int, default=500, help="atoms per process row")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"rows={args.rows} trunc={args.trunc} repeats={args.repeats} "
          f"compiled_available={HAVE_COMPILED}")

    p_nd, p_d, w = make_discrete(rng, args.rows)
    bench(
        "discrete_auc_batch",
        _ref.discrete_auc_batch,
        _fast.discrete_auc_batch if _fast else None,
        (p_nd, p_d),
        args.repeats,
        eq_arrays,
    )
    bench(
        "discrete_copt_batch",
        _ref.discrete_copt_batch,
        _fast.discrete_copt_batch if _fast else None,
        (p_nd, p_d, w),
        args.repeats,
        eq_arrays,
    )

    w_nd, a_nd, w_d, a_d, wv, c = make_process(rng, args.rows, args.trunc)
    bench(
        "process_auc_batch",
        _ref.process_auc_batch,
        _fast.process_auc_batch if _fast else None,
        (w_nd, a_nd, w_d, a_d),
        args.repeats,
        eq_arrays,
    )
    for mode, name in ((MODE_ERROR, "error"), (MODE_WEIGHTED, "weighted"), (MODE_FNDR, "fndr")):
        bench(
            f"step_copt_batch[{name}]",
            _ref.step_copt_batch,
            _fast.step_copt_batch if _fast else None,
            (w_nd, a_nd, w_d, a_d, wv, mode),
            args.repeats,
            eq_tuples,
        )
    bench(
        "cdf_at_batch",
        _ref.cdf_at_batch,
        _fast.cdf_at_batch if _fast else None,
        (w_nd, a_nd, c),
        args.repeats,
        eq_arrays,
    )


if __name__ == "__main__":
    main()
