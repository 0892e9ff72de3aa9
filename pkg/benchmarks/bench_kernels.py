#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy reference backend.

Times the batched GF(q) primitives on a realistic workload (conjugated Sylow
subgroups of SL_3(q) and a full set-product trial), checks that both backends
return bit-identical arrays, and prints the speedups.

The numba backend compiles on first call, so every kernel is warmed up before
timing.  Run with --backend numpy on a machine without numba.
"""

import argparse
import time

import numpy as np

from sylowlab.kernels import active_backend, available_backends, select_backend
from sylowlab import kernels
from sylowlab.matgroup import (
    _perm_arrays,
    _random_sl_batch,
    group_spec,
    subgroup_mats,
    SubgroupId,
)
from sylowlab.setprod import ElemSet, product


def _workload(q, n, batch, seed):
    spec = group_spec(q, n, "SL")
    rng = np.random.Generator(np.random.Philox(seed))
    mats = np.ascontiguousarray(_random_sl_batch(spec, rng, batch))
    other = np.ascontiguousarray(_random_sl_batch(spec, rng, batch))
    u = subgroup_mats(spec, SubgroupId("U"))
    return spec, mats, other, u


def _time(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def run(q, n, batch, repeat, seed):
    spec, mats, other, u = _workload(q, n, batch, seed)
    f = spec.field
    perms, odd = _perm_arrays(n)
    u_set = ElemSet.from_mats(spec, u)

    pairs_a = np.ascontiguousarray(mats[:1024])
    pairs_b = np.ascontiguousarray(other[:1024])
    cases = {
        "mul_rows": lambda: kernels.mul_rows(
            mats, other, f.mul_table, f.add_table
        ),
        "mul_pairs(1024^2)": lambda: kernels.mul_pairs(
            pairs_a, pairs_b, f.mul_table, f.add_table
        ),
        "det_batch": lambda: kernels.det_batch(
            mats, perms, odd, f.mul_table, f.add_table, f.neg_table
        ),
        "pack_codes": lambda: kernels.pack_codes(mats, spec.bits),
        "canonical_codes": lambda: kernels.canonical_codes(
            mats, spec.center_scalars, f.mul_table, spec.bits
        ),
        "pair_product_codes": lambda: kernels.pair_product_codes(
            u, pairs_b[:64], spec.center_scalars, f.mul_table, f.add_table, spec.bits
        ),
        "set_product(U*U)": lambda: len(product(u_set, u_set)),
    }

    print(f"workload: SL({n},{q}), batch={batch}, best of {repeat}")
    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>8}  identical")
    for name, fn in cases.items():
        rows = {}
        outs = {}
        for backend in ("numpy", "numba"):
            if backend not in available_backends():
                continue
            select_backend(backend)
            fn()  # warm up (numba compiles here)
            rows[backend], outs[backend] = _time(fn, repeat)
        if "numba" not in rows:
            print(f"{name:<22} {rows['numpy'] * 1e3:>8.2f}ms {'n/a':>10}")
            continue
        same = np.array_equal(
            np.asarray(outs["numpy"]), np.asarray(outs["numba"])
        )
        speedup = rows["numpy"] / rows["numba"]
        print(
            f"{name:<22} {rows['numpy'] * 1e3:>8.2f}ms {rows['numba'] * 1e3:>8.2f}ms"
            f" {speedup:>7.1f}x  {same}"
        )
        if not same:
            raise SystemExit(f"backend mismatch in {name}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=13)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--backend", choices=("numpy", "numba"), default=None,
                    help="pin one backend instead of comparing")
    args = ap.parse_args()

    if args.backend:
        select_backend(args.backend)
        print(f"pinned backend: {active_backend()}")
    print(f"available backends: {', '.join(available_backends())}")
    run(args.q, args.n, args.batch, args.repeat, args.seed)


if __name__ == "__main__":
    main()
