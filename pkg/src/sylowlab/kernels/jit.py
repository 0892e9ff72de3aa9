"""Numba kernel implementations.  Contracts documented in reference.py.

All kernels are nopython, nogil (trial loops may run under a thread pool) and
cached on disk, so the compile cost is paid once per machine.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U64_MAX = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, nogil=True)
def mul_rows(A, B, mul_t, add_t):
    m, n, _ = A.shape
    out = np.empty((m, n, n), dtype=np.uint8)
    for t in range(m):
        for i in range(n):
            for j in range(n):
                acc = mul_t[A[t, i, 0], B[t, 0, j]]
                for k in range(1, n):
                    acc = add_t[acc, mul_t[A[t, i, k], B[t, k, j]]]
                out[t, i, j] = acc
    return out


@njit(cache=True, nogil=True)
def mul_one(A, b, mul_t, add_t):
    m, n, _ = A.shape
    out = np.empty((m, n, n), dtype=np.uint8)
    for t in range(m):
        for i in range(n):
            for j in range(n):
                acc = mul_t[A[t, i, 0], b[0, j]]
                for k in range(1, n):
                    acc = add_t[acc, mul_t[A[t, i, k], b[k, j]]]
                out[t, i, j] = acc
    return out


@njit(cache=True, nogil=True)
def one_mul(a, B, mul_t, add_t):
    m, n, _ = B.shape
    out = np.empty((m, n, n), dtype=np.uint8)
    for t in range(m):
        for i in range(n):
            for j in range(n):
                acc = mul_t[a[i, 0], B[t, 0, j]]
                for k in range(1, n):
                    acc = add_t[acc, mul_t[a[i, k], B[t, k, j]]]
                out[t, i, j] = acc
    return out


@njit(cache=True, nogil=True)
def mul_pairs(A, B, mul_t, add_t):
    ma, n, _ = A.shape
    mb = B.shape[0]
    out = np.empty((ma * mb, n, n), dtype=np.uint8)
    for ia in range(ma):
        base = ia * mb
        for ib in range(mb):
            for i in range(n):
                for j in range(n):
                    acc = mul_t[A[ia, i, 0], B[ib, 0, j]]
                    for k in range(1, n):
                        acc = add_t[acc, mul_t[A[ia, i, k], B[ib, k, j]]]
                    out[base + ib, i, j] = acc
    return out


@njit(cache=True, nogil=True)
def det_batch(mats, perms, odd, mul_t, add_t, neg_t):
    m = mats.shape[0]
    nperm, width = perms.shape
    out = np.empty(m, dtype=np.uint8)
    for t in range(m):
        acc = np.uint8(0)
        for s in range(nperm):
            term = mats[t, 0, perms[s, 0]]
            for i in range(1, width):
                term = mul_t[term, mats[t, i, perms[s, i]]]
            if odd[s]:
                term = neg_t[term]
            acc = add_t[acc, term]
        out[t] = acc
    return out


@njit(cache=True, nogil=True)
def pack_codes(mats, bits):
    m, n, _ = mats.shape
    out = np.empty(m, dtype=np.uint64)
    sh = np.uint64(bits)
    for t in range(m):
        code = np.uint64(0)
        for i in range(n):
            for j in range(n):
                code = (code << sh) | np.uint64(mats[t, i, j])
        out[t] = code
    return out


@njit(cache=True, nogil=True)
def unpack_codes(codes, n, bits):
    m = codes.shape[0]
    out = np.empty((m, n, n), dtype=np.uint8)
    mask = np.uint64((1 << bits) - 1)
    sh = np.uint64(bits)
    for t in range(m):
        work = codes[t]
        for idx in range(n * n - 1, -1, -1):
            out[t, idx // n, idx % n] = np.uint8(work & mask)
            work >>= sh
    return out


@njit(cache=True, nogil=True)
def canonical_codes(mats, scalars, mul_t, bits):
    m, n, _ = mats.shape
    ns = scalars.shape[0]
    out = np.empty(m, dtype=np.uint64)
    sh = np.uint64(bits)
    for t in range(m):
        best = _U64_MAX
        for s in range(ns):
            z = scalars[s]
            code = np.uint64(0)
            for i in range(n):
                for j in range(n):
                    code = (code << sh) | np.uint64(mul_t[z, mats[t, i, j]])
            if code < best:
                best = code
        out[t] = best
    return out


@njit(cache=True, nogil=True)
def pair_product_codes(A, B, scalars, mul_t, add_t, bits):
    ma, n, _ = A.shape
    mb = B.shape[0]
    ns = scalars.shape[0]
    out = np.empty(ma * mb, dtype=np.uint64)
    sh = np.uint64(bits)
    prod = np.empty((n, n), dtype=np.uint8)
    for ia in range(ma):
        base = ia * mb
        for ib in range(mb):
            for i in range(n):
                for j in range(n):
                    acc = mul_t[A[ia, i, 0], B[ib, 0, j]]
                    for k in range(1, n):
                        acc = add_t[acc, mul_t[A[ia, i, k], B[ib, k, j]]]
                    prod[i, j] = acc
            best = _U64_MAX
            for s in range(ns):
                z = scalars[s]
                code = np.uint64(0)
                for i in range(n):
                    for j in range(n):
                        code = (code << sh) | np.uint64(mul_t[z, prod[i, j]])
                if code < best:
                    best = code
            out[base + ib] = best
    return out
