"""Pure-numpy kernel implementations.

Same contracts as the numba backend in jit.py: matrices are (m, n, n) uint8
arrays of GF(q) codes, ops go through the field's lookup tables, packed codes
are uint64 with the first (row-major) entry in the most significant bits.
"""

from __future__ import annotations

import numpy as np


def mul_rows(A, B, mul_t, add_t):
    """Elementwise-paired matrix products: out[t] = A[t] @ B[t] over GF(q)."""
    n = A.shape[1]
    acc = mul_t[A[:, :, 0, None], B[:, None, 0, :]]
    for k in range(1, n):
        acc = add_t[acc, mul_t[A[:, :, k, None], B[:, None, k, :]]]
    return acc


def mul_one(A, b, mul_t, add_t):
    """out[t] = A[t] @ b for a single right factor b."""
    n = A.shape[1]
    acc = mul_t[A[:, :, 0, None], b[None, None, 0, :]]
    for k in range(1, n):
        acc = add_t[acc, mul_t[A[:, :, k, None], b[None, None, k, :]]]
    return acc


def one_mul(a, B, mul_t, add_t):
    """out[t] = a @ B[t] for a single left factor a."""
    n = a.shape[0]
    acc = mul_t[a[None, :, 0, None], B[:, None, 0, :]]
    for k in range(1, n):
        acc = add_t[acc, mul_t[a[None, :, k, None], B[:, None, k, :]]]
    return acc


def mul_pairs(A, B, mul_t, add_t):
    """All-pairs products, row-major: out[ia * mb + ib] = A[ia] @ B[ib]."""
    ma, n, _ = A.shape
    mb = B.shape[0]
    acc = mul_t[A[:, None, :, 0, None], B[None, :, None, 0, :]]
    for k in range(1, n):
        acc = add_t[acc, mul_t[A[:, None, :, k, None], B[None, :, None, k, :]]]
    return acc.reshape(ma * mb, n, n)


def det_batch(mats, perms, odd, mul_t, add_t, neg_t):
    """Determinants by signed permutation expansion (n <= 4, so <= 24 terms)."""
    out = None
    for t in range(perms.shape[0]):
        term = mats[:, 0, perms[t, 0]]
        for i in range(1, perms.shape[1]):
            term = mul_t[term, mats[:, i, perms[t, i]]]
        if odd[t]:
            term = neg_t[term]
        out = term if out is None else add_t[out, term]
    return out


def pack_codes(mats, bits):
    m, n, _ = mats.shape
    flat = mats.reshape(m, n * n)
    codes = np.zeros(m, dtype=np.uint64)
    shift = np.uint64(bits)
    for idx in range(n * n):
        codes = (codes << shift) | flat[:, idx].astype(np.uint64)
    return codes


def unpack_codes(codes, n, bits):
    m = codes.shape[0]
    flat = np.empty((m, n * n), dtype=np.uint8)
    mask = np.uint64((1 << bits) - 1)
    shift = np.uint64(bits)
    work = codes.copy()
    for idx in range(n * n - 1, -1, -1):
        flat[:, idx] = (work & mask).astype(np.uint8)
        work >>= shift
    return flat.reshape(m, n, n)


def canonical_codes(mats, scalars, mul_t, bits):
    """Minimum packed code over the scalar orbit {z * mat : z in scalars}."""
    best = None
    for z in scalars:
        codes = pack_codes(mul_t[z, mats], bits)
        best = codes if best is None else np.minimum(best, codes)
    return best


def pair_product_codes(A, B, scalars, mul_t, add_t, bits):
    """Fused all-pairs product + canonical packing (the set-product hot path)."""
    return canonical_codes(mul_pairs(A, B, mul_t, add_t), scalars, mul_t, bits)
