"""Bruhat decomposition relative to the standard Borel subgroup.

Every g factors as u1 * n_w * h * u2 with u1, u2 upper unitriangular, h
diagonal of determinant 1, and n_w the signed permutation matrix from
matgroup.weyl_rep.  The permutation w is determined by g alone; the double
cosets B n_w B partition the group.

Two independent routes compute w and are cross-checked in the tests:

  * cell_of reads w off the rank profile of the lower-left submatrices
    (rank of rows i.., columns ..j jumps by one at (i, j) exactly when
    w sends column j to row i);
  * decompose performs Gaussian elimination with row operations drawn from
    U on the left and column operations drawn from U on the right, which
    leaves a monomial matrix n_w * h.

g lies in the dense (big) cell, w = w0, if and only if all lower-left corner
minors of sizes 1..n-1 are nonzero.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .matgroup import (
    DEFAULT_ENUM_CAP,
    GroupSpec,
    Mat,
    _perm_arrays,
    enumerate_group,
    g_mul,
    w0,
    weyl_rep,
)


@dataclass(frozen=True)
class BruhatForm:
    u1: Mat
    w: tuple[int, ...]
    h: Mat
    u2: Mat

    def recompose(self) -> Mat:
        spec = self.u1.spec
        return g_mul(g_mul(g_mul(self.u1, weyl_rep(spec, self.w)), self.h), self.u2)


def _rank(field, arr: np.ndarray) -> int:
    """Row rank over GF(q) by elimination through the lookup tables."""
    a = arr.copy()
    rows, cols = a.shape
    mul_t, add_t, neg_t = field.mul_table, field.add_table, field.neg_table
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if a[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = field.inv(int(a[r, c]))
        a[r] = mul_t[inv, a[r]]
        for i in range(r + 1, rows):
            if a[i, c]:
                a[i] = add_t[a[i], mul_t[neg_t[a[i, c]], a[r]]]
        r += 1
        if r == rows:
            break
    return r


def cell_of(g: Mat) -> tuple[int, ...]:
    """The Weyl cell of g, read off the lower-left rank profile."""
    spec = g.spec
    n = spec.n
    arr = g.entries
    # table[i][j] = rank of rows i.., columns 0..j-1 (i, j in 0..n)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(1, n + 1):
            table[i][j] = _rank(spec.field, arr[i:, :j])
    perm = [-1] * n
    for i in range(n):
        for j in range(1, n + 1):
            jump = table[i][j] - table[i][j - 1] - table[i + 1][j] + table[i + 1][j - 1]
            if jump == 1:
                perm[j - 1] = i
    if sorted(perm) != list(range(n)):
        raise RuntimeError(f"rank profile of {g!r} is not a permutation")
    return tuple(perm)


def decompose(g: Mat) -> BruhatForm:
    """Gaussian elimination with U-restricted row and column operations.

    Column pivots are the bottom-most nonzero entries among rows not yet
    used; clearing above a pivot adds a lower row to an upper one (a row
    operation in U), clearing to its right adds an earlier column to a later
    one (a column operation in U).  What remains is monomial and factors as
    n_w * h against the weyl_rep sign convention.
    """
    spec = g.spec
    f = spec.field
    n = spec.n
    mul_t, add_t = f.mul_table, f.add_table
    a = g.entries.copy()
    u1 = np.eye(n, dtype=np.uint8)
    u2 = np.eye(n, dtype=np.uint8)
    used = [False] * n
    perm = [-1] * n
    for j in range(n):
        piv = -1
        for r in range(n - 1, -1, -1):
            if not used[r] and a[r, j]:
                piv = r
                break
        if piv < 0:
            raise RuntimeError(f"{g!r} is singular; not a group element")
        used[piv] = True
        perm[j] = piv
        pv_inv = f.inv(int(a[piv, j]))
        for r in range(piv):
            if a[r, j]:
                c = f.mul(f.neg(int(a[r, j])), pv_inv)
                a[r, :] = add_t[a[r, :], mul_t[c, a[piv, :]]]
                # applied I + c e_{r,piv} on the left; fold its inverse into u1
                u1[:, piv] = add_t[u1[:, piv], mul_t[f.neg(c), u1[:, r]]]
        for m in range(j + 1, n):
            if a[piv, m]:
                c = f.mul(f.neg(int(a[piv, m])), pv_inv)
                a[:, m] = add_t[a[:, m], mul_t[c, a[:, j]]]
                # applied I + c e_{j,m} on the right; fold its inverse into u2
                u2[j, :] = add_t[u2[j, :], mul_t[f.neg(c), u2[m, :]]]
    w = tuple(perm)
    sign_col = np.zeros((n, n), dtype=np.uint8)
    for j in range(n):
        sign_col[j, j] = int(a[perm[j], j])
    # divide out the representative's signs: its only nonunit entry is the
    # -1 in the last column when w is odd
    inversions = sum(1 for i in range(n) for k in range(i + 1, n) if w[i] > w[k])
    last_sign = f.neg(1) if inversions & 1 else 1
    if last_sign != 1:
        sign_col[n - 1, n - 1] = f.mul(f.inv(last_sign), int(sign_col[n - 1, n - 1]))
    h = Mat(spec, sign_col, check=False)
    return BruhatForm(
        u1=Mat(spec, u1, check=False),
        w=w,
        h=h,
        u2=Mat(spec, u2, check=False),
    )


def big_cell_mask(spec: GroupSpec, mats: np.ndarray) -> np.ndarray:
    """Boolean mask: all lower-left corner minors of sizes 1..n-1 nonzero."""
    f = spec.field
    n = spec.n
    mask = np.ones(mats.shape[0], dtype=bool)
    for k in range(1, n):
        sub = np.ascontiguousarray(mats[:, n - k :, :k])
        perms, odd = _perm_arrays(k)
        dets = kernels.det_batch(sub, perms, odd, f.mul_table, f.add_table, f.neg_table)
        mask &= dets != 0
    return mask


def in_big_cell(g: Mat) -> bool:
    return bool(big_cell_mask(g.spec, g.entries[None, :, :])[0])


def opposite_conjugacy_witness(g: Mat) -> tuple[Mat, Mat]:
    """Borel pair (b1, b2) with g = b1 * n_w0 * b2; needs g in the big cell.

    Conjugating U by such a g lands it on a Borel conjugate of the opposite
    unipotent subgroup, which meets U trivially.
    """
    if not in_big_cell(g):
        raise ValueError("element is outside the big cell; no witness exists")
    form = decompose(g)
    if form.w != w0(g.spec.n):
        raise RuntimeError("big-cell element decomposed into a smaller cell")
    return form.u1, g_mul(form.h, form.u2)


def cell_census(spec: GroupSpec, cap: int = DEFAULT_ENUM_CAP) -> dict[tuple[int, ...], int]:
    """Cell sizes over the whole (enumerable) group, via cell_of."""
    counts: Counter = Counter()
    group = enumerate_group(spec, cap)
    for mats in np.array_split(group.mats(), max(1, len(group) // 4096)):
        for entries in mats:
            counts[cell_of(Mat(spec, entries, check=False))] += 1
    return dict(counts)
