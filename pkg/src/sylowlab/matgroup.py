"""Explicit SL_n(q) and PSL_n(q) for n in 2..4, q <= 64.

Elements are n x n uint8 arrays of GF(q) codes with determinant 1.  A matrix
packs into an integer code, row-major, ceil(log2 q) bits per entry, first
entry in the most significant bits; comparing codes is then exactly the
row-major lexicographic comparison of entries.  PSL elements are represented
by the canonical member of their center coset: the scalar multiple with the
smallest packed code.  Unitriangular matrices are always canonical (their
leading entry 1 beats any scalar z > 1), which keeps the Sylow subgroup U
literally inside the PSL representation.

Batch work (enumeration, random sampling, conjugation) runs on (m, n, n)
arrays through the kernels package; single-element convenience ops are plain
Python on top of the same tables.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels, lietype
from .gf import FieldSpec, field_from_order

DEFAULT_ENUM_CAP = 10_000_000

_ENUM_CHUNK = 1 << 19


class EnumerationCapError(RuntimeError):
    """Raised when an enumeration would exceed the configured element cap."""


@functools.lru_cache(maxsize=None)
def _perm_arrays(k: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of range(k) with parities, for determinant expansion."""
    perms = list(itertools.permutations(range(k)))
    arr = np.array(perms, dtype=np.int64)
    odd = np.array([_parity(p) for p in perms], dtype=np.uint8)
    arr.setflags(write=False)
    odd.setflags(write=False)
    return arr, odd


def _parity(perm) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return inv & 1


class GroupSpec:
    """SL or PSL of degree n over a fixed field, with packing metadata."""

    def __init__(self, field: FieldSpec, n: int, variant: str):
        if n < 2 or n > 4:
            raise ValueError(f"n = {n} out of the supported range 2..4")
        if variant not in ("SL", "PSL"):
            raise ValueError(f"variant must be 'SL' or 'PSL', got {variant!r}")
        self.field = field
        self.n = n
        self.variant = variant
        q = field.q
        self.bits = max(1, (q - 1).bit_length())
        self.total_bits = self.bits * n * n
        self.packable = self.total_bits <= 64
        d = math.gcd(n, q - 1)
        self.center_order = d if variant == "PSL" else 1
        if variant == "PSL":
            scal = [z for z in range(1, q) if field.pow(z, n) == 1]
            if len(scal) != d:
                raise RuntimeError(f"center size mismatch in {self!r}")
        else:
            scal = [1]
        self.center_scalars = np.array(scal, dtype=np.uint8)
        self.center_scalars.setflags(write=False)
        self.name = f"{variant}({n},{q})"

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return (
            isinstance(other, GroupSpec)
            and self.field == other.field
            and self.n == other.n
            and self.variant == other.variant
        )

    def __hash__(self):
        return hash((self.field, self.n, self.variant))


@functools.lru_cache(maxsize=None)
def group_spec(q: int, n: int, variant: str = "SL") -> GroupSpec:
    return GroupSpec(field_from_order(q), n, variant)


def group_order(spec: GroupSpec) -> int:
    """Order from the closed formula (cross-checked against enumeration)."""
    params = lietype.params_for("A", spec.n - 1)
    variant = "simple" if spec.variant == "PSL" else "universal"
    return lietype.order_exact(params, spec.q, variant).group_order


def _det_py(field: FieldSpec, arr: np.ndarray) -> int:
    perms, odd = _perm_arrays(arr.shape[0])
    det = 0
    for t in range(perms.shape[0]):
        term = 1
        for i, j in enumerate(perms[t]):
            term = field.mul(term, int(arr[i, j]))
        if odd[t]:
            term = field.neg(term)
        det = field.add(det, term)
    return det


def _canonical_entries(spec: GroupSpec, arr: np.ndarray) -> np.ndarray:
    if spec.center_scalars.shape[0] == 1:
        return arr
    mul_t = spec.field.mul_table
    best = None
    best_key = None
    for z in spec.center_scalars:
        cand = mul_t[z, arr]
        key = tuple(cand.reshape(-1).tolist())
        if best_key is None or key < best_key:
            best_key = key
            best = cand
    return best


class Mat:
    """A group element: immutable entries plus a cached packed code."""

    __slots__ = ("spec", "entries", "_code")

    def __init__(self, spec: GroupSpec, entries, check: bool = True):
        arr = np.array(entries, dtype=np.uint8)
        if check:
            if arr.shape != (spec.n, spec.n):
                raise ValueError(f"expected a {spec.n}x{spec.n} matrix")
            if arr.max(initial=0) >= spec.q:
                raise ValueError(f"entry out of range for GF({spec.q})")
            if _det_py(spec.field, arr) != 1:
                raise ValueError("matrix is not in SL (det != 1)")
        if spec.variant == "PSL":
            arr = _canonical_entries(spec, arr)
        arr.setflags(write=False)
        self.spec = spec
        self.entries = arr
        self._code = None

    @property
    def packed(self) -> int:
        """Packed code as a Python int (works beyond 64 bits)."""
        if self._code is None:
            code = 0
            for v in self.entries.reshape(-1).tolist():
                code = (code << self.spec.bits) | v
            self._code = code
        return self._code

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.spec == other.spec
            and self.packed == other.packed
        )

    def __hash__(self):
        return hash((self.spec.name, self.packed))

    def __repr__(self):
        return f"Mat({self.spec.name}, {format_matrix(self)!r})"

    def __matmul__(self, other):
        return g_mul(self, other)


def g_id(spec: GroupSpec) -> Mat:
    return Mat(spec, np.eye(spec.n, dtype=np.uint8), check=False)


def g_mul(a: Mat, b: Mat) -> Mat:
    if a.spec != b.spec:
        raise ValueError("elements of different groups")
    f = a.spec.field
    n = a.spec.n
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = f.add(acc, f.mul(int(a.entries[i, k]), int(b.entries[k, j])))
            out[i, j] = acc
    return Mat(a.spec, out, check=False)


def _adjugate(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    if n == 2:
        a, b, c, d = (int(arr[0, 0]), int(arr[0, 1]), int(arr[1, 0]), int(arr[1, 1]))
        return np.array(
            [[d, field.neg(b)], [field.neg(c), a]], dtype=np.uint8
        )
    adj = np.zeros((n, n), dtype=np.uint8)
    rows = list(range(n))
    cols = list(range(n))
    for i in range(n):
        for j in range(n):
            sub = arr[np.ix_([r for r in rows if r != i], [c for c in cols if c != j])]
            minor = _det_py(field, sub)
            if (i + j) & 1:
                minor = field.neg(minor)
            adj[j, i] = minor
    return adj


def g_inv(a: Mat) -> Mat:
    # det = 1, so the adjugate is the inverse.
    return Mat(a.spec, _adjugate(a.spec.field, a.entries), check=False)


def canonicalize(spec: GroupSpec, entries) -> Mat:
    """Canonical coset representative (identity map for the SL variant)."""
    return Mat(spec, entries)


def conjugate(g: Mat, x: Mat) -> Mat:
    """x^g = g^-1 x g."""
    return g_mul(g_mul(g_inv(g), x), g)


# ---------------------------------------------------------------------------
# batch helpers bridging Mat-level code and the uint64 kernels


def _require_packable(spec: GroupSpec) -> None:
    if not spec.packable:
        raise ValueError(
            f"{spec.name} needs {spec.total_bits} bits per element; batch "
            "operations support at most 64"
        )


def unpack(spec: GroupSpec, codes: np.ndarray) -> np.ndarray:
    _require_packable(spec)
    return kernels.unpack_codes(np.ascontiguousarray(codes), spec.n, spec.bits)


def canonical_pack(spec: GroupSpec, mats: np.ndarray) -> np.ndarray:
    """Packed codes of canonical representatives, batch."""
    _require_packable(spec)
    return kernels.canonical_codes(
        np.ascontiguousarray(mats), spec.center_scalars, spec.field.mul_table, spec.bits
    )


def det_batch(spec: GroupSpec, mats: np.ndarray) -> np.ndarray:
    f = spec.field
    perms, odd = _perm_arrays(mats.shape[1])
    return kernels.det_batch(
        np.ascontiguousarray(mats), perms, odd, f.mul_table, f.add_table, f.neg_table
    )


def inv_batch(spec: GroupSpec, mats: np.ndarray) -> np.ndarray:
    """Batch inverse via the adjugate; requires det = 1 throughout."""
    n = spec.n
    f = spec.field
    m = mats.shape[0]
    if n == 2:
        out = np.empty_like(mats)
        out[:, 0, 0] = mats[:, 1, 1]
        out[:, 1, 1] = mats[:, 0, 0]
        out[:, 0, 1] = f.neg_table[mats[:, 0, 1]]
        out[:, 1, 0] = f.neg_table[mats[:, 1, 0]]
        return out
    perms, odd = _perm_arrays(n - 1)
    out = np.empty((m, n, n), dtype=np.uint8)
    for i in range(n):
        keep_r = [r for r in range(n) if r != i]
        for j in range(n):
            keep_c = [c for c in range(n) if c != j]
            sub = np.ascontiguousarray(mats[:, keep_r][:, :, keep_c])
            minors = kernels.det_batch(
                sub, perms, odd, f.mul_table, f.add_table, f.neg_table
            )
            if (i + j) & 1:
                minors = f.neg_table[minors]
            out[:, j, i] = minors
    return out


def conjugate_batch(spec: GroupSpec, mats: np.ndarray, g_entries: np.ndarray) -> np.ndarray:
    """g^-1 M g for every M in the batch."""
    f = spec.field
    ginv = _adjugate(f, g_entries)
    left = kernels.one_mul(
        np.ascontiguousarray(ginv), np.ascontiguousarray(mats), f.mul_table, f.add_table
    )
    return kernels.mul_one(
        left, np.ascontiguousarray(g_entries), f.mul_table, f.add_table
    )


# ---------------------------------------------------------------------------
# Weyl representatives


def w0(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def all_perms(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def weyl_rep(spec: GroupSpec, perm: Iterable[int]) -> Mat:
    """Signed permutation matrix for perm: entry at (perm[i], i) per column i.

    The entry in the last column flips sign for odd permutations, which makes
    the determinant 1 (the swap gives [[0,-1],[1,0]], the 3x3 reversal the
    antidiagonal (-1, 1, 1) matrix).
    """
    perm = tuple(perm)
    n = spec.n
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm!r} is not a permutation of range({n})")
    arr = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        arr[perm[i], i] = 1
    if _parity(perm):
        arr[perm[n - 1], n - 1] = spec.field.neg(1)
    return Mat(spec, arr, check=False)


# ---------------------------------------------------------------------------
# enumeration


def _digit_mats(values: np.ndarray, n: int, q: int) -> np.ndarray:
    """Base-q digits of each value, reshaped to (m, n, n)."""
    m = values.shape[0]
    flat = np.empty((m, n * n), dtype=np.uint8)
    work = values.copy()
    for idx in range(n * n):
        flat[:, idx] = (work % q).astype(np.uint8)
        work //= q
    return flat.reshape(m, n, n)


@functools.lru_cache(maxsize=8)
def _sl_codes(field: FieldSpec, n: int) -> np.ndarray:
    """Sorted packed codes of every SL_n(q) element, by brute-force search."""
    spec = GroupSpec(field, n, "SL")
    q = field.q
    total = q ** (n * n)
    if total > 1 << 62:
        raise EnumerationCapError(
            f"brute-force search space {q}^{n * n} is out of reach"
        )
    found = []
    for start in range(0, total, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, total)
        mats = _digit_mats(np.arange(start, stop, dtype=np.int64), n, q)
        keep = det_batch(spec, mats) == 1
        found.append(kernels.pack_codes(np.ascontiguousarray(mats[keep]), spec.bits))
    codes = np.sort(np.concatenate(found))
    codes.setflags(write=False)
    return codes


def enumerate_group(spec: GroupSpec, cap: int = DEFAULT_ENUM_CAP):
    """Every element, as a frozen set of packed codes (an ElemSet)."""
    from .setprod import ElemSet

    _require_packable(spec)
    predicted = group_order(spec)
    if predicted > cap:
        raise EnumerationCapError(
            f"|{spec.name}| = {predicted} exceeds the enumeration cap {cap}"
        )
    sl = _sl_codes(spec.field, spec.n)
    if spec.variant == "SL":
        return ElemSet(spec, sl, presorted=True)
    canon = canonical_pack(spec, unpack(spec, sl))
    return ElemSet(spec, np.unique(canon), presorted=True)


@dataclass(frozen=True)
class SubgroupId:
    """U/V/H/B, optionally conjugated: base^g = g^-1 (base) g."""

    base: str
    conjugator: Optional[Mat] = None

    def __post_init__(self):
        if self.base not in ("U", "V", "H", "B"):
            raise ValueError(f"base must be one of U, V, H, B, got {self.base!r}")


def subgroup_order(spec: GroupSpec, sub: SubgroupId) -> int:
    q, n = spec.q, spec.n
    m = n * (n - 1) // 2
    if sub.base in ("U", "V"):
        return q**m
    torus = (q - 1) ** (n - 1) // spec.center_order
    if sub.base == "H":
        return torus
    return q**m * torus


def _upper_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _unitriangular_mats(spec: GroupSpec, lower: bool) -> np.ndarray:
    n, q = spec.n, spec.q
    pos = _upper_positions(n)
    count = q ** len(pos)
    mats = np.zeros((count, n, n), dtype=np.uint8)
    for i in range(n):
        mats[:, i, i] = 1
    vals = np.arange(count, dtype=np.int64)
    for i, j in pos:
        digit = (vals % q).astype(np.uint8)
        vals //= q
        if lower:
            mats[:, j, i] = digit
        else:
            mats[:, i, j] = digit
    return mats


def _torus_mats(spec: GroupSpec) -> np.ndarray:
    n, q = spec.n, spec.q
    f = spec.field
    units = np.arange(1, q, dtype=np.uint8)
    count = (q - 1) ** (n - 1)
    mats = np.zeros((count, n, n), dtype=np.uint8)
    vals = np.arange(count, dtype=np.int64)
    prod = np.ones(count, dtype=np.uint8)
    for i in range(n - 1):
        digit = units[(vals % (q - 1)).astype(np.int64)]
        vals //= q - 1
        mats[:, i, i] = digit
        prod = f.mul_table[prod, digit]
    mats[:, n - 1, n - 1] = f.inv_table[prod]
    return mats


def subgroup_mats(spec: GroupSpec, sub: SubgroupId, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """All elements of the subgroup as SL matrices (before canonicalization)."""
    predicted = subgroup_order(spec, sub) * (
        spec.center_order if sub.base in ("H", "B") else 1
    )
    if predicted > cap:
        raise EnumerationCapError(
            f"|{sub.base}| in {spec.name} is {predicted}, over the cap {cap}"
        )
    if sub.base == "U":
        mats = _unitriangular_mats(spec, lower=False)
    elif sub.base == "V":
        mats = _unitriangular_mats(spec, lower=True)
    elif sub.base == "H":
        mats = _torus_mats(spec)
    else:
        f = spec.field
        mats = kernels.mul_pairs(
            _unitriangular_mats(spec, lower=False),
            _torus_mats(spec),
            f.mul_table,
            f.add_table,
        )
    if sub.conjugator is not None:
        if sub.conjugator.spec != spec:
            raise ValueError("conjugator belongs to a different group")
        mats = conjugate_batch(spec, mats, sub.conjugator.entries)
    return mats


def enumerate_subgroup(spec: GroupSpec, sub: SubgroupId, cap: int = DEFAULT_ENUM_CAP):
    from .setprod import ElemSet

    _require_packable(spec)
    codes = canonical_pack(spec, subgroup_mats(spec, sub, cap))
    return ElemSet(spec, np.unique(codes), presorted=True)


# ---------------------------------------------------------------------------
# random sampling


def _random_sl_batch(spec: GroupSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform SL elements: reject singular draws, scale row 0 by 1/det.

    Scaling the first row maps GL onto SL exactly (q-1)-to-1, so the output
    is uniform.  Candidates are consumed in draw order, which keeps results
    reproducible for a given generator state.
    """
    f = spec.field
    n, q = spec.n, spec.q
    out = np.empty((count, n, n), dtype=np.uint8)
    have = 0
    while have < count:
        block = max(count - have, 8)
        cand = rng.integers(0, q, size=(block, n, n), dtype=np.uint8)
        dets = det_batch(spec, cand)
        good = cand[dets != 0]
        gdets = dets[dets != 0]
        take = min(count - have, good.shape[0])
        if take:
            sel = good[:take].copy()
            factors = f.inv_table[gdets[:take]]
            sel[:, 0, :] = f.mul_table[factors[:, None], sel[:, 0, :]]
            out[have : have + take] = sel
            have += take
    return out


def random_element(spec: GroupSpec, rng: np.random.Generator) -> Mat:
    """One uniform element (uniform over canonical representatives for PSL)."""
    return Mat(spec, _random_sl_batch(spec, rng, 1)[0], check=False)


# ---------------------------------------------------------------------------
# CLI matrix format: rows separated by ';', entries by ','


def parse_matrix(spec: GroupSpec, text: str) -> Mat:
    rows = [row.strip() for row in text.strip().split(";")]
    entries = [[int(v) for v in row.split(",")] for row in rows]
    arr = np.array(entries, dtype=np.int64)
    if arr.shape != (spec.n, spec.n):
        raise ValueError(f"expected {spec.n} rows of {spec.n} entries")
    if arr.min() < 0 or arr.max() >= spec.q:
        raise ValueError(f"entries must be codes in 0..{spec.q - 1}")
    return Mat(spec, arr.astype(np.uint8))


def format_matrix(mat: Mat) -> str:
    return ";".join(",".join(str(int(v)) for v in row) for row in mat.entries)
