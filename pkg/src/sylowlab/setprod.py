"""Exact product-set arithmetic over packed group elements.

An ElemSet is an immutable set of packed codes (sorted uint64 array plus a
lazily built frozenset for membership).  Products enumerate all pairs through
the kernel backend, canonicalize, and dedupe with np.unique, so results are
deterministic and identical across backends.

Work is metered in pair multiplications.  A product that would exceed the cap
raises WorkCapError before doing the work; iterated products keep a running
total across steps.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .matgroup import GroupSpec, Mat, group_order, inv_batch, unpack

DEFAULT_WORK_CAP = 1_000_000_000

_PAIR_CHUNK = 1 << 20


class WorkCapError(RuntimeError):
    """Raised when a product would exceed the pair-multiplication budget."""


class ElemSet:
    """Frozen set of group elements, stored as sorted packed codes."""

    __slots__ = ("spec", "codes", "_fset")

    def __init__(self, spec: GroupSpec, codes: np.ndarray, presorted: bool = False):
        if not spec.packable:
            raise ValueError(
                f"{spec.name} does not pack into 64 bits; ElemSet unsupported"
            )
        arr = np.asarray(codes, dtype=np.uint64)
        if not presorted:
            arr = np.unique(arr)
        else:
            arr = arr.copy() if arr.base is not None or arr.flags.writeable else arr
        arr.setflags(write=False)
        self.spec = spec
        self.codes = arr
        self._fset = None

    @classmethod
    def from_mats(cls, spec: GroupSpec, mats: np.ndarray) -> "ElemSet":
        from .matgroup import canonical_pack

        return cls(spec, np.unique(canonical_pack(spec, mats)), presorted=True)

    @classmethod
    def from_elements(cls, spec: GroupSpec, elements: Iterable[Mat]) -> "ElemSet":
        codes = np.array([m.packed for m in elements], dtype=np.uint64)
        return cls(spec, codes)

    def __len__(self) -> int:
        return int(self.codes.shape[0])

    def __contains__(self, item) -> bool:
        code = item.packed if isinstance(item, Mat) else int(item)
        if self._fset is None:
            self._fset = frozenset(self.codes.tolist())
        return code in self._fset

    def __eq__(self, other):
        return (
            isinstance(other, ElemSet)
            and self.spec == other.spec
            and self.codes.shape == other.codes.shape
            and bool(np.all(self.codes == other.codes))
        )

    def __hash__(self):
        return hash((self.spec.name, self.codes.tobytes()))

    def __repr__(self):
        return f"ElemSet({self.spec.name}, {len(self)} elements)"

    def mats(self) -> np.ndarray:
        return unpack(self.spec, self.codes)

    def elements(self) -> list[Mat]:
        return [Mat(self.spec, m, check=False) for m in self.mats()]


def _check_specs(a: ElemSet, b: ElemSet) -> GroupSpec:
    if a.spec != b.spec:
        raise ValueError(f"mixed groups: {a.spec.name} vs {b.spec.name}")
    return a.spec


def product(a: ElemSet, b: ElemSet, work_cap: int = DEFAULT_WORK_CAP) -> ElemSet:
    """{x y : x in a, y in b}, exactly."""
    spec = _check_specs(a, b)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("product of an empty set")
    work = len(a) * len(b)
    if work > work_cap:
        raise WorkCapError(f"{work} pair multiplications exceed the cap {work_cap}")
    f = spec.field
    A = a.mats()
    B = b.mats()
    rows_per_chunk = max(1, _PAIR_CHUNK // max(1, len(b)))
    pieces = []
    for start in range(0, len(a), rows_per_chunk):
        chunk = np.ascontiguousarray(A[start : start + rows_per_chunk])
        codes = kernels.pair_product_codes(
            chunk, B, spec.center_scalars, f.mul_table, f.add_table, spec.bits
        )
        pieces.append(np.unique(codes))
    return ElemSet(spec, np.unique(np.concatenate(pieces)), presorted=True)


def iterated_product(
    sets: Sequence[ElemSet],
    work_cap: int = DEFAULT_WORK_CAP,
    stop_order: Optional[int] = None,
) -> ElemSet:
    """Left-to-right product of several sets with a running work budget.

    stop_order: when the running product reaches this size it is the whole
    group and the remaining factors cannot change it (every factor is
    nonempty), so the fold stops early.  Defaults to the group order.
    """
    if not sets:
        raise ValueError("iterated product of no sets")
    spec = sets[0].spec
    for s in sets[1:]:
        _check_specs(sets[0], s)
    if stop_order is None:
        stop_order = group_order(spec)
    acc = sets[0]
    if len(acc) == 0:
        raise ValueError("product of an empty set")
    budget = work_cap
    for s in sets[1:]:
        if len(acc) >= stop_order:
            break
        step = len(acc) * len(s)
        if step > budget:
            raise WorkCapError(
                f"iterated product needs {step} more pair multiplications; "
                f"only {budget} of the cap remain"
            )
        budget -= step
        acc = product(acc, s, work_cap=step)
    return acc


def inverse_set(a: ElemSet) -> ElemSet:
    return ElemSet.from_mats(a.spec, inv_batch(a.spec, a.mats()))


def times_element(a: ElemSet, g: Mat, work_cap: int = DEFAULT_WORK_CAP) -> ElemSet:
    """{x g : x in a}; a bijection, so the size never changes."""
    if g.spec != a.spec:
        raise ValueError("element of a different group")
    if len(a) > work_cap:
        raise WorkCapError(f"{len(a)} multiplications exceed the cap {work_cap}")
    f = a.spec.field
    mats = kernels.mul_one(a.mats(), g.entries, f.mul_table, f.add_table)
    out = ElemSet.from_mats(a.spec, mats)
    assert len(out) == len(a)
    return out


def ruzsa_verify(
    a: ElemSet, b: ElemSet, c: ElemSet, work_cap: int = DEFAULT_WORK_CAP
) -> dict:
    """Check |AB| |C| <= |AC| |C^-1 B| on concrete sets; returns the numbers."""
    spec = _check_specs(a, b)
    _check_specs(a, c)
    ab = len(product(a, b, work_cap))
    ac = len(product(a, c, work_cap))
    cinv_b = len(product(inverse_set(c), b, work_cap))
    record = {
        "group": spec.name,
        "ab": ab,
        "ac": ac,
        "cinv_b": cinv_b,
        "c": len(c),
        "lhs": ab * len(c),
        "rhs": ac * cinv_b,
    }
    record["holds"] = record["lhs"] <= record["rhs"]
    return record


def growth_verify(a: ElemSet, b: ElemSet, work_cap: int = DEFAULT_WORK_CAP) -> dict:
    """Check |A A^-1| |B| <= |AB|^2 (squared form of the growth inequality)."""
    spec = _check_specs(a, b)
    aainv = len(product(a, inverse_set(a), work_cap))
    ab = len(product(a, b, work_cap))
    record = {
        "group": spec.name,
        "a_ainv": aainv,
        "b": len(b),
        "ab": ab,
        "lhs": aainv * len(b),
        "rhs": ab * ab,
    }
    record["holds"] = record["lhs"] <= record["rhs"]
    return record
