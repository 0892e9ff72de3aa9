"""Batched GF(q) matrix kernels with two interchangeable backends.

The numba backend (jit.py) compiles the tight loops; the reference backend
(reference.py) is pure numpy and always available.  Both produce bit-identical
outputs, which the test suite asserts, so every experiment is reproducible
regardless of backend.

Selection: set SYLOWLAB_BACKEND=numba or SYLOWLAB_BACKEND=numpy before import,
or call select_backend() at runtime.  Default is numba when importable, numpy
otherwise.
"""

from __future__ import annotations

import os
import warnings

from . import reference

_IMPLS = {"numpy": reference}

try:
    from . import jit

    _IMPLS["numba"] = jit
except ImportError:  # pragma: no cover - numba is a declared dependency
    jit = None


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def _initial_backend() -> str:
    wanted = os.environ.get("SYLOWLAB_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in ("numpy", "numba"):
            raise ValueError(
                f"SYLOWLAB_BACKEND={wanted!r}: expected 'numba' or 'numpy'"
            )
        if wanted not in _IMPLS:
            warnings.warn(
                "SYLOWLAB_BACKEND=numba requested but numba is not importable; "
                "falling back to the numpy backend"
            )
            return "numpy"
        return wanted
    return "numba" if "numba" in _IMPLS else "numpy"


_ACTIVE = _initial_backend()


def select_backend(name: str) -> str:
    """Switch kernel backend; returns the previously active name."""
    global _ACTIVE
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    previous = _ACTIVE
    _ACTIVE = name
    return previous


def active_backend() -> str:
    return _ACTIVE


def mul_rows(A, B, mul_t, add_t):
    return _IMPLS[_ACTIVE].mul_rows(A, B, mul_t, add_t)


def mul_one(A, b, mul_t, add_t):
    return _IMPLS[_ACTIVE].mul_one(A, b, mul_t, add_t)


def one_mul(a, B, mul_t, add_t):
    return _IMPLS[_ACTIVE].one_mul(a, B, mul_t, add_t)


def mul_pairs(A, B, mul_t, add_t):
    return _IMPLS[_ACTIVE].mul_pairs(A, B, mul_t, add_t)


def det_batch(mats, perms, odd, mul_t, add_t, neg_t):
    return _IMPLS[_ACTIVE].det_batch(mats, perms, odd, mul_t, add_t, neg_t)


def pack_codes(mats, bits):
    return _IMPLS[_ACTIVE].pack_codes(mats, bits)


def unpack_codes(codes, n, bits):
    return _IMPLS[_ACTIVE].unpack_codes(codes, n, bits)


def canonical_codes(mats, scalars, mul_t, bits):
    return _IMPLS[_ACTIVE].canonical_codes(mats, scalars, mul_t, bits)


def pair_product_codes(A, B, scalars, mul_t, add_t, bits):
    return _IMPLS[_ACTIVE].pair_product_codes(A, B, scalars, mul_t, add_t, bits)
