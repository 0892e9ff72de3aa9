"""Small finite fields GF(p^k), q = p^k <= 64, as dense lookup tables.

Field elements are integer codes in range(q).  The code of an element is the
base-p digit vector of its polynomial representative: code sum(c_i * p**i)
stands for the class of sum(c_i * x**i) modulo a fixed monic irreducible
polynomial of degree k.  The modulus is the lexicographically smallest monic
irreducible, comparing coefficient vectors from degree k-1 down to the
constant term (equivalently: smallest code of the non-leading coefficients).
For k = 1 codes are plain residues mod p.

Because q <= 64, every binary operation is a (q, q) uint8 table, so arrays of
codes combine elementwise with numpy fancy indexing.  That is what the batch
kernels rely on.
"""

from __future__ import annotations

import functools

import numpy as np

MAX_Q = 64


class FieldSpec:
    """One concrete GF(p^k) with its operation tables.

    Attributes:
        p, k, q: characteristic, extension degree, order (q = p**k).
        poly: modulus coefficients, low degree first, length k + 1, monic.
        add_table, mul_table: (q, q) uint8.
        neg_table: (q,) uint8, additive inverses.
        inv_table: (q,) uint8, multiplicative inverses; entry 0 is a 0
            sentinel and must never be consumed.
    """

    def __init__(self, p, k, poly, add_table, mul_table, neg_table, inv_table):
        self.p = p
        self.k = k
        self.q = p**k
        self.poly = poly
        self.add_table = add_table
        self.mul_table = mul_table
        self.neg_table = neg_table
        self.inv_table = inv_table
        for t in (add_table, mul_table, neg_table, inv_table):
            t.setflags(write=False)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.poly) == (
            other.p,
            other.k,
            other.poly,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.poly))

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc


def f_add(field: FieldSpec, a: int, b: int) -> int:
    return field.add(a, b)


def f_mul(field: FieldSpec, a: int, b: int) -> int:
    return field.mul(a, b)


def f_neg(field: FieldSpec, a: int) -> int:
    return field.neg(a)


def f_inv(field: FieldSpec, a: int) -> int:
    return field.inv(a)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by den over GF(p).  Coefficients low -> high."""
    num = list(num)
    dd = len(den) - 1
    lead_inv = pow(den[-1], p - 2, p) if den[-1] != 1 else 1
    while len(num) - 1 >= dd and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) - 1 < dd:
            break
        shift = len(num) - 1 - dd
        factor = num[-1] * lead_inv % p
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * c) % p
        while num and num[-1] == 0:
            num.pop()
    return num


def _digits(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            den = _digits(code, p, d) + [1]
            if not _poly_mod(poly, den, p):
                return False
    return True


def _find_modulus(p: int, k: int) -> tuple[int, ...]:
    for code in range(p**k):
        cand = _digits(code, p, k) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over GF({p})")


@functools.lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p^k).  Rejects non-prime p, k < 1, and p**k > 64."""
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree k = {k} must be >= 1")
    q = p**k
    if q > MAX_Q:
        raise ValueError(f"q = {q} exceeds the supported maximum {MAX_Q}")

    if k == 1:
        poly = (0, 1)  # the element x, unused for prime fields
        codes = np.arange(q, dtype=np.int64)
        add = ((codes[:, None] + codes[None, :]) % p).astype(np.uint8)
        mul = ((codes[:, None] * codes[None, :]) % p).astype(np.uint8)
        neg = ((-codes) % p).astype(np.uint8)
    else:
        poly = _find_modulus(p, k)
        vecs = [_digits(c, p, k) for c in range(q)]
        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        neg = np.zeros(q, dtype=np.uint8)

        def to_code(vec):
            c = 0
            for d in reversed(vec):
                c = c * p + d
            return c

        for a in range(q):
            neg[a] = to_code([(-d) % p for d in vecs[a]])
            for b in range(q):
                add[a, b] = to_code([(x + y) % p for x, y in zip(vecs[a], vecs[b])])
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(vecs[a]):
                    if x:
                        for j, y in enumerate(vecs[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                rem = _poly_mod(prod, list(poly), p)
                rem += [0] * (k - len(rem))
                mul[a, b] = to_code(rem[:k])

    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        hits = np.nonzero(mul[a] == 1)[0]
        if len(hits) != 1:
            raise RuntimeError(f"GF({q}) table broken at element {a}")
        inv[a] = hits[0]

    return FieldSpec(p, k, poly, add, mul, neg, inv)


def factor_prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, k) with q = p**k, p prime.  Raises on anything else."""
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, k


def field_from_order(q: int) -> FieldSpec:
    p, k = factor_prime_power(q)
    return field_make(p, k)
