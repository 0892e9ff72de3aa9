"""Numerical invariants of the finite groups of Lie type.

One row per family: rank constraint, number of positive roots M, center
order d(q), degrees of the invariant polynomials (untwisted families only),
Weyl group order, and the asymptotic lower bound for the order of the largest
unipotent conjugacy class.  Twisted families carry only (M, d, e) for display
and formula work; they have no matrix realization here.

Exact order formulas, for the untwisted families:

    |U| = q^M
    |H| = (q - 1)^l / d        (simple variant; universal omits the 1/d)
    |G| = q^M * prod(q^{d_i} - 1) / d
    |B| = |U| * |H|

All exact arithmetic uses int/Fraction; nothing here touches floats except
the explicitly asymptotic e-bound values for the Suzuki/Ree rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .gf import factor_prime_power

__all__ = [
    "LieParams",
    "OrderBreakdown",
    "params_for",
    "all_families",
    "order_exact",
    "asym_check",
    "big_cell_fraction",
    "e_lower_bound",
    "DEFAULT_E_BOUND_Q0",
]

# Per-family threshold below which the asymptotic e-bound is not claimed.
DEFAULT_E_BOUND_Q0 = 11


@dataclass(frozen=True)
class LieParams:
    """One concrete table row: a family at a fixed rank."""

    family: str
    l: int
    M: int
    twisted: bool
    degrees: Optional[tuple[int, ...]]
    weyl_order: Optional[int]
    d_str: str
    e_str: str

    def d_of(self, q: int) -> int:
        return _FAMILIES[self.family].d_of(self.l, q)

    def e_asym(self, q: int):
        """Table value of the asymptotic class-size bound; Fraction or float."""
        return _FAMILIES[self.family].e_asym(self.l, q)

    def row_json(self, q: Optional[int] = None) -> dict:
        doc = {
            "family": self.family,
            "rank": self.l,
            "positive_roots": self.M,
            "twisted": self.twisted,
            "center_order": self.d_str,
            "class_bound": self.e_str,
        }
        if self.degrees is not None:
            doc["degrees"] = list(self.degrees)
            doc["weyl_order"] = self.weyl_order
        if q is not None:
            doc["q"] = q
            doc["center_order_at_q"] = self.d_of(q)
            e = self.e_asym(q)
            doc["class_bound_at_q"] = str(e) if isinstance(e, Fraction) else e
        return doc


@dataclass(frozen=True)
class OrderBreakdown:
    group_order: int
    borel_order: int
    torus_order: int
    sylow_order: int


class _Family:
    def __init__(self, rank_ok, rank_str, twisted, M, degrees, d_of, e_asym, d_str, e_str):
        self.rank_ok: Callable[[int], bool] = rank_ok
        self.rank_str = rank_str
        self.twisted = twisted
        self.M: Callable[[int], int] = M
        self.degrees: Callable[[int], Optional[tuple[int, ...]]] = degrees
        self.d_of: Callable[[int, int], int] = d_of
        self.e_asym = e_asym
        self.d_str = d_str
        self.e_str = e_str


def _e_a(l, q):
    if l == 1:
        return Fraction(q, math.gcd(2, q - 1))
    return Fraction(q**l)


def _e_c(l, q):
    if q % 2:
        return Fraction(q**l, 2)
    return Fraction(q ** (2 * l - 1), 2)


def _e_f4(l, q):
    if q % 2:
        return Fraction(q**8)
    return Fraction(q**11, 2)


_SQRT2 = math.sqrt(2.0)

_FAMILIES: dict[str, _Family] = {
    "A": _Family(
        lambda l: l >= 1, "l >= 1", False,
        lambda l: l * (l + 1) // 2,
        lambda l: tuple(range(2, l + 2)),
        lambda l, q: math.gcd(l + 1, q - 1),
        _e_a,
        "gcd(l+1, q-1)", "q/gcd(2,q-1) if l = 1 else q^l",
    ),
    "2A": _Family(
        lambda l: l >= 2, "l >= 2", True,
        lambda l: l * (l + 1) // 2,
        lambda l: None,
        lambda l, q: math.gcd(l + 1, q + 1),
        lambda l, q: Fraction(q**l),
        "gcd(l+1, q+1)", "q^l",
    ),
    "B": _Family(
        lambda l: l >= 3, "l >= 3 (q odd)", False,
        lambda l: l * l,
        lambda l: tuple(range(2, 2 * l + 1, 2)),
        lambda l, q: math.gcd(2, q - 1),
        lambda l, q: Fraction(q ** (2 * l - 2)),
        "gcd(2, q-1)", "q^(2l-2)",
    ),
    "C": _Family(
        lambda l: l >= 2, "l >= 2", False,
        lambda l: l * l,
        lambda l: tuple(range(2, 2 * l + 1, 2)),
        lambda l, q: math.gcd(2, q - 1),
        _e_c,
        "gcd(2, q-1)", "q^l/2 if q odd else q^(2l-1)/2",
    ),
    "D": _Family(
        lambda l: l >= 4, "l >= 4", False,
        lambda l: l * (l - 1),
        lambda l: tuple(range(2, 2 * l - 1, 2)) + (l,),
        lambda l, q: math.gcd(4, q**l - 1),
        lambda l, q: Fraction(q ** (2 * l - 3)),
        "gcd(4, q^l - 1)", "q^(2l-3)",
    ),
    "2D": _Family(
        lambda l: l >= 4, "l >= 4", True,
        lambda l: l * (l - 1),
        lambda l: None,
        lambda l, q: math.gcd(4, q**l + 1),
        lambda l, q: Fraction(q ** (2 * l - 3)),
        "gcd(4, q^l + 1)", "q^(2l-3)",
    ),
    "G2": _Family(
        lambda l: l == 2, "l = 2", False,
        lambda l: 6,
        lambda l: (2, 6),
        lambda l, q: 1,
        lambda l, q: Fraction(q**3),
        "1", "q^3",
    ),
    "F4": _Family(
        lambda l: l == 4, "l = 4", False,
        lambda l: 24,
        lambda l: (2, 6, 8, 12),
        lambda l, q: 1,
        _e_f4,
        "1", "q^8 if q odd else q^11/2",
    ),
    "E6": _Family(
        lambda l: l == 6, "l = 6", False,
        lambda l: 36,
        lambda l: (2, 5, 6, 8, 9, 12),
        lambda l, q: math.gcd(3, q - 1),
        lambda l, q: Fraction(q**11),
        "gcd(3, q-1)", "q^11",
    ),
    "E7": _Family(
        lambda l: l == 7, "l = 7", False,
        lambda l: 63,
        lambda l: (2, 6, 8, 10, 12, 14, 18),
        lambda l, q: math.gcd(2, q - 1),
        lambda l, q: Fraction(q**17),
        "gcd(2, q-1)", "q^17",
    ),
    "E8": _Family(
        lambda l: l == 8, "l = 8", False,
        lambda l: 120,
        lambda l: (2, 8, 12, 14, 18, 20, 24, 30),
        lambda l, q: 1,
        lambda l, q: Fraction(q**29),
        "1", "q^29",
    ),
    "2E6": _Family(
        lambda l: l == 6, "l = 6", True,
        lambda l: 36,
        lambda l: None,
        lambda l, q: math.gcd(3, q + 1),
        lambda l, q: Fraction(q**11),
        "gcd(3, q+1)", "q^11",
    ),
    "3D4": _Family(
        lambda l: l == 4, "l = 4", True,
        lambda l: 12,
        lambda l: None,
        lambda l, q: 1,
        lambda l, q: Fraction(q**5),
        "1", "q^5",
    ),
    "2B2": _Family(
        lambda l: l == 2, "l = 2", True,
        lambda l: 4,
        lambda l: None,
        lambda l, q: 1,
        lambda l, q: q**3 / _SQRT2,
        "1", "q^3/sqrt(2)",
    ),
    "2G2": _Family(
        lambda l: l == 2, "l = 2", True,
        lambda l: 6,
        lambda l: None,
        lambda l, q: 1,
        lambda l, q: Fraction(q**4),
        "1", "q^4",
    ),
    "2F4": _Family(
        lambda l: l == 4, "l = 4", True,
        lambda l: 24,
        lambda l: None,
        lambda l, q: 1,
        lambda l, q: q**11 / _SQRT2,
        "1", "q^11/sqrt(2)",
    ),
}

_FIXED_RANK = {"G2": 2, "F4": 4, "E6": 6, "E7": 7, "E8": 8,
               "2E6": 6, "3D4": 4, "2B2": 2, "2G2": 2, "2F4": 4}


def params_for(family: str, l: Optional[int] = None) -> LieParams:
    """Table row for a family at rank l (rank optional for fixed-rank rows)."""
    if family not in _FAMILIES:
        raise ValueError(f"unknown family {family!r}; have {sorted(_FAMILIES)}")
    fam = _FAMILIES[family]
    if l is None:
        if family not in _FIXED_RANK:
            raise ValueError(f"family {family} needs an explicit rank")
        l = _FIXED_RANK[family]
    if not fam.rank_ok(l):
        raise ValueError(f"family {family} requires rank {fam.rank_str}, got l = {l}")
    degrees = fam.degrees(l)
    weyl = math.prod(degrees) if degrees is not None else None
    return LieParams(
        family=family,
        l=l,
        M=fam.M(l),
        twisted=fam.twisted,
        degrees=degrees,
        weyl_order=weyl,
        d_str=fam.d_str,
        e_str=fam.e_str,
    )


def all_families() -> list[dict]:
    """Formula-level summary of all sixteen rows, for JSON export."""
    out = []
    for name, fam in _FAMILIES.items():
        out.append(
            {
                "family": name,
                "rank": fam.rank_str,
                "twisted": fam.twisted,
                "center_order": fam.d_str,
                "class_bound": fam.e_str,
            }
        )
    return out


def _require_untwisted(params: LieParams, what: str) -> None:
    if params.twisted:
        raise ValueError(
            f"{what} needs exact orders; twisted family {params.family} rows "
            "are stored for formula display only"
        )


def _validate_q(q: int) -> None:
    factor_prime_power(q)  # raises if q is not a prime power


def order_exact(params: LieParams, q: int, variant: str = "simple") -> OrderBreakdown:
    """Exact orders of G, B, H, U from the closed formulas."""
    _require_untwisted(params, "order_exact")
    _validate_q(q)
    if variant not in ("simple", "universal"):
        raise ValueError(f"variant must be 'simple' or 'universal', got {variant!r}")
    d = params.d_of(q) if variant == "simple" else 1
    sylow = q**params.M
    torus_num = (q - 1) ** params.l
    group_num = sylow * math.prod(q**e - 1 for e in params.degrees)
    if torus_num % d or group_num % d:
        raise RuntimeError(f"center order {d} fails to divide for {params} at q={q}")
    torus = torus_num // d
    group = group_num // d
    return OrderBreakdown(
        group_order=group,
        borel_order=sylow * torus,
        torus_order=torus,
        sylow_order=sylow,
    )


def asym_check(params: LieParams, q: int) -> dict[str, Fraction]:
    """Exact ratios of |G|, |H|, |B| to their leading-term asymptotics.

    The reference values are (1/d) q^{2M+l}, (1/d) q^l and (1/d) q^{M+l}
    for the simple variant.  Each ratio tends to 1 as q grows.
    """
    _require_untwisted(params, "asym_check")
    orders = order_exact(params, q, "simple")
    d = params.d_of(q)
    M, l = params.M, params.l
    return {
        "group_ratio": Fraction(orders.group_order * d, q ** (2 * M + l)),
        "torus_ratio": Fraction(orders.torus_order * d, q**l),
        "borel_ratio": Fraction(orders.borel_order * d, q ** (M + l)),
    }


def big_cell_fraction(params: LieParams, q: int) -> Fraction:
    """|B|^2 / (|G| |H|): the exact fraction of G in the dense Bruhat cell.

    The value does not depend on the variant (numerator and denominator both
    scale by d^2 between simple and universal).
    """
    orders = order_exact(params, q, "simple")
    return Fraction(
        orders.borel_order**2, orders.group_order * orders.torus_order
    )


def e_lower_bound(
    params: LieParams,
    q: int,
    mode: str = "asymptotic",
    q0: Optional[int] = None,
) -> Optional[int]:
    """Lower bound for the largest unipotent class size.

    mode='safe' returns the unconditional 2.  mode='asymptotic' returns
    floor of the table formula, but only above the threshold q0 (default
    DEFAULT_E_BOUND_Q0); below threshold it returns None rather than a
    number that the table does not actually promise.
    """
    _validate_q(q)
    if mode == "safe":
        return 2
    if mode != "asymptotic":
        raise ValueError(f"mode must be 'safe' or 'asymptotic', got {mode!r}")
    threshold = DEFAULT_E_BOUND_Q0 if q0 is None else q0
    if q < threshold:
        return None
    return math.floor(params.e_asym(q))


def _validate_tables() -> None:
    """Cross-checks run at import: degree sums and products must match."""
    rows = [("A", l) for l in range(1, 9)]
    rows += [("B", l) for l in range(3, 9)]
    rows += [("C", l) for l in range(2, 9)]
    rows += [("D", l) for l in range(4, 9)]
    rows += [("G2", 2), ("F4", 4), ("E6", 6), ("E7", 7), ("E8", 8)]
    for family, l in rows:
        p = params_for(family, l)
        if sum(p.degrees) != p.M + p.l:
            raise RuntimeError(f"degree sum broken for {family} rank {l}")
        if math.prod(p.degrees) != p.weyl_order:
            raise RuntimeError(f"Weyl order broken for {family} rank {l}")


_validate_tables()
