import math
from fractions import Fraction

import pytest

from sylowlab.lietype import (
    all_families,
    asym_check,
    big_cell_fraction,
    e_lower_bound,
    order_exact,
    params_for,
)


def test_frozen_group_orders():
    # |PSL_2(5)| = 60, |SL_2(3)| = 24, |PSL_3(2)| = 168, |PSL_4(2)| = 20160:
    # the standard small-group orders, computable by hand from
    # q^M * prod(q^{d_i} - 1) / d.
    assert order_exact(params_for("A", 1), 5, "simple").group_order == 60
    assert order_exact(params_for("A", 1), 3, "universal").group_order == 24
    assert order_exact(params_for("A", 2), 2, "simple").group_order == 168
    assert order_exact(params_for("A", 3), 2, "simple").group_order == 20160


def test_order_breakdown_psl_2_5():
    orders = order_exact(params_for("A", 1), 5, "simple")
    assert orders.sylow_order == 5
    assert orders.torus_order == 2
    assert orders.borel_order == 10
    assert orders.borel_order == orders.sylow_order * orders.torus_order


def test_simple_times_center_is_universal():
    for l in (1, 2, 3):
        params = params_for("A", l)
        for q in (2, 3, 4, 5, 7, 9):
            simple = order_exact(params, q, "simple").group_order
            universal = order_exact(params, q, "universal").group_order
            assert simple * params.d_of(q) == universal


def test_positive_root_counts():
    assert params_for("A", 1).M == 1
    assert params_for("A", 3).M == 6
    assert params_for("G2").M == 6
    assert params_for("F4").M == 24
    assert params_for("E8").M == 120
    assert params_for("D", 5).M == 20


def test_center_orders():
    assert params_for("A", 1).d_of(5) == 2
    assert params_for("A", 2).d_of(4) == 3
    assert params_for("A", 3).d_of(5) == 4
    assert params_for("E6").d_of(4) == 3
    assert params_for("G2").d_of(7) == 1


def test_degree_identities():
    # sum(degrees) = M + l and prod(degrees) = |W| for every untwisted row
    for family, l in (("A", 4), ("B", 3), ("C", 2), ("D", 4), ("E7", None)):
        p = params_for(family, l)
        assert sum(p.degrees) == p.M + p.l
        assert math.prod(p.degrees) == p.weyl_order


def test_asym_ratios_rank_one_q3():
    ratios = asym_check(params_for("A", 1), 3)
    assert ratios["group_ratio"] == Fraction(8, 9)
    assert ratios["torus_ratio"] == Fraction(2, 3)
    assert ratios["borel_ratio"] == Fraction(2, 3)


def test_asym_ratios_tend_to_one():
    params = params_for("A", 1)
    prev = None
    for q in (3, 5, 7, 9, 11, 13):
        r = asym_check(params, q)["group_ratio"]
        assert r < 1
        if prev is not None:
            assert r > prev
        prev = r


def test_big_cell_fraction_rank_one():
    # |B|^2/(|G||H|) = q/(q+1) for 2x2: matrices with nonzero lower-left
    # entry number q^2(q-1) out of q(q^2-1).
    params = params_for("A", 1)
    assert big_cell_fraction(params, 3) == Fraction(3, 4)
    assert big_cell_fraction(params, 7) == Fraction(7, 8)
    for q in (2, 3, 4, 5, 7, 9, 11, 13):
        assert big_cell_fraction(params, q) == Fraction(q, q + 1)


def test_big_cell_fraction_increasing():
    for l in (1, 2, 3):
        params = params_for("A", l)
        values = [big_cell_fraction(params, q) for q in (3, 4, 5, 7, 9, 11, 13, 16)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert values[-1] < 1


def test_e_lower_bound():
    assert e_lower_bound(params_for("A", 1), 13) == 6  # floor(13/2)
    assert e_lower_bound(params_for("A", 2), 4, q0=4) == 16  # q^l
    assert e_lower_bound(params_for("A", 2), 4) is None  # below default q0
    assert e_lower_bound(params_for("A", 2), 4, mode="safe") == 2
    with pytest.raises(ValueError):
        e_lower_bound(params_for("A", 2), 4, mode="tight")


def test_twisted_rows_reject_exact_orders():
    twisted = params_for("2A", 2)
    assert twisted.twisted
    with pytest.raises(ValueError):
        order_exact(twisted, 3)
    with pytest.raises(ValueError):
        asym_check(twisted, 3)


def test_rank_validation():
    with pytest.raises(ValueError):
        params_for("A", 0)
    with pytest.raises(ValueError):
        params_for("B", 2)  # housed under C at rank 2
    with pytest.raises(ValueError):
        params_for("X", 1)
    # fixed-rank families accept an omitted rank
    assert params_for("G2").l == 2
    assert params_for("F4", 4).l == 4


def test_q_validation():
    with pytest.raises(ValueError):
        order_exact(params_for("A", 1), 6)
    with pytest.raises(ValueError):
        order_exact(params_for("A", 1), 1)


def test_all_families_listing():
    rows = all_families()
    names = {row["family"] for row in rows}
    assert {"A", "B", "C", "D", "G2", "F4", "E6", "E7", "E8"} <= names
    assert any(row["twisted"] for row in rows)


def test_row_json_contains_q_fields():
    doc = params_for("A", 1).row_json(5)
    assert doc["q"] == 5
    assert doc["center_order_at_q"] == 2
    assert doc["positive_roots"] == 1
