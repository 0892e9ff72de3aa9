import json
from fractions import Fraction

import numpy as np
import pytest

from sylowlab import kernels
from sylowlab.experiments import (
    DEFAULT_GATES,
    Gates,
    TrialRng,
    bnp_criterion,
    bnp_exponent_check,
    conjugated_sylow,
    coverage_prob,
    criterion_soundness_test,
    derive_seed,
    map_trials,
    opposite_pair_prob,
    parse_gates,
    random_subset,
    triple_product_size,
    triple_product_stats,
    verify_toffoli,
    verify_uuuv,
)
from sylowlab.lietype import params_for
from sylowlab.matgroup import g_id, group_spec, random_element
from sylowlab.setprod import growth_verify, product


def test_uuuv_exact_small_groups():
    for q, n in ((5, 2), (7, 2), (2, 3)):
        rep = verify_uuuv(group_spec(q, n, "PSL"))
        assert rep.passed
        sizes = rep.extra["sizes"]
        assert sizes["UVUV"] == rep.extra["group_order"]
        assert sizes["U"] <= sizes["UV"] <= sizes["UVU"] <= sizes["UVUV"]


def test_uuuv_refuses_nontrivial_center():
    # in SL_2(5) the central -1 is never a product of unipotents' coset reps
    # story; the four-fold statement is about the simple group
    with pytest.raises(ValueError):
        verify_uuuv(group_spec(5, 2, "SL"))
    # but SL is fine when the center is trivial
    rep = verify_uuuv(group_spec(2, 3, "SL"))
    assert rep.passed


def test_toffoli_cover():
    rep = verify_toffoli(group_spec(5, 2, "PSL"))
    assert rep.passed
    assert rep.extra["counting_bound_holds"]
    assert rep.extra["uvu_size"] * rep.extra["weyl_order"] >= rep.extra["group_order"]


def test_opposite_pair_prob_descriptives():
    spec = group_spec(7, 2, "PSL")
    rep = opposite_pair_prob(spec, 2000, seed=91)
    assert rep.exact_value == Fraction(7, 8)
    assert rep.passed
    assert rep.extra["big_cell_implies_trivial"]
    pt = rep.per_trial
    assert len(pt["in_big_cell"]) == 2000
    # n = 2: trivial intersection happens exactly on the big cell
    assert np.array_equal(pt["in_big_cell"], pt["trivial_intersection"])


def test_conjugated_sylow_and_triple_size():
    spec = group_spec(5, 2, "PSL")
    e = g_id(spec)
    u = conjugated_sylow(spec, e)
    assert len(u) == 5
    # degenerate triple: all conjugators equal keeps the product at |U|
    assert triple_product_size(spec, e, e, e) == 5
    rng = np.random.Generator(np.random.Philox(55))
    g = random_element(spec, rng)
    assert len(conjugated_sylow(spec, g)) == 5


def test_triple_threshold_psl_2_9():
    # q^{4M+l} = 9^5, d|W| = 2*2, sqrt(9^5/4) = 3^5/2 = 243/2 exactly
    rep = triple_product_stats(group_spec(9, 2, "PSL"), 50, seed=3)
    assert rep.bound_value == Fraction(243, 2)
    hist = rep.extra["histogram"]
    assert sum(hist.values()) == 50


def test_triple_collision_equivalence():
    # adjacent collision <-> below bound, exactly, for rank-1 PSL
    for q in (5, 7):
        rep = triple_product_stats(group_spec(q, 2, "PSL"), 300, seed=q)
        meets = np.asarray(rep.per_trial["meets_bound"], dtype=bool)
        coll = np.asarray(rep.per_trial["adjacent_collision"], dtype=bool)
        assert np.array_equal(meets, ~coll)


def test_triple_chain_growth_inequality():
    # |A A^{-1}| |B| <= |AB|^2 with A = U^{g1} U^{g2}, B = U^{g2} U^{g3}
    spec = group_spec(5, 2, "PSL")
    rng = np.random.Generator(np.random.Philox(77))
    for _ in range(10):
        g1, g2, g3 = (random_element(spec, rng) for _ in range(3))
        a = product(conjugated_sylow(spec, g1), conjugated_sylow(spec, g2))
        b = product(conjugated_sylow(spec, g2), conjugated_sylow(spec, g3))
        assert growth_verify(a, b)["holds"]


def test_bnp_criterion_arithmetic():
    rec = bnp_criterion([100, 100, 100], 1000, rep_bound=2)
    assert rec["t"] == 3
    assert rec["lhs"] == 10**6
    assert rec["rhs"] == Fraction(10**9, 2)
    assert not rec["holds"]
    assert bnp_criterion([1000] * 3, 1000, rep_bound=2)["holds"]
    # rep_bound = 1 collapses the slack entirely
    rec1 = bnp_criterion([999] * 5, 1000, rep_bound=1)
    assert rec1["rhs"] == Fraction(1000**5)
    assert not rec1["holds"]
    # explicit t must agree with the factor count
    assert bnp_criterion([1000] * 3, 1000, rep_bound=2, t=3)["holds"]
    with pytest.raises(ValueError):
        bnp_criterion([10, 10, 10], 100, t=4)
    with pytest.raises(ValueError):
        bnp_criterion([10, 10], 100)
    with pytest.raises(ValueError):
        bnp_criterion([10, 10, 10], 100, rep_bound=0)


def test_bnp_exponent_check():
    params = params_for("A", 3)
    for t in range(3, 11):
        rec = bnp_exponent_check(params, t)
        assert rec["holds"] == (t > 4)
    # the margin is l(t-4)/2
    rec = bnp_exponent_check(params, 6)
    assert rec["lhs_exponent"] - rec["rhs_exponent"] == Fraction(3 * (6 - 4), 2)


def test_coverage_k1_informational():
    rep = coverage_prob(group_spec(5, 2, "PSL"), 1, trials=30, seed=8)
    assert rep.empirical_value == 0
    assert rep.passed  # not gated away from k = 11
    assert not rep.extra["gated"]


def test_coverage_k11_gated():
    rep = coverage_prob(group_spec(5, 2, "PSL"), 11, trials=40, seed=12)
    assert rep.extra["criterion_implies_coverage"]
    assert rep.bound_value == DEFAULT_GATES.coverage_fraction_min
    assert rep.passed == (rep.empirical_value >= Fraction(19, 20))


def test_soundness_checker():
    rep = criterion_soundness_test(group_spec(5, 2, "PSL"), trials=30, seed=4)
    assert rep.passed
    assert rep.extra["violations"] == 0


def test_parse_gates():
    gates = parse_gates("sigma_band = 4\ntriple_fraction_min = 7/8\n# comment\n")
    assert gates.sigma_band == 4
    assert gates.triple_fraction_min == Fraction(7, 8)
    assert gates.coverage_fraction_min == DEFAULT_GATES.coverage_fraction_min
    with pytest.raises(ValueError):
        parse_gates("unknown_knob = 1")
    with pytest.raises(ValueError):
        parse_gates("sigma_band")
    with pytest.raises(ValueError):
        parse_gates("sigma_band = abc")


def test_trial_rng_validation():
    with pytest.raises(ValueError):
        TrialRng(-1, 0)
    with pytest.raises(ValueError):
        TrialRng(0, 1 << 64)
    # same (seed, index) -> same stream; different index -> different stream
    a = TrialRng(9, 4).generator().integers(0, 1 << 30, size=8)
    b = TrialRng(9, 4).generator().integers(0, 1 << 30, size=8)
    c = TrialRng(9, 5).generator().integers(0, 1 << 30, size=8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_derive_seed_is_path_dependent():
    assert derive_seed(42, 1, 2) == derive_seed(42, 1, 2)
    assert derive_seed(42, 1, 2) != derive_seed(42, 2, 1)
    assert 0 <= derive_seed(7, 3) < 1 << 64


def test_map_trials_order():
    assert map_trials(5, 1, lambda t: t * t) == [0, 1, 4, 9, 16]
    assert map_trials(5, 3, lambda t: t * t) == [0, 1, 4, 9, 16]


def test_reports_identical_across_threads():
    spec = group_spec(7, 2, "PSL")
    docs = []
    for threads in (1, 2):
        rep = opposite_pair_prob(spec, 400, seed=60, threads=threads)
        docs.append(
            json.dumps(
                rep.to_doc(no_timing=True, include_per_trial=True), sort_keys=True
            )
        )
    assert docs[0] == docs[1]


def test_reports_identical_across_backends():
    if "numba" not in kernels.available_backends():
        pytest.skip("numba backend not importable")
    spec = group_spec(5, 2, "PSL")
    docs = []
    saved = kernels.active_backend()
    try:
        for backend in ("numpy", "numba"):
            kernels.select_backend(backend)
            rep = triple_product_stats(spec, 60, seed=21)
            docs.append(
                json.dumps(
                    rep.to_doc(no_timing=True, include_per_trial=True),
                    sort_keys=True,
                )
            )
    finally:
        kernels.select_backend(saved)
    assert docs[0] == docs[1]


def test_csv_shape():
    rep = triple_product_stats(group_spec(5, 2, "PSL"), 25, seed=2)
    lines = rep.csv_text().strip().split("\n")
    assert lines[0].split(",") == [
        "trial_index",
        "seed_stream",
        "adjacent_collision",
        "meets_bound",
        "product_size",
    ]
    assert len(lines) == 26
    first = lines[1].split(",")
    assert first[0] == "0"
    with pytest.raises(ValueError):
        verify_uuuv(group_spec(5, 2, "PSL")).csv_text()


def test_random_subset_sizes():
    spec = group_spec(7, 2, "PSL")
    rng = np.random.Generator(np.random.Philox(99))
    s = random_subset(spec, 12, rng)
    assert 1 <= len(s) <= 12  # duplicates collapse


def test_report_doc_schema():
    rep = coverage_prob(group_spec(5, 2, "PSL"), 2, trials=10, seed=1)
    doc = rep.to_doc(no_timing=True)
    for key in ("experiment", "spec", "seed", "trials", "pass"):
        assert key in doc
    assert "runtime_ms" not in doc
    timed = rep.to_doc()
    assert "runtime_ms" in timed


def test_gates_are_frozen():
    with pytest.raises(AttributeError):
        DEFAULT_GATES.sigma_band = 5
    assert Gates() == DEFAULT_GATES
