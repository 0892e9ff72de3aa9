import numpy as np
import pytest

from sylowlab import kernels
from sylowlab.matgroup import (
    EnumerationCapError,
    Mat,
    SubgroupId,
    _random_sl_batch,
    all_perms,
    canonical_pack,
    canonicalize,
    conjugate,
    enumerate_group,
    enumerate_subgroup,
    format_matrix,
    g_id,
    g_inv,
    g_mul,
    group_order,
    group_spec,
    parse_matrix,
    random_element,
    subgroup_order,
    unpack,
    w0,
    weyl_rep,
)


def test_frozen_multiplication_sl_2_3():
    spec = group_spec(3, 2, "SL")
    a = Mat(spec, [[1, 1], [0, 1]])
    b = Mat(spec, [[1, 0], [1, 1]])
    ab = g_mul(a, b)
    assert ab.entries.tolist() == [[2, 1], [1, 1]]
    assert (a @ b) == ab
    inv = g_inv(ab)
    assert inv.entries.tolist() == [[1, 2], [2, 2]]
    assert g_mul(ab, inv) == g_id(spec)


def test_mat_validation():
    spec = group_spec(5, 2, "SL")
    with pytest.raises(ValueError):
        Mat(spec, [[1, 0], [0, 2]])  # det = 2
    with pytest.raises(ValueError):
        Mat(spec, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # wrong shape
    with pytest.raises(ValueError):
        Mat(spec, [[1, 5], [0, 1]])  # entry out of range


def test_enumeration_matches_formulas():
    for q, n, variant, expected in (
        (2, 2, "SL", 6),
        (3, 2, "SL", 24),
        (5, 2, "PSL", 60),
        (2, 3, "SL", 168),
        (4, 2, "PSL", 60),  # gcd(2,3) = 1, so PSL = SL here (this is A_5)
        (9, 2, "PSL", 360),
    ):
        spec = group_spec(q, n, variant)
        elems = enumerate_group(spec)
        assert len(elems) == expected
        assert group_order(spec) == expected


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_group(group_spec(5, 3, "SL"), cap=1000)


def test_subgroup_orders_psl_2_5():
    spec = group_spec(5, 2, "PSL")
    assert len(enumerate_subgroup(spec, SubgroupId("U"))) == 5
    assert len(enumerate_subgroup(spec, SubgroupId("H"))) == 2
    assert len(enumerate_subgroup(spec, SubgroupId("B"))) == 10
    for base in ("U", "V", "H", "B"):
        sub = SubgroupId(base)
        assert len(enumerate_subgroup(spec, sub)) == subgroup_order(spec, sub)


def test_lower_triangulars_are_conjugate_upper():
    # V = U^{w0} elementwise
    for q, n in ((5, 2), (3, 3), (2, 4)):
        spec = group_spec(q, n, "SL")
        v = enumerate_subgroup(spec, SubgroupId("V"))
        u_conj = enumerate_subgroup(
            spec, SubgroupId("U", conjugator=weyl_rep(spec, w0(n)))
        )
        assert np.array_equal(v.codes, u_conj.codes)


def test_weyl_representatives():
    spec2 = group_spec(3, 2, "SL")
    swap = weyl_rep(spec2, (1, 0))
    assert swap.entries.tolist() == [[0, 2], [1, 0]]  # [[0,-1],[1,0]] mod 3
    spec3 = group_spec(5, 3, "SL")
    rev = weyl_rep(spec3, (2, 1, 0))
    assert rev.entries.tolist() == [[0, 0, 4], [0, 1, 0], [1, 0, 0]]
    ident = weyl_rep(spec3, (0, 1, 2))
    assert ident == g_id(spec3)
    with pytest.raises(ValueError):
        weyl_rep(spec2, (0, 0))


def test_weyl_reps_multiply_like_permutations():
    # up to torus sign, rep(s)rep(t) = rep(st); composed entries stay monomial
    spec = group_spec(7, 3, "SL")
    for s in all_perms(3):
        for t in all_perms(3):
            prod = g_mul(weyl_rep(spec, s), weyl_rep(spec, t))
            st = tuple(s[t[i]] for i in range(3))
            support = {(i, j) for i in range(3) for j in range(3)
                       if prod.entries[i, j]}
            assert support == {(st[i], i) for i in range(3)}


def test_canonicalize_psl():
    spec = group_spec(4, 3, "PSL")
    f = spec.field
    assert len(spec.center_scalars) == 3
    rng = np.random.Generator(np.random.Philox(11))
    mats = _random_sl_batch(group_spec(4, 3, "SL"), rng, 40)
    canon = canonical_pack(spec, mats)
    # constant on the center coset, and the orbit genuinely has 3 codes
    for z in spec.center_scalars:
        scaled = np.ascontiguousarray(f.mul_table[z, mats])
        assert np.array_equal(canonical_pack(spec, scaled), canon)
    plain = [kernels.pack_codes(np.ascontiguousarray(f.mul_table[z, mats]), spec.bits)
             for z in spec.center_scalars]
    orbit_sizes = np.array([len({int(p[i]) for p in plain}) for i in range(40)])
    assert np.all(orbit_sizes == 3)
    # idempotent on Mat level
    m = canonicalize(spec, mats[0])
    assert canonicalize(spec, m.entries) == m


def test_canonical_entries_are_orbit_minimum():
    spec = group_spec(5, 2, "PSL")
    m = Mat(spec, [[2, 0], [0, 3]])
    # center scalars of PSL_2(5) are {1, 4}; 4*diag(2,3) = diag(3,2), and
    # diag(2,3) packs smaller, so it is the stored representative.
    assert m.entries.tolist() == [[2, 0], [0, 3]]
    same = Mat(spec, [[3, 0], [0, 2]])
    assert same == m


def test_conjugation():
    spec = group_spec(7, 2, "SL")
    g = Mat(spec, [[1, 3], [2, 0]])
    x = Mat(spec, [[1, 1], [0, 1]])
    y = conjugate(g, x)
    assert g_mul(g, y) == g_mul(x, g)  # g (g^-1 x g) = x g
    assert conjugate(g_id(spec), x) == x


def test_uniform_sampler_chi_square():
    # 10^5 draws over the 24 elements of SL_2(3); chi-square on 23 degrees
    # of freedom, alpha = 0.001 critical value 49.728 (standard table).
    spec = group_spec(3, 2, "SL")
    rng = np.random.Generator(np.random.Philox(2024))
    mats = _random_sl_batch(spec, rng, 100_000)
    codes = kernels.pack_codes(np.ascontiguousarray(mats), spec.bits)
    _, counts = np.unique(codes, return_counts=True)
    assert len(counts) == 24
    expected = 100_000 / 24
    stat = float(np.sum((counts - expected) ** 2 / expected))
    assert stat < 49.728, f"chi-square {stat:.2f}"


def test_sampler_hits_every_element():
    spec = group_spec(5, 2, "PSL")
    rng = np.random.Generator(np.random.Philox(7))
    mats = _random_sl_batch(spec, rng, 10_000)
    seen = set(np.unique(canonical_pack(spec, mats)).tolist())
    want = set(enumerate_group(spec).codes.tolist())
    assert seen == want


def test_random_element_matches_batch_stream():
    spec = group_spec(7, 2, "SL")
    a = random_element(spec, np.random.Generator(np.random.Philox(3)))
    b = _random_sl_batch(spec, np.random.Generator(np.random.Philox(3)), 1)[0]
    assert np.array_equal(a.entries, b)


def test_pack_unpack_group_roundtrip():
    spec = group_spec(4, 2, "PSL")
    elems = enumerate_group(spec)
    mats = unpack(spec, elems.codes)
    assert np.array_equal(canonical_pack(spec, mats), elems.codes)


def test_parse_format_roundtrip():
    spec = group_spec(7, 2, "SL")
    m = parse_matrix(spec, "1,2;0,1")
    assert m.entries.tolist() == [[1, 2], [0, 1]]
    assert format_matrix(m) == "1,2;0,1"
    assert parse_matrix(spec, format_matrix(m)) == m
    with pytest.raises(ValueError):
        parse_matrix(spec, "1,2;0")
    with pytest.raises(ValueError):
        parse_matrix(spec, "1,9;0,1")


def test_packability_boundary():
    assert group_spec(16, 4, "SL").packable  # 4 bits x 16 entries = 64
    assert not group_spec(17, 4, "SL").packable  # 5 bits x 16 entries = 80
    with pytest.raises(ValueError):
        enumerate_group(group_spec(17, 4, "SL"))


def test_spec_validation():
    with pytest.raises(ValueError):
        group_spec(5, 5, "SL")
    with pytest.raises(ValueError):
        group_spec(5, 2, "GL")
    with pytest.raises(ValueError):
        group_spec(6, 2, "SL")
