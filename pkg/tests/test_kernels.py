import numpy as np
import pytest

from sylowlab import kernels
from sylowlab.matgroup import _det_py, _perm_arrays, _random_sl_batch, group_spec


def _sample(q, n, count, seed):
    spec = group_spec(q, n, "SL")
    rng = np.random.Generator(np.random.Philox(seed))
    return spec, np.ascontiguousarray(_random_sl_batch(spec, rng, count))


@pytest.fixture
def both_backends():
    if "numba" not in kernels.available_backends():
        pytest.skip("numba backend not importable")
    saved = kernels.active_backend()
    yield ("numpy", "numba")
    kernels.select_backend(saved)


def _run_both(both, fn):
    outs = []
    for backend in both:
        kernels.select_backend(backend)
        outs.append(np.asarray(fn()))
    return outs


def test_backends_bit_identical(both_backends):
    spec, mats = _sample(9, 3, 300, seed=5)
    _, other = _sample(9, 3, 300, seed=6)
    f = spec.field
    perms, odd = _perm_arrays(3)
    checks = [
        lambda: kernels.mul_rows(mats, other, f.mul_table, f.add_table),
        lambda: kernels.mul_one(mats, other[0], f.mul_table, f.add_table),
        lambda: kernels.one_mul(mats[0], other, f.mul_table, f.add_table),
        lambda: kernels.mul_pairs(mats[:40], other[:50], f.mul_table, f.add_table),
        lambda: kernels.det_batch(
            mats, perms, odd, f.mul_table, f.add_table, f.neg_table
        ),
        lambda: kernels.pack_codes(mats, spec.bits),
        lambda: kernels.canonical_codes(
            mats, spec.center_scalars, f.mul_table, spec.bits
        ),
        lambda: kernels.pair_product_codes(
            mats[:40], other[:50], spec.center_scalars,
            f.mul_table, f.add_table, spec.bits,
        ),
    ]
    for fn in checks:
        a, b = _run_both(both_backends, fn)
        assert a.dtype == b.dtype
        assert np.array_equal(a, b)


def test_pack_unpack_roundtrip():
    for q, n in ((2, 4), (5, 3), (16, 2), (13, 2)):
        spec, mats = _sample(q, n, 100, seed=q * n)
        codes = kernels.pack_codes(mats, spec.bits)
        back = kernels.unpack_codes(codes, n, spec.bits)
        assert np.array_equal(back, mats)


def test_pack_is_injective_and_ordered():
    # First matrix entry lands in the most significant bits, so the packed
    # order refines the row-major lexicographic order on entries.
    spec, mats = _sample(7, 2, 500, seed=1)
    codes = kernels.pack_codes(mats, spec.bits)
    flat = [tuple(m.reshape(-1)) for m in mats]
    order = np.argsort(codes, kind="stable")
    assert sorted(flat) == [flat[i] for i in order]


def test_mul_pairs_matches_single_products():
    spec, mats = _sample(5, 3, 12, seed=2)
    _, other = _sample(5, 3, 7, seed=3)
    f = spec.field
    pairs = kernels.mul_pairs(mats, other, f.mul_table, f.add_table)
    assert pairs.shape == (84, 3, 3)
    for ia in range(12):
        for ib in range(7):
            single = kernels.mul_rows(
                mats[ia : ia + 1], other[ib : ib + 1], f.mul_table, f.add_table
            )
            assert np.array_equal(pairs[ia * 7 + ib], single[0])


def test_det_batch_matches_scalar_reference():
    for q, n in ((3, 2), (4, 3), (5, 4)):
        spec, mats = _sample(q, n, 60, seed=q + n)
        f = spec.field
        perms, odd = _perm_arrays(n)
        dets = kernels.det_batch(
            mats, perms, odd, f.mul_table, f.add_table, f.neg_table
        )
        # every sampled matrix is unimodular by construction
        assert np.all(dets == 1)
        for i in range(10):
            assert _det_py(f, mats[i]) == 1
        # perturb one entry and re-check against the scalar fallback
        mats = mats.copy()
        mats[:, 0, 0] = np.arange(60) % q
        dets = kernels.det_batch(
            mats, perms, odd, f.mul_table, f.add_table, f.neg_table
        )
        for i in range(20):
            assert int(dets[i]) == _det_py(f, mats[i])


def test_canonical_codes_picks_orbit_minimum():
    spec, mats = _sample(4, 3, 50, seed=9)
    pspec = group_spec(4, 3, "PSL")
    f = pspec.field
    canon = kernels.canonical_codes(
        mats, pspec.center_scalars, f.mul_table, pspec.bits
    )
    all_scaled = [
        kernels.pack_codes(np.ascontiguousarray(f.mul_table[z, mats]), pspec.bits)
        for z in pspec.center_scalars
    ]
    assert np.array_equal(canon, np.minimum.reduce(all_scaled))


def test_select_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.select_backend("gpu")
