"""numba and numpy kernels must agree bit for bit."""
import numpy as np
import pytest

from utaut import _backend, field_create, group_create, kernels
from utaut.conjugacy import build_class_table
from utaut.enumeration import CandidateSpace, enumerate_autc_brute


@pytest.fixture
def both():
    saved = _backend.get_backend()

    def run(fn):
        out = {}
        for name in ("numba", "numpy"):
            _backend.set_backend(name)
            out[name] = fn()
        return out["numba"], out["numpy"]

    yield run
    _backend.set_backend(saved)


def fresh(p, m, n, k):
    return group_create(field_create(p, m), n, k)


@pytest.mark.parametrize("params", [(2, 2, 4, 3), (3, 1, 4, 4), (5, 1, 3, 3)])
def test_cayley_and_mul(both, params):
    a, b = both(lambda: fresh(*params).mul.copy())
    assert np.array_equal(a, b)
    ctx = fresh(*params)
    rng = np.random.default_rng(1)
    x, y = rng.integers(0, ctx.order, size=(2, 500))
    a, b = both(lambda: ctx.mul_codes(x, y))
    assert np.array_equal(a, b)


@pytest.mark.parametrize("params", [(2, 2, 4, 3), (3, 1, 4, 4), (2, 1, 5, 4)])
def test_orbits(both, params):
    ctx = fresh(*params)
    perms = ctx.conjugation_perms(ctx.generator_codes)
    (c1, p1, v1, r1), (c2, p2, v2, r2) = both(lambda: kernels.orbits(perms))
    for u, v in [(c1, c2), (p1, p2), (v1, v2), (r1, r2)]:
        assert np.array_equal(u, v)


@pytest.mark.parametrize("params", [(2, 1, 4, 3), (2, 2, 3, 3), (3, 1, 4, 4)])
def test_extension_kernels(both, params):
    ctx = fresh(*params)
    tab = build_class_table(ctx)
    space = CandidateSpace(ctx, tab)
    imgs = space.images(0, min(space.total, 4096))
    rng = np.random.default_rng(2)
    noise = rng.integers(0, ctx.order, size=(256, imgs.shape[1])).astype(np.int32)
    imgs = np.concatenate([imgs, noise])
    a, b = both(lambda: kernels.extend_status(imgs, ctx.mul, ctx.spanning, tab.class_id))
    assert np.array_equal(a, b)
    a, b = both(lambda: kernels.extend_status(imgs, ctx.mul, ctx.spanning))
    assert np.array_equal(a, b)
    a, b = both(lambda: kernels.extend_tables(imgs, ctx.mul, ctx.spanning))
    assert np.array_equal(a, b)


def test_enumeration_and_commutation(both):
    def run():
        ctx = fresh(2, 1, 4, 4)
        res = enumerate_autc_brute(ctx)
        tables = np.stack([x.table for x in res.autc])
        images = np.stack([x.images for x in res.autc])
        return sorted(res.keys()), res.cb_order, kernels.noncommuting_pair(tables, images)
    a, b = both(run)
    assert a == b
    assert a[2] is not None  # Inn(UT_4(F_2)) is non-abelian


def test_bad_backend_name():
    with pytest.raises(ValueError):
        _backend.set_backend("cuda")
