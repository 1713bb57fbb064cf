import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from utaut import group_create, field_create, center, lower_central_series
from utaut.errors import BadParams, ContextMismatch, IndexOutOfRange, OrderCapExceeded, PositionTruncated
from utaut.group import band_filtration, project_codes, band_size

from oracles import cayley_oracle, brute_center, inverse_oracle, small_groups

TABLE_GROUPS = small_groups(512)


def test_orders(G):
    assert G(5, 1, 3, 3).order == 125
    assert G(2, 2, 3, 3).order == 64
    assert G(3, 1, 4, 3).order == 3 ** 5
    assert band_size(5, 3) == 7


@pytest.mark.parametrize("p,m,n,k", TABLE_GROUPS)
def test_cayley_table_matches_matrix_oracle(G, p, m, n, k):
    ctx = G(p, m, n, k)
    ref = cayley_oracle(p, m, ctx.field.modulus, n, k)
    assert np.array_equal(ctx.mul, ref)
    assert np.array_equal(ctx.inv, inverse_oracle(ref))


@pytest.mark.parametrize("p,m,n,k", [(2, 2, 3, 3), (3, 1, 4, 4), (2, 1, 5, 3)])
def test_element_arithmetic_agrees_with_table(G, p, m, n, k):
    ctx = G(p, m, n, k)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, ctx.order, size=(200, 2)):
        x, y = ctx.decode(a), ctx.decode(b)
        assert (x * y).index == ctx.mul[a, b]
        assert x.inverse().index == ctx.inv[a]
        assert ctx.mul_codes(a, b) == ctx.mul[a, b]


def _expected_comm(ctx, i, k, m_, j, a, b):
    """Transvection commutator rule, then truncation."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PositionTruncated)
        if k == m_:
            return ctx.transvection(i, j, a * b)
        if i == j:
            return ctx.transvection(m_, k, -(a * b))
        return ctx.identity


@pytest.mark.parametrize("p,m,n,kk", [(2, 2, 4, 4), (3, 1, 4, 3), (2, 1, 5, 5), (3, 2, 4, 3)])
def test_commutator_relations(G, p, m, n, kk):
    ctx = G(p, m, n, kk)
    F = ctx.field
    vals = [F.one, F.theta if m > 1 else F(2 % p or 1), F(p - 1)]
    pos = [(i, j) for i in range(2, n + 1) for j in range(1, i) if i - j < kk]
    for (i, k) in pos:
        for (m_, j) in pos:
            for a in vals:
                for b in vals:
                    got = ctx.transvection(i, k, a).comm(ctx.transvection(m_, j, b))
                    assert got == _expected_comm(ctx, i, k, m_, j, a, b), (i, k, m_, j)


def test_transvection_truncation_warns(G):
    ctx = G(2, 1, 4, 3)
    with pytest.warns(PositionTruncated):
        assert ctx.transvection(4, 1, 1).is_identity()
    with pytest.raises(BadParams):
        ctx.transvection(1, 2, 1)


def test_errors():
    F = field_create(2, 1)
    with pytest.raises(BadParams):
        group_create(F, 3, 4)
    with pytest.raises(BadParams):
        group_create(F, 2, 2)
    with pytest.raises(OrderCapExceeded):
        group_create(field_create(3, 1), 6, 6, max_order=1000)
    ctx = group_create(F, 3, 3)
    with pytest.raises(IndexOutOfRange):
        ctx.decode(8)
    with pytest.raises(ContextMismatch):
        ctx.identity * group_create(F, 4, 3).identity


def test_cayley_cap(monkeypatch):
    ctx = group_create(field_create(3, 1), 5, 3)  # 3^7 = 2187 elements
    import utaut.group as grp
    monkeypatch.setattr(grp, "TABLE_CAP", 1000)
    with pytest.raises(OrderCapExceeded):
        ctx.mul


def test_generators_and_order_p(G):
    ctx = G(3, 2, 4, 3)
    assert len(ctx.generators) == 3 * 2
    for g, (i, l) in zip(ctx.generators, ctx.generator_labels):
        assert g.entry(i + 1, i) == ctx.field.theta ** l
        assert (g ** 3).is_identity() and not g.is_identity()


def test_repr_and_entries(G):
    ctx = G(2, 2, 3, 3)
    x = ctx.transvection(2, 1, ctx.field.theta) * ctx.transvection(3, 1, 1)
    assert x.entry(3, 1) == ctx.field.one
    assert x.entry(1, 1) == ctx.field.one
    assert "t21" in repr(x) and repr(ctx.identity) == "1"


STRUCT_GROUPS = [g for g in small_groups(1024) if g[0] ** g[1] <= 9]


@pytest.mark.parametrize("p,m,n,k", STRUCT_GROUPS)
def test_center_is_bottom_band(G, p, m, n, k):
    ctx = G(p, m, n, k)
    z = np.array([x.index for x in center(ctx)])
    assert np.array_equal(z, brute_center(ctx.mul))
    assert np.array_equal(z, band_filtration(ctx, k - 1))
    assert z.size == ctx.q ** (n - k + 1)


@pytest.mark.parametrize("p,m,n,k", STRUCT_GROUPS)
def test_lower_central_series_is_band_filtration(G, p, m, n, k):
    ctx = G(p, m, n, k)
    series = lower_central_series(ctx)
    assert len(series) - 1 == k - 1
    for s, gamma in enumerate(series, start=1):
        assert np.array_equal(gamma, band_filtration(ctx, s))


@pytest.mark.parametrize("p,m,n,k", [g for g in STRUCT_GROUPS if g[3] >= 3])
def test_projection_is_homomorphism(G, p, m, n, k):
    src, dst = G(p, m, n, k), G(p, m, n, k - 1)
    proj = project_codes(src, dst, np.arange(src.order))
    a = np.arange(src.order)[:, None]
    b = np.arange(src.order)[None, :]
    assert np.array_equal(proj[src.mul[a, b]], dst.mul[proj[a], proj[b]])
    kernel = np.flatnonzero(proj == 0)
    assert np.array_equal(kernel, band_filtration(src, k - 1))
    assert np.unique(proj).size == dst.order


@st.composite
def triples(draw):
    p, m, n, k = draw(st.sampled_from([(2, 2, 4, 3), (3, 1, 5, 4), (5, 1, 4, 4), (2, 3, 4, 4)]))
    ctx = group_create(field_create(p, m), n, k, )
    xs = [ctx.decode(draw(st.integers(0, ctx.order - 1))) for _ in range(3)]
    return xs


@settings(max_examples=150, deadline=None)
@given(triples())
def test_group_axioms(xs):
    a, b, c = xs
    e = a.ctx.identity
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == e == a.inverse() * a
    assert a ** a.ctx.field.p ** 3 == e  # n <= 5
    assert a.conj(b * c) == a.conj(b).conj(c)
    assert a.comm(b).inverse() == b.comm(a)
