import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from utaut import class_table, find_conjugator, is_camina
from utaut.conjugacy import camina_is_degenerate, derived_subgroup
from utaut.errors import NotConjugate

from conftest import grp
from oracles import classes_all_pairs, small_groups


@pytest.mark.parametrize("p,m,n,k", small_groups(512))
def test_orbit_classes_equal_all_pairs_oracle(G, p, m, n, k):
    ctx = G(p, m, n, k)
    tab = class_table(ctx)
    ours = {frozenset(int(x) for x in tab.members(c)) for c in range(tab.class_count)}
    assert ours == set(classes_all_pairs(ctx.mul))


def test_heisenberg_classes(G):
    # p^3 group: p central classes and p^2 - 1 classes of size p
    for p in (2, 3, 5):
        tab = class_table(G(p, 1, 3, 3))
        assert tab.histogram() == [(1, p), (p, p * p - 1)]


def test_abelian_quotient_classes(G):
    tab = class_table(G(3, 1, 4, 2))
    assert tab.class_count == G(3, 1, 4, 2).order


def test_representatives_ascend_and_are_minimal(G):
    tab = class_table(G(2, 2, 4, 3))
    assert np.all(np.diff(tab.representatives) > 0)
    for c, r in enumerate(tab.representatives):
        assert tab.members(c).min() == r


def test_class_sizes_and_centralizers(G):
    ctx = G(3, 1, 4, 3)
    tab = class_table(ctx)
    assert sum(tab.class_sizes) == ctx.order
    for x in range(0, ctx.order, 17):
        c = tab.centralizer_order(x)
        brute = int(np.sum(ctx.mul[x] == ctx.mul[:, x]))
        assert c == brute


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_g3_is_camina(G, p, m):
    ctx = G(p, m, 3, 3)
    assert is_camina(class_table(ctx))
    assert not camina_is_degenerate(ctx)


def test_larger_quotients_not_camina(G):
    assert not is_camina(class_table(G(2, 1, 4, 3)))
    assert camina_is_degenerate(G(2, 1, 3, 2))


@pytest.mark.parametrize("p,m,n", [(2, 1, 4), (2, 2, 3), (3, 1, 4), (2, 2, 4), (3, 2, 3)])
def test_gamma2_exponent_p(G, p, m, n):
    ctx = G(p, m, n, 3)
    g2 = derived_subgroup(ctx)
    acc = g2.copy()
    for _ in range(p - 1):
        acc = ctx.mul[acc, g2]
    assert np.all(acc == 0)


def test_not_conjugate(G):
    ctx = G(2, 1, 3, 3)
    tab = class_table(ctx)
    a = ctx.transvection(2, 1, 1)
    with pytest.raises(NotConjugate):
        find_conjugator(tab, a, ctx.identity)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 2, 4, 3), (3, 1, 4, 4), (2, 1, 5, 4)]), st.data())
def test_conjugator_witness(params, data):
    ctx = grp(*params)
    tab = class_table(ctx)
    x = ctx.decode(data.draw(st.integers(0, ctx.order - 1)))
    g = ctx.decode(data.draw(st.integers(0, ctx.order - 1)))
    y = x.conj(g)
    h = find_conjugator(tab, x, y)
    assert x.conj(h) == y
