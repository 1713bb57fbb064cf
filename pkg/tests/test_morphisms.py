import numpy as np
import pytest

from utaut import (GenMap, class_table, closure, compose, extend_genmap, inner_automorphism,
                   inner_automorphisms, invert, is_central, is_class_preserving, is_inner,
                   is_normal_automorphism)
from utaut.errors import ClosureCapExceeded, NotBijective, NotHomomorphism
from utaut.morphisms import identity_automorphism, inner_witness

from oracles import small_groups


@pytest.mark.parametrize("p,m,n,k", small_groups(512))
def test_extension_matches_direct_conjugation(G, p, m, n, k):
    ctx = G(p, m, n, k)
    mul, inv = ctx.mul, ctx.inv
    xs = np.arange(ctx.order)
    step = max(1, ctx.order // 64)
    for g in range(0, ctx.order, step):
        direct = mul[mul[inv[g], xs], g]
        gm = GenMap.from_codes(ctx, direct[ctx.generator_codes])
        assert np.array_equal(extend_genmap(ctx, gm).table, direct)


def test_every_inner_genmap_small(G):
    # exhaustive over all g for one group per field
    for params in [(2, 1, 4, 4), (3, 1, 3, 3), (2, 2, 3, 3)]:
        ctx = G(*params)
        xs = np.arange(ctx.order)
        for g in range(ctx.order):
            direct = ctx.mul[ctx.mul[ctx.inv[g], xs], g]
            assert np.array_equal(extend_genmap(ctx, direct[ctx.generator_codes]).table, direct)


def test_not_homomorphism(G):
    ctx = G(2, 1, 3, 3)  # dihedral of order 8
    x, y = ctx.generators
    assert (x * y) ** 2 != ctx.identity
    # an involution cannot go to an element of order 4
    with pytest.raises(NotHomomorphism):
        extend_genmap(ctx, GenMap(ctx, (x * y, y)))


def test_not_bijective(G):
    ctx = G(2, 1, 3, 2)  # abelian: every map of generators extends
    gm = GenMap.identity(ctx).with_image(1, 0, ctx.identity)
    with pytest.raises(NotBijective):
        extend_genmap(ctx, gm)


def test_composition_convention(G):
    ctx = G(2, 2, 3, 3)
    g, h = ctx.decode(5), ctx.decode(37)
    assert compose(inner_automorphism(ctx, g), inner_automorphism(ctx, h)) == inner_automorphism(ctx, g * h)
    a = inner_automorphism(ctx, g)
    assert compose(a, invert(a)).is_identity()


def test_inn_order_is_index_of_center(G):
    for params in [(2, 1, 4, 3), (2, 2, 3, 3), (3, 1, 4, 4)]:
        ctx = G(*params)
        inn = inner_automorphisms(ctx)
        z = int(np.sum(class_table(ctx).central_mask()))
        assert len(inn) == ctx.order // z
        assert all(is_inner(a) for a in inn)
        assert len(closure(inn)) == len(inn)


def test_inner_witness(G):
    ctx = G(3, 1, 4, 3)
    a = inner_automorphism(ctx, 40)
    w = inner_witness(a)
    assert inner_automorphism(ctx, w) == a


def test_predicates_on_inner(G):
    ctx = G(2, 2, 4, 3)
    tab = class_table(ctx)
    a = inner_automorphism(ctx, 123)
    assert is_class_preserving(a, tab)
    assert is_normal_automorphism(a, tab)
    # G/Z is abelian for class 2, so inner automorphisms are central there
    assert is_central(a)
    b = inner_automorphism(G(2, 1, 4, 4), 7)
    assert not is_central(b)


def test_non_class_preserving_automorphism(G):
    ctx = G(2, 1, 3, 3)
    # swapping t21 and t32 is the transpose-inverse style symmetry (an automorphism)
    gm = GenMap(ctx, (ctx.generators[1], ctx.generators[0]))
    a = extend_genmap(ctx, gm)
    assert not is_class_preserving(a, class_table(ctx))
    assert a.order() == 2


def test_closure_cap(G):
    ctx = G(2, 2, 3, 3)
    with pytest.raises(ClosureCapExceeded):
        closure(inner_automorphisms(ctx), cap=3)
    assert closure([identity_automorphism(ctx)])[0].is_identity()


def test_serialize_roundtrip(G):
    ctx = G(2, 2, 3, 3)
    a = inner_automorphism(ctx, 11)
    data = a.serialize()
    assert len(data) == len(ctx.generators)
    codes = [ctx.element({pos: ctx.field(c) for pos, c in zip(ctx.positions, img)}).index for img in data]
    assert codes == list(a.images)


def _normal_direct(a, tab):
    # phi(H) inside H for the subgroup generated by every class
    for c in range(tab.class_count):
        sub = tab.normal_closure(c)
        if not np.isin(a.table[sub], sub).all():
            return False
    return True


@pytest.mark.parametrize("params", [(2, 1, 3, 3), (3, 1, 3, 3), (2, 1, 4, 4), (2, 2, 3, 3)])
def test_normal_check_matches_direct_scan(G, params):
    ctx = G(*params)
    tab = class_table(ctx)
    autos = [inner_automorphism(ctx, g) for g in range(0, ctx.order, 7)]
    # generator permutations and scalings that happen to be automorphisms
    rng = np.random.default_rng(3)
    for _ in range(300):
        imgs = rng.integers(0, ctx.order, size=len(ctx.generators))
        try:
            autos.append(extend_genmap(ctx, imgs))
        except (NotHomomorphism, NotBijective):
            pass
    verdicts = [is_normal_automorphism(a, tab) for a in autos]
    assert verdicts == [_normal_direct(a, tab) for a in autos]


def test_swap_is_not_normal(G):
    ctx = G(2, 1, 3, 3)
    a = extend_genmap(ctx, GenMap(ctx, (ctx.generators[1], ctx.generators[0])))
    assert not is_normal_automorphism(a, class_table(ctx))
