"""Automorphisms given by images of the standard generators.

An :class:`Automorphism` carries the generator images and the full permutation
table of element codes.  Tables are certified at construction: extension runs
along a BFS spanning tree of the Cayley graph and is then checked against
every (element, generator) product.

Composition follows the right-action convention used for conjugation:
``compose(a, b)`` applies ``a`` first, so composing the inner automorphisms
of g and h gives the inner automorphism of g*h.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .conjugacy import ClassTable
from .errors import ClosureCapExceeded, ContextMismatch, NotBijective, NotHomomorphism
from .group import GroupCtx, GroupElement, center_codes

DEFAULT_CLOSURE_CAP = int(os.environ.get("UTAUT_MAX_CLOSURE", 1 << 20))


@dataclass(frozen=True)
class GenMap:
    """Images of ``ctx.generators``, in generator order."""
    ctx: GroupCtx
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.images) != len(self.ctx.generators):
            raise ValueError(f"expected {len(self.ctx.generators)} images, got {len(self.images)}")
        for g in self.images:
            if g.ctx != self.ctx:
                raise ContextMismatch("generator image from another group")

    @classmethod
    def identity(cls, ctx: GroupCtx) -> "GenMap":
        return cls(ctx, tuple(ctx.generators))

    @classmethod
    def from_codes(cls, ctx: GroupCtx, codes: Sequence[int]) -> "GenMap":
        return cls(ctx, tuple(ctx.decode(int(c)) for c in codes))

    def with_image(self, i: int, l: int, image: GroupElement) -> "GenMap":
        """Copy with t_{i+1,i}(theta^l) sent to ``image``."""
        imgs = list(self.images)
        imgs[self.ctx.generator_index(i, l)] = image
        return GenMap(self.ctx, tuple(imgs))

    def codes(self) -> np.ndarray:
        return np.array([g.index for g in self.images], dtype=np.int32)


class Automorphism:
    __slots__ = ("ctx", "images", "table", "flags", "_key")

    def __init__(self, ctx: GroupCtx, images: np.ndarray, table: np.ndarray, **flags):
        self.ctx = ctx
        self.images = np.asarray(images, dtype=np.int32)
        self.table = np.asarray(table, dtype=np.int32)
        self.images.setflags(write=False)
        self.table.setflags(write=False)
        self.flags = dict(flags)
        self._key = None

    @classmethod
    def from_table(cls, ctx: GroupCtx, table: np.ndarray, **flags) -> "Automorphism":
        table = np.asarray(table, dtype=np.int32)
        return cls(ctx, table[ctx.generator_codes], table, **flags)

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.table.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.ctx == other.ctx and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __call__(self, x: GroupElement | int):
        if isinstance(x, GroupElement):
            return self.ctx.decode(self.table[x.index])
        return int(self.table[int(x)])

    def __repr__(self):
        moved = sum(1 for s, im in zip(self.ctx.generator_codes, self.images) if s != im)
        return f"<Automorphism of {self.ctx}: moves {moved} generators>"

    @property
    def genmap(self) -> GenMap:
        return GenMap.from_codes(self.ctx, self.images)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.ctx.order)))

    def order(self) -> int:
        ident = np.arange(self.ctx.order)
        t, r = self.table, 1
        while not np.array_equal(t, ident):
            t = self.table[t]
            r += 1
        return r

    def serialize(self) -> list[list[list[int]]]:
        """Generator images as coordinate vectors of field coefficient lists."""
        return [[list(c.coeffs) for c in self.ctx.decode(im).coords] for im in self.images]


def extend_genmap(ctx: GroupCtx, gm: GenMap | Sequence[int]) -> Automorphism:
    """Extend a generator map to a certified automorphism table."""
    codes = gm.codes() if isinstance(gm, GenMap) else np.asarray(gm, dtype=np.int32)
    if isinstance(gm, GenMap) and gm.ctx != ctx:
        raise ContextMismatch("generator map belongs to another group")
    images = codes[None, :]
    status = int(kernels.extend_status(images, ctx.mul, ctx.spanning)[0])
    table = kernels.extend_tables(images, ctx.mul, ctx.spanning)[0]
    if status == kernels.NOT_HOM:
        elem, gen = kernels.first_violation(table, codes, ctx.mul, ctx.spanning)
        raise NotHomomorphism(elem, gen)
    if status == kernels.NOT_BIJECTIVE:
        raise NotBijective(f"image has {np.unique(table).size} of {ctx.order} elements")
    return Automorphism(ctx, codes, table)


def identity_automorphism(ctx: GroupCtx) -> Automorphism:
    return Automorphism(ctx, ctx.generator_codes, np.arange(ctx.order), is_inner=True)


def inner_automorphism(ctx: GroupCtx, g: GroupElement | int) -> Automorphism:
    """x -> g^-1 x g."""
    g = int(g)
    xs = np.arange(ctx.order)
    table = ctx.mul[ctx.mul[ctx.inv[g], xs], g]
    return Automorphism.from_table(ctx, table, is_inner=True)


def _conj_generator_images(ctx: GroupCtx) -> np.ndarray:
    """(N, G): images of the generators under conjugation by each element."""
    got = ctx.__dict__.get("_conj_gen_images")
    if got is None:
        gs = np.arange(ctx.order)[:, None]
        s = ctx.generator_codes[None, :]
        got = ctx.mul[ctx.mul[ctx.inv[gs], s], gs].astype(np.int32)
        ctx.__dict__["_conj_gen_images"] = got
    return got


def inner_witness(a: Automorphism) -> int | None:
    """Smallest g with a equal to conjugation by g, else None (scan of all g)."""
    hits = np.flatnonzero(np.all(_conj_generator_images(a.ctx) == a.images[None, :], axis=1))
    return int(hits[0]) if hits.size else None


def is_inner(a: Automorphism) -> bool:
    if "is_inner" not in a.flags:
        a.flags["is_inner"] = inner_witness(a) is not None
    return a.flags["is_inner"]


def inner_automorphisms(ctx: GroupCtx) -> list[Automorphism]:
    """Inn(G), one table per distinct conjugation, in order of first conjugator."""
    got = ctx.__dict__.get("_inn")
    if got is None:
        imgs = _conj_generator_images(ctx)
        _, first = np.unique(imgs, axis=0, return_index=True)
        got = [inner_automorphism(ctx, int(g)) for g in np.sort(first)]
        ctx.__dict__["_inn"] = got
    return got


def is_class_preserving(a: Automorphism, table: ClassTable) -> bool:
    if table.ctx != a.ctx:
        raise ContextMismatch("class table from another group")
    ok = bool(np.array_equal(table.class_id[a.table], table.class_id))
    a.flags["is_class_preserving"] = ok
    return ok


def _center_mask(ctx: GroupCtx) -> np.ndarray:
    got = ctx.__dict__.get("_center_mask")
    if got is None:
        got = np.zeros(ctx.order, dtype=bool)
        got[center_codes(ctx)] = True
        ctx.__dict__["_center_mask"] = got
    return got


def is_central(a: Automorphism) -> bool:
    """phi(x) x^-1 lies in the center for every x."""
    ctx = a.ctx
    ok = bool(_center_mask(ctx)[ctx.mul[a.table, ctx.inv]].all())
    a.flags["is_central"] = ok
    return ok


def _closure_masks(table: ClassTable) -> tuple[np.ndarray, np.ndarray]:
    """(reps, masks): one representative per distinct normal closure and its membership mask."""
    got = table._closures.get("masks")
    if got is None:
        seen: dict[bytes, int] = {}
        reps, masks = [], []
        for c in range(table.class_count):
            sub = table.normal_closure(c)
            if sub.tobytes() in seen:
                continue
            seen[sub.tobytes()] = c
            mask = np.zeros(table.ctx.order, dtype=bool)
            mask[sub] = True
            reps.append(int(table.representatives[c]))
            masks.append(mask)
        got = (np.array(reps, dtype=np.int64), np.stack(masks))
        table._closures["masks"] = got
    return got


def is_normal_automorphism(a: Automorphism, table: ClassTable) -> bool:
    """phi maps the normal closure of every element into itself.

    phi sends the normal closure of x onto that of phi(x), so it suffices
    that phi(x) lies in the closure of x for one x per distinct closure.
    Every normal subgroup is a join of such closures.
    """
    if table.ctx != a.ctx:
        raise ContextMismatch("class table from another group")
    reps, masks = _closure_masks(table)
    ok = bool(masks[np.arange(reps.size), a.table[reps]].all())
    a.flags["is_normal"] = ok
    return ok


def compose(a: Automorphism, b: Automorphism) -> Automorphism:
    """x -> b(a(x))."""
    if a.ctx != b.ctx:
        raise ContextMismatch("automorphisms of different groups")
    return Automorphism.from_table(a.ctx, b.table[a.table])


def invert(a: Automorphism) -> Automorphism:
    inv = np.empty_like(a.table)
    inv[a.table] = np.arange(a.ctx.order, dtype=np.int32)
    return Automorphism.from_table(a.ctx, inv)


def closure(gens: Iterable[Automorphism], cap: int | None = None) -> list[Automorphism]:
    """The generated subgroup, identity first, then in BFS discovery order."""
    gens = list(gens)
    if not gens:
        raise ValueError("closure of an empty set needs a group context; pass the identity")
    ctx = gens[0].ctx
    if any(g.ctx != ctx for g in gens):
        raise ContextMismatch("automorphisms of different groups")
    cap = DEFAULT_CLOSURE_CAP if cap is None else cap
    uniq: dict[bytes, np.ndarray] = {}
    for g in gens:
        uniq.setdefault(g.key, g.table)
    gen_tables = list(uniq.values())
    ident = np.arange(ctx.order, dtype=np.int32)
    found: dict[bytes, np.ndarray] = {ident.tobytes(): ident}
    frontier = ident[None, :]
    while frontier.shape[0]:
        fresh = []
        for gt in gen_tables:
            prod = gt[frontier]  # apply frontier element, then generator
            for row in prod:
                k = row.tobytes()
                if k not in found:
                    found[k] = row
                    fresh.append(row)
                    if len(found) > cap:
                        raise ClosureCapExceeded(f"closure exceeds {cap} automorphisms")
        frontier = np.array(fresh, dtype=np.int32).reshape(-1, ctx.order)
    return [Automorphism.from_table(ctx, t) for t in found.values()]


def table_set(autos: Iterable[Automorphism]) -> frozenset[bytes]:
    return frozenset(a.key for a in autos)
