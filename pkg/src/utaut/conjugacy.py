"""Conjugacy classes, conjugator witnesses and centralizer orders."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CertificationError, ContextMismatch, NotConjugate
from .group import GroupCtx, GroupElement, lower_central_series, subgroup_closure


@dataclass(eq=False)
class ClassTable:
    ctx: GroupCtx
    class_id: np.ndarray          # class of every element code
    representatives: np.ndarray   # smallest code of each class, ascending
    witness_parent: np.ndarray    # BFS parent code (-1 at representatives)
    witness_gen: np.ndarray       # index into conj_codes of the edge into each element
    conj_codes: np.ndarray        # elements c with edges x -> c^-1 x c
    class_sizes: list[int]
    _closures: dict = field(default_factory=dict, repr=False)

    @property
    def class_count(self) -> int:
        return len(self.class_sizes)

    def class_of(self, x: GroupElement | int) -> int:
        return int(self.class_id[int(x)])

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_id == c).astype(np.int32)

    def class_size(self, x: GroupElement | int) -> int:
        return self.class_sizes[self.class_of(x)]

    def centralizer_order(self, x: GroupElement | int) -> int:
        return self.ctx.order // self.class_size(x)

    def histogram(self) -> list[tuple[int, int]]:
        """(class size, number of classes), ascending by size."""
        return sorted(Counter(self.class_sizes).items())

    def central_mask(self) -> np.ndarray:
        sizes = np.asarray(self.class_sizes)
        return sizes[self.class_id] == 1

    def normal_closure(self, c: int) -> np.ndarray:
        """Codes of the subgroup generated by class c."""
        got = self._closures.get(c)
        if got is None:
            got = subgroup_closure(self.ctx, self.members(c))
            self._closures[c] = got
        return got

    def word_to(self, x: int) -> list[int]:
        """Edge labels from the class representative down to x."""
        word = []
        while self.witness_parent[x] >= 0:
            word.append(int(self.witness_gen[x]))
            x = int(self.witness_parent[x])
        word.reverse()
        return word


def build_class_table(ctx: GroupCtx) -> ClassTable:
    """Orbits of conjugation by the standard generators and their inverses."""
    codes = []
    for c in np.concatenate([ctx.generator_codes, ctx.generator_inverse_codes]):
        if int(c) not in codes:
            codes.append(int(c))
    conj_codes = np.array(codes, dtype=np.int32)
    perms = ctx.conjugation_perms(conj_codes)
    class_id, parent, via, reps = kernels.orbits(perms)
    sizes = np.bincount(class_id, minlength=reps.size).tolist()
    return ClassTable(ctx, class_id, reps, parent, via, conj_codes, sizes)


def class_table(ctx: GroupCtx) -> ClassTable:
    """Memoised :func:`build_class_table` for ``ctx``."""
    tab = ctx.__dict__.get("_class_table")
    if tab is None:
        tab = build_class_table(ctx)
        ctx.__dict__["_class_table"] = tab
    return tab


def find_conjugator(table: ClassTable, x: GroupElement, y: GroupElement) -> GroupElement:
    """Some g with g^-1 x g = y; raises NotConjugate across classes."""
    ctx = table.ctx
    if x.ctx != ctx or y.ctx != ctx:
        raise ContextMismatch("elements are not from the table's group")
    xi, yi = x.index, y.index
    if table.class_id[xi] != table.class_id[yi]:
        raise NotConjugate(f"{x!r} and {y!r} lie in different classes")
    # rep^(w_x) = x and rep^(w_y) = y, so x^(w_x^-1 w_y) = y
    gens = [ctx.decode(c) for c in table.conj_codes]
    w_x = ctx.identity
    for s in table.word_to(xi):
        w_x = w_x * gens[s]
    w_y = ctx.identity
    for s in table.word_to(yi):
        w_y = w_y * gens[s]
    g = w_x.inverse() * w_y
    if x.conj(g) != y:
        raise CertificationError("conjugator witness failed verification")
    return g


def derived_subgroup(ctx: GroupCtx) -> np.ndarray:
    series = lower_central_series(ctx)
    return series[1] if len(series) > 1 else series[0]


def is_camina(table: ClassTable) -> bool:
    """True iff class(x) = x*gamma_2 for every x outside gamma_2.

    When gamma_2 is trivial every x*gamma_2 = {x} and the answer is the
    degenerate True; see :func:`camina_is_degenerate`.
    """
    ctx = table.ctx
    g2 = derived_subgroup(ctx)
    in_g2 = np.zeros(ctx.order, dtype=bool)
    in_g2[g2] = True
    mul = ctx.mul
    for c, rep in enumerate(table.representatives):
        if in_g2[rep]:
            continue
        members = table.members(c)
        coset = np.unique(mul[rep, g2])
        if members.size != coset.size or not np.array_equal(members, coset):
            return False
    return True


def camina_is_degenerate(ctx: GroupCtx) -> bool:
    return derived_subgroup(ctx).size == 1

