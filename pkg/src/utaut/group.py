"""Truncated unitriangular groups UT_n(F_q) / gamma_k.

An element is stored by its entries strictly below the diagonal at distance
``i - j <= k - 1`` (lower-unitriangular convention).  Those band entries are a
normal form for the coset of gamma_k, and the truncated matrix product is the
group law.  Positions are ordered by distance, then column; the mixed-radix
code over that order identifies elements with [0, q**B).
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (ContextMismatch, IndexOutOfRange, OrderCapExceeded, PositionTruncated,
                     BadParams)
from .field import FieldCtx, FieldElement

DEFAULT_MAX_ORDER = 1 << 24
# Dense Cayley tables (N x N int32) are built only up to this order.
TABLE_CAP = int(os.environ.get("UTAUT_TABLE_CAP", 1 << 12))


def band_size(n: int, k: int) -> int:
    return sum(n - d for d in range(1, k))


class GroupCtx:
    """Parameters and precomputed structure of one group Gamma_{n,k}(F_q)."""

    def __init__(self, field: FieldCtx, n: int, k: int, max_order: int | None = None):
        if n < 3 or not 2 <= k <= n:
            raise BadParams(f"need n >= 3 and 2 <= k <= n, got n={n}, k={k}")
        if max_order is None:
            max_order = int(os.environ.get("UTAUT_MAX_ORDER", DEFAULT_MAX_ORDER))
        self.field = field
        self.n = n
        self.k = k
        self.q = field.order
        self.positions: tuple[tuple[int, int], ...] = tuple(
            (j + d, j) for d in range(1, k) for j in range(1, n - d + 1))
        self.nb = len(self.positions)
        self.order = self.q ** self.nb
        if self.order > max_order:
            raise OrderCapExceeded(f"|Gamma| = {self.q}^{self.nb} exceeds the element cap {max_order}")
        self.pos_index = {pos: t for t, pos in enumerate(self.positions)}
        # product terms a_{il} b_{lj}, j < l < i, all inside the band
        ptr, ta, tb = [0], [], []
        for (i, j) in self.positions:
            for l in range(j + 1, i):
                ta.append(self.pos_index[(i, l)])
                tb.append(self.pos_index[(l, j)])
            ptr.append(len(ta))
        tables = field.tables
        self.layout = (np.array(ptr, dtype=np.int64), np.array(ta, dtype=np.int64),
                       np.array(tb, dtype=np.int64), np.asarray(tables.add), np.asarray(tables.mul))
        self._terms = [list(zip(ta[ptr[t]:ptr[t + 1]], tb[ptr[t]:ptr[t + 1]])) for t in range(self.nb)]
        self._fadd = tables.add.tolist()
        self._fmul = tables.mul.tolist()
        self._fneg = tables.neg.tolist()

    # -- identity / equality --

    def _key(self):
        return (self.field, self.n, self.k)

    def __eq__(self, other):
        return isinstance(other, GroupCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GroupCtx(n={self.n}, k={self.k}, field={self.field!r})"

    def __str__(self):
        return f"Gamma_{{{self.n},{self.k}}}({self.field})"

    # -- elements --

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.nb)

    def element(self, entries: dict[tuple[int, int], FieldElement | int] | None = None) -> "GroupElement":
        """Element from a {(i, j): value} mapping; missing positions are zero."""
        digits = [0] * self.nb
        for pos, val in (entries or {}).items():
            if pos not in self.pos_index:
                raise BadParams(f"position {pos} is not in the band of {self}")
            digits[self.pos_index[pos]] = int(self.field(val))
        return GroupElement(self, tuple(digits))

    def decode(self, index: int) -> "GroupElement":
        index = int(index)
        if not 0 <= index < self.order:
            raise IndexOutOfRange(f"index {index} outside [0, {self.order})")
        digits = []
        for _ in range(self.nb):
            index, r = divmod(index, self.q)
            digits.append(r)
        return GroupElement(self, tuple(digits))

    def elements(self) -> Iterator["GroupElement"]:
        for x in range(self.order):
            yield self.decode(x)

    def transvection(self, i: int, j: int, alpha) -> "GroupElement":
        if not 1 <= j < i <= self.n:
            raise BadParams(f"({i},{j}) is not below the diagonal of a {self.n}x{self.n} matrix")
        if i - j >= self.k:
            warnings.warn(PositionTruncated(f"t_{{{i},{j}}} lies in gamma_{self.k}; it is the identity"),
                          stacklevel=2)
            return self.identity
        return self.element({(i, j): alpha})

    # -- standard generators t_{i+1,i}(theta^l) --

    @cached_property
    def generator_labels(self) -> list[tuple[int, int]]:
        """(i, l) for t_{i+1,i}(theta^l), i-major."""
        return [(i, l) for i in range(1, self.n) for l in range(self.field.m)]

    @cached_property
    def generators(self) -> list["GroupElement"]:
        basis = self.field.basis()
        return [self.transvection(i + 1, i, basis[l]) for i, l in self.generator_labels]

    @cached_property
    def generator_codes(self) -> np.ndarray:
        return np.array([g.index for g in self.generators], dtype=np.int32)

    def generator_index(self, i: int, l: int) -> int:
        return (i - 1) * self.field.m + l

    @cached_property
    def generator_inverse_codes(self) -> np.ndarray:
        return np.array([g.inverse().index for g in self.generators], dtype=np.int32)

    # -- whole-group arrays --

    @cached_property
    def digits(self) -> np.ndarray:
        """(N, nb) digit array of every element, row = code."""
        return kernels.decode(np.arange(self.order, dtype=np.int64), self.q, self.nb)

    def mul_codes(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of code arrays (table-free)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        A = kernels.decode(a.ravel(), self.q, self.nb)
        B = kernels.decode(b.ravel(), self.q, self.nb)
        return kernels.encode(kernels.mul_digits(A, B, self.layout), self.q).reshape(a.shape)

    @cached_property
    def inv(self) -> np.ndarray:
        """Code of the inverse of every element."""
        D = self.digits.astype(np.int64)
        out = np.zeros_like(D)
        neg = np.asarray(self.field.tables.neg)
        fadd = np.asarray(self.field.tables.add)
        fmul = np.asarray(self.field.tables.mul)
        # b_ij = -(a_ij + sum_l a_il b_lj); b_lj sits at a smaller distance
        for t in range(self.nb):
            acc = D[:, t]
            for ta, tb in self._terms[t]:
                acc = fadd[acc, fmul[D[:, ta], out[:, tb]]]
            out[:, t] = neg[acc]
        return kernels.encode(out, self.q).astype(np.int32)

    def has_table(self) -> bool:
        return self.order <= TABLE_CAP

    @cached_property
    def mul(self) -> np.ndarray:
        """Dense Cayley table ``mul[a, b] = code(a*b)``."""
        if not self.has_table():
            raise OrderCapExceeded(
                f"|Gamma| = {self.order} exceeds the Cayley-table cap {TABLE_CAP} (UTAUT_TABLE_CAP)")
        table = kernels.cayley_table(self.digits, self.q, self.layout)
        table.setflags(write=False)
        return table

    @cached_property
    def spanning(self) -> kernels.Spanning:
        return kernels.Spanning(self.mul, self.generator_codes)

    def conjugation_perms(self, codes: Iterable[int]) -> np.ndarray:
        """Row s: x -> c_s^-1 x c_s on all elements, for each code c_s."""
        codes = np.asarray(list(codes), dtype=np.int64)
        xs = np.arange(self.order, dtype=np.int64)
        if self.has_table():
            m, inv = self.mul, self.inv
            return np.stack([m[m[inv[c], xs], c] for c in codes]).astype(np.int32)
        inv = self.inv
        return np.stack([self.mul_codes(self.mul_codes(np.full_like(xs, inv[c]), xs), c)
                         for c in codes]).astype(np.int32)


@dataclass(frozen=True)
class GroupElement:
    ctx: GroupCtx
    digits: tuple[int, ...]

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected GroupElement, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    @property
    def index(self) -> int:
        code = 0
        q = self.ctx.q
        for d in reversed(self.digits):
            code = code * q + d
        return code

    def __int__(self):
        return self.index

    @property
    def coords(self) -> tuple[FieldElement, ...]:
        F = self.ctx.field
        return tuple(F.from_int(d) for d in self.digits)

    def entry(self, i: int, j: int) -> FieldElement:
        """Matrix entry (i, j) of the normal form; zero outside the band."""
        F = self.ctx.field
        if i == j:
            return F.one
        t = self.ctx.pos_index.get((i, j))
        return F.zero if t is None else F.from_int(self.digits[t])

    def is_identity(self) -> bool:
        return not any(self.digits)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        ctx = self.ctx
        fadd, fmul = ctx._fadd, ctx._fmul
        a, b = self.digits, other.digits
        out = []
        for t in range(ctx.nb):
            v = fadd[a[t]][b[t]]
            for ta, tb in ctx._terms[t]:
                v = fadd[v][fmul[a[ta]][b[tb]]]
            out.append(v)
        return GroupElement(ctx, tuple(out))

    def inverse(self) -> "GroupElement":
        ctx = self.ctx
        fadd, fmul, fneg = ctx._fadd, ctx._fmul, ctx._fneg
        a = self.digits
        b = [0] * ctx.nb
        for t in range(ctx.nb):
            acc = a[t]
            for ta, tb in ctx._terms[t]:
                acc = fadd[acc][fmul[a[ta]][b[tb]]]
            b[t] = fneg[acc]
        return GroupElement(ctx, tuple(b))

    def __pow__(self, e: int) -> "GroupElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.identity, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self, g: "GroupElement") -> "GroupElement":
        """g^-1 x g."""
        return g.inverse() * self * g

    def __xor__(self, g: "GroupElement") -> "GroupElement":
        return self.conj(g)

    def comm(self, other: "GroupElement") -> "GroupElement":
        """[a, b] = a^-1 b^-1 a b."""
        return self.inverse() * other.inverse() * self * other

    def __repr__(self) -> str:
        parts = [f"t{i}{j}({v!r})" for (i, j), v in zip(self.ctx.positions, self.coords) if v]
        return "*".join(parts) if parts else "1"


# -- functional aliases --------------------------------------------------------

def group_create(field: FieldCtx, n: int, k: int, max_order: int | None = None) -> GroupCtx:
    return GroupCtx(field, n, k, max_order)


def transvection(ctx: GroupCtx, i: int, j: int, alpha) -> GroupElement:
    return ctx.transvection(i, j, alpha)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def inverse(a: GroupElement) -> GroupElement:
    return a.inverse()


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    return a.comm(b)


def conjugate(x: GroupElement, g: GroupElement) -> GroupElement:
    return x.conj(g)


def elem_encode(a: GroupElement) -> int:
    return a.index


def elem_decode(ctx: GroupCtx, index: int) -> GroupElement:
    return ctx.decode(index)


# -- subgroups -------------------------------------------------------------------

def subgroup_closure(ctx: GroupCtx, gens: Sequence[int] | np.ndarray) -> np.ndarray:
    """Sorted codes of the subgroup generated by ``gens``."""
    mul = ctx.mul
    gens = np.unique(np.asarray(gens, dtype=np.int32))
    member = np.zeros(ctx.order, dtype=bool)
    member[0] = True
    frontier = np.array([0], dtype=np.int32)
    while frontier.size and gens.size:
        cand = np.unique(mul[frontier[:, None], gens[None, :]].ravel())
        cand = cand[~member[cand]]
        member[cand] = True
        frontier = cand
    return np.flatnonzero(member).astype(np.int32)


def center_codes(ctx: GroupCtx) -> np.ndarray:
    """Elements commuting with every standard generator (brute force)."""
    xs = np.arange(ctx.order, dtype=np.int64)
    keep = np.ones(ctx.order, dtype=bool)
    for s in ctx.generator_codes:
        if ctx.has_table():
            keep &= ctx.mul[xs, s] == ctx.mul[s, xs]
        else:
            keep &= ctx.mul_codes(xs, s) == ctx.mul_codes(s, xs)
    return np.flatnonzero(keep).astype(np.int32)


def center(ctx: GroupCtx) -> list[GroupElement]:
    return [ctx.decode(x) for x in center_codes(ctx)]


def commutator_codes(ctx: GroupCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mul, inv = ctx.mul, ctx.inv
    return mul[mul[inv[a], inv[b]], mul[a, b]]


def lower_central_series(ctx: GroupCtx) -> list[np.ndarray]:
    """[gamma_1, gamma_2, ..., {1}] as sorted code arrays, by commutator closure."""
    gens = np.concatenate([ctx.generator_codes, ctx.generator_inverse_codes])
    series = [np.arange(ctx.order, dtype=np.int32)]
    while series[-1].size > 1:
        cur = series[-1]
        comms = commutator_codes(ctx, cur[:, None], gens[None, :]).ravel()
        nxt = subgroup_closure(ctx, np.unique(comms))
        if nxt.size == cur.size:
            raise AssertionError("lower central series stalled; group is not nilpotent")
        series.append(nxt)
    return series


def band_filtration(ctx: GroupCtx, s: int) -> np.ndarray:
    """Codes of elements supported on distances >= s."""
    low = [t for t, (i, j) in enumerate(ctx.positions) if i - j < s]
    if not low:
        return np.arange(ctx.order, dtype=np.int32)
    return np.flatnonzero(~ctx.digits[:, low].any(axis=1)).astype(np.int32)


def project_codes(src: GroupCtx, dst: GroupCtx, codes: np.ndarray) -> np.ndarray:
    """Drop positions absent from ``dst`` (same n and field, smaller k)."""
    if src.field != dst.field or src.n != dst.n or dst.k > src.k:
        raise ContextMismatch("projection needs equal n and field and a smaller k")
    keep = [src.pos_index[pos] for pos in dst.positions]
    D = kernels.decode(np.asarray(codes), src.q, src.nb)[..., keep]
    return kernels.encode(D, dst.q)
