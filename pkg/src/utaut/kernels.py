"""Hot loops over encoded group elements.

Every public function dispatches to a numba kernel or to a vectorised numpy
twin depending on :func:`utaut._backend.use_numba`.  Both paths return
identical arrays; the test-suite runs them against each other.

Conventions: elements are int codes in [0, N); a *layout* is the tuple of
arrays ``(term_ptr, term_a, term_b, fadd, fmul)`` describing the truncated
product.  For position t, the pairs ``(term_a[r], term_b[r])`` with
``term_ptr[t] <= r < term_ptr[t+1]`` are the positions (i,l), (l,j) whose
entries multiply into (i,j).
"""
from __future__ import annotations

from collections import deque

import numpy as np

from ._backend import njit, prange, use_numba

# candidate status codes
NOT_HOM = 0
NOT_BIJECTIVE = 1
AUTOMORPHISM = 2
CLASS_PRESERVING = 3


# ---------------------------------------------------------------------------
# digit encoding

def encode(digits: np.ndarray, q: int) -> np.ndarray:
    weights = q ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits.astype(np.int64) @ weights


def decode(codes: np.ndarray, q: int, nb: int) -> np.ndarray:
    weights = q ** np.arange(nb, dtype=np.int64)
    return ((np.asarray(codes, dtype=np.int64)[..., None] // weights) % q).astype(np.int32)


# ---------------------------------------------------------------------------
# truncated band product on digit rows

def _mul_digits_np(A, B, term_ptr, term_a, term_b, fadd, fmul):
    out = fadd[A, B]
    for t in range(out.shape[1]):
        for r in range(term_ptr[t], term_ptr[t + 1]):
            out[:, t] = fadd[out[:, t], fmul[A[:, term_a[r]], B[:, term_b[r]]]]
    return out


@njit(cache=True)
def _mul_row_nb(a, b, out, term_ptr, term_a, term_b, fadd, fmul):
    for t in range(out.shape[0]):
        v = fadd[a[t], b[t]]
        for r in range(term_ptr[t], term_ptr[t + 1]):
            v = fadd[v, fmul[a[term_a[r]], b[term_b[r]]]]
        out[t] = v


@njit(cache=True, parallel=True)
def _mul_digits_nb(A, B, term_ptr, term_a, term_b, fadd, fmul):
    out = np.empty_like(A)
    for x in prange(A.shape[0]):
        _mul_row_nb(A[x], B[x], out[x], term_ptr, term_a, term_b, fadd, fmul)
    return out


def mul_digits(A: np.ndarray, B: np.ndarray, layout) -> np.ndarray:
    """Row-wise product of two (M, nb) digit arrays."""
    A = np.ascontiguousarray(A, dtype=np.int32)
    B = np.ascontiguousarray(B, dtype=np.int32)
    if use_numba():
        return _mul_digits_nb(A, B, *layout)
    return _mul_digits_np(A, B, *layout)


# ---------------------------------------------------------------------------
# Cayley table

@njit(cache=True, parallel=True)
def _cayley_nb(D, weights, term_ptr, term_a, term_b, fadd, fmul):
    N, nb = D.shape
    table = np.empty((N, N), dtype=np.int32)
    for a in prange(N):
        buf = np.empty(nb, dtype=np.int32)
        for b in range(N):
            _mul_row_nb(D[a], D[b], buf, term_ptr, term_a, term_b, fadd, fmul)
            code = 0
            for t in range(nb):
                code += buf[t] * weights[t]
            table[a, b] = code
    return table


def _cayley_np(D, weights, layout):
    N = D.shape[0]
    table = np.empty((N, N), dtype=np.int32)
    for a in range(N):
        row = _mul_digits_np(np.broadcast_to(D[a], D.shape), D, *layout)
        table[a] = row.astype(np.int64) @ weights
    return table


def cayley_table(D: np.ndarray, q: int, layout) -> np.ndarray:
    D = np.ascontiguousarray(D, dtype=np.int32)
    weights = q ** np.arange(D.shape[1], dtype=np.int64)
    if use_numba():
        return _cayley_nb(D, weights, *layout)
    return _cayley_np(D, weights, layout)


# ---------------------------------------------------------------------------
# conjugation orbits with BFS witnesses

@njit(cache=True)
def _orbits_nb(perms):
    S, N = perms.shape
    class_id = np.full(N, -1, dtype=np.int32)
    parent = np.full(N, -1, dtype=np.int32)
    via = np.full(N, -1, dtype=np.int32)
    reps = np.empty(N, dtype=np.int32)
    queue = np.empty(N, dtype=np.int32)
    ncls = 0
    for seed in range(N):
        if class_id[seed] >= 0:
            continue
        reps[ncls] = seed
        class_id[seed] = ncls
        head = 0
        tail = 0
        queue[tail] = seed
        tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            for s in range(S):
                y = perms[s, x]
                if class_id[y] < 0:
                    class_id[y] = ncls
                    parent[y] = x
                    via[y] = s
                    queue[tail] = y
                    tail += 1
        ncls += 1
    return class_id, parent, via, reps[:ncls].copy()


def _orbits_py(perms):
    S, N = perms.shape
    class_id = np.full(N, -1, dtype=np.int32)
    parent = np.full(N, -1, dtype=np.int32)
    via = np.full(N, -1, dtype=np.int32)
    reps = []
    plist = perms.tolist()
    cid = class_id.tolist()
    par = parent.tolist()
    vi = via.tolist()
    for seed in range(N):
        if cid[seed] >= 0:
            continue
        c = len(reps)
        reps.append(seed)
        cid[seed] = c
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            for s in range(S):
                y = plist[s][x]
                if cid[y] < 0:
                    cid[y] = c
                    par[y] = x
                    vi[y] = s
                    queue.append(y)
    return (np.array(cid, dtype=np.int32), np.array(par, dtype=np.int32),
            np.array(vi, dtype=np.int32), np.array(reps, dtype=np.int32))


def orbits(perms: np.ndarray):
    """Orbits of the group generated by ``perms`` on [0, N).

    Seeds are taken in ascending order, so orbit ids ascend with their minimal
    element.  Returns ``(orbit_id, parent, via, reps)`` where ``y =
    perms[via[y]][parent[y]]`` along BFS tree edges and ``parent[rep] = -1``.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int32)
    if use_numba():
        return _orbits_nb(perms)
    return _orbits_py(perms)


# ---------------------------------------------------------------------------
# generator-map extension

@njit(cache=True)
def _extend_one_nb(img, phi, seen, mul, order, parent, via, right, class_id, check_class):
    N = mul.shape[0]
    G = right.shape[1]
    phi[0] = 0
    for t in range(order.shape[0]):
        e = order[t]
        phi[e] = mul[phi[parent[e]], img[via[e]]]
    # every element, every generator: phi(e s) == phi(e) phi(s)
    for e in range(N):
        seen[e] = False
    for t in range(-1, order.shape[0]):
        e = 0 if t < 0 else order[t]
        pe = phi[e]
        for s in range(G):
            if phi[right[e, s]] != mul[pe, img[s]]:
                return NOT_HOM
    for e in range(N):
        if seen[phi[e]]:
            return NOT_BIJECTIVE
        seen[phi[e]] = True
    if check_class:
        for e in range(N):
            if class_id[phi[e]] != class_id[e]:
                return AUTOMORPHISM
        return CLASS_PRESERVING
    return AUTOMORPHISM


@njit(cache=True, parallel=True)
def _extend_status_nb(images, mul, order, parent, via, right, class_id, check_class):
    C = images.shape[0]
    N = mul.shape[0]
    status = np.empty(C, dtype=np.int8)
    for c in prange(C):
        phi = np.empty(N, dtype=np.int32)
        seen = np.empty(N, dtype=np.bool_)
        status[c] = _extend_one_nb(images[c], phi, seen, mul, order, parent, via, right,
                                   class_id, check_class)
    return status


@njit(cache=True, parallel=True)
def _extend_tables_nb(images, mul, order, parent, via):
    C = images.shape[0]
    N = mul.shape[0]
    out = np.empty((C, N), dtype=np.int32)
    for c in prange(C):
        out[c, 0] = 0
        for t in range(order.shape[0]):
            e = order[t]
            out[c, e] = mul[out[c, parent[e]], images[c, via[e]]]
    return out


def _extend_tables_np(images, mul, layers, parent, via):
    C = images.shape[0]
    N = mul.shape[0]
    phi = np.zeros((C, N), dtype=np.int32)
    for nodes in layers:
        phi[:, nodes] = mul[phi[:, parent[nodes]], images[:, via[nodes]]]
    return phi


def _extend_status_np(images, mul, layers, parent, via, right, class_id, check_class):
    phi = _extend_tables_np(images, mul, layers, parent, via)
    C, N = phi.shape
    hom = np.ones(C, dtype=bool)
    for s in range(right.shape[1]):
        hom &= np.all(phi[:, right[:, s]] == mul[phi, images[:, s:s + 1]], axis=1)
    bij = np.all(np.sort(phi, axis=1) == np.arange(N, dtype=np.int32), axis=1)
    status = np.full(C, NOT_HOM, dtype=np.int8)
    status[hom & ~bij] = NOT_BIJECTIVE
    auto = hom & bij
    status[auto] = AUTOMORPHISM
    if check_class:
        cp = np.all(class_id[phi] == class_id[None, :], axis=1)
        status[auto & cp] = CLASS_PRESERVING
    return status


class Spanning:
    """BFS spanning tree of the Cayley graph from the identity (right multiplication)."""

    def __init__(self, mul: np.ndarray, gens: np.ndarray):
        N = mul.shape[0]
        gens = np.asarray(gens, dtype=np.int32)
        parent = np.full(N, -1, dtype=np.int32)
        via = np.full(N, -1, dtype=np.int32)
        depth = np.full(N, -1, dtype=np.int32)
        depth[0] = 0
        frontier = np.array([0], dtype=np.int32)
        order = []
        layers = []
        d = 0
        while frontier.size:
            d += 1
            # first discovery wins: frontier order, then generator order
            cand = mul[frontier[:, None], gens[None, :]].ravel()
            par = np.repeat(frontier, gens.size)
            vi = np.tile(np.arange(gens.size, dtype=np.int32), frontier.size)
            fresh = depth[cand] < 0
            cand, par, vi = cand[fresh], par[fresh], vi[fresh]
            cand, first = np.unique(cand, return_index=True)
            first.sort()
            cand = mul[par[first], gens[vi[first]]]
            parent[cand] = par[first]
            via[cand] = vi[first]
            depth[cand] = d
            order.append(cand)
            layers.append(cand)
            frontier = cand
        if (depth < 0).any():
            raise ValueError("generators do not generate the group")
        self.parent = parent
        self.via = via
        self.order = np.concatenate(order).astype(np.int32) if order else np.zeros(0, np.int32)
        self.layers = layers
        self.right = np.ascontiguousarray(mul[:, gens])
        self.gens = gens


def extend_status(images: np.ndarray, mul: np.ndarray, tree: Spanning,
                  class_id: np.ndarray | None = None) -> np.ndarray:
    """Status code per candidate generator map (rows of ``images``)."""
    images = np.ascontiguousarray(images, dtype=np.int32)
    check = class_id is not None
    cid = np.ascontiguousarray(class_id if check else np.zeros(mul.shape[0]), dtype=np.int32)
    if use_numba():
        return _extend_status_nb(images, mul, tree.order, tree.parent, tree.via, tree.right, cid, check)
    return _extend_status_np(images, mul, tree.layers, tree.parent, tree.via, tree.right, cid, check)


def extend_tables(images: np.ndarray, mul: np.ndarray, tree: Spanning) -> np.ndarray:
    """Tables defined along the spanning tree (no homomorphism check)."""
    images = np.ascontiguousarray(images, dtype=np.int32)
    if use_numba():
        return _extend_tables_nb(images, mul, tree.order, tree.parent, tree.via)
    return _extend_tables_np(images, mul, tree.layers, tree.parent, tree.via)


def first_violation(table: np.ndarray, images: np.ndarray, mul: np.ndarray, tree: Spanning):
    """(element, generator) of the first failed consistency check, in BFS order, or None."""
    elems = np.concatenate([[0], tree.order])
    bad = table[tree.right[elems]] != mul[table[elems][:, None], np.asarray(images)[None, :]]
    rows = np.flatnonzero(bad.any(axis=1))
    if rows.size == 0:
        return None
    r = int(rows[0])
    return int(elems[r]), int(np.argmax(bad[r]))


# ---------------------------------------------------------------------------
# automorphism-set checks

@njit(cache=True, parallel=True)
def _commute_nb(tables, images):
    M = tables.shape[0]
    G = images.shape[1]
    bad = np.full(M, -1, dtype=np.int64)
    for i in prange(M):
        for j in range(i + 1, M):
            ok = True
            for s in range(G):
                if tables[i, images[j, s]] != tables[j, images[i, s]]:
                    ok = False
                    break
            if not ok:
                bad[i] = j
                break
    return bad


def _commute_np(tables, images):
    M = tables.shape[0]
    bad = np.full(M, -1, dtype=np.int64)
    rows = np.arange(M)[:, None]
    for i in range(M):
        lhs = tables[i][images]                # a_i(b(s)) for every b
        rhs = tables[rows, images[i][None, :]]  # b(a_i(s))
        diff = np.flatnonzero(np.any(lhs != rhs, axis=1))
        diff = diff[diff > i]
        if diff.size:
            bad[i] = diff[0]
    return bad


def noncommuting_pair(tables: np.ndarray, images: np.ndarray):
    """First (i, j) with tables i and j not commuting, or None.

    Automorphisms are fixed by generator images, so a.b = b.a iff they agree
    on the generators.
    """
    tables = np.ascontiguousarray(tables, dtype=np.int32)
    images = np.ascontiguousarray(images, dtype=np.int32)
    bad = _commute_nb(tables, images) if use_numba() else _commute_np(tables, images)
    hit = np.flatnonzero(bad >= 0)
    if hit.size == 0:
        return None
    i = int(hit[0])
    return i, int(bad[i])
