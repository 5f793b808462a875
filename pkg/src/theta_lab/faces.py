"""Explicit face tables for finite simplicial complexes.

Faces of dimension ``d`` are stored as an ``(N, d+1)`` integer array of
sorted vertex tuples, rows in lexicographic order. Each face also carries a
combinatorial-number-system rank, ``sum_j C(v_j, j+1)``, which is a perfect
hash within a dimension and makes boundary lookups a ``searchsorted``.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .errors import DomainError, ResourceError

DEFAULT_FACE_CAP = 20_000_000
# rows materialised at once while expanding facets
_CHUNK_ROWS = 4_000_000


def binomial_table(m, kmax):
    """``B[v, j] = C(v, j)`` for ``0 <= v <= m``, ``0 <= j <= kmax``, as int64."""
    if comb(m + 1, min(kmax, (m + 1) // 2)) >= 2**62:
        raise ResourceError(f"face ranks for {m} vertices and size {kmax} overflow int64")
    table = np.zeros((m + 1, kmax + 1), dtype=np.int64)
    for v in range(m + 1):
        for j in range(kmax + 1):
            table[v, j] = comb(v, j)
    return table


def rank_rows(rows, table):
    rows = np.asarray(rows)
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        keys += table[rows[:, j], j + 1]
    return keys


def unrank(keys, k, table):
    keys = np.array(keys, dtype=np.int64, copy=True)
    rows = np.zeros((keys.shape[0], k), dtype=np.int32)
    for j in range(k, 0, -1):
        col = table[:, j]
        v = np.searchsorted(col, keys, side="right") - 1
        rows[:, j - 1] = v
        keys -= col[v]
    return rows


def _lex_sort(rows):
    if rows.shape[0] == 0 or rows.shape[1] == 0:
        return np.arange(rows.shape[0])
    return np.lexsort(rows.T[::-1])


class FaceTable:
    """All faces of a complex grouped by dimension (``-1`` is the empty face)."""

    def __init__(self, vertex_count, cells):
        self.vertex_count = int(vertex_count)
        kmax = max(len(cells), 1)
        self._binom = binomial_table(self.vertex_count, kmax)
        self._cells = []
        self._keys = []
        self._lookup = []
        for rows in cells:
            rows = np.asarray(rows, dtype=np.int32)
            order = _lex_sort(rows)
            rows = rows[order]
            keys = rank_rows(rows, self._binom)
            self._cells.append(rows)
            self._keys.append(keys)
            self._lookup.append(np.argsort(keys, kind="stable"))

    # dimension d lives at slot d + 1
    @property
    def dim(self):
        return len(self._cells) - 2

    @property
    def is_void(self):
        return not self._cells

    @property
    def f_vector(self):
        return tuple(len(c) for c in self._cells)

    def __len__(self):
        return sum(self.f_vector)

    @property
    def nonempty_count(self):
        return max(len(self) - 1, 0)

    def cells(self, d):
        if d + 1 >= len(self._cells) or d < -1:
            return np.zeros((0, d + 1), dtype=np.int32)
        return self._cells[d + 1]

    def keys(self, d):
        if d + 1 >= len(self._cells) or d < -1:
            return np.zeros(0, dtype=np.int64)
        return self._keys[d + 1]

    def count(self, d):
        return len(self.cells(d))

    def rank(self, rows):
        return rank_rows(rows, self._binom)

    def index(self, d, keys):
        """Positions of the faces with the given ranks in dimension ``d``; -1 if absent."""
        keys = np.asarray(keys, dtype=np.int64)
        if d + 1 >= len(self._cells) or d < -1:
            return np.full(keys.shape, -1, dtype=np.int64)
        own = self._keys[d + 1]
        lookup = self._lookup[d + 1]
        sorted_keys = own[lookup]
        pos = np.searchsorted(sorted_keys, keys)
        pos = np.minimum(pos, len(sorted_keys) - 1)
        hit = sorted_keys[pos] == keys if len(sorted_keys) else np.zeros(keys.shape, bool)
        out = np.full(keys.shape, -1, dtype=np.int64)
        out[hit] = lookup[pos[hit]]
        return out

    def index_of(self, face):
        face = sorted(face)
        d = len(face) - 1
        rows = np.array([face], dtype=np.int64).reshape(1, len(face))
        return int(self.index(d, self.rank(rows))[0])

    def face(self, d, i):
        return tuple(int(v) for v in self.cells(d)[i])

    def iter_faces(self, include_empty=True):
        for d in range(-1 if include_empty else 0, self.dim + 1):
            for row in self.cells(d):
                yield tuple(int(v) for v in row)

    def reduced_euler(self):
        return sum((-1) ** d * c for d, c in zip(range(-1, self.dim + 1), self.f_vector))

    def membership_masks(self):
        """Faces as Python int bitmasks, one set per dimension (small complexes)."""
        return [
            {sum(1 << int(v) for v in row) for row in self.cells(d)}
            for d in range(-1, self.dim + 1)
        ]


# ------------------------------------------------------------ construction


def _check_cap(total, cap, partial, note=""):
    if cap is not None and total > cap:
        raise ResourceError(
            f"face enumeration exceeded cap {cap} (partial f-vector {tuple(partial)}{note})",
            progress=tuple(partial),
        )


def _combination_chunks(s, k, rows):
    it = itertools.combinations(range(s), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, rows)), dtype=np.int64
        )
        if not len(flat):
            return
        yield flat.reshape(-1, k)


def _level_keys(groups, k, table, cap, total, partial):
    """Sorted distinct rank keys of all k-subsets of all facets."""
    found, pending = [], 0
    merged = np.zeros(0, dtype=np.int64)
    for s, arr in groups.items():
        if s < k:
            continue
        for combos in _combination_chunks(s, k, _CHUNK_ROWS):
            step = max(1, _CHUNK_ROWS // len(combos))
            for start in range(0, len(arr), step):
                block = arr[start : start + step][:, combos].reshape(-1, k)
                found.append(np.unique(rank_rows(block, table)))
                pending += len(found[-1])
                if pending > 4 * _CHUNK_ROWS:
                    merged = np.unique(np.concatenate([merged] + found))
                    found, pending = [], 0
                    _check_cap(total + len(merged), cap, partial, f", next level >= {len(merged)}")
    return np.unique(np.concatenate([merged] + found))


def faces_from_facets(vertex_count, facets, cap=DEFAULT_FACE_CAP):
    """Enumerate every face of the complex generated by ``facets``."""
    facets = [tuple(sorted(f)) for f in facets]
    if not facets:
        return FaceTable(vertex_count, [])
    top = max(len(f) for f in facets)
    table = binomial_table(vertex_count, max(top, 1))
    groups = {}
    for f in facets:
        groups.setdefault(len(f), []).append(f)
    groups = {s: np.array(g, dtype=np.int32).reshape(len(g), s) for s, g in groups.items()}
    cells = [np.zeros((1, 0), dtype=np.int32)]
    partial = [1]
    total = 1
    for k in range(1, top + 1):
        # one facet of size s already has C(s, k) distinct k-subsets
        floor = max(comb(s, k) for s in groups if s >= k)
        _check_cap(total + floor, cap, partial, f", next level >= {floor}")
        keys = _level_keys(groups, k, table, cap, total, partial)
        total += len(keys)
        partial.append(len(keys))
        _check_cap(total, cap, partial)
        cells.append(unrank(keys, k, table))
    return FaceTable(vertex_count, cells)


def mask_rows(masks, k):
    """Convert uint64 masks, all of popcount ``k``, into sorted vertex rows."""
    masks = np.array(masks, dtype=np.uint64, copy=True)
    rows = np.zeros((len(masks), k), dtype=np.int32)
    one = np.uint64(1)
    for j in range(k):
        low = masks & (~masks + one)
        rows[:, j] = np.round(np.log2(low.astype(np.float64))).astype(np.int32)
        masks ^= low
    return rows


def popcount(masks):
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros(masks.shape, dtype=np.int64)
    for b in range(64):
        out += ((masks >> np.uint64(b)) & np.uint64(1)).astype(np.int64)
    return out


def faces_from_masks(vertex_count, masks):
    """Face table from an explicit (downward closed) collection of uint64 masks."""
    masks = np.unique(np.asarray(masks, dtype=np.uint64))
    if len(masks) == 0:
        return FaceTable(vertex_count, [])
    sizes = popcount(masks)
    cells = []
    for k in range(int(sizes.max()) + 1):
        cells.append(mask_rows(masks[sizes == k], k))
    return FaceTable(vertex_count, cells)


def faces_from_forbidden(vertex_count, forbidden, cap=DEFAULT_FACE_CAP):
    """Faces are the vertex sets containing none of the ``forbidden`` sets."""
    m = vertex_count
    if m > 64:
        raise DomainError("implicit complexes are enumerated for at most 64 vertices")
    forbidden = [frozenset(f) for f in forbidden]
    if any(not f for f in forbidden):
        return FaceTable(m, [])
    by_vertex = {v: [] for v in range(m)}
    for f in forbidden:
        top = max(f)
        rest = sum(1 << u for u in f if u != top)
        by_vertex[top].append(np.uint64(rest))
    level = np.zeros(1, dtype=np.uint64)
    last = np.full(1, -1, dtype=np.int64)
    collected = [level]
    partial = [1]
    total = 1
    while len(level):
        new_masks, new_last = [], []
        for w in range(m):
            parents = last < w
            if not parents.any():
                continue
            base = level[parents]
            ok = np.ones(len(base), dtype=bool)
            for rest in by_vertex[w]:
                ok &= (base & rest) != rest
            if ok.any():
                new_masks.append(base[ok] | np.uint64(1 << w))
                new_last.append(np.full(int(ok.sum()), w, dtype=np.int64))
        if not new_masks:
            break
        level = np.concatenate(new_masks)
        last = np.concatenate(new_last)
        total += len(level)
        partial.append(len(level))
        _check_cap(total, cap, partial)
        collected.append(level)
    return faces_from_masks(m, np.concatenate(collected))
