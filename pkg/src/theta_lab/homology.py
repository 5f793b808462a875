"""Integer simplicial homology through Smith normal form.

Boundary matrices are ``scipy.sparse`` int64 matrices. Ranks and invariant
factors come from a sparse elimination on +-1 pivots followed by a dense
Smith normal form (Python integers, so no overflow) on whatever is left.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, ResourceError
from .faces import DEFAULT_FACE_CAP, FaceTable

__all__ = [
    "ChainComplex",
    "HomologySummary",
    "chain_complex",
    "homology",
    "betti_mod_p",
    "betti_rational",
    "smith_invariants",
    "smith_normal_form_dense",
    "rank_mod_p",
]

DEFAULT_MAX_NNZ = 400_000


class ChainComplex:
    """Free chain complex: ``ranks[d]`` generators and ``boundary(d): C_d -> C_{d-1}``.

    ``cells[d]`` optionally records which faces of ``faces`` the generators
    in degree ``d`` stand for.
    """

    def __init__(self, ranks, boundaries, min_degree=0, faces=None, cells=None, check=True):
        self.min_degree = int(min_degree)
        self.ranks = {self.min_degree + i: int(r) for i, r in enumerate(ranks)}
        self._boundaries = {}
        for d, mat in boundaries.items():
            mat = sp.csc_matrix(mat, dtype=np.int64)
            expected = (self.rank(d - 1), self.rank(d))
            if mat.shape != expected:
                raise DomainError(f"boundary {d} has shape {mat.shape}, expected {expected}")
            mat.eliminate_zeros()
            self._boundaries[d] = mat
        self.faces = faces
        self.cells = cells
        if check:
            self.check()

    @property
    def max_degree(self):
        return self.min_degree + len(self.ranks) - 1

    @property
    def degrees(self):
        return range(self.min_degree, self.max_degree + 1)

    def rank(self, d):
        return self.ranks.get(d, 0)

    def boundary(self, d):
        mat = self._boundaries.get(d)
        if mat is None:
            return sp.csc_matrix((self.rank(d - 1), self.rank(d)), dtype=np.int64)
        return mat

    def rank_list(self):
        return [self.ranks[d] for d in self.degrees]

    def check(self):
        """Assert ``boundary(d-1) @ boundary(d) == 0`` for every degree."""
        for d in self.degrees:
            a, b = self.boundary(d - 1), self.boundary(d)
            if a.shape[1] == 0 or b.shape[1] == 0 or a.nnz == 0 or b.nnz == 0:
                continue
            prod = a @ b
            prod.eliminate_zeros()
            if prod.nnz:
                raise DomainError(f"boundary(d-1) @ boundary(d) != 0 at d={d}")

    def euler_characteristic(self):
        return sum((-1) ** d * r for d, r in self.ranks.items())

    def labels(self, d):
        """Faces (vertex tuples) behind the degree-``d`` generators, if known."""
        if self.faces is None:
            raise DomainError("chain complex carries no face labels")
        idx = self.cells[d] if self.cells is not None else range(self.rank(d))
        return [self.faces.face(d, int(i)) for i in idx]


def chain_complex(X, reduced=True, cap=DEFAULT_FACE_CAP):
    """Simplicial chain complex of ``X`` (a complex or a ``FaceTable``).

    A sorted face ``[u_0 < ... < u_d]`` has boundary ``sum (-1)^i [.. u_i omitted ..]``.
    With ``reduced`` the empty face sits in degree -1 and ``boundary(0)`` is
    the augmentation.
    """
    faces = X if isinstance(X, FaceTable) else X.faces(cap)
    if faces.is_void:
        return ChainComplex([], {}, min_degree=-1 if reduced else 0, faces=faces)
    lo = -1 if reduced else 0
    ranks = [faces.count(d) for d in range(lo, faces.dim + 1)]
    mats = {}
    for d in range(max(lo + 1, 1 if not reduced else 0), faces.dim + 1):
        rows = faces.cells(d)
        n = len(rows)
        if n == 0:
            continue
        r_idx, c_idx, vals = [], [], []
        cols = np.arange(n)
        for i in range(d + 1):
            sub = np.delete(rows, i, axis=1)
            pos = faces.index(d - 1, faces.rank(sub))
            if (pos < 0).any():
                raise DomainError("face table is not closed under taking faces")
            r_idx.append(pos)
            c_idx.append(cols)
            vals.append(np.full(n, -1 if i % 2 else 1, dtype=np.int64))
        mats[d] = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(r_idx), np.concatenate(c_idx))),
            shape=(faces.count(d - 1), n),
        )
    cells = {d: np.arange(faces.count(d)) for d in range(lo, faces.dim + 1)}
    return ChainComplex(ranks, mats, min_degree=lo, faces=faces, cells=cells)


# --------------------------------------------------------- Smith form


def smith_normal_form_dense(rows):
    """Diagonal of the Smith normal form of a dense integer matrix (nonzero part)."""
    a = [list(map(int, r)) for r in rows]
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, nc):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = a[bad], a[t]
                for j in range(t, nc):
                    rt[j] += rb[j]
                continue
            # move the smallest entry of row/column t onto the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, nr):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, nc):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _to_dicts(mat):
    mat = sp.csc_matrix(mat)
    cols = {}
    rows = {}
    indptr, indices, data = mat.indptr, mat.indices, mat.data
    for j in range(mat.shape[1]):
        lo, hi = indptr[j], indptr[j + 1]
        if lo == hi:
            continue
        col = {int(i): int(v) for i, v in zip(indices[lo:hi], data[lo:hi]) if v}
        if col:
            cols[j] = col
            for i in col:
                rows.setdefault(i, set()).add(j)
    return cols, rows


def _eliminate(cols, rows, i, j, pivot, modulus=None):
    """Clear row ``i`` using column ``j`` (pivot entry ``pivot``), then drop both."""
    pcol = cols.pop(j)
    rows[i].discard(j)
    inv = pow(pivot, -1, modulus) if modulus else pivot  # pivot is +-1 over Z
    for j2 in list(rows[i]):
        col2 = cols[j2]
        factor = col2[i] * inv
        if modulus:
            factor %= modulus
        for r, v in pcol.items():
            new = col2.get(r, 0) - factor * v
            if modulus:
                new %= modulus
            if new:
                if r not in col2:
                    rows[r].add(j2)
                col2[r] = new
            elif r in col2:
                del col2[r]
                rows[r].discard(j2)
        if not col2:
            del cols[j2]
    for r in pcol:
        if r != i:
            rows[r].discard(j)
    del rows[i]


def _unit_reduce(cols, rows, modulus=None):
    """Eliminate pivots that are units; returns how many were eliminated."""
    count = 0
    progress = True
    while progress and cols:
        progress = False
        for j in sorted(cols, key=lambda c: len(cols[c])):
            col = cols.get(j)
            if col is None:
                continue
            best = None
            for i, v in col.items():
                if modulus or abs(v) == 1:
                    cost = len(rows[i])
                    if best is None or cost < best[0]:
                        best = (cost, i, v)
            if best is None:
                continue
            _eliminate(cols, rows, best[1], j, best[2], modulus)
            count += 1
            progress = True
    return count


def smith_invariants(mat, max_nnz=DEFAULT_MAX_NNZ):
    """Nonzero invariant factors of an integer matrix, in dividing order."""
    mat = sp.csc_matrix(mat)
    if mat.nnz > max_nnz:
        raise ResourceError(
            f"matrix with {mat.nnz} nonzeros exceeds the SNF budget {max_nnz}; "
            "apply a Morse reduction first",
            progress=mat.shape,
        )
    cols, rows = _to_dicts(mat)
    units = _unit_reduce(cols, rows)
    if not cols:
        return [1] * units
    live_rows = sorted({i for c in cols.values() for i in c})
    live_cols = sorted(cols)
    where = {r: k for k, r in enumerate(live_rows)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for k, j in enumerate(live_cols):
        for i, v in cols[j].items():
            dense[where[i]][k] = v
    rest = smith_normal_form_dense(dense)
    return [1] * units + rest


def rank_mod_p(mat, p, max_nnz=DEFAULT_MAX_NNZ):
    mat = sp.csc_matrix(mat)
    if mat.nnz > max_nnz:
        raise ResourceError(f"matrix with {mat.nnz} nonzeros exceeds budget {max_nnz}")
    mat = sp.csc_matrix((mat.data % p, mat.indices, mat.indptr), shape=mat.shape)
    cols, rows = _to_dicts(mat)
    return _unit_reduce(cols, rows, modulus=p)


# ------------------------------------------------------------ homology


@dataclass
class HomologySummary:
    """Betti numbers and torsion coefficients per degree."""

    betti: dict = field(default_factory=dict)
    torsion: dict = field(default_factory=dict)
    reduced: bool = True

    def betti_number(self, d):
        return self.betti.get(d, 0)

    def torsion_of(self, d):
        return list(self.torsion.get(d, []))

    def nonzero(self):
        """``{degree: (betti, torsion)}`` for degrees with nontrivial homology."""
        out = {}
        for d in sorted(set(self.betti) | set(self.torsion)):
            b, t = self.betti.get(d, 0), self.torsion.get(d, [])
            if b or t:
                out[d] = (b, list(t))
        return out

    def betti_vector(self):
        return {d: b for d, b in sorted(self.betti.items()) if b}

    def is_acyclic(self):
        return not self.nonzero()

    def euler_characteristic(self):
        return sum((-1) ** d * b for d, b in self.betti.items())

    def to_records(self):
        degrees = sorted(set(self.betti) | set(self.torsion))
        return [
            {"degree": d, "betti": self.betti.get(d, 0), "torsion": list(self.torsion.get(d, []))}
            for d in degrees
        ]

    def describe(self):
        parts = []
        for d, (b, t) in self.nonzero().items():
            terms = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z_{q}" for q in t]
            parts.append(f"H{d} = " + " + ".join(terms))
        return ", ".join(parts) if parts else "acyclic"


def homology(C: ChainComplex, max_nnz=DEFAULT_MAX_NNZ) -> HomologySummary:
    """Integer homology of a chain complex (reduced iff it starts in degree -1)."""
    invariants = {}
    for d in range(C.min_degree + 1, C.max_degree + 1):
        invariants[d] = smith_invariants(C.boundary(d), max_nnz)
    summary = HomologySummary(reduced=C.min_degree == -1)
    for d in C.degrees:
        out_rank = len(invariants.get(d, []))
        in_factors = invariants.get(d + 1, [])
        summary.betti[d] = C.rank(d) - out_rank - len(in_factors)
        tors = [q for q in in_factors if q > 1]
        if tors:
            summary.torsion[d] = sorted(tors)
    return summary


def _is_prime(p):
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def betti_mod_p(C: ChainComplex, p, max_nnz=DEFAULT_MAX_NNZ):
    """Betti numbers over the field with ``p`` elements, ``{degree: betti}``."""
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    ranks = {d: rank_mod_p(C.boundary(d), p, max_nnz) for d in range(C.min_degree + 1, C.max_degree + 1)}
    return {d: C.rank(d) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in C.degrees}


def betti_rational(C: ChainComplex, max_nnz=DEFAULT_MAX_NNZ):
    return dict(homology(C, max_nnz).betti)
