"""Discrete vector fields: sequential construction, gradient check, Morse reduction."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .complex import SimplicialComplex, enumerate_faces
from .errors import DomainError, ResourceError
from .faces import DEFAULT_FACE_CAP, FaceTable
from .homology import ChainComplex, chain_complex, homology

__all__ = [
    "Matching",
    "sequential_field",
    "is_gradient",
    "morse_reduce",
    "morse_homology",
    "theta_homology_via_duality",
    "default_order",
    "contractibility_search",
    "Certificate",
    "verify_certificate",
]

# largest coefficient allowed to appear during reductions before giving up
_COEFF_LIMIT = 2**31


class Matching:
    """A set of (face, coface) pairs over a ``FaceTable``.

    ``up[d][i]`` is the index of the (d+1)-face paired with face ``i`` of
    dimension ``d`` (or -1), ``down[d][i]`` the index of the (d-1)-face paired
    with it. ``step[d][i]`` records, for a lower face, the position in the
    vertex order that created its pair (-1 when not applicable).
    """

    def __init__(self, faces: FaceTable, up=None, down=None, step=None, order=None):
        self.faces = faces
        dims = range(-1, faces.dim + 1)
        self.up = {d: np.full(faces.count(d), -1, dtype=np.int64) for d in dims}
        self.down = {d: np.full(faces.count(d), -1, dtype=np.int64) for d in dims}
        self.step = {d: np.full(faces.count(d), -1, dtype=np.int64) for d in dims}
        for src, dst in ((up, self.up), (down, self.down), (step, self.step)):
            if src:
                for d, arr in src.items():
                    dst[d] = np.asarray(arr, dtype=np.int64)
        self.order = None if order is None else tuple(int(v) for v in order)

    @classmethod
    def from_pairs(cls, faces: FaceTable, pairs, validate=True):
        """Build from explicit ``(sigma, tau)`` vertex-set pairs."""
        M = cls(faces)
        for sigma, tau in pairs:
            sigma, tau = sorted(sigma), sorted(tau)
            d = len(sigma) - 1
            if len(tau) != len(sigma) + 1 or not set(sigma) < set(tau):
                raise DomainError(f"{sigma} is not a codimension-1 face of {tau}")
            i, j = faces.index_of(sigma), faces.index_of(tau)
            if i < 0 or j < 0:
                raise DomainError(f"pair ({sigma}, {tau}) is not made of faces of the complex")
            if M.up[d][i] >= 0 or M.down[d][i] >= 0 or M.up[d + 1][j] >= 0 or M.down[d + 1][j] >= 0:
                raise DomainError(f"a face of ({sigma}, {tau}) appears in more than one pair")
            M.up[d][i] = j
            M.down[d + 1][j] = i
        return M

    def is_matched(self, d):
        return (self.up[d] >= 0) | (self.down[d] >= 0)

    def critical_indices(self, d):
        return np.flatnonzero(~self.is_matched(d))

    @property
    def critical_counts(self):
        """Critical nonempty faces per dimension, ``{d: count}``."""
        return {
            d: int((~self.is_matched(d)).sum())
            for d in range(0, self.faces.dim + 1)
            if (~self.is_matched(d)).any()
        }

    @property
    def critical(self):
        return [
            self.faces.face(d, int(i))
            for d in range(0, self.faces.dim + 1)
            for i in self.critical_indices(d)
        ]

    @property
    def empty_face_paired(self):
        return self.faces.count(-1) > 0 and bool(self.is_matched(-1)[0])

    def pair_count(self):
        return int(sum((arr >= 0).sum() for arr in self.up.values()))

    def pair_indices(self, d):
        """``(lower, upper)`` index arrays for pairs whose lower face has dimension d."""
        lower = np.flatnonzero(self.up[d] >= 0)
        return lower, self.up[d][lower]

    @property
    def pairs(self):
        out = []
        for d in range(-1, self.faces.dim):
            lower, upper = self.pair_indices(d)
            for i, j in zip(lower, upper):
                out.append((self.faces.face(d, int(i)), self.faces.face(d + 1, int(j))))
        return out

    def morse_euler(self):
        """Alternating count of critical nonempty cells (the unreduced chi)."""
        return sum((-1) ** d * c for d, c in self.critical_counts.items())


# ------------------------------------------------------------ sequential


def _insert_rank(faces, rows, v):
    """Ranks of ``row + {v}`` for rows (sorted, not containing v)."""
    table = faces._binom
    n, k = rows.shape
    if k == 0:
        return table[np.full(n, v), 1]
    above = (rows > v).astype(np.int64)
    pos = k - above.sum(axis=1)
    cols = np.arange(k)[None, :] + 1 + above
    keys = table[rows, cols].sum(axis=1)
    keys += table[np.full(n, v), pos + 1]
    return keys


def _as_faces(X, cap):
    if isinstance(X, FaceTable):
        return X
    return enumerate_faces(X, cap)


def sequential_field(X, order, pair_empty=False, cap=DEFAULT_FACE_CAP) -> Matching:
    """The sequential vector field for the vertex sequence ``order``.

    Stage ``i`` pairs ``(s, s + v_i)`` whenever both are still critical. The
    empty face stays unpaired unless ``pair_empty`` is set.
    """
    faces = _as_faces(X, cap)
    order = [int(v) for v in order]
    if len(set(order)) != len(order):
        raise DomainError("vertex order has repeats")
    if any(v < 0 or v >= faces.vertex_count for v in order):
        raise DomainError("vertex order mentions a vertex outside the complex")
    M = Matching(faces, order=order)
    if faces.is_void:
        return M
    crit = {d: np.ones(faces.count(d), dtype=bool) for d in range(-1, faces.dim + 1)}
    if not pair_empty:
        crit[-1][:] = False
    for pos, v in enumerate(order):
        found = []
        for d in range(-1, faces.dim):
            cand = np.flatnonzero(crit[d])
            if len(cand) == 0:
                continue
            rows = faces.cells(d)[cand]
            if d >= 0:
                keep = ~(rows == v).any(axis=1)
                cand, rows = cand[keep], rows[keep]
            if len(cand) == 0:
                continue
            upper = faces.index(d + 1, _insert_rank(faces, rows, v))
            ok = upper >= 0
            ok[ok] = crit[d + 1][upper[ok]]
            if ok.any():
                found.append((d, cand[ok], upper[ok]))
        for d, lo, hi in found:
            M.up[d][lo] = hi
            M.down[d + 1][hi] = lo
            M.step[d][lo] = pos
            crit[d][lo] = False
            crit[d + 1][hi] = False
    return M


def default_order(faces: FaceTable):
    """All vertices, most frequent in top-dimensional faces first, ties by index."""
    top = faces.cells(faces.dim) if not faces.is_void else np.zeros((0, 0), int)
    freq = np.bincount(top.ravel(), minlength=faces.vertex_count) if top.size else np.zeros(faces.vertex_count)
    present = np.zeros(faces.vertex_count, dtype=bool)
    if faces.count(0):
        present[faces.cells(0)[:, 0]] = True
    verts = [v for v in range(faces.vertex_count) if present[v]]
    return sorted(verts, key=lambda v: (-freq[v], v))


# ------------------------------------------------------------- gradient


def _pair_graph(M, d):
    """Adjacency among pairs (lower dim d): a -> b when lower_b is a face of upper_a."""
    faces = M.faces
    lower, upper = M.pair_indices(d)
    n = len(lower)
    if n == 0 or d < 0:
        return lower, upper, sp.csr_matrix((n, n), dtype=np.int8)
    pair_of_lower = np.full(faces.count(d), -1, dtype=np.int64)
    pair_of_lower[lower] = np.arange(n)
    rows = faces.cells(d + 1)[upper]
    src, dst = [], []
    for i in range(d + 2):
        sub = np.delete(rows, i, axis=1)
        idx = faces.index(d, faces.rank(sub))
        tgt = pair_of_lower[idx]
        ok = (tgt >= 0) & (tgt != np.arange(n))
        src.append(np.flatnonzero(ok))
        dst.append(tgt[ok])
    src, dst = np.concatenate(src), np.concatenate(dst)
    adj = sp.csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return lower, upper, adj


def is_gradient(X, M: Matching):
    """``(True, None)`` if no closed gradient path exists, else ``(False, loop)``.

    ``loop`` lists faces ``s1, t1, s2, t2, ..., sk, tk`` with ``s1`` a face of ``tk``.
    """
    faces = M.faces
    # a pair (empty, v) cannot sit inside a loop, so dimension -1 is skipped
    for d in range(0, faces.dim):
        lower, upper, adj = _pair_graph(M, d)
        if adj.nnz == 0:
            continue
        ncomp, labels = connected_components(adj, directed=True, connection="strong")
        sizes = np.bincount(labels, minlength=ncomp)
        big = np.flatnonzero(sizes > 1)
        if len(big) == 0:
            continue
        members = np.flatnonzero(labels == big[0])
        sub = adj[members][:, members].tocoo()
        g = nx.DiGraph()
        g.add_edges_from(zip(members[sub.row], members[sub.col]))
        cycle = nx.find_cycle(g)
        loop = []
        for a, _ in cycle:
            loop.append(faces.face(d, int(lower[a])))
            loop.append(faces.face(d + 1, int(upper[a])))
        return False, loop
    return True, None


# ------------------------------------------------------------- reduction


def _schur(D, lo_pos, up_pos, max_iter):
    """Eliminate the block (rows lo_pos, cols up_pos) of D; returns D' on the rest."""
    n_rows, n_cols = D.shape
    keep_r = np.ones(n_rows, dtype=bool)
    keep_r[lo_pos] = False
    keep_c = np.ones(n_cols, dtype=bool)
    keep_c[up_pos] = False
    R, K = np.flatnonzero(keep_r), np.flatnonzero(keep_c)
    Dr = D.tocsr()
    top = Dr[lo_pos]
    A = top[:, up_pos].tocsr()
    B = top[:, K].tocsc()
    rest = Dr[R]
    Cm = rest[:, up_pos].tocsc()
    Dm = rest[:, K].tocsc()
    diag = A.diagonal()
    if not np.all(np.abs(diag) == 1):
        raise DomainError("matched pair with incidence other than +-1; matching invalid for this complex")
    S = sp.diags(diag.astype(np.int64), format="csr")
    N = (A - S).tocsr()
    N.eliminate_zeros()
    Y = (S @ B).tocsr()
    X = Y.copy()
    if N.nnz:
        SN = (S @ N).tocsr()
        for _ in range(max_iter):
            Y = -(SN @ Y)
            Y.eliminate_zeros()
            if Y.nnz == 0:
                break
            X = X + Y
        else:
            raise DomainError("gradient paths do not terminate: the matching has a closed path")
    if X.nnz and np.abs(X.data).max() > _COEFF_LIMIT:
        raise ResourceError("coefficient growth during Morse reduction")
    out = (Dm - Cm @ X).tocsc()
    out.eliminate_zeros()
    return out, R, K


def morse_reduce(C: ChainComplex, M: Matching, check=True) -> ChainComplex:
    """Algebraic Morse reduction along the pairs of a gradient matching.

    The result has one generator per critical cell (plus the empty face in
    the reduced case, unless it was paired) and the same homology as ``C``.
    """
    faces = M.faces
    if C.faces is not faces:
        raise DomainError("chain complex and matching are built on different face tables")
    if check:
        ok, loop = is_gradient(faces, M)
        if not ok:
            raise DomainError(f"matching is not gradient; closed path {loop}")
    if M.empty_face_paired and C.min_degree > -1:
        raise DomainError("matching pairs the empty face but the chain complex is unreduced")
    alive = {d: np.asarray(C.cells[d]) for d in C.degrees}
    mats = {d: C.boundary(d).tocsc() for d in range(C.min_degree + 1, C.max_degree + 1)}

    # group pairs by (step, upper degree); pairs without a step form one batch
    batches = {}
    for d in range(C.min_degree, C.max_degree):
        lower, upper = M.pair_indices(d)
        if len(lower) == 0:
            continue
        steps = M.step[d][lower]
        for s in np.unique(steps):
            sel = steps == s
            batches.setdefault(int(s), []).append((d + 1, lower[sel], upper[sel]))
    for s in sorted(batches):
        for du, lower, upper in batches[s]:
            lo_pos = np.searchsorted(alive[du - 1], lower)
            up_pos = np.searchsorted(alive[du], upper)
            mats[du], R, K = _schur(mats[du], lo_pos, up_pos, max_iter=len(lower) + 1)
            alive[du - 1] = alive[du - 1][R]
            alive[du] = alive[du][K]
            if du + 1 in mats:
                mats[du + 1] = mats[du + 1].tocsr()[K].tocsc()
            if du - 1 in mats:
                mats[du - 1] = mats[du - 1][:, R]
    ranks = [len(alive[d]) for d in C.degrees]
    return ChainComplex(ranks, mats, min_degree=C.min_degree, faces=faces, cells=alive)


def morse_homology(X, order=None, cap=DEFAULT_FACE_CAP, reduced=True):
    """Homology of a complex via a sequential field and Morse reduction."""
    faces = _as_faces(X, cap)
    C = chain_complex(faces, reduced=reduced)
    if faces.is_void:
        return homology(C)
    M = sequential_field(faces, default_order(faces) if order is None else order)
    return homology(morse_reduce(C, M, check=False))


def theta_homology_via_duality(H, cap=DEFAULT_FACE_CAP):
    """Integer homology of theta(H) computed from the independence complex.

    theta(H) is the Alexander dual of I(H) on m vertices, so reduced
    H^j(theta) = H_{m-j-3}(I). Universal coefficients then give
    Betti_j(theta) = Betti_{m-j-3}(I) and torsion of H_j(theta) equal to the
    torsion of H_{m-j-4}(I). Useful when I(H) is much smaller than theta(H).
    """
    from .complex import independence_complex
    from .homology import HomologySummary

    m = H.vertex_count
    ind = morse_homology(enumerate_faces(independence_complex(H), cap))
    out = HomologySummary(reduced=True)
    for d, b in ind.betti.items():
        if b:
            out.betti[m - d - 3] = b
    for d, t in ind.torsion.items():
        if t:
            out.torsion[m - d - 4] = list(t)
    return out



@dataclass
class Certificate:
    """A vertex order whose sequential field leaves a single critical vertex."""

    complex: SimplicialComplex
    order: list
    pairs: list = field(default_factory=list)
    critical: list = field(default_factory=list)
    attempts: int = 0

    def to_dict(self):
        return {
            "kind": "contractibility-certificate",
            "complex": self.complex.to_dict(),
            "order": list(self.order),
            "pairs": [[list(s), list(t)] for s, t in self.pairs],
            "critical": [list(c) for c in self.critical],
        }

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        return cls(
            SimplicialComplex.from_dict(data["complex"]),
            [int(v) for v in data["order"]],
            [(tuple(s), tuple(t)) for s, t in data["pairs"]],
            [tuple(c) for c in data["critical"]],
        )


@dataclass
class SearchResult:
    certificate: Certificate | None
    attempts: int
    best_critical: int
    best_order: list

    @property
    def found(self):
        return self.certificate is not None


def _candidate_orders(faces, budget, seed):
    verts = [int(v) for v in faces.cells(0)[:, 0]] if faces.count(0) else []
    yield default_order(faces)
    yield verts
    yield list(reversed(default_order(faces)))
    rng = random.Random(seed)
    while True:
        perm = verts[:]
        rng.shuffle(perm)
        yield perm


def contractibility_search(X, budget=50, seed=0, cap=DEFAULT_FACE_CAP) -> SearchResult:
    """Look for a vertex order whose sequential field has one critical 0-cell.

    Failure within ``budget`` attempts says nothing about contractibility.
    """
    faces = _as_faces(X, cap)
    complex_ = X if isinstance(X, SimplicialComplex) else None
    best = (None, None)
    if faces.is_void or faces.count(0) == 0:
        return SearchResult(None, 0, 0, [])
    for attempt, order in zip(range(1, budget + 1), _candidate_orders(faces, budget, seed)):
        M = sequential_field(faces, order)
        counts = M.critical_counts
        total = sum(counts.values())
        if best[0] is None or total < best[0]:
            best = (total, order)
        if counts == {0: 1}:
            if complex_ is None:
                raise DomainError("certificates need the SimplicialComplex, not a bare face table")
            cert = Certificate(complex_, list(order), M.pairs, M.critical, attempts=attempt)
            return SearchResult(cert, attempt, 1, list(order))
    return SearchResult(None, budget, best[0], list(best[1]))


def verify_certificate(cert) -> tuple:
    """Re-check a certificate from scratch; returns ``(ok, reason)``."""
    if isinstance(cert, dict):
        try:
            cert = Certificate.from_dict(cert)
        except (KeyError, TypeError, ValueError, DomainError) as exc:
            return False, f"malformed certificate: {exc}"
    try:
        faces = enumerate_faces(cert.complex)
        M = Matching.from_pairs(faces, cert.pairs)
    except (DomainError, ResourceError) as exc:
        return False, str(exc)
    crit = sorted(tuple(c) for c in M.critical)
    if crit != sorted(tuple(sorted(c)) for c in cert.critical):
        return False, "listed critical cells do not match the pairs"
    if M.critical_counts != {0: 1}:
        return False, f"critical cells {M.critical_counts} are not a single vertex"
    if M.empty_face_paired:
        return False, "the empty face must stay unpaired"
    ok, loop = is_gradient(faces, M)
    if not ok:
        return False, f"closed gradient path {loop}"
    seq = sequential_field(faces, cert.order)
    if sorted(seq.pairs) != sorted(M.pairs):
        return False, "pairs differ from the sequential field of the stated order"
    return True, "ok"
