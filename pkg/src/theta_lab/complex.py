"""Simplicial complexes in facet form, and the theta / independence / dual constructions."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, ResourceError
from .faces import DEFAULT_FACE_CAP, faces_from_facets, faces_from_forbidden
from .hypergraph import Hypergraph, minimalize

__all__ = [
    "SimplicialComplex",
    "ImplicitComplex",
    "theta",
    "independence_complex",
    "alexander_dual",
    "enumerate_faces",
    "f_vector",
    "is_face",
    "face_masks",
    "full_simplex",
    "boundary_of_simplex",
]

# alexander_dual and face_masks scan all 2**m subsets
MAX_SCAN_VERTICES = 24


def _maximal(sets):
    """Inclusion-maximal members of a collection of frozensets, sorted."""
    uniq = sorted(set(sets), key=len, reverse=True)
    kept = []
    larger = []  # masks of kept sets strictly bigger than the current size
    pending = []
    size = None
    for s in uniq:
        if len(s) != size:
            larger.extend(pending)
            pending = []
            size = len(s)
        mask = sum(1 << v for v in s)
        if not any(mask & t == mask for t in larger):
            kept.append(s)
            pending.append(mask)
    return tuple(sorted(kept, key=lambda f: sorted(f)))


@dataclass(frozen=True)
class SimplicialComplex:
    """A complex given by its facets.

    ``facets == ()`` is the void complex (no faces at all), while
    ``facets == (frozenset(),)`` is the complex whose only face is the empty
    set. The two have reduced Euler characteristic 0 and -1 respectively.
    """

    vertex_count: int
    facets: tuple = ()

    def __post_init__(self):
        m = int(self.vertex_count)
        if m < 1:
            raise DomainError("a complex needs a nonempty vertex set")
        facets = [frozenset(int(v) for v in f) for f in self.facets]
        for f in facets:
            if f and (min(f) < 0 or max(f) >= m):
                raise DomainError(f"facet {sorted(f)} not inside [0, {m})")
        object.__setattr__(self, "vertex_count", m)
        object.__setattr__(self, "facets", _maximal(facets))

    @property
    def is_void(self):
        return not self.facets

    @property
    def dimension(self):
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def facet_masks(self):
        return tuple(sum(1 << v for v in f) for f in self.facets)

    def contains(self, sigma):
        mask = sum(1 << v for v in sigma)
        return any(mask & fm == mask for fm in self.facet_masks)

    def vertices(self):
        return frozenset().union(*self.facets) if self.facets else frozenset()

    def faces(self, cap=DEFAULT_FACE_CAP):
        return enumerate_faces(self, cap)

    def to_dict(self):
        return {
            "vertex_count": self.vertex_count,
            "facets": [sorted(f) for f in self.facets],
        }

    def dumps(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["vertex_count"]), tuple(data["facets"]))


@dataclass(frozen=True)
class ImplicitComplex:
    """A complex given by its minimal non-faces (forbidden sets)."""

    vertex_count: int
    forbidden_sets: tuple = ()

    def __post_init__(self):
        m = int(self.vertex_count)
        if m < 1:
            raise DomainError("a complex needs a nonempty vertex set")
        sets = {frozenset(int(v) for v in f) for f in self.forbidden_sets}
        minimal = [s for s in sets if not any(t < s for t in sets)]
        object.__setattr__(self, "vertex_count", m)
        object.__setattr__(self, "forbidden_sets", tuple(sorted(minimal, key=sorted)))

    @property
    def is_void(self):
        return frozenset() in self.forbidden_sets

    @cached_property
    def forbidden_masks(self):
        return tuple(sum(1 << v for v in f) for f in self.forbidden_sets)

    def contains(self, sigma):
        mask = sum(1 << v for v in sigma)
        return not any(mask & fm == fm for fm in self.forbidden_masks)

    def faces(self, cap=DEFAULT_FACE_CAP):
        return enumerate_faces(self, cap)

    def to_facet_form(self, cap=DEFAULT_FACE_CAP):
        table = enumerate_faces(self, cap)
        faces = [frozenset(f) for f in table.iter_faces()]
        return SimplicialComplex(self.vertex_count, tuple(faces))


def full_simplex(m):
    return SimplicialComplex(m, (range(m),))


def boundary_of_simplex(m):
    return SimplicialComplex(m, tuple(frozenset(range(m)) - {v} for v in range(m)))


# ----------------------------------------------------------- constructions


def theta(H: Hypergraph) -> SimplicialComplex:
    """Faces are the vertex sets that miss at least one hyperedge."""
    if not H.hyperedges:
        raise DomainError("theta is undefined for a hypergraph without hyperedges")
    full = frozenset(range(H.vertex_count))
    return SimplicialComplex(H.vertex_count, tuple(full - h for h in minimalize(H).hyperedges))


def independence_complex(H: Hypergraph) -> ImplicitComplex:
    """Faces are the vertex sets containing no hyperedge."""
    return ImplicitComplex(H.vertex_count, minimalize(H).hyperedges)


def face_masks(X):
    """Boolean array over all ``2**m`` subsets: is the subset a face of ``X``."""
    m = X.vertex_count
    if m > MAX_SCAN_VERTICES:
        raise ResourceError(f"subset scan limited to {MAX_SCAN_VERTICES} vertices, got {m}")
    subsets = np.arange(1 << m, dtype=np.int64)
    if isinstance(X, SimplicialComplex):
        out = np.zeros(1 << m, dtype=bool)
        for fm in X.facet_masks:
            out |= (subsets & ~fm) == 0
    else:
        out = np.ones(1 << m, dtype=bool)
        for fm in X.forbidden_masks:
            out &= (subsets & fm) != fm
    return out


def _facets_from_indicator(m, is_face):
    subsets = np.arange(1 << m, dtype=np.int64)
    maximal = is_face.copy()
    for v in range(m):
        bit = 1 << v
        without = (subsets & bit) == 0
        maximal[without] &= ~is_face[subsets[without] | bit]
    facets = []
    for mask in np.flatnonzero(maximal):
        facets.append(frozenset(v for v in range(m) if (int(mask) >> v) & 1))
    return facets


def alexander_dual(X) -> SimplicialComplex:
    """Faces are the sets whose complement is not a face of ``X``."""
    m = X.vertex_count
    is_face = face_masks(X)
    full = (1 << m) - 1
    subsets = np.arange(1 << m, dtype=np.int64)
    dual = ~is_face[full ^ subsets]
    if not dual.any():
        warnings.warn("Alexander dual of the full simplex is the void complex", stacklevel=2)
        return SimplicialComplex(m, ())
    return SimplicialComplex(m, tuple(_facets_from_indicator(m, dual)))


# --------------------------------------------------------------- queries


def enumerate_faces(X, cap=DEFAULT_FACE_CAP):
    """Explicit face table of ``X``; raises ``ResourceError`` past ``cap`` faces."""
    if isinstance(X, ImplicitComplex):
        return faces_from_forbidden(X.vertex_count, X.forbidden_sets, cap)
    return faces_from_facets(X.vertex_count, X.facets, cap)


def f_vector(X, cap=DEFAULT_FACE_CAP):
    """``(f_-1, f_0, f_1, ...)``; the void complex gives ``()``."""
    return enumerate_faces(X, cap).f_vector


def is_face(X, sigma):
    sigma = frozenset(sigma)
    if sigma and (min(sigma) < 0 or max(sigma) >= X.vertex_count):
        raise DomainError(f"{sorted(sigma)} is not a set of vertices of the complex")
    if X.is_void:
        return False
    return X.contains(sigma)
