"""Hypergraphs, named families and the structural operations on them.

Vertices are ``0..m-1``; hyperedges are stored as ``frozenset`` objects in
order of first appearance with duplicates removed.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from math import comb

from .errors import DomainError

__all__ = [
    "Hypergraph",
    "build_family",
    "cube",
    "simp",
    "crosspoly",
    "path",
    "polygon",
    "dodec",
    "icos",
    "load_polytope",
    "dual",
    "disjoint_union",
    "minimalize",
    "from_complex",
    "isolated_vertices",
    "subdivide_edge",
    "FAMILIES",
]


@dataclass(frozen=True)
class Hypergraph:
    """A finite hypergraph on the vertex set ``range(vertex_count)``."""

    vertex_count: int
    hyperedges: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = int(self.vertex_count)
        if m < 1:
            raise DomainError("a hypergraph needs at least one vertex")
        seen = set()
        edges = []
        for h in self.hyperedges:
            h = frozenset(int(v) for v in h)
            if h and (min(h) < 0 or max(h) >= m):
                raise DomainError(f"hyperedge {sorted(h)} not inside [0, {m})")
            if h not in seen:
                seen.add(h)
                edges.append(h)
        object.__setattr__(self, "vertex_count", m)
        object.__setattr__(self, "hyperedges", tuple(edges))

    def __len__(self):
        return len(self.hyperedges)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Hypergraph{label} m={self.vertex_count} edges={len(self.hyperedges)}>"

    @cached_property
    def masks(self):
        """Hyperedges as integer bitmasks (bit ``v`` set iff ``v`` in the edge)."""
        return tuple(sum(1 << v for v in h) for h in self.hyperedges)

    @property
    def full_mask(self):
        return (1 << self.vertex_count) - 1

    def degrees(self):
        deg = [0] * self.vertex_count
        for h in self.hyperedges:
            for v in h:
                deg[v] += 1
        return deg

    def edge_set(self):
        return frozenset(self.hyperedges)

    def to_dict(self):
        return {
            "vertex_count": self.vertex_count,
            "hyperedges": sorted(sorted(h) for h in self.hyperedges),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["vertex_count"]), tuple(data["hyperedges"]))


# ---------------------------------------------------------------- families


def _check(cond, message):
    if not cond:
        raise DomainError(message)


def cube(n, k):
    """Hyperedges are the vertex sets of the k-faces of the n-cube.

    Vertex ``x`` is the cube corner whose coordinate ``i`` is bit ``i`` of ``x``.
    """
    _check(n >= 1, "cube requires n >= 1")
    _check(0 <= k <= n, "cube requires 0 <= k <= n")
    edges = []
    for free in itertools.combinations(range(n), k):
        fixed = [i for i in range(n) if i not in free]
        subs = [
            sum(((s >> j) & 1) << free[j] for j in range(k)) for s in range(1 << k)
        ]
        for a in range(1 << (n - k)):
            base = sum(((a >> j) & 1) << fixed[j] for j in range(n - k))
            edges.append([base | s for s in subs])
    return Hypergraph(1 << n, tuple(edges), name=f"cube({n},{k})")


def simp(n, k):
    _check(n >= 0 and 0 <= k <= n, "simp requires 0 <= k <= n")
    edges = itertools.combinations(range(n + 1), k + 1)
    return Hypergraph(n + 1, tuple(edges), name=f"simp({n},{k})")


def crosspoly(n, k):
    """k-faces of the n-dimensional cross-polytope.

    Vertices ``2i`` and ``2i+1`` are the antipodal pair on axis ``i``.
    """
    _check(n >= 1 and 0 <= k < n, "crosspoly requires 0 <= k < n")
    edges = []
    for axes in itertools.combinations(range(n), k + 1):
        for signs in itertools.product((0, 1), repeat=k + 1):
            edges.append([2 * a + s for a, s in zip(axes, signs)])
    return Hypergraph(2 * n, tuple(edges), name=f"crosspoly({n},{k})")


def path(n):
    """The path with n edges on vertices 0..n."""
    _check(n >= 1, "path requires n >= 1")
    return Hypergraph(n + 1, tuple((i, i + 1) for i in range(n)), name=f"path({n})")


def polygon(n):
    _check(n >= 3, "polygon requires n >= 3")
    return Hypergraph(n, tuple((i, (i + 1) % n) for i in range(n)), name=f"polygon({n})")


def load_polytope(name):
    """Read a bundled polytope face file (``vertex_count`` + ``faces_by_dim``)."""
    text = resources.files("theta_lab").joinpath("data").joinpath(f"{name}.json").read_text()
    data = json.loads(text)
    return data["vertex_count"], [[tuple(f) for f in faces] for faces in data["faces_by_dim"]]


def _platonic(solid, label, k):
    _check(k in (0, 1, 2), f"{solid} faces exist for k in 0, 1, 2")
    m, faces = load_polytope(solid)
    return Hypergraph(m, tuple(faces[k]), name=f"{label}({k})")


def dodec(k):
    return _platonic("dodecahedron", "dodec", k)


def icos(k):
    return _platonic("icosahedron", "icos", k)


FAMILIES = {
    "cube": (cube, 2),
    "simp": (simp, 2),
    "crosspoly": (crosspoly, 2),
    "path": (path, 1),
    "polygon": (polygon, 1),
    "dodec": (dodec, 1),
    "icos": (icos, 1),
}


def build_family(family, params):
    """Construct a named family, e.g. ``build_family("cube", [3, 1])``."""
    try:
        ctor, arity = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    params = [int(p) for p in params]
    if len(params) != arity:
        raise DomainError(f"{family} takes {arity} integer parameter(s), got {len(params)}")
    return ctor(*params)


def expected_shape(family, params):
    """Closed-form (hyperedge count, hyperedge size) for the uniform families."""
    if family == "cube":
        n, k = params
        return comb(n, k) * 2 ** (n - k), 2**k
    if family == "simp":
        n, k = params
        return comb(n + 1, k + 1), k + 1
    if family == "crosspoly":
        n, k = params
        return comb(n, k + 1) * 2 ** (k + 1), k + 1
    if family in ("path", "polygon"):
        return params[0], 2
    raise DomainError(f"no closed form for {family}")


# -------------------------------------------------------------- operations


def dual(H):
    """Vertices are the hyperedges of ``H``; vertex ``v`` gives the edge {h : v in h}."""
    if not H.hyperedges:
        raise DomainError("the dual of a hypergraph without hyperedges has no vertices")
    edges = [
        [i for i, h in enumerate(H.hyperedges) if v in h] for v in range(H.vertex_count)
    ]
    return Hypergraph(len(H.hyperedges), tuple(edges))


def disjoint_union(H1, H2):
    shift = H1.vertex_count
    edges = list(H1.hyperedges) + [[v + shift for v in h] for h in H2.hyperedges]
    return Hypergraph(H1.vertex_count + H2.vertex_count, tuple(edges))


def minimalize(H):
    """Drop every hyperedge that strictly contains another hyperedge."""
    masks = H.masks
    order = sorted(range(len(masks)), key=lambda i: bin(masks[i]).count("1"))
    kept = []
    for i in order:
        mi = masks[i]
        if not any(mj & mi == mj for mj in kept):
            kept.append(mi)
    keep = set(kept)
    edges = [h for h, mk in zip(H.hyperedges, masks) if mk in keep]
    return Hypergraph(H.vertex_count, tuple(edges), name=H.name)


def from_complex(X, facets_only=False):
    """A hypergraph whose theta complex is ``X``.

    One hyperedge per face of ``X`` (its complement). With ``facets_only``
    only the facet complements are used, which gives the same theta complex.
    """
    from .complex import enumerate_faces

    m = X.vertex_count
    full = frozenset(range(m))
    if facets_only:
        faces = X.facets
    else:
        faces = (frozenset(f) for f in enumerate_faces(X).iter_faces())
    return Hypergraph(m, tuple(full - frozenset(f) for f in faces))


def isolated_vertices(H):
    covered = set().union(*H.hyperedges) if H.hyperedges else set()
    return frozenset(v for v in range(H.vertex_count) if v not in covered)


def subdivide_edge(G, edge, count=3):
    """Replace the graph edge ``{v, w}`` by a path through ``count`` new vertices."""
    edge = frozenset(edge)
    if len(edge) != 2 or edge not in set(G.hyperedges):
        raise DomainError(f"{sorted(edge)} is not an edge of the graph")
    v, w = sorted(edge)
    m = G.vertex_count
    chain = [v] + list(range(m, m + count)) + [w]
    edges = [h for h in G.hyperedges if h != edge]
    edges += [(a, b) for a, b in zip(chain, chain[1:])]
    return Hypergraph(m + count, tuple(edges))
