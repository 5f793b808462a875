"""Permutation actions on hypergraphs, quotients and mod-p Euler congruences."""
from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from .errors import DomainError
from .euler import reduced_euler_theta
from .hypergraph import Hypergraph, load_polytope

__all__ = [
    "GroupAction",
    "OrbitPartition",
    "orbits",
    "quotient",
    "cyclic_cube_action",
    "translation_action",
    "face_rotation_action",
    "group_elements",
    "group_order",
    "check_mod_p_congruence",
    "CongruenceReport",
    "planted_symmetric_hypergraph",
    "compose",
    "induced_action",
]

GROUP_ORDER_CAP = 10_000


@dataclass(frozen=True)
class GroupAction:
    """Generators of a permutation group, each a tuple ``g`` with ``g[v]`` the image of ``v``."""

    vertex_count: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.vertex_count)):
                raise DomainError(f"generator {g} is not a permutation of range({self.vertex_count})")
        object.__setattr__(self, "generators", gens)

    def validate(self, H: Hypergraph):
        """Raise unless every generator carries hyperedges to hyperedges."""
        if H.vertex_count != self.vertex_count:
            raise DomainError("action and hypergraph have different vertex counts")
        edges = H.edge_set()
        for gi, g in enumerate(self.generators):
            for h in H.hyperedges:
                image = frozenset(g[v] for v in h)
                if image not in edges:
                    raise DomainError(
                        f"generator {gi} maps hyperedge {sorted(h)} to {sorted(image)}, "
                        "which is not a hyperedge"
                    )
        return self

    def combined(self, other: GroupAction):
        return GroupAction(self.vertex_count, self.generators + other.generators)


def compose(g, h):
    """``(g o h)[v] = g[h[v]]``."""
    return tuple(g[x] for x in h)


@dataclass(frozen=True)
class OrbitPartition:
    orbit_of: tuple
    orbits: tuple

    def __len__(self):
        return len(self.orbits)


def orbits(H: Hypergraph, A: GroupAction) -> OrbitPartition:
    A.validate(H)
    parent = list(range(H.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in A.generators:
        for v, w in enumerate(g):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for v in range(H.vertex_count):
        groups.setdefault(find(v), []).append(v)
    # orbits numbered by their smallest vertex
    orbit_list = tuple(frozenset(groups[r]) for r in sorted(groups))
    orbit_of = [0] * H.vertex_count
    for i, orb in enumerate(orbit_list):
        for v in orb:
            orbit_of[v] = i
    return OrbitPartition(tuple(orbit_of), orbit_list)


def quotient(H: Hypergraph, A: GroupAction) -> Hypergraph:
    """Vertices are orbits; hyperedges are the images of the hyperedges (merged)."""
    part = orbits(H, A)
    edges = [frozenset(part.orbit_of[v] for v in h) for h in H.hyperedges]
    return Hypergraph(len(part), tuple(edges), name=f"{H.name}/G" if H.name else "")


def induced_action(part: OrbitPartition, B: GroupAction) -> GroupAction:
    """Action of ``B`` on the orbits of ``part``; ``B`` must permute the orbits."""
    gens = []
    for g in B.generators:
        image = []
        for orb in part.orbits:
            targets = {part.orbit_of[g[v]] for v in orb}
            if len(targets) != 1:
                raise DomainError(f"generator {g} does not permute the orbits")
            image.append(targets.pop())
        gens.append(tuple(image))
    return GroupAction(len(part), tuple(gens))


def cyclic_cube_action(n, p) -> GroupAction:
    """Z_p cycling the last ``p`` coordinates of the n-cube (bit i -> bit i+1 in that block)."""
    if p > n:
        raise DomainError(f"cyclic action needs p <= n, got p={p}, n={n}")
    if p < 1:
        raise DomainError("p must be positive")
    base = n - p
    perm = []
    for x in range(1 << n):
        y = x & ((1 << base) - 1)
        for j in range(p):
            if (x >> (base + j)) & 1:
                y |= 1 << (base + (j + 1) % p)
        perm.append(y)
    return GroupAction(1 << n, (tuple(perm),))


def translation_action(n) -> GroupAction:
    """Z_2^n acting on cube vertices by coordinate flips."""
    return GroupAction(1 << n, tuple(tuple(x ^ (1 << i) for x in range(1 << n)) for i in range(n)))


def _cyclic_face(edges, face):
    adj = {v: [w for w in face if frozenset((v, w)) in edges] for v in face}
    start = min(face)
    cycle = [start]
    prev = None
    while len(cycle) < len(face):
        cur = cycle[-1]
        nxt = min(w for w in adj[cur] if w != prev and w not in cycle)
        prev = cur
        cycle.append(nxt)
    return cycle


def face_rotation_action(solid="dodecahedron", face_index=0) -> GroupAction:
    """Rotation of a Platonic solid about the axis through the centre of a 2-face."""
    m, faces = load_polytope(solid)
    edges = {frozenset(e) for e in faces[1]}
    face = faces[2][face_index]
    cycle = _cyclic_face(edges, face)
    target = {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}
    G = nx.Graph()
    G.add_nodes_from(range(m))
    G.add_edges_from(tuple(e) for e in edges)
    for iso in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter():
        if all(iso[v] == w for v, w in target.items()):
            return GroupAction(m, (tuple(iso[v] for v in range(m)),))
    raise DomainError(f"no rotation found for face {face_index} of the {solid}")


def group_elements(A: GroupAction, cap=GROUP_ORDER_CAP):
    """All elements of the generated group, by closure; refuses past ``cap``."""
    identity = tuple(range(A.vertex_count))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in A.generators:
                h = compose(s, g)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise DomainError(f"group order exceeds the closure cap {cap}")
                    nxt.append(h)
        frontier = nxt
    return seen


def group_order(A: GroupAction, cap=GROUP_ORDER_CAP):
    return len(group_elements(A, cap))


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class CongruenceReport:
    p: int
    group_order: int
    chi: int
    chi_quotient: int
    quotient: Hypergraph

    @property
    def holds(self):
        return (self.chi - self.chi_quotient) % self.p == 0

    def to_dict(self):
        return {
            "p": self.p,
            "group_order": self.group_order,
            "chi": self.chi,
            "chi_quotient": self.chi_quotient,
            "chi_mod_p": self.chi % self.p,
            "chi_quotient_mod_p": self.chi_quotient % self.p,
            "holds": self.holds,
            "quotient": self.quotient.to_dict(),
        }


def check_mod_p_congruence(H, A, p, **euler_kwargs) -> CongruenceReport:
    """Unreduced chi of theta(H) and theta(H/G) and whether they agree mod p."""
    A.validate(H)
    order = group_order(A)
    if not _is_power_of(order, p):
        raise DomainError(f"group of order {order} is not a {p}-group")
    Q = quotient(H, A)
    chi = reduced_euler_theta(H, **euler_kwargs) + 1
    chi_q = reduced_euler_theta(Q, **euler_kwargs) + 1
    return CongruenceReport(p, order, chi, chi_q, Q)


def planted_symmetric_hypergraph(rng: random.Random, p, blocks, n_edges, max_size=None):
    """Random hypergraph on ``p * blocks`` vertices closed under a Z_p rotation.

    Vertex ``b * p + j`` is bead ``j`` of block ``b``; the generator turns
    every block by one bead.
    """
    m = p * blocks
    gen = tuple(b * p + (j + 1) % p for b in range(blocks) for j in range(p))
    max_size = max_size or m
    edges = set()
    for _ in range(n_edges):
        size = rng.randint(1, max_size)
        h = frozenset(rng.sample(range(m), size))
        for _ in range(p):
            edges.add(h)
            h = frozenset(gen[v] for v in h)
    H = Hypergraph(m, tuple(sorted(edges, key=sorted)))
    return H, GroupAction(m, (gen,))
