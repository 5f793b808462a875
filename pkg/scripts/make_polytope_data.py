"""Regenerate the icosahedron/dodecahedron face files in src/theta_lab/data.

Icosahedron vertices are the 12 cyclic permutations of (0, +-1, +-phi),
numbered in the order produced below. Dodecahedron vertices are the 20
icosahedron triangles (the dual), numbered by the sorted triangle list.
"""
import itertools
import json
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[1] / "src" / "theta_lab" / "data"


def icosahedron():
    phi = (1 + 5 ** 0.5) / 2
    pts = []
    for a, b in itertools.product((1, -1), repeat=2):
        pts += [(0, a, b * phi), (a, b * phi, 0), (b * phi, 0, a)]
    pts = np.array(pts)
    d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    edges = sorted(
        [i, j] for i, j in itertools.combinations(range(12), 2) if abs(d[i, j] - 2) < 1e-9
    )
    es = {tuple(e) for e in edges}
    tris = sorted(
        list(t) for t in itertools.combinations(range(12), 3)
        if all(p in es for p in itertools.combinations(t, 2))
    )
    return edges, tris


def main():
    edges, tris = icosahedron()
    ico = {"name": "icosahedron", "vertex_count": 12,
           "faces_by_dim": [[[v] for v in range(12)], edges, tris]}
    # dual: triangle -> vertex
    tri_edges = sorted(
        [i, j] for i, j in itertools.combinations(range(len(tris)), 2)
        if len(set(tris[i]) & set(tris[j])) == 2
    )
    pentagons = sorted(
        sorted(i for i, t in enumerate(tris) if v in t) for v in range(12)
    )
    dod = {"name": "dodecahedron", "vertex_count": 20,
           "faces_by_dim": [[[v] for v in range(20)], tri_edges, pentagons]}
    for name, obj in (("icosahedron", ico), ("dodecahedron", dod)):
        (DATA / f"{name}.json").write_text(json.dumps(obj, indent=1) + "\n")


if __name__ == "__main__":
    main()
