import numpy as np
import pytest
import scipy.sparse as sp

from theta_lab.complex import SimplicialComplex, boundary_of_simplex, independence_complex, theta
from theta_lab.errors import DomainError, ResourceError
from theta_lab.euler import reduced_euler_theta
from theta_lab.homology import (
    ChainComplex,
    betti_mod_p,
    chain_complex,
    homology,
    smith_invariants,
    smith_normal_form_dense,
)
from theta_lab.hypergraph import (
    Hypergraph,
    crosspoly,
    cube,
    disjoint_union,
    dual,
    icos,
    path,
    polygon,
    subdivide_edge,
)

from oracles import closure, independence_faces, random_facets, random_hypergraph, reduced_betti, theta_faces


def nonzero_betti(summary):
    return {d: b for d, b in summary.betti.items() if b}


def theta_homology(H):
    return homology(chain_complex(theta(H)))


def test_triangle_boundary():
    C = chain_complex(boundary_of_simplex(3))
    assert C.rank_list() == [1, 3, 3]
    assert np.linalg.matrix_rank(C.boundary(1).toarray()) == 2
    H = homology(C)
    assert H.nonzero() == {1: (1, [])}


def test_square_theta_is_circle():
    assert theta_homology(cube(2, 1)).nonzero() == {1: (1, [])}


def test_icosahedron_triangles_give_two_torsion():
    C = chain_complex(theta(icos(2)))
    assert homology(C).nonzero() == {4: (0, [2])}
    mod2 = betti_mod_p(C, 2)
    assert {d: b for d, b in mod2.items() if b} == {4: 1, 5: 1}
    assert not any(betti_mod_p(C, 3).values())


def test_crosspoly_and_cube_examples():
    assert theta_homology(crosspoly(3, 1)).nonzero() == {3: (2, [])}
    assert theta_homology(cube(4, 2)).nonzero() == {6: (15, [])}


def test_circle_mod_p():
    C = chain_complex(theta(cube(2, 1)))
    for p in (2, 3, 5, 7):
        assert {d: b for d, b in betti_mod_p(C, p).items() if b} == {1: 1}
    with pytest.raises(DomainError):
        betti_mod_p(C, 4)


def test_smith_normal_form_small():
    assert smith_normal_form_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert smith_normal_form_dense([[0, 0], [0, 0]]) == []
    rp2 = sp.csc_matrix(np.array([[2]]))
    assert smith_invariants(rp2) == [2]


def test_size_budget():
    C = chain_complex(theta(cube(3, 1)))
    with pytest.raises(ResourceError, match="Morse"):
        homology(C, max_nnz=10)


def test_boundary_squares_to_zero(rng):
    for _ in range(100):
        m = rng.randint(1, 9)
        X = SimplicialComplex(m, random_facets(rng, m, rng.randint(1, 5)))
        chain_complex(X).check()


def test_bad_boundary_detected():
    with pytest.raises(DomainError):
        ChainComplex([1, 2, 1], {0: sp.csc_matrix(np.array([[1, 1]])),
                                 1: sp.csc_matrix(np.array([[1], [1]]))}, min_degree=-1)


def test_homology_matches_dense_oracle(rng):
    for _ in range(60):
        m = rng.randint(1, 9)
        facets = random_facets(rng, m, rng.randint(1, 6))
        H = homology(chain_complex(SimplicialComplex(m, facets)))
        assert nonzero_betti(H) == reduced_betti(closure(facets))


def test_euler_agrees_with_homology(rng):
    for _ in range(50):
        H = random_hypergraph(rng, rng.randint(2, 10), rng.randint(1, 7))
        assert theta_homology(H).euler_characteristic() == reduced_euler_theta(H)


def test_alexander_duality_betti(rng):
    # Betti_d(I(H)) = Betti_{m-d-3}(theta(H)) over Q and over Z/2
    for _ in range(50):
        m = rng.randint(2, 9)
        H = random_hypergraph(rng, m, rng.randint(1, 7))
        C_theta = chain_complex(theta(H))
        C_ind = chain_complex(independence_complex(H).to_facet_form())
        for p in (None, 2):
            b_theta = homology(C_theta).betti if p is None else betti_mod_p(C_theta, p)
            b_ind = homology(C_ind).betti if p is None else betti_mod_p(C_ind, p)
            left = {d: b for d, b in b_ind.items() if b}
            right = {m - d - 3: b for d, b in b_theta.items() if b}
            assert left == right
        assert reduced_betti(independence_faces(H), "F2") == {
            m - d - 3: b for d, b in reduced_betti(theta_faces(H), "F2").items()
        }


def test_dual_hypergraph_keeps_betti(rng):
    for _ in range(50):
        H = random_hypergraph(rng, rng.randint(1, 9), rng.randint(1, 7))
        assert nonzero_betti(theta_homology(dual(H))) == nonzero_betti(theta_homology(H))
    assert nonzero_betti(theta_homology(dual(polygon(5)))) == nonzero_betti(theta_homology(polygon(5)))


def _join_betti(a, b):
    # reduced homology of a join over Q: H_{i+j+1} gets a_i * b_j
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j + 1] = out.get(i + j + 1, 0) + x * y
    return out


def test_disjoint_union_is_suspended_join(rng):
    # theta(H1 + H2) has the homology of the suspension of the join
    for _ in range(50):
        H1 = random_hypergraph(rng, rng.randint(1, 5), rng.randint(1, 4))
        H2 = random_hypergraph(rng, rng.randint(1, 5), rng.randint(1, 4))
        joined = _join_betti(nonzero_betti(theta_homology(H1)), nonzero_betti(theta_homology(H2)))
        expected = {d + 1: b for d, b in joined.items() if b}
        assert nonzero_betti(theta_homology(disjoint_union(H1, H2))) == expected


def test_two_short_paths_give_two_sphere():
    assert theta_homology(disjoint_union(path(2), path(2))).nonzero() == {2: (1, [])}


def test_isolated_vertex_contractible():
    H = disjoint_union(path(1), Hypergraph(1, ()))
    assert theta_homology(H).is_acyclic()


def _shift(summary, by):
    return {d + by: v for d, v in summary.nonzero().items()}


def test_three_subdivision_shifts_by_two():
    P3, I2 = polygon(3), path(2)
    assert _shift(theta_homology(P3), 2) == theta_homology(subdivide_edge(P3, (0, 1))).nonzero()
    assert theta_homology(subdivide_edge(P3, (0, 1))).nonzero() == theta_homology(polygon(6)).nonzero()
    assert _shift(theta_homology(I2), 2) == theta_homology(path(5)).nonzero()
    assert theta_homology(subdivide_edge(I2, (1, 2))).nonzero() == theta_homology(path(5)).nonzero()


def test_three_subdivision_random_graphs(rng):
    for _ in range(50):
        m = rng.randint(3, 6)
        pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
        G = Hypergraph(m, rng.sample(pairs, rng.randint(2, min(len(pairs), 6))))
        e = rng.choice(G.hyperedges)
        assert _shift(theta_homology(G), 2) == theta_homology(subdivide_edge(G, e)).nonzero()


def test_summary_records():
    H = theta_homology(icos(2))
    rec = {r["degree"]: r for r in H.to_records()}
    assert rec[4] == {"degree": 4, "betti": 0, "torsion": [2]}
    assert H.describe() == "H4 = Z_2"
