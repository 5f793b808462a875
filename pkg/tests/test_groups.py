import random

import pytest

from theta_lab.complex import theta
from theta_lab.errors import DomainError
from theta_lab.euler import reduced_euler_theta
from theta_lab.groups import (
    GroupAction,
    check_mod_p_congruence,
    cyclic_cube_action,
    face_rotation_action,
    group_order,
    induced_action,
    orbits,
    planted_symmetric_hypergraph,
    quotient,
    translation_action,
)
from theta_lab.homology import chain_complex, homology
from theta_lab.hypergraph import Hypergraph, cube, dodec, icos, minimalize
from theta_lab.morse import contractibility_search, morse_homology, verify_certificate
from theta_lab.tables import CUBE2_EULER


def test_necklace_orbits_of_three_cube():
    part = orbits(cube(3, 1), cyclic_cube_action(3, 3))
    assert set(part.orbits) == {frozenset({0}), frozenset({7}), frozenset({1, 2, 4}), frozenset({3, 5, 6})}


def test_identity_and_transitive_actions():
    H = cube(2, 1)
    identity = GroupAction(4, (tuple(range(4)),))
    assert len(orbits(H, identity)) == 4
    assert quotient(H, identity).edge_set() == H.edge_set()
    assert len(orbits(H, translation_action(2))) == 1
    Q = quotient(H, translation_action(2))
    assert (Q.vertex_count, Q.hyperedges) == (1, (frozenset({0}),))
    # theta of a lone vertex that is also a hyperedge has only the empty face
    assert reduced_euler_theta(Q) + 1 == 0


def test_cyclic_generator():
    (g,) = cyclic_cube_action(3, 3).generators
    # (b0, b1, b2) -> (b2, b0, b1)
    assert g[0b001] == 0b010 and g[0b100] == 0b001 and g[0b011] == 0b110
    assert group_order(cyclic_cube_action(3, 3)) == 3
    (g,) = cyclic_cube_action(4, 3).generators
    assert all((g[v] & 1) == (v & 1) for v in range(16))
    assert g[0b0010] == 0b0100
    cyclic_cube_action(5, 5).validate(cube(5, 3))
    with pytest.raises(DomainError):
        cyclic_cube_action(3, 5)


def test_bad_generators():
    with pytest.raises(DomainError, match="permutation"):
        GroupAction(3, ((0, 0, 1),))
    H = Hypergraph(3, [(0, 1)])
    A = GroupAction(3, ((1, 2, 0),))
    with pytest.raises(DomainError, match=r"generator 0 maps hyperedge \[0, 1\]"):
        orbits(H, A)


def test_dodecahedron_rotation():
    A = face_rotation_action("dodecahedron")
    assert group_order(A) == 5
    A.validate(dodec(1)).validate(dodec(2))
    Q = quotient(dodec(1), A)
    assert Q.vertex_count == 4
    sizes = sorted(len(h) for h in Q.hyperedges)
    assert sizes == [1, 1, 2, 2, 2]
    M = minimalize(Q)
    assert sorted(len(h) for h in M.hyperedges) == [1, 1, 2]
    assert homology(chain_complex(theta(M))).nonzero() == {1: (1, [])}


def test_icosahedron_rotation_has_order_three():
    A = face_rotation_action("icosahedron")
    assert group_order(A) == 3
    A.validate(icos(1))


def test_dodecahedron_congruences():
    A = face_rotation_action("dodecahedron")
    r1 = check_mod_p_congruence(dodec(1), A, 5)
    assert (r1.chi, r1.chi_quotient, r1.holds) == (5, 0, True)
    r2 = check_mod_p_congruence(dodec(2), A, 5)
    assert (r2.chi % 5, r2.chi_quotient, r2.holds) == (1, 1, True)


def test_translation_gives_even_chi():
    for n in range(1, 5):
        for k in range(n + 1):
            report = check_mod_p_congruence(cube(n, k), translation_action(n), 2)
            assert report.chi_quotient == 0
            assert report.chi % 2 == 0 and report.holds


def test_non_p_group_refused():
    with pytest.raises(DomainError, match="3-group|2-group"):
        check_mod_p_congruence(cube(3, 1), cyclic_cube_action(3, 3), 2)


@pytest.mark.parametrize("p,max_blocks", [(2, 6), (3, 4), (5, 2)])
def test_planted_symmetry_congruence(p, max_blocks):
    rng = random.Random(1000 + p)
    for _ in range(50):
        H, A = planted_symmetric_hypergraph(rng, p, rng.randint(1, max_blocks), rng.randint(1, 4))
        report = check_mod_p_congruence(H, A, p)
        assert report.holds, (H.to_dict(), report.to_dict())


def test_quotients_compose():
    H = cube(4, 2)
    A = cyclic_cube_action(4, 3)
    B = GroupAction(16, (tuple(v ^ 1 for v in range(16)),))
    two_step = quotient(quotient(H, A), induced_action(orbits(H, A), B))
    combined = quotient(H, A.combined(B))
    assert two_step.edge_set() == combined.edge_set()
    assert group_order(A.combined(B)) == 6


def test_quotients_compose_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 4)
        k = rng.randint(0, n)
        i, j = rng.sample(range(n), 2)
        A = GroupAction(1 << n, (tuple(v ^ (1 << i) for v in range(1 << n)),))
        B = GroupAction(1 << n, (tuple(v ^ (1 << j) for v in range(1 << n)),))
        H = cube(n, k)
        two_step = quotient(quotient(H, A), induced_action(orbits(H, A), B))
        assert two_step.edge_set() == quotient(H, A.combined(B)).edge_set()


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3), (5, 3), (5, 5), (6, 5)])
def test_cube_quotients_acyclic_with_certificate(n, p):
    X = theta(quotient(cube(n, n - 2), cyclic_cube_action(n, p)))
    assert morse_homology(X).is_acyclic()
    result = contractibility_search(X, budget=50)
    assert result.found
    assert verify_certificate(result.certificate)[0]


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3), (5, 3), (5, 5)])
def test_cube_chi_is_one_mod_p(n, p):
    assert (CUBE2_EULER[(n, n - 2)] + 1) % p == 1
