"""l-CNF formulas over n variables and the implication complex of the satisfiable ones.

Assignments are integers ``a`` in ``[0, 2**n)`` with ``x_i`` true iff bit ``i``
of ``a`` is set. A set of assignments is a Python int bitset.
"""
from __future__ import annotations

import itertools
from math import comb

import networkx as nx

from .complex import SimplicialComplex
from .errors import DomainError, ResourceError

__all__ = [
    "clause",
    "enumerate_clauses",
    "formula",
    "clause_models",
    "models",
    "satisfiable",
    "implies",
    "satisfiable_formulas",
    "sat_complex",
    "violated_assignments",
    "to_dimacs",
]

MAX_VARIABLES = 24
DEFAULT_FORMULA_CAP = 5_000
DEFAULT_CLIQUE_CAP = 500_000


def clause(*literals):
    """A clause from literals ``(var, positive)``; ``(0, False)`` is the negation of x_0."""
    lits = frozenset((int(v), bool(pos)) for v, pos in literals)
    variables = [v for v, _ in lits]
    if len(set(variables)) != len(variables):
        raise DomainError("a variable appears twice in the clause")
    if not lits:
        raise DomainError("empty clause")
    return lits


def enumerate_clauses(n, ell):
    """All C(n, ell) * 2**ell clauses with ell literals.

    Variable subsets in lexicographic order; for each, polarities follow a
    binary counter (bit j set means the j-th variable is negated).
    """
    if not 1 <= ell <= n:
        raise DomainError(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    out = []
    for vars_ in itertools.combinations(range(n), ell):
        for s in range(1 << ell):
            out.append(clause(*((v, not (s >> j) & 1) for j, v in enumerate(vars_))))
    return out


def formula(clauses):
    phi = frozenset(clauses)
    if not phi:
        raise DomainError("a CNF formula needs at least one clause")
    return phi


def _check_n(n):
    if n > MAX_VARIABLES:
        raise ResourceError(f"truth tables are limited to {MAX_VARIABLES} variables")


def violated_assignments(c, n):
    """Assignments falsifying clause ``c``: an (n - |c|)-face of the n-cube."""
    _check_n(n)
    fixed = 0
    for v, positive in c:
        if v >= n:
            raise DomainError(f"variable {v} out of range for n={n}")
        if not positive:
            fixed |= 1 << v
    free = [i for i in range(n) if i not in {v for v, _ in c}]
    out = 0
    for s in range(1 << len(free)):
        a = fixed
        for j, i in enumerate(free):
            if (s >> j) & 1:
                a |= 1 << i
        out |= 1 << a
    return out


def clause_models(c, n):
    return ((1 << (1 << n)) - 1) & ~violated_assignments(c, n)


def models(phi, n):
    out = (1 << (1 << n)) - 1
    for c in phi:
        out &= clause_models(c, n)
    return out


def satisfiable(phi, n):
    return models(phi, n) != 0


def implies(phi, psi, n):
    a, b = models(phi, n), models(psi, n)
    return a & ~b == 0


def satisfiable_formulas(n, ell, cap=DEFAULT_FORMULA_CAP):
    """Satisfiable ell-CNF formulas with their model sets, in clause-subset order."""
    clauses = enumerate_clauses(n, ell)
    if (1 << len(clauses)) - 1 > cap:
        raise ResourceError(
            f"{(1 << len(clauses)) - 1} candidate formulas exceed the cap {cap}"
        )
    cm = [clause_models(c, n) for c in clauses]
    full = (1 << (1 << n)) - 1
    out = []
    for subset in range(1, 1 << len(clauses)):
        mod = full
        for i in range(len(clauses)):
            if (subset >> i) & 1:
                mod &= cm[i]
        if mod:
            out.append((frozenset(clauses[i] for i in range(len(clauses)) if (subset >> i) & 1), mod))
    return out


def sat_complex(n, ell, cap=DEFAULT_FORMULA_CAP, clique_cap=DEFAULT_CLIQUE_CAP):
    """Complex on satisfiable formulas whose faces are implication-comparable sets.

    Returns ``(complex, formulas)`` where vertex ``i`` is ``formulas[i]``.
    """
    forms = satisfiable_formulas(n, ell, cap)
    mods = [m for _, m in forms]
    G = nx.Graph()
    G.add_nodes_from(range(len(forms)))
    for i in range(len(forms)):
        a = mods[i]
        for j in range(i + 1, len(forms)):
            b = mods[j]
            if a & ~b == 0 or b & ~a == 0:
                G.add_edge(i, j)
    facets = []
    for clique in nx.find_cliques(G):
        facets.append(frozenset(clique))
        if len(facets) > clique_cap:
            raise ResourceError(f"more than {clique_cap} maximal chains")
    return SimplicialComplex(len(forms), tuple(facets)), [f for f, _ in forms]


def expected_vertex_bound(n, ell):
    """Number of nonempty clause subsets, before removing unsatisfiable ones."""
    return (1 << (comb(n, ell) * 2**ell)) - 1


def to_dimacs(phi, n):
    """DIMACS CNF text; variable i is written as i + 1."""
    lines = [f"p cnf {n} {len(phi)}"]
    for c in sorted(phi, key=sorted):
        lits = [str(v + 1) if pos else str(-(v + 1)) for v, pos in sorted(c)]
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"
