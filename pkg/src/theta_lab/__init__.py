"""Theta complexes of hypergraphs: Euler characteristics, homology, Morse matchings."""
from .complex import (
    ImplicitComplex,
    SimplicialComplex,
    alexander_dual,
    enumerate_faces,
    f_vector,
    independence_complex,
    is_face,
    theta,
)
from .errors import DomainError, ResourceError
from .euler import reduced_euler_theta
from .homology import betti_mod_p, chain_complex, homology
from .hypergraph import Hypergraph, build_family, dual, minimalize
from .morse import contractibility_search, morse_homology, sequential_field, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Hypergraph",
    "build_family",
    "dual",
    "minimalize",
    "SimplicialComplex",
    "ImplicitComplex",
    "theta",
    "independence_complex",
    "alexander_dual",
    "enumerate_faces",
    "f_vector",
    "is_face",
    "reduced_euler_theta",
    "chain_complex",
    "homology",
    "betti_mod_p",
    "sequential_field",
    "morse_homology",
    "contractibility_search",
    "verify_certificate",
    "DomainError",
    "ResourceError",
]
