"""Randomized top-eigenvector approximation (RSVD and RandSum) with diagnostics."""

from .apps import (
    GroupAssignment,
    detect_communities,
    detect_conflicting_groups,
    modularity_score,
    polarity,
    random_eigen_sign,
)
from .densela import EmptyRangeError, householder_qr, jacobi_eigh, lanczos_top, random_orthogonal
from .graph import Graph, from_edges, load_edge_list, signed_adjacency
from .kernels import BACKEND
from .linop import (
    DenseOperator,
    ModularityOperator,
    SparseSymmetricOperator,
    SymmetricOperator,
    matmat,
    matvec,
    modularity_from_graph,
)
from .metrics import (
    SpectrumSpec,
    cos2_theta,
    fit_power_law,
    hoelder_chain_check,
    kappa,
    kappa_prime,
    rayleigh,
    rbar,
    xi_weights,
)
from .rsvd import ApproxEigResult, RsvdConfig, randsum, ratio_of, rsvd
from .sketch import Sketch, bernoulli_sketch, gaussian_sketch, randsum_sketch
from .synth import SpectrumKind, realize, spectrum

__version__ = "0.1.0"

__all__ = [
    "GroupAssignment",
    "detect_communities",
    "detect_conflicting_groups",
    "modularity_score",
    "polarity",
    "random_eigen_sign",
    "EmptyRangeError",
    "householder_qr",
    "jacobi_eigh",
    "lanczos_top",
    "random_orthogonal",
    "Graph",
    "from_edges",
    "load_edge_list",
    "signed_adjacency",
    "BACKEND",
    "DenseOperator",
    "ModularityOperator",
    "SparseSymmetricOperator",
    "SymmetricOperator",
    "matmat",
    "matvec",
    "modularity_from_graph",
    "SpectrumSpec",
    "cos2_theta",
    "fit_power_law",
    "hoelder_chain_check",
    "kappa",
    "kappa_prime",
    "rayleigh",
    "rbar",
    "xi_weights",
    "ApproxEigResult",
    "RsvdConfig",
    "randsum",
    "ratio_of",
    "rsvd",
    "Sketch",
    "bernoulli_sketch",
    "gaussian_sketch",
    "randsum_sketch",
    "SpectrumKind",
    "realize",
    "spectrum",
]
