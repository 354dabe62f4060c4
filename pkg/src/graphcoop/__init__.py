"""Exact-arithmetic graph complexes and decorated-graph Hopf cooperads.

All coefficients are rational (`fractions.Fraction`); every space is realized
on a canonical basis inside a finite truncation window, so that algebraic
identities (d^2 = 0, Maurer-Cartan equations, cooperad axioms, gauge
trivializations, quasi-isomorphism claims) can be machine-checked exactly.
"""

from .siggraph import Graph, SignedKey, canonicalize, contract_edge, contract_subgraph, enumerate_graphs
from .exlin import Lin, SparseMat, TruncationBox, matrix_of, rank, cohomology_dims

__all__ = [
    "Graph",
    "SignedKey",
    "canonicalize",
    "contract_edge",
    "contract_subgraph",
    "enumerate_graphs",
    "Lin",
    "SparseMat",
    "TruncationBox",
    "matrix_of",
    "rank",
    "cohomology_dims",
]
