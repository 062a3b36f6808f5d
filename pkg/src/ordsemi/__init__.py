"""Order-preserving transformation semigroups with restricted range.

For a finite chain X and a subset X', T_OP(X, X') is the semigroup of
order-preserving maps X -> X' under left-to-right composition.  The package
enumerates it, builds its Cayley table, searches for isomorphisms between two
such semigroups, and decides isomorphism directly from gap signatures.
"""
from .chains import ChainPair, GapBlock, InvalidInstance, gap_blocks, gap_signature, pair_isomorphism
from .decision import Decision, construct_iso_from_theta, construct_iso_x2, cross_validate, decide_iso
from .semigroup import (CayleyTable, SearchBudgetExceeded, SemigroupIso, build_cayley,
                        check_preservation, extend_theta_hat, extract_theta, find_iso, verify_iso)
from .structures import adjusted_chain, k_classes, lambda_class_sizes, partial_graph
from .transformations import EnumerationCapExceeded, Transformation, compose, enumerate_top

__version__ = "0.1.0"

__all__ = [
    "ChainPair", "GapBlock", "InvalidInstance", "gap_blocks", "gap_signature", "pair_isomorphism",
    "Decision", "construct_iso_from_theta", "construct_iso_x2", "cross_validate", "decide_iso",
    "CayleyTable", "SearchBudgetExceeded", "SemigroupIso", "build_cayley", "check_preservation",
    "extend_theta_hat", "extract_theta", "find_iso", "verify_iso",
    "adjusted_chain", "k_classes", "lambda_class_sizes", "partial_graph",
    "EnumerationCapExceeded", "Transformation", "compose", "enumerate_top",
]
