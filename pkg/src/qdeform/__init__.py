"""Deformation normal forms of quiver representations, with chain quivers and iterative reduction."""
from .chain import (ChainShape, Interval, build_interval, chain_miniversal,
                    pair_gamma, reduce_to_core)
from .deformation import (DeformationTemplate, Verdict, assemble_from_pairs,
                          commutator_space, contract_identity, instantiate,
                          miniversal_template, parameter_count, select_gamma,
                          verify_decomposition)
from .linalg import DEFAULT_TOL, entrywise_norm, rank_nullspace, solve_least_norm
from .quiver import (ElementaryIndex, Quiver, Representation, apply_isomorphism,
                     commutator, devectorize, direct_sum, elementary,
                     gamma_seminorm, vectorize)
from .reducer import (certificate, correction_basis, reduce, reduction_step,
                      window_schedule)

__version__ = "0.1.0"

__all__ = [
    "apply_isomorphism",
    "assemble_from_pairs",
    "build_interval",
    "certificate",
    "chain_miniversal",
    "ChainShape",
    "commutator",
    "commutator_space",
    "contract_identity",
    "correction_basis",
    "DEFAULT_TOL",
    "DeformationTemplate",
    "devectorize",
    "direct_sum",
    "elementary",
    "ElementaryIndex",
    "entrywise_norm",
    "gamma_seminorm",
    "instantiate",
    "Interval",
    "miniversal_template",
    "pair_gamma",
    "parameter_count",
    "Quiver",
    "rank_nullspace",
    "reduce",
    "reduce_to_core",
    "reduction_step",
    "Representation",
    "select_gamma",
    "solve_least_norm",
    "vectorize",
    "Verdict",
    "verify_decomposition",
    "window_schedule",
]
