"""Exact decision procedures for restricted general probabilistic theories."""
from .bipartite import BipartiteState, chsh_value, maximal_tensor, minimal_tensor, tensor_products_equal
from .compatibility import e_compatible, ek_compatible, se_is_simplex, verify_joint_measurement
from .contextuality import prep_noncontextual, simplex_embeddable, verify_embedding, verify_prep_nc
from .decision import Decision, FarkasWitness
from .geometry import AffineFunctional, Polytope, dd_hrep_to_vrep, dd_vrep_to_hrep
from .gpt import (EffectRestriction, Measurement, RestrictedTheory, StateSpace, TheoryError, dual_state_space,
                  effect_polytope, evaluation_channel, generate_effect_algebra)
from .steering import (Assemblage, SteeringScenario, TheoremInapplicable, assemblage, conditioned_state_space,
                       has_lhs_model, is_full_dimensional, restrict_to_J, theorem9_crosscheck, verify_lhs)

__all__ = [
    "AffineFunctional", "Assemblage", "BipartiteState", "Decision", "EffectRestriction", "FarkasWitness",
    "Measurement", "Polytope", "RestrictedTheory", "StateSpace", "SteeringScenario", "TheoremInapplicable",
    "TheoryError", "assemblage", "chsh_value", "conditioned_state_space", "dd_hrep_to_vrep", "dd_vrep_to_hrep",
    "dual_state_space", "e_compatible", "effect_polytope", "ek_compatible", "evaluation_channel",
    "generate_effect_algebra", "has_lhs_model", "is_full_dimensional", "maximal_tensor", "minimal_tensor",
    "prep_noncontextual", "restrict_to_J", "se_is_simplex", "simplex_embeddable", "tensor_products_equal",
    "theorem9_crosscheck", "verify_embedding", "verify_joint_measurement", "verify_lhs", "verify_prep_nc",
]
