"""Finite models of events in spacetime and checks of their locality conditions."""

__version__ = "0.1.0"

from .causal import (CausalSite, PastSelector, Region, Slice, causal_future, causal_past,
                     make_slice, resolve_past, spacelike, srla_region)
from .errors import InputError, UndefinedConditional
from .kernels import BACKEND
from .locality import (EPRBScenario, check_bell_locality, check_bell_locality_weakened,
                       check_factorisability, check_freedom_of_settings,
                       check_howard_separability_of_states, check_jarrett_decomposition,
                       check_no_signalling, check_nouvelle_locality, check_outcome_independence,
                       check_parameter_independence, check_srla, verify_derivation_chain)
from .polytope import (BehaviorTable, behavior_from_model, check_no_signalling_behavior,
                       chsh_facet_membership, chsh_value, lhv_membership, singlet_table)
from .reports import CheckReport, Witness
from .stochastic import (Algebra, Generator, Model, RegionUniverse, check_localised_axioms,
                         check_separability, conditional, full_specifications,
                         generated_algebra, intrinsic_region, probability, region_algebra)
