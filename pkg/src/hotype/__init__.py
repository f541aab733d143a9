"""Classifying spaces, universal bundles and principal bundles for finite groupoids."""

from .errors import HotypeError, ResourceLimit, ValidationError
from .groupoid import (FiniteGroupoid, GroupoidFunctor, NaturalTransformation, action_groupoid,
                       arrow_groupoid, cech_groupoid, cech_projection, comma_over_object,
                       conjugation_transformation, cyclic_group, groupoid_from_group,
                       identity_functor, is_weak_equivalence, pair_groupoid, symmetric_group,
                       terminal_functor, trivial_groupoid, validate_groupoid)
from .simplicial import (ChainComplex, HomologyProfile, OrderedSimplicialComplex, SemiSimplicialSet,
                         SimplicialMap, chain_complex, delta_set_from_complex, homology, induced_map,
                         nat_trans_chain_homotopy, nerve, normalized_nerve_complex)
from .classifying import (classifying_homology, mapping_cone, morita_invariance_check, unit_section,
                          universal_total)
from .bundles import (CocycleBundle, are_concordant, are_isomorphic, bundle_from_json,
                      bundle_from_torsor, circle, classifying_map, division_map, enumerate_bundles,
                      holonomy, pullback_bundle, total_space, trivial_bundle, validate_bundle)

__version__ = "0.1.0"
