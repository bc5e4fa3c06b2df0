"""Finite inverse semigroups: partial bijections, orders, congruences, representations."""

from .partial_maps import PartialBijection, compose, invert, symmetric_inverse_monoid
from .semigroup import (CapExceededError, FiniteInvSemigroup, NotInverseSemigroupError,
                        close_generators, from_cayley_table, semigroup_from_maps)
from .semilattice import SemilatticePoset, idempotent_semilattice
from .structure import GreenData, GroupoidView, green_relations, groupoid_view, natural_order
from .morphisms import Homomorphism, find_isomorphism
from .congruences import Congruence, NormalSubsemigroup, mu, quotient, sigma, xi
from .representations import munn_representation, munn_semigroup, wagner_preston
from .actions import Action, CosetSpace, coset_action, coset_space
from .constructions import (FiniteGroupoid, PresheafOfGroups, SemilatticeGroupAction,
                            clifford_from_presheaf, semidirect_product, semidirect_recognition)

__all__ = [
    "Action", "CapExceededError", "Congruence", "CosetSpace", "FiniteGroupoid", "FiniteInvSemigroup",
    "GreenData", "GroupoidView", "Homomorphism", "NormalSubsemigroup", "NotInverseSemigroupError",
    "PartialBijection", "PresheafOfGroups", "SemilatticeGroupAction", "SemilatticePoset",
    "clifford_from_presheaf", "close_generators", "compose", "coset_action", "coset_space",
    "find_isomorphism", "from_cayley_table", "green_relations", "groupoid_view",
    "idempotent_semilattice", "invert", "mu", "munn_representation", "munn_semigroup",
    "natural_order", "quotient", "semidirect_product", "semidirect_recognition",
    "semigroup_from_maps", "sigma", "symmetric_inverse_monoid", "wagner_preston", "xi",
]
