"""Small named inverse semigroups used by tests, demos and the corpus."""

from __future__ import annotations

import itertools

import numpy as np

from .constructions import (PresheafOfGroups, SemilatticeGroupAction, adjoin_zero,
                            clifford_from_presheaf, groupoid_from_semigroup, semidirect_product)
from .partial_maps import PartialBijection, symmetric_inverse_monoid
from .semigroup import FiniteInvSemigroup, close_generators, from_cayley_table, semigroup_from_maps
from .semilattice import SemilatticePoset


def cyclic_group(n: int) -> FiniteInvSemigroup:
    ar = np.arange(n)
    return from_cayley_table((ar[:, None] + ar[None, :]) % n, labels=[f"z{i}" for i in range(n)])


def symmetric_group(n: int) -> FiniteInvSemigroup:
    """Permutations of ``n`` points in lexicographic order."""
    perms = [PartialBijection(p) for p in itertools.permutations(range(n))]
    return semigroup_from_maps(perms)


def symmetric_inverse_monoid_semigroup(n: int) -> FiniteInvSemigroup:
    return semigroup_from_maps(symmetric_inverse_monoid(n))


def brandt(n: int) -> FiniteInvSemigroup:
    """Rank-at-most-one partial bijections of ``n`` points: ``B_n``."""
    maps = [PartialBijection.empty(n)]
    maps += [PartialBijection.from_pairs(n, [(i, j)]) for i in range(n) for j in range(n)]
    return semigroup_from_maps(maps)


def b2() -> FiniteInvSemigroup:
    return close_generators([PartialBijection.from_pairs(2, [(0, 1)])], ["a"])


def chain(k: int) -> FiniteInvSemigroup:
    """The chain ``0 < 1 < ... < k-1`` under min."""
    ar = np.arange(k)
    return from_cayley_table(np.minimum.outer(ar, ar), labels=[f"e{i}" for i in range(k)])


def boolean_semilattice(n: int) -> FiniteInvSemigroup:
    """Subsets of ``n`` points under intersection, indexed by bitmask."""
    ar = np.arange(1 << n)
    labels = ["{" + ",".join(str(i) for i in range(n) if s >> i & 1) + "}" for s in range(1 << n)]
    return from_cayley_table(ar[:, None] & ar[None, :], labels=labels)


def vee_semilattice() -> SemilatticePoset:
    """``{0, a, b}`` with ``a ^ b = 0``."""
    return SemilatticePoset([[0, 0, 0], [0, 1, 0], [0, 0, 2]], labels=["0", "a", "b"])


def chain_poset(k: int) -> SemilatticePoset:
    ar = np.arange(k)
    return SemilatticePoset(np.minimum.outer(ar, ar), labels=[f"e{i}" for i in range(k)])


def group_with_zero(G: FiniteInvSemigroup) -> FiniteInvSemigroup:
    grp, _ = groupoid_from_semigroup(G)
    return adjoin_zero(grp)


def adjoin_identity(S: FiniteInvSemigroup) -> FiniteInvSemigroup:
    m = S.order
    T = np.empty((m + 1, m + 1), dtype=np.int64)
    T[:m, :m] = S.product
    T[m, :] = np.arange(m + 1)
    T[:, m] = np.arange(m + 1)
    return from_cayley_table(T, labels=list(S.labels) + ["1"])


# -- presheaf fixtures ------------------------------------------------------------

Z2 = [[0, 1], [1, 0]]
Z3 = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
TRIVIAL = [[0]]


def presheaf_z2_over_trivial() -> PresheafOfGroups:
    """Chain ``f < e`` with ``G_e = Z2`` and ``G_f`` trivial (order 3)."""
    return PresheafOfGroups(chain_poset(2), [TRIVIAL, Z2], {})


def presheaf_z2_identity_chain() -> PresheafOfGroups:
    """Chain ``f < e``, both groups ``Z2``, restriction the identity (order 4)."""
    return PresheafOfGroups(chain_poset(2), [Z2, Z2], {(1, 0): [0, 1]})


def presheaf_z2_collapse_chain() -> PresheafOfGroups:
    """Chain ``f < e``, both groups ``Z2``, restriction trivial (order 4)."""
    return PresheafOfGroups(chain_poset(2), [Z2, Z2], {(1, 0): [0, 0]})


def presheaf_vee() -> PresheafOfGroups:
    """``{0, a, b}`` with ``G_a = Z2``, ``G_b = Z3``, ``G_0 = Z2`` fed by ``G_a``."""
    return PresheafOfGroups(vee_semilattice(), [Z2, Z2, Z3], {(1, 0): [0, 1], (2, 0): [0, 0, 0]})


def presheaf_three_chain() -> PresheafOfGroups:
    """Chain ``e0 < e1 < e2`` with groups ``Z2, Z2, Z2`` and identity restrictions from the top."""
    return PresheafOfGroups(chain_poset(3), [Z2, Z2, Z2], {(2, 1): [0, 1], (1, 0): [0, 1]})


def presheaf_z3_over_z2_chain() -> PresheafOfGroups:
    """Chain ``f < e`` with ``G_e = Z3`` and ``G_f = Z2`` (only the trivial map exists)."""
    return PresheafOfGroups(chain_poset(2), [Z2, Z3], {(1, 0): [0, 0, 0]})


def presheaf_fixtures() -> dict[str, PresheafOfGroups]:
    return {
        "z2_over_trivial": presheaf_z2_over_trivial(),
        "z2_identity_chain": presheaf_z2_identity_chain(),
        "z2_collapse_chain": presheaf_z2_collapse_chain(),
        "vee_mixed": presheaf_vee(),
        "three_chain": presheaf_three_chain(),
        "z3_over_z2": presheaf_z3_over_z2_chain(),
    }


def clifford_fixture() -> FiniteInvSemigroup:
    """Order 3: ``Z2`` over a trivial group below it."""
    return clifford_from_presheaf(presheaf_z2_over_trivial())


# -- semidirect fixtures ----------------------------------------------------------


def pz2_vee() -> FiniteInvSemigroup:
    """``P(Z2, Y)`` with ``Y = {0, a, b}`` and ``Z2`` swapping ``a`` and ``b`` (order 6)."""
    G = cyclic_group(2)
    act = [[0, 1, 2], [0, 2, 1]]
    return semidirect_product(SemilatticeGroupAction(G, vee_semilattice(), act))


def pz2_chain() -> FiniteInvSemigroup:
    """``P(Z2, chain of 2)`` with trivial action, i.e. ``Z2 x Y`` (order 4)."""
    G = cyclic_group(2)
    return semidirect_product(SemilatticeGroupAction(G, chain_poset(2), [[0, 1], [0, 1]]))


def standard_fixtures() -> dict[str, FiniteInvSemigroup]:
    """Named fixtures, all at most 34 elements."""
    return {
        "trivial": cyclic_group(1),
        "Z2": cyclic_group(2),
        "Z3": cyclic_group(3),
        "S3": symmetric_group(3),
        "B2": b2(),
        "B3": brandt(3),
        "I1": symmetric_inverse_monoid_semigroup(1),
        "I2": symmetric_inverse_monoid_semigroup(2),
        "I3": symmetric_inverse_monoid_semigroup(3),
        "chain2": chain(2),
        "chain3": chain(3),
        "bool2": boolean_semilattice(2),
        "vee": vee_semilattice().as_semigroup(),
        "Z2_zero": group_with_zero(cyclic_group(2)),
        "B2_one": adjoin_identity(b2()),
        "PZ2_vee": pz2_vee(),
        "PZ2_chain": pz2_chain(),
        **{f"clifford_{k}": clifford_from_presheaf(p) for k, p in presheaf_fixtures().items()},
    }


def small_fixtures(limit: int = 12) -> dict[str, FiniteInvSemigroup]:
    return {k: S for k, S in standard_fixtures().items() if S.order <= limit}
