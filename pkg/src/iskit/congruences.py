"""Congruences, quotients and congruence-theoretic predicates."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .morphisms import Homomorphism
from .partitions import (blocks_from_relation, blocks_from_rows, canonical_blocks, classes,
                         join_blocks, refines, relation_from_blocks)
from .semigroup import CapExceededError, FiniteInvSemigroup, from_cayley_table
from .semilattice import SemilatticePoset, idempotent_semilattice
from .structure import (InconsistentTableError, compatibility, green_relations, is_clifford,
                        is_group, natural_order)

CONGRUENCE_CAP = 12


class NotACongruenceError(ValueError):
    pass


class Congruence:
    """A partition of the elements of ``host`` compatible with multiplication."""

    def __init__(self, host: FiniteInvSemigroup, blocks, check: bool = True):
        b = canonical_blocks(np.asarray(blocks).tolist())
        if b.shape != (host.order,):
            raise NotACongruenceError("need one block id per element")
        b.flags.writeable = False
        self.host = host
        self.blocks = b
        if check:
            self.verify()

    def verify(self) -> None:
        """Both-sided compatibility, checked exhaustively in O(m^2)."""
        T, b = self.host.product, self.blocks
        rep = np.zeros(self.num_classes, dtype=np.int64)
        rep[b[::-1]] = np.arange(self.host.order)[::-1]  # least element of each class
        BT = b[T]
        r = rep[b]
        for name, ok in (("right", BT == BT[r]), ("left", BT == BT[:, r])):
            if not ok.all():
                x, c = np.argwhere(~ok)[0]
                raise NotACongruenceError(f"not {name} compatible at ({x}, {c})")

    @property
    def num_classes(self) -> int:
        return int(self.blocks.max()) + 1

    def classes(self) -> list[list[int]]:
        return classes(self.blocks)

    def related(self, s: int, t: int) -> bool:
        return bool(self.blocks[s] == self.blocks[t])

    def relation(self) -> np.ndarray:
        return relation_from_blocks(self.blocks)

    def __le__(self, other: "Congruence") -> bool:
        return refines(self.blocks, other.blocks)

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and np.array_equal(self.blocks, other.blocks)

    def __hash__(self) -> int:
        return hash(self.blocks.tobytes())

    def __repr__(self) -> str:
        return f"Congruence({self.num_classes} classes on {self.host.order} elements)"

    def is_equality(self) -> bool:
        return self.num_classes == self.host.order

    def is_universal(self) -> bool:
        return self.num_classes == 1

    def natural_map(self) -> Homomorphism:
        return Homomorphism(self.host, quotient(self.host, self), self.blocks, strict=False)


def equality(S: FiniteInvSemigroup) -> Congruence:
    return Congruence(S, np.arange(S.order), check=False)


def universal(S: FiniteInvSemigroup) -> Congruence:
    return Congruence(S, np.zeros(S.order, dtype=np.int64), check=False)


def quotient(S: FiniteInvSemigroup, rho: Congruence) -> FiniteInvSemigroup:
    """``S / rho``, revalidated; class ``i`` is labelled by its least element."""
    reps = [c[0] for c in rho.classes()]
    table = rho.blocks[S.product[np.ix_(reps, reps)]]
    labels = [f"[{S.labels[r]}]" for r in reps]
    return from_cayley_table(table, labels=labels)


def congruence_generated(S: FiniteInvSemigroup, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing ``pairs``."""
    T = S.product
    ds = DisjointSet(range(S.order))
    queue = deque(pairs)
    while queue:
        a, b = queue.popleft()
        if ds.connected(a, b):
            continue
        ds.merge(a, b)
        queue.extend(zip(T[a].tolist(), T[b].tolist()))
        queue.extend(zip(T[:, a].tolist(), T[:, b].tolist()))
    return Congruence(S, canonical_blocks(ds[i] for i in range(S.order)))


def principal_congruence(S: FiniteInvSemigroup, a: int, b: int) -> Congruence:
    return congruence_generated(S, [(a, b)])


def enumerate_congruences(S: FiniteInvSemigroup, cap: int = CONGRUENCE_CAP) -> list[Congruence]:
    """All congruences, as joins of principal congruences.

    Ordered by number of classes (descending) then block array.
    """
    if S.order > cap:
        raise CapExceededError("max-congruence-order", cap,
                               f"congruence enumeration needs order <= {cap}, got {S.order}")
    m = S.order
    principal = {}
    for a in range(m):
        for b in range(a + 1, m):
            c = principal_congruence(S, a, b)
            principal.setdefault(c.blocks.tobytes(), c)
    found = {equality(S).blocks.tobytes(): equality(S)}
    found.update(principal)
    frontier = list(principal.values())
    gens = list(principal.values())
    while frontier:
        nxt = []
        for c in frontier:
            for p in gens:
                if p <= c:
                    continue
                j = Congruence(S, join_blocks(c.blocks, p.blocks), check=False)
                key = j.blocks.tobytes()
                if key not in found:
                    j.verify()
                    found[key] = j
                    nxt.append(j)
        frontier = nxt
    return sorted(found.values(), key=lambda c: (-c.num_classes, c.blocks.tolist()))


# -- sigma ------------------------------------------------------------------------


def sigma(S: FiniteInvSemigroup) -> Congruence:
    """``s sigma t`` iff some ``u <= s, t``; checked to contain compatibility."""
    def compute():
        L = natural_order(S).astype(np.int64)
        rel = (L.T @ L) > 0
        rho = Congruence(S, blocks_from_relation(rel))
        if (compatibility(S) & ~rel).any():
            raise InconsistentTableError("sigma does not contain compatibility")
        return rho
    return S.memo("sigma", compute)


def max_group_image(S: FiniteInvSemigroup) -> FiniteInvSemigroup:
    G = quotient(S, sigma(S))
    if not is_group(G):
        raise InconsistentTableError("S / sigma is not a group")
    return G


def is_group_congruence(rho: Congruence) -> bool:
    return is_group(quotient(rho.host, rho))


def induced_group_hom(theta: Homomorphism) -> Homomorphism:
    """``psi(sigma(s)) = sigma(theta(s))`` between maximum group images."""
    S, T = theta.source, theta.target
    sS, sT = sigma(S), sigma(T)
    images = np.full(sS.num_classes, -1, dtype=np.int64)
    for s in range(S.order):
        want = sT.blocks[theta.images[s]]
        c = sS.blocks[s]
        if images[c] == -1:
            images[c] = want
        elif images[c] != want:
            raise InconsistentTableError("induced map on group images is not well defined")
    GS, GT = max_group_image(S), max_group_image(T)
    psi = Homomorphism(GS, GT, images)
    if (psi.images[sS.blocks] != sT.blocks[theta.images]).any():
        raise InconsistentTableError("square does not commute")
    return psi


# -- mu ---------------------------------------------------------------------------


def mu(S: FiniteInvSemigroup) -> Congruence:
    """``s mu t`` iff ``s e s^-1 = t e t^-1`` for every idempotent ``e``.

    Cross-checked against: ``d(s) = d(t)`` and the same equation for ``e <= d(s)``.
    """
    def compute():
        T, inv = S.product, S.inverse
        E = S.idempotents
        conj = T[T[:, E], inv[:, None]]  # conj[s, i] = s e_i s^-1
        rho = Congruence(S, blocks_from_rows(conj))
        below = natural_order(S)[np.ix_(E, S.d)].T  # below[s, i]: e_i <= d(s)
        masked = np.where(below, conj, -1)
        alt = blocks_from_rows(np.concatenate([S.d[:, None], masked], axis=1))
        if not np.array_equal(alt, rho.blocks):
            raise InconsistentTableError("two descriptions of mu disagree")
        return rho
    return S.memo("mu", compute)


# -- xi ---------------------------------------------------------------------------


def _require_zero(S: FiniteInvSemigroup, what: str) -> int:
    if S.zero is None:
        raise ValueError(f"{what} needs a semigroup with zero")
    return S.zero


def xi(S: FiniteInvSemigroup) -> Congruence:
    """Syntactic congruence of ``{0}``.

    Uses ``asb = 0`` iff ``d(as) r(b) = 0``, so only the annihilator of ``d(as)``
    inside ``E(S)`` matters.
    """
    z = _require_zero(S, "xi")
    def compute():
        T = S.product
        E = S.idempotents
        ann = np.full(S.order, -1, dtype=np.int64)
        ann[E] = blocks_from_rows(T[np.ix_(E, E)] == z)
        sig = ann[S.d[T]]  # sig[a, s] = ann(d(as))
        return Congruence(S, blocks_from_rows(np.ascontiguousarray(sig.T)))
    return S.memo("xi", compute)


# -- Rees quotients ---------------------------------------------------------------


def is_ideal(S: FiniteInvSemigroup, subset) -> bool:
    mask = np.zeros(S.order, dtype=bool)
    mask[list(subset)] = True
    if not mask.any():
        return False
    T = S.product
    return bool(mask[T[mask]].all() and mask[T[:, mask]].all())


def rees_congruence(S: FiniteInvSemigroup, ideal) -> Congruence:
    ideal = sorted(set(int(x) for x in ideal))
    if not is_ideal(S, ideal):
        raise ValueError("subset is not a nonempty ideal")
    keys = [-1 if s in set(ideal) else s for s in range(S.order)]
    return Congruence(S, canonical_blocks(keys))


def rees_quotient(S: FiniteInvSemigroup, ideal) -> FiniteInvSemigroup:
    Q = quotient(S, rees_congruence(S, ideal))
    if Q.zero is None:
        raise InconsistentTableError("Rees quotient has no zero")
    return Q


# -- normal subsemigroups and Kernels ---------------------------------------------


class NormalSubsemigroup:
    """A wide, self-conjugate inverse subsemigroup ``K`` of ``host``."""

    def __init__(self, host: FiniteInvSemigroup, elements, check: bool = True):
        self.host = host
        self.elements = tuple(sorted(set(int(x) for x in elements)))
        self.mask = np.zeros(host.order, dtype=bool)
        self.mask[list(self.elements)] = True
        if check:
            self.verify()

    def verify(self) -> None:
        S, K = self.host, np.array(self.elements, dtype=np.int64)
        T = S.product
        if not self.mask[T[np.ix_(K, K)]].all():
            raise ValueError("not closed under product")
        if not self.mask[S.inverse[K]].all():
            raise ValueError("not closed under inverse")
        if not self.mask[S.idempotents].all():
            raise ValueError("does not contain every idempotent")
        conj = T[T[S.inverse][:, K], np.arange(S.order)[:, None]]  # s^-1 k s
        if not self.mask[conj].all():
            raise ValueError("not self-conjugate")

    def is_central(self) -> bool:
        return bool(set(self.elements) <= set(centralizer_of_idempotents(self.host).elements))

    def __len__(self) -> int:
        return len(self.elements)


def _central_elements(S: FiniteInvSemigroup) -> list[int]:
    T, E = S.product, S.idempotents
    return np.flatnonzero((T[:, E] == T[E, :].T).all(axis=1)).tolist()


def centralizer_of_idempotents(S: FiniteInvSemigroup) -> NormalSubsemigroup:
    """``Z(E(S))``, checked normal and Clifford."""
    def compute():
        K = NormalSubsemigroup(S, _central_elements(S))
        sub, _ = S.subsemigroup(K.elements)
        if not is_clifford(sub):
            raise InconsistentTableError("centralizer of idempotents is not Clifford")
        return K
    return S.memo("centralizer", compute)


def kernel_subsemigroup(rho: Congruence) -> NormalSubsemigroup:
    """Elements related to some idempotent."""
    S = rho.host
    idem_blocks = set(rho.blocks[S.idempotents].tolist())
    return NormalSubsemigroup(S, [s for s in range(S.order) if rho.blocks[s] in idem_blocks])


def kernel_of_hom(theta: Homomorphism) -> NormalSubsemigroup:
    S = theta.source
    K = NormalSubsemigroup(S, np.flatnonzero(theta.target.idempotent_mask[theta.images]))
    if theta.is_idempotent_separating() and not K.is_central():
        raise InconsistentTableError("Kernel of idempotent-separating map not central")
    return K


def congruence_from_kernel(S: FiniteInvSemigroup, K: NormalSubsemigroup) -> Congruence:
    """``s rho_K t`` iff ``s t^-1 in K`` and ``d(s) = d(t)``; needs ``K`` normal and central."""
    K.verify()
    if not K.is_central():
        raise ValueError("K is not contained in Z(E(S))")
    T = S.product
    rel = K.mask[T[:, S.inverse]] & (S.d[:, None] == S.d[None, :])
    rho = Congruence(S, blocks_from_relation(rel))
    if not is_idempotent_separating(rho):
        raise InconsistentTableError("rho_K is not idempotent-separating")
    if kernel_subsemigroup(rho).elements != K.elements:
        raise InconsistentTableError("Kernel of rho_K differs from K")
    return rho


# -- predicates -------------------------------------------------------------------


def is_idempotent_separating(rho: Congruence) -> bool:
    E = rho.host.idempotents
    return len(set(rho.blocks[E].tolist())) == len(E)


def is_idempotent_pure(rho: Congruence) -> bool:
    """Classes of idempotents contain only idempotents; checked equal to ``rho`` inside compatibility."""
    S = rho.host
    idem_blocks = np.unique(rho.blocks[S.idempotents])
    pure = bool(S.idempotent_mask[np.isin(rho.blocks, idem_blocks)].all())
    inside = not (rho.relation() & ~compatibility(S)).any()
    if pure != inside:
        raise InconsistentTableError("idempotent-pure characterisations disagree")
    return pure


def is_zero_restricted(rho: Congruence) -> bool:
    z = _require_zero(rho.host, "is_zero_restricted")
    return int((rho.blocks == rho.blocks[z]).sum()) == 1


def is_fundamental(S: FiniteInvSemigroup) -> bool:
    """``mu`` is equality; checked against ``Z(E(S)) = E(S)``."""
    fund = mu(S).is_equality()
    alt = set(_central_elements(S)) == set(S.idempotents.tolist())
    if fund != alt:
        raise InconsistentTableError("fundamental characterisations disagree")
    return fund


def is_zero_disjunctive(S: FiniteInvSemigroup) -> bool:
    """``xi`` is equality; checked against ``E(S)`` 0-disjunctive and fundamental."""
    out = xi(S).is_equality()
    if out != (is_E_zero_disjunctive(idempotent_semilattice(S)) and is_fundamental(S)):
        raise InconsistentTableError("0-disjunctive characterisations disagree")
    return out


def is_E_zero_disjunctive(E) -> bool:
    """Three equivalent conditions on a semilattice with zero, all computed.

    Accepts a :class:`SemilatticePoset` or a semigroup (whose idempotents are used).
    """
    if isinstance(E, FiniteInvSemigroup):
        E = idempotent_semilattice(E)
    if E.zero is None:
        raise ValueError("semilattice has no zero")
    M, z, leq = E.meet, E.zero, E.leq
    k = len(E)
    nonzero = np.arange(k) != z
    # (1) xi on E as a semigroup is equality
    one = xi(E.as_semigroup()).is_equality()
    # (2) distinct nonzero e, f are separated by some g
    hit = M != z  # hit[e, g]: e ^ g != 0
    sep = (hit[:, None, :] != hit[None, :, :]).any(axis=2)
    pairs = nonzero[:, None] & nonzero[None, :] & ~np.eye(k, dtype=bool)
    two = bool(sep[pairs].all())
    # (3) 0 != f < e admits 0 != g <= e with f ^ g = 0
    three = True
    for e in range(k):
        for f in range(k):
            if f != z and f != e and leq[f, e]:
                g = leq[:, e] & nonzero & (M[f] == z)
                if not g.any():
                    three = False
    if not one == two == three:
        raise InconsistentTableError("0-disjunctive semilattice characterisations disagree")
    return one


def is_zero_simple(S: FiniteInvSemigroup) -> bool:
    """J-classes are exactly ``{0}`` and the rest; checked against the idempotent criterion."""
    z = _require_zero(S, "is_zero_simple")
    if S.order == 1:
        by_j = by_idem = False
    else:
        J = green_relations(S).J
        others = np.flatnonzero(np.arange(S.order) != z)
        by_j = len(set(J[others].tolist())) == 1
        D = green_relations(S).D
        order = natural_order(S)
        E = [e for e in S.idempotents.tolist() if e != z]
        Emask = S.idempotent_mask
        by_idem = True
        for e in E:
            for f in E:
                # some idempotent i with e D i <= f
                if not ((D == D[e]) & Emask & order[:, f]).any():
                    by_idem = False
    if by_j != by_idem:
        raise InconsistentTableError("0-simple characterisations disagree")
    return by_j


def is_congruence_free(S: FiniteInvSemigroup, cap: int = CONGRUENCE_CAP) -> bool:
    """Only equality and the universal congruence exist.

    With a zero this is fundamental, 0-simple and ``E(S)`` 0-disjunctive.  A
    finite inverse semigroup without zero has its minimal ideal as a Rees class,
    so it can only be congruence-free if it is a group; a group is tested via
    the normal closures of its elements.  Cross-checked by enumeration when
    ``S.order <= cap``.
    """
    if S.zero is not None:
        free = (is_fundamental(S) and is_zero_simple(S)
                and is_E_zero_disjunctive(idempotent_semilattice(S)))
    elif not is_group(S):
        free = False
    else:
        one = S.identity
        free = S.order > 1 and all(principal_congruence(S, one, g).is_universal()
                                   for g in range(S.order) if g != one)
    if S.order <= cap and free != (len(enumerate_congruences(S, cap)) == 2):
        raise InconsistentTableError("congruence-free criterion disagrees with enumeration")
    return free
