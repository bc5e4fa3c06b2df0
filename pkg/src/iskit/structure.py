"""Order-theoretic and groupoid structure of a finite inverse semigroup.

Relations are returned as boolean ``m x m`` matrices; ``rel[s, t]`` reads
"s rel t".  Results are cached on the semigroup, which is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .partitions import blocks_from_rows, canonical_blocks, classes, meet_blocks, refines
from .semigroup import EXHAUSTIVE_LIMIT, SAMPLE_SIZE, FiniteInvSemigroup


class InconsistentTableError(RuntimeError):
    """Equivalent characterisations disagree; the table must be corrupted."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _require_zero(S: FiniteInvSemigroup, what: str) -> int:
    if S.zero is None:
        raise ValueError(f"{what} needs a semigroup with zero")
    return S.zero


# -- natural partial order --------------------------------------------------------


def natural_order(S: FiniteInvSemigroup) -> np.ndarray:
    """``leq[s, t]`` iff ``s = t s^-1 s``.

    The three other standard characterisations (``s = te`` and ``s = ft`` for
    idempotents ``e, f``, and ``s = s s^-1 t``) are computed independently and
    must agree.
    """
    return S.memo("natural_order", lambda: _natural_order(S))


def _natural_order(S: FiniteInvSemigroup) -> np.ndarray:
    T, d, r = S.product, S.d, S.r
    m = S.order
    ar = np.arange(m)
    by_domain = T.T[d] == ar[:, None]          # T[t, d(s)] == s
    by_range = T[r] == ar[:, None]             # T[r(s), t] == s
    right_idem = np.zeros((m, m), dtype=bool)  # s = t e
    left_idem = np.zeros((m, m), dtype=bool)   # s = f t
    for e in S.idempotents:
        right_idem[T[:, e], ar] = True
        left_idem[T[e, :], ar] = True
    for name, other in (("s = te", right_idem), ("s = ft", left_idem), ("s = ss^-1t", by_range)):
        if (other != by_domain).any():
            s, t = np.argwhere(other != by_domain)[0]
            raise InconsistentTableError(f"order form {name!r} disagrees at ({s}, {t})")
    return _frozen(by_domain)


def leq(S: FiniteInvSemigroup, s: int, t: int) -> bool:
    return bool(natural_order(S)[s, t])


def upward_closure(S: FiniteInvSemigroup, subset) -> set[int]:
    subset = list(subset)
    if not subset:
        return set()
    return set(np.flatnonzero(natural_order(S)[subset].any(axis=0)).tolist())


def downward_closure(S: FiniteInvSemigroup, subset) -> set[int]:
    subset = list(subset)
    if not subset:
        return set()
    return set(np.flatnonzero(natural_order(S)[:, subset].any(axis=1)).tolist())


# -- compatibility and orthogonality ----------------------------------------------


def compatibility(S: FiniteInvSemigroup) -> np.ndarray:
    """``s ~ t`` iff both ``s^-1 t`` and ``s t^-1`` are idempotent."""
    def compute():
        T, inv, E = S.product, S.inverse, S.idempotent_mask
        return _frozen(E[T[inv]] & E[T[:, inv]])
    return S.memo("compatibility", compute)


def orthogonality(S: FiniteInvSemigroup) -> np.ndarray:
    z = _require_zero(S, "orthogonality")
    T, inv = S.product, S.inverse
    return (T[inv] == z) & (T[:, inv] == z)


def meet_elements(S: FiniteInvSemigroup, s: int, t: int) -> Optional[int]:
    """Greatest lower bound of ``s`` and ``t`` in the natural order, or ``None``."""
    order = natural_order(S)
    lower = np.flatnonzero(order[:, s] & order[:, t])
    glb = None
    for u in lower:
        if order[lower, u].all():
            glb = int(u)
            break
    if compatibility(S)[s, t]:
        z = S.mul(s, S.d[t])
        if glb != z or S.d[z] != S.mul(S.d[s], S.d[t]) or S.r[z] != S.mul(S.r[s], S.r[t]):
            raise InconsistentTableError(f"meet of compatible pair ({s}, {t}) is not s t^-1 t")
    return glb


# -- underlying groupoid ----------------------------------------------------------


def restricted_product(S: FiniteInvSemigroup, s: int, t: int) -> Optional[int]:
    """``st`` when ``d(s) = r(t)``, else ``None``."""
    if S.d[s] == S.r[t]:
        return S.mul(s, t)
    return None


@dataclass(frozen=True)
class GroupoidView:
    identities: tuple[int, ...]
    dom: np.ndarray
    ran: np.ndarray
    composition: np.ndarray  # -1 where undefined
    components: np.ndarray   # block id per arrow

    def compose(self, x: int, y: int) -> Optional[int]:
        v = int(self.composition[x, y])
        return None if v < 0 else v

    def hom(self, e: int, f: int) -> list[int]:
        """Arrows from ``e`` to ``f``."""
        return np.flatnonzero((self.dom == e) & (self.ran == f)).tolist()

    @property
    def component_count(self) -> int:
        return int(self.components.max()) + 1 if len(self.components) else 0


def _verify_category(comp: np.ndarray, exhaustive_limit: int, seed: int = 0) -> None:
    m = len(comp)
    ext = np.full((m + 1, m + 1), m, dtype=np.int64)
    ext[:m, :m] = np.where(comp < 0, m, comp)
    if m <= exhaustive_limit:
        x, y, z = (a.ravel() for a in np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij"))
    else:
        rng = np.random.default_rng(seed)
        x, y, z = (rng.integers(0, m, size=SAMPLE_SIZE) for _ in range(3))
    right = ext[x, ext[y, z]]
    left = ext[ext[x, y], z]
    if (right != left).any():
        raise InconsistentTableError("(C1) fails")
    both = (ext[x, y] < m) & (ext[y, z] < m)
    if ((right < m) != both).any():
        raise InconsistentTableError("(C2) fails")


def groupoid_view(S: FiniteInvSemigroup, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> GroupoidView:
    """The restricted product as a groupoid, with (C1)-(C3) verified."""
    def compute():
        m = S.order
        d, r = S.d, S.r
        comp = np.where(d[:, None] == r[None, :], S.product, -1)
        _verify_category(comp, exhaustive_limit)
        # identities read off the partial table: e.x = x and x.e = x whenever defined
        ar = np.arange(m)
        left_ok = ((comp == -1) | (comp == ar[None, :])).all(axis=1)
        right_ok = ((comp == -1) | (comp == ar[:, None])).all(axis=0)
        ids = np.flatnonzero(left_ok & right_ok)
        if set(ids.tolist()) != set(S.idempotents.tolist()):
            raise InconsistentTableError("groupoid identities differ from idempotents")
        # (C3) and groupoid inverses
        if not ((comp[ar, d] == ar).all() and (comp[r, ar] == ar).all()):
            raise InconsistentTableError("(C3) fails")
        inv = S.inverse
        if not ((comp[inv, ar] == d).all() and (comp[ar, inv] == r).all()):
            raise InconsistentTableError("arrow without groupoid inverse")
        graph = coo_matrix((np.ones(m), (d, r)), shape=(m, m))
        _, labels = connected_components(graph, directed=False)
        comps = canonical_blocks(labels[d].tolist())
        return GroupoidView(tuple(ids.tolist()), d, r, _frozen(comp), comps)
    return S.memo(("groupoid_view", exhaustive_limit), compute)


def restricted_factorization(S: FiniteInvSemigroup, s: int, t: int) -> tuple[int, int]:
    """Write ``st`` as a restricted product ``s' . t'`` with ``s' <= s`` and ``t' <= t``."""
    e = S.mul(S.d[s], S.r[t])
    s1, t1 = S.mul(s, e), S.mul(e, t)
    if restricted_product(S, s1, t1) != S.mul(s, t) or not leq(S, s1, s) or not leq(S, t1, t):
        raise InconsistentTableError(f"factorisation of ({s}, {t}) failed")
    return s1, t1


# -- Green's relations ------------------------------------------------------------


@dataclass(frozen=True)
class GreenData:
    L: np.ndarray
    R: np.ndarray
    H: np.ndarray
    D: np.ndarray
    J: np.ndarray

    def classes(self, name: str) -> list[list[int]]:
        return classes(getattr(self, name))

    def class_sizes(self, name: str) -> list[int]:
        return sorted((len(c) for c in self.classes(name)), reverse=True)


def principal_ideal(S: FiniteInvSemigroup, s: int) -> np.ndarray:
    """Boolean mask of ``S s S``.  Equal to ``S r(s) S`` since ``s = r(s) s``."""
    e = int(S.r[s])
    def compute():
        T = S.product
        mask = np.zeros(S.order, dtype=bool)
        mask[T[T[:, e]].ravel()] = True
        return _frozen(mask)
    return S.memo(("ideal", e), compute)


def green_relations(S: FiniteInvSemigroup) -> GreenData:
    def compute():
        L = canonical_blocks(S.d.tolist())
        R = canonical_blocks(S.r.tolist())
        H = meet_blocks(L, R)
        D = groupoid_view(S).components
        ideals = np.array([principal_ideal(S, s) for s in range(S.order)])
        J = blocks_from_rows(ideals)
        if not refines(D, J):
            raise InconsistentTableError("D is not contained in J")
        return GreenData(L, R, H, D, J)
    return S.memo("green", compute)


# -- predicates -------------------------------------------------------------------


def is_group(S: FiniteInvSemigroup) -> bool:
    return len(S.idempotents) == 1


def is_semilattice(S: FiniteInvSemigroup) -> bool:
    return bool(S.idempotent_mask.all())


def is_clifford(S: FiniteInvSemigroup) -> bool:
    """Idempotents are central."""
    T = S.product
    E = S.idempotents
    return bool((T[E, :] == T[:, E].T).all())


def is_E_unitary(S: FiniteInvSemigroup) -> bool:
    order = natural_order(S)
    E = S.idempotents
    return not (order[E][:, ~S.idempotent_mask]).any()


def is_E_star_unitary(S: FiniteInvSemigroup) -> bool:
    """Nonzero idempotents are only below idempotents; same as E-unitary without a zero."""
    order = natural_order(S)
    E = [e for e in S.idempotents.tolist() if e != S.zero]
    if not E:
        return True
    return not (order[E][:, ~S.idempotent_mask]).any()


def is_groupoid_with_zero(S: FiniteInvSemigroup) -> bool:
    """The natural order is equality on the nonzero elements."""
    z = _require_zero(S, "is_groupoid_with_zero")
    keep = np.flatnonzero(np.arange(S.order) != z)
    sub = natural_order(S)[np.ix_(keep, keep)]
    return bool((sub == np.eye(len(keep), dtype=bool)).all())


def minimal_groupoid(S: FiniteInvSemigroup) -> list[int]:
    """The 0-minimal elements; checked closed under the restricted product."""
    z = _require_zero(S, "minimal_groupoid")
    order = natural_order(S)
    out = []
    for s in range(S.order):
        if s == z:
            continue
        below = np.flatnonzero(order[:, s])
        if set(below.tolist()) <= {z, s}:
            out.append(s)
    members = set(out)
    for x in out:
        for y in out:
            p = restricted_product(S, x, y)
            if p is not None and p not in members:
                raise InconsistentTableError("minimal groupoid not closed under restricted product")
    return out
