"""Partial actions, stabilisers, coset spaces and conjugacy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .partitions import canonical_blocks, classes
from .semigroup import FiniteInvSemigroup
from .structure import InconsistentTableError, natural_order, upward_closure


class ActionError(ValueError):
    pass


class Action:
    """``table[s, x]`` is ``s . x`` or ``-1`` when undefined; (A1), (A2) and effectiveness are checked."""

    def __init__(self, S: FiniteInvSemigroup, table, point_labels: Optional[Sequence[str]] = None):
        A = np.asarray(table, dtype=np.int64)
        n = A.shape[1] if A.ndim == 2 else 0
        if A.shape != (S.order, n) or n == 0:
            raise ActionError("action table must have one row per element and at least one point")
        if (A < -1).any() or (A >= n).any():
            raise ActionError("action entries out of range")
        ar = np.arange(n)
        E = S.idempotents
        bad = (A[E] != -1) & (A[E] != ar[None, :])
        if bad.any():
            i, x = np.argwhere(bad)[0]
            raise ActionError(f"(A1) fails: idempotent {E[i]} moves point {x}")
        ext = np.concatenate([A, np.full((S.order, 1), -1)], axis=1)  # column n absorbs undefined
        tx = np.where(A < 0, n, A)  # t . x with undefined -> n
        # lhs[s, t, x] = (st) . x ; rhs[s, t, x] = s . (t . x)
        lhs = A[S.product]
        rhs = ext[np.arange(S.order)[:, None, None], tx[None, :, :]]
        if (lhs != rhs).any():
            s, t, x = np.argwhere(lhs != rhs)[0]
            raise ActionError(f"(A2) fails at ({s}, {t}, {x})")
        if S.zero is not None and (A[S.zero] >= 0).any():
            raise ActionError("the zero must act nowhere")
        if not (A >= 0).any(axis=0).all():
            x = int(np.flatnonzero(~(A >= 0).any(axis=0))[0])
            raise ActionError(f"action is not effective at point {x}")
        self.semigroup = S
        self.table = A
        self.table.flags.writeable = False
        self.point_labels = tuple(point_labels) if point_labels is not None else tuple(str(i) for i in range(n))
        if len(self.point_labels) != n or len(set(self.point_labels)) != n:
            raise ActionError("point labels must be distinct, one per point")

    @property
    def n_points(self) -> int:
        return self.table.shape[1]

    def act(self, s: int, x: int) -> Optional[int]:
        v = int(self.table[s, x])
        return None if v < 0 else v

    def restrict(self, points: Sequence[int]) -> "Action":
        pts = sorted(set(points))
        pos = np.full(self.n_points, -1, dtype=np.int64)
        pos[pts] = np.arange(len(pts))
        sub = self.table[:, pts]
        if ((sub >= 0) & (pos[sub] < 0)).any():
            raise ActionError("subset is not closed under the action")
        return Action(self.semigroup, np.where(sub >= 0, pos[sub], -1),
                      [self.point_labels[p] for p in pts])


def natural_action(S: FiniteInvSemigroup) -> Action:
    """A concrete semigroup acting on its carrier."""
    if S.maps is None:
        raise ActionError("semigroup is not concrete")
    table = [[-1 if f.images[x] is None else f.images[x] for x in range(f.carrier_size)] for f in S.maps]
    return Action(S, table)


def disjoint_union(A: Action, B: Action) -> Action:
    if A.semigroup is not B.semigroup:
        raise ActionError("actions of different semigroups")
    n = A.n_points
    shifted = np.where(B.table >= 0, B.table + n, -1)
    labels = [f"{l}.0" for l in A.point_labels] + [f"{l}.1" for l in B.point_labels]
    return Action(A.semigroup, np.concatenate([A.table, shifted], axis=1), labels)


def left_translation_action(S: FiniteInvSemigroup) -> Action:
    """``s . x = sx`` on the points of a group."""
    return Action(S, S.product)


def orbits(A: Action) -> np.ndarray:
    """Orbit block per point."""
    src, dst = np.nonzero(A.table >= 0)
    n = A.n_points
    graph = coo_matrix((np.ones(len(src)), (dst, A.table[src, dst])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return canonical_blocks(labels.tolist())


def is_effective(A: Action) -> bool:
    return bool((A.table >= 0).any(axis=0).all())


def is_transitive(A: Action) -> bool:
    # the orbit relation is already symmetric and transitive, so one component means X x X
    reach = np.zeros((A.n_points, A.n_points), dtype=bool)
    s, x = np.nonzero(A.table >= 0)
    reach[x, A.table[s, x]] = True
    single = int(orbits(A).max()) == 0
    if single != bool(reach.all()):
        raise InconsistentTableError("orbit relation is not transitive")
    return single


def stabilizer(A: Action, x: int) -> list[int]:
    """``S_x = {s : s . x = x}``; checked closed, inverse-closed and zero-free."""
    S = A.semigroup
    H = np.flatnonzero(A.table[:, x] == x).tolist()
    if not is_proper_closed_inverse_sub(S, H):
        raise InconsistentTableError(f"stabiliser of {x} is not a proper closed inverse subsemigroup")
    return H


def is_proper_closed_inverse_sub(S: FiniteInvSemigroup, H: Sequence[int]) -> bool:
    """Nonempty, closed under product and inverse, upward closed, without zero."""
    H = sorted(set(int(h) for h in H))
    if not H:
        return False
    mask = np.zeros(S.order, dtype=bool)
    mask[H] = True
    if not mask[S.product[np.ix_(H, H)]].all() or not mask[S.inverse[H]].all():
        return False
    if upward_closure(S, H) != set(H):
        return False
    return S.zero is None or not mask[S.zero]


# -- cosets -----------------------------------------------------------------------


@dataclass
class CosetSpace:
    host: FiniteInvSemigroup
    subgroup: tuple[int, ...]
    cosets: list[tuple[int, ...]]
    representatives: list[int]

    def index_of(self, element: int) -> Optional[int]:
        for i, c in enumerate(self.cosets):
            if element in c:
                return i
        return None


def _coset(S: FiniteInvSemigroup, s: int, H: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(upward_closure(S, [S.mul(s, h) for h in H])))


def coset_space(S: FiniteInvSemigroup, H: Sequence[int]) -> CosetSpace:
    """All cosets ``(sH) up`` with ``d(s)`` in ``H``, deduplicated by ``s^-1 t in H``."""
    H = tuple(sorted(set(int(h) for h in H)))
    if not is_proper_closed_inverse_sub(S, H):
        raise ValueError("H is not a proper closed inverse subsemigroup")
    Hset = set(H)
    reps: list[int] = []
    for s in range(S.order):
        if int(S.d[s]) in Hset and not any(S.mul(S.inv(r), s) in Hset for r in reps):
            reps.append(s)
    cosets = [_coset(S, s, H) for s in reps]
    # disjoint or equal
    seen: dict[int, int] = {}
    for i, c in enumerate(cosets):
        for x in c:
            if x in seen:
                raise InconsistentTableError(f"cosets {seen[x]} and {i} overlap")
            seen[x] = i
    if H not in cosets:
        raise InconsistentTableError("H is not one of its cosets")
    return CosetSpace(S, H, cosets, reps)


def coset_action(S: FiniteInvSemigroup, H: Sequence[int], space: Optional[CosetSpace] = None) -> Action:
    """``a . (sH) up = (asH) up`` when ``d(as)`` is in ``H``."""
    space = space or coset_space(S, H)
    Hset = set(space.subgroup)
    table = np.full((S.order, len(space.cosets)), -1, dtype=np.int64)
    for a in range(S.order):
        for i, s in enumerate(space.representatives):
            as_ = S.mul(a, s)
            if int(S.d[as_]) in Hset:
                j = space.index_of(as_)
                if j is None:
                    raise InconsistentTableError("as lies in no coset")
                table[a, i] = j
    labels = [f"({S.labels[s]}H)" for s in space.representatives]
    A = Action(S, table, labels)
    if not is_transitive(A):
        raise InconsistentTableError("coset action is not transitive")
    return A


def is_equivalence(A: Action, B: Action, alpha: Sequence[int]) -> bool:
    """``alpha`` is a bijection of points with ``alpha(s.x) = s.alpha(x)`` including definedness."""
    alpha = np.asarray(alpha, dtype=np.int64)
    if A.n_points != B.n_points or sorted(alpha.tolist()) != list(range(B.n_points)):
        return False
    left = np.where(A.table >= 0, alpha[A.table], -1)
    right = B.table[:, alpha]
    return bool((left == right).all())


def canonical_equivalence(A: Action, x: int) -> tuple[Action, np.ndarray]:
    """Equivalence ``y -> {s : s.x = y}`` from ``A`` onto the coset action of ``S_x``."""
    if not is_transitive(A):
        raise ActionError("action is not transitive")
    S = A.semigroup
    H = stabilizer(A, x)
    space = coset_space(S, H)
    B = coset_action(S, H, space)
    alpha = np.empty(A.n_points, dtype=np.int64)
    for y in range(A.n_points):
        movers = tuple(np.flatnonzero(A.table[:, x] == y).tolist())
        if movers not in space.cosets:
            raise InconsistentTableError(f"elements sending {x} to {y} do not form a coset")
        alpha[y] = space.cosets.index(movers)
    if not is_equivalence(A, B, alpha):
        raise InconsistentTableError("canonical map is not an equivalence")
    return B, alpha


def action_equivalence(A: Action, B: Action) -> Optional[np.ndarray]:
    """Some equivalence between two transitive actions, or ``None``."""
    if A.n_points != B.n_points:
        return None
    for y in range(B.n_points):
        # a transitive equivalence is fixed by the image of point 0
        alpha = np.full(A.n_points, -1, dtype=np.int64)
        alpha[0] = y
        ok = True
        for s in range(A.semigroup.order):
            p, q = A.table[s, 0], B.table[s, y]
            if (p < 0) != (q < 0):
                ok = False
                break
            if p >= 0:
                if alpha[p] not in (-1, q):
                    ok = False
                    break
                alpha[p] = q
        if ok and (alpha >= 0).all() and is_equivalence(A, B, alpha):
            return alpha
    return None


# -- conjugacy --------------------------------------------------------------------


def is_conjugacy_witness(S: FiniteInvSemigroup, H: Sequence[int], K: Sequence[int], s: int) -> bool:
    T, inv = S.product, S.inverse
    Hs, Ks = set(H), set(K)
    fwd = {int(T[T[s, h], inv[s]]) for h in H}
    back = {int(T[T[inv[s], k], s]) for k in K}
    return fwd <= Ks and back <= Hs


def are_conjugate(S: FiniteInvSemigroup, H: Sequence[int], K: Sequence[int]) -> Optional[int]:
    """Least ``s`` with ``sHs^-1 <= K`` and ``s^-1Ks <= H``; consequences are checked."""
    H = sorted(set(H))
    K = sorted(set(K))
    for X in (H, K):
        if not is_proper_closed_inverse_sub(S, X):
            raise ValueError("argument is not a proper closed inverse subsemigroup")
    T, inv = S.product, S.inverse
    for s in range(S.order):
        if is_conjugacy_witness(S, H, K, s):
            ok = (S.r[s] in K and S.d[s] in H
                  and upward_closure(S, [T[T[s, h], inv[s]] for h in H]) == set(K)
                  and upward_closure(S, [T[T[inv[s], k], s] for k in K]) == set(H))
            if not ok:
                raise InconsistentTableError(f"witness {s} violates the conjugacy consequences")
            return s
    return None
