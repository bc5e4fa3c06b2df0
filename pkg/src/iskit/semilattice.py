"""Finite meet semilattices as meet tables."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .semigroup import FiniteInvSemigroup, NotInverseSemigroupError, from_cayley_table


class SemilatticePoset:
    """A meet semilattice on points ``0 .. k-1``.

    ``leq[e, f]`` holds iff ``meet(e, f) == e``.  ``source`` optionally records
    the semigroup element each point came from.
    """

    def __init__(self, meet, labels: Optional[Sequence[str]] = None,
                 source: Optional[Sequence[int]] = None):
        M = np.asarray(meet, dtype=np.int64)
        k = len(M)
        if M.shape != (k, k) or k == 0:
            raise ValueError("meet table must be square and non-empty")
        if (M < 0).any() or (M >= k).any():
            raise ValueError("meet table entries out of range")
        ar = np.arange(k)
        if (M[ar, ar] != ar).any():
            raise ValueError("meet is not idempotent")
        if (M != M.T).any():
            raise ValueError("meet is not commutative")
        if (M[M[:, :, None], ar[None, None, :]] != M[ar[:, None, None], M[None, :, :]]).any():
            raise ValueError("meet is not associative")
        self.meet = M
        self.meet.flags.writeable = False
        self.leq = M == ar[:, None]
        self.leq.flags.writeable = False
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(k))
        self.source = tuple(int(x) for x in source) if source is not None else None
        bottoms = np.flatnonzero(self.leq.all(axis=1))
        self.zero = int(bottoms[0]) if len(bottoms) else None

    @classmethod
    def from_order(cls, k: int, pairs, labels=None) -> "SemilatticePoset":
        """Build from generating pairs ``(e, f)`` meaning ``e <= f``; meets must exist."""
        rel = np.eye(k, dtype=bool)
        for e, f in pairs:
            rel[e, f] = True
        for mid in range(k):  # transitive closure
            rel |= rel[:, mid][:, None] & rel[mid, :][None, :]
        if (rel & rel.T & ~np.eye(k, dtype=bool)).any():
            raise ValueError("order relation has a cycle")
        meet = np.empty((k, k), dtype=np.int64)
        for e in range(k):
            for f in range(k):
                lower = np.flatnonzero(rel[:, e] & rel[:, f])
                greatest = [g for g in lower if rel[lower, g].all()]
                if not greatest:
                    raise ValueError(f"points {e} and {f} have no meet")
                meet[e, f] = greatest[0]
        return cls(meet, labels=labels)

    def __len__(self) -> int:
        return len(self.meet)

    def down(self, e: int) -> np.ndarray:
        """Principal order ideal of ``e``, sorted."""
        return np.flatnonzero(self.leq[:, e])

    def as_semigroup(self) -> FiniteInvSemigroup:
        return from_cayley_table(self.meet, labels=self.labels)


def idempotent_semilattice(S: FiniteInvSemigroup) -> SemilatticePoset:
    """``E(S)`` with ``e ^ f = ef``; point ``i`` is the ``i``-th idempotent of ``S``."""
    def compute():
        E = S.idempotents
        pos = np.full(S.order, -1, dtype=np.int64)
        pos[E] = np.arange(len(E))
        meet = pos[S.product[np.ix_(E, E)]]
        if (meet < 0).any():
            raise NotInverseSemigroupError("idempotents not closed under product")
        return SemilatticePoset(meet, labels=[S.labels[e] for e in E], source=E.tolist())
    return S.memo("idempotent_semilattice", compute)
