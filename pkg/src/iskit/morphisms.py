"""Homomorphisms between finite inverse semigroups and isomorphism search."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .semigroup import FiniteInvSemigroup


class NotAHomomorphismError(ValueError):
    pass


class Homomorphism:
    """A total map of element indices that preserves products.

    With ``strict=True`` a homomorphism between two semigroups with zero must
    send zero to zero, and likewise for identities.
    """

    def __init__(self, source: FiniteInvSemigroup, target: FiniteInvSemigroup, images,
                 strict: bool = True):
        img = np.asarray(images, dtype=np.int64)
        if img.shape != (source.order,):
            raise NotAHomomorphismError("need one image per source element")
        if (img < 0).any() or (img >= target.order).any():
            raise NotAHomomorphismError("image index out of range")
        Ts, Tt = source.product, target.product
        bad = np.argwhere(img[Ts] != Tt[img[:, None], img[None, :]])
        if len(bad):
            a, b = (int(x) for x in bad[0])
            raise NotAHomomorphismError(f"product of {a} and {b} not preserved")
        if strict:
            if source.zero is not None and target.zero is not None and img[source.zero] != target.zero:
                raise NotAHomomorphismError("zero not sent to zero")
            if (source.identity is not None and target.identity is not None
                    and img[source.identity] != target.identity):
                raise NotAHomomorphismError("identity not sent to identity")
        img.flags.writeable = False
        self.source = source
        self.target = target
        self.images = img

    def __call__(self, s: int) -> int:
        return int(self.images[s])

    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.images)) == self.target.order

    def relation_kernel(self) -> np.ndarray:
        """Block array of the partition ``s ~ t iff theta(s) = theta(t)``."""
        from .partitions import canonical_blocks
        return canonical_blocks(self.images.tolist())

    def image_set(self) -> list[int]:
        return sorted(set(self.images.tolist()))

    def is_idempotent_separating(self) -> bool:
        E = self.source.idempotents
        return len(set(self.images[E].tolist())) == len(E)

    def compose_after(self, other: "Homomorphism") -> "Homomorphism":
        """``self o other``."""
        return Homomorphism(other.source, self.target, self.images[other.images], strict=False)


def identity_hom(S: FiniteInvSemigroup) -> Homomorphism:
    return Homomorphism(S, S, np.arange(S.order))


# -- isomorphism search -----------------------------------------------------------


def generating_set(S: FiniteInvSemigroup) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Greedy semigroup generators with a spanning tree.

    Returns ``(gens, parent, via)``: every non-generator ``s`` equals
    ``parent[s] * via[s]`` with ``via[s]`` a generator and ``parent[s]``
    reached earlier.  Generators have ``parent = -1``.
    """
    m = S.order
    T = S.product
    parent = np.full(m, -2, dtype=np.int64)
    via = np.full(m, -1, dtype=np.int64)
    gens: list[int] = []
    reached: list[int] = []
    # try elements with the fewest products landing on them first
    hits = np.bincount(T.ravel(), minlength=m)
    for cand in np.argsort(hits, kind="stable").tolist():
        if parent[cand] != -2:
            continue
        gens.append(cand)
        parent[cand] = -1
        reached.append(cand)
        # the generated subsemigroup is the closure of the generators under
        # right multiplication by generators
        i = 0
        queue = list(reached)
        while i < len(queue):
            w = queue[i]
            i += 1
            for g in gens:
                p = int(T[w, g])
                if parent[p] == -2:
                    parent[p] = w
                    via[p] = g
                    queue.append(p)
        reached = queue
        if len(reached) == m:
            break
    return gens, parent, via


def _invariants(S: FiniteInvSemigroup) -> np.ndarray:
    from .structure import green_relations, natural_order, principal_ideal
    def compute():
        T = S.product
        m = S.order
        green = green_relations(S)
        order = natural_order(S)
        inv = []
        for s in range(m):
            powers = {s}
            p = T[s, s]
            while p not in powers:
                powers.add(int(p))
                p = T[p, s]
            inv.append((
                bool(S.idempotent_mask[s]),
                int((green.L == green.L[s]).sum()),
                int((green.R == green.R[s]).sum()),
                int((green.D == green.D[s]).sum()),
                int(principal_ideal(S, s).sum()),
                int(order[:, s].sum()),
                int(order[s, :].sum()),
                len(powers),
                s == S.zero,
                s == S.identity,
            ))
        return inv
    return S.memo("iso_invariants", compute)


def find_isomorphism(S: FiniteInvSemigroup, T: FiniteInvSemigroup) -> Optional[np.ndarray]:
    """Return an isomorphism ``S -> T`` as an index array, or ``None``.

    Backtracks over images of a generating set of ``S``, pruning by invariants
    (idempotency, Green class sizes, ideal size, order-ideal sizes, index-period
    size) and by consistency of the map spread along a spanning tree.
    """
    m = S.order
    if m != T.order:
        return None
    inv_s, inv_t = _invariants(S), _invariants(T)
    if sorted(inv_s) != sorted(inv_t):
        return None
    gens, parent, via = generating_set(S)
    by_inv: dict = {}
    for t, key in enumerate(inv_t):
        by_inv.setdefault(key, []).append(t)

    # spread order: elements in BFS order per generator prefix
    PS, PT = S.product, T.product

    def spread(assign: dict[int, int], k: int) -> Optional[np.ndarray]:
        """Propagate images over the subsemigroup generated by gens[:k]."""
        img = np.full(m, -1, dtype=np.int64)
        used = np.zeros(m, dtype=bool)
        for g in gens[:k]:
            img[g] = assign[g]
        queue = list(gens[:k])
        for g in gens[:k]:
            if used[img[g]]:
                return None
            used[img[g]] = True
        i = 0
        while i < len(queue):
            w = queue[i]
            i += 1
            for g in gens[:k]:
                p = PS[w, g]
                q = PT[img[w], img[g]]
                if img[p] == -1:
                    if used[q] or inv_s[p] != inv_t[q]:
                        return None
                    img[p] = q
                    used[q] = True
                    queue.append(int(p))
                elif img[p] != q:
                    return None
        return img

    def search(k: int, assign: dict[int, int]) -> Optional[np.ndarray]:
        if k == len(gens):
            img = spread(assign, k)
            if img is None or (img < 0).any():
                return None
            if (img[PS] != PT[img[:, None], img[None, :]]).any():
                return None
            return img
        g = gens[k]
        for cand in by_inv[inv_s[g]]:
            if cand in assign.values():
                continue
            assign[g] = cand
            if spread(assign, k + 1) is not None:
                found = search(k + 1, assign)
                if found is not None:
                    return found
            del assign[g]
        return None

    return search(0, {})


def is_isomorphism(S: FiniteInvSemigroup, T: FiniteInvSemigroup, images) -> bool:
    img = np.asarray(images, dtype=np.int64)
    if S.order != T.order or len(np.unique(img)) != S.order:
        return False
    return bool((img[S.product] == T.product[img[:, None], img[None, :]]).all())
