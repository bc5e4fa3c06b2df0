"""Finite inverse semigroups stored as Cayley tables.

Elements are the integers ``0 .. m-1``.  Every semigroup carries its product
table, inverse table, idempotent mask and the algebraically detected zero and
identity.  Semigroups built from partial bijections also keep the maps.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from . import partial_maps as pm
from .partial_maps import PartialBijection

EXHAUSTIVE_LIMIT = 60
SAMPLE_SIZE = 20000
MAX_ORDER = 100_000
MAX_CARRIER = 8


class NotInverseSemigroupError(ValueError):
    """A table violates an inverse-semigroup axiom; ``witness`` names the offending elements."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class CapExceededError(RuntimeError):
    def __init__(self, cap: str, limit: int, message: str = ""):
        super().__init__(message or f"{cap} exceeded (limit {limit})")
        self.cap = cap
        self.limit = limit


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


def _find_zero(table: np.ndarray) -> Optional[int]:
    m = len(table)
    hits = np.flatnonzero((table == np.arange(m)[:, None]).all(axis=1) & (table == np.arange(m)[None, :]).all(axis=0))
    return int(hits[0]) if len(hits) else None


def _find_identity(table: np.ndarray) -> Optional[int]:
    m = len(table)
    ar = np.arange(m)
    hits = np.flatnonzero((table == ar[None, :]).all(axis=1) & (table == ar[:, None]).all(axis=0))
    return int(hits[0]) if len(hits) else None


class FiniteInvSemigroup:
    """An immutable finite inverse semigroup.

    The constructor trusts its arguments; use :func:`from_cayley_table`,
    :func:`close_generators` or :func:`semigroup_from_maps` to build validated
    instances.
    """

    def __init__(
        self,
        product,
        inverse,
        labels: Optional[Sequence[str]] = None,
        maps: Optional[Sequence[PartialBijection]] = None,
    ):
        self.product = _readonly(product)
        self.inverse = _readonly(inverse)
        m = len(self.product)
        ar = np.arange(m)
        self.idempotent_mask = self.product[ar, ar] == ar
        self.idempotent_mask.flags.writeable = False
        self.d = _readonly(self.product[self.inverse, ar])
        self.r = _readonly(self.product[ar, self.inverse])
        self.zero = _find_zero(self.product)
        self.identity = _find_identity(self.product)
        if labels is None:
            labels = [str(i) for i in range(m)]
        if len(labels) != m or len(set(labels)) != m:
            raise ValueError("labels must be distinct, one per element")
        self.labels = tuple(labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.maps = tuple(maps) if maps is not None else None
        self._map_index = {f: i for i, f in enumerate(self.maps)} if self.maps else {}
        self._memo: dict = {}

    @property
    def order(self) -> int:
        return len(self.product)

    def __len__(self) -> int:
        return len(self.product)

    def __repr__(self) -> str:
        extras = []
        if self.zero is not None:
            extras.append(f"zero={self.labels[self.zero]}")
        if self.identity is not None:
            extras.append(f"identity={self.labels[self.identity]}")
        tail = (", " + ", ".join(extras)) if extras else ""
        return f"FiniteInvSemigroup(order={self.order}{tail})"

    @property
    def idempotents(self) -> np.ndarray:
        return np.flatnonzero(self.idempotent_mask)

    def mul(self, a: int, b: int) -> int:
        return int(self.product[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def prod(self, *elements: int) -> int:
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.product[acc, x]
        return int(acc)

    def is_idempotent(self, a: int) -> bool:
        return bool(self.idempotent_mask[a])

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"no element labelled {label!r}") from None

    def index_of_map(self, f: PartialBijection) -> int:
        if self.maps is None:
            raise ValueError("semigroup is not concrete")
        try:
            return self._map_index[f]
        except KeyError:
            raise KeyError(f"{f} is not an element") from None

    def memo(self, key, compute):
        """Cache a derived quantity on this (immutable) semigroup."""
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def subsemigroup(self, elements: Iterable[int]) -> tuple["FiniteInvSemigroup", np.ndarray]:
        """Restrict to an inverse subsemigroup; returns it with the inclusion map."""
        elems = np.array(sorted(set(int(x) for x in elements)), dtype=np.int64)
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        sub = pos[self.product[np.ix_(elems, elems)]]
        inv = pos[self.inverse[elems]]
        if (sub < 0).any() or (inv < 0).any():
            raise ValueError("subset is not an inverse subsemigroup")
        maps = [self.maps[i] for i in elems] if self.maps is not None else None
        labels = [self.labels[i] for i in elems]
        return FiniteInvSemigroup(sub, inv, labels=labels, maps=maps), elems


# -- validation -------------------------------------------------------------------


def _sample_triples(m: int, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    return tuple(rng.integers(0, m, size=samples) for _ in range(3))


def check_associative(table: np.ndarray, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                      samples: int = SAMPLE_SIZE, seed: int = 0) -> Optional[tuple[int, int, int]]:
    """Return a failing triple ``(a, b, c)`` or ``None``.

    Exhaustive for ``m <= exhaustive_limit``, a seeded random sample above.
    """
    m = len(table)
    if m <= exhaustive_limit:
        left = table[table[:, :, None], np.arange(m)[None, None, :]]
        right = table[np.arange(m)[:, None, None], table[None, :, :]]
        bad = np.argwhere(left != right)
    else:
        a, b, c = _sample_triples(m, samples, seed)
        bad_mask = table[table[a, b], c] != table[a, table[b, c]]
        bad = np.stack([a[bad_mask], b[bad_mask], c[bad_mask]], axis=1)
    if len(bad):
        return tuple(int(x) for x in bad[0])
    return None


def from_cayley_table(table, inverse_hint=None, labels: Optional[Sequence[str]] = None,
                      exhaustive_limit: int = EXHAUSTIVE_LIMIT, seed: int = 0) -> FiniteInvSemigroup:
    """Validate a multiplication table and recover the inverse of each element.

    Raises :class:`NotInverseSemigroupError` with a witness when the table is not
    associative, some element has no inverse, idempotents fail to commute or
    inverses are not unique.
    """
    T = np.asarray(table)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise NotInverseSemigroupError("table must be a non-empty square array")
    T = T.astype(np.int64)
    m = len(T)
    if (T < 0).any() or (T >= m).any():
        raise NotInverseSemigroupError("table entries must lie in [0, m)")

    bad = check_associative(T, exhaustive_limit=exhaustive_limit, seed=seed)
    if bad is not None:
        a, b, c = bad
        raise NotInverseSemigroupError(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})", witness=bad)

    ar = np.arange(m)
    # aba[a, b] = a b a and bab[a, b] = b a b
    aba = T[T, ar[:, None]]
    bab = T[T.T, ar[None, :]]
    candidates = (aba == ar[:, None]) & (bab == ar[None, :])
    counts = candidates.sum(axis=1)
    missing = np.flatnonzero(counts == 0)
    if len(missing):
        a = int(missing[0])
        raise NotInverseSemigroupError(f"element {a} has no inverse; semigroup is not regular", witness=(a,))

    idem = np.flatnonzero(T[ar, ar] == ar)
    sub = T[np.ix_(idem, idem)]
    noncomm = np.argwhere(sub != sub.T)
    if len(noncomm):
        e, f = (int(idem[i]) for i in noncomm[0])
        raise NotInverseSemigroupError(f"idempotents {e} and {f} do not commute", witness=(e, f))

    multiple = np.flatnonzero(counts > 1)
    if len(multiple):
        a = int(multiple[0])
        inv = tuple(int(x) for x in np.flatnonzero(candidates[a])[:2])
        raise NotInverseSemigroupError(f"element {a} has several inverses {inv}", witness=(a,) + inv)

    inverse = candidates.argmax(axis=1)
    if inverse_hint is not None:
        hint = np.asarray(inverse_hint, dtype=np.int64)
        if hint.shape != (m,) or (hint != inverse).any():
            raise NotInverseSemigroupError("inverse hint disagrees with the table")
    return FiniteInvSemigroup(T, inverse, labels=labels)


# -- concrete semigroups of partial bijections ------------------------------------


class _KeyIndex:
    """Lookup from packed-map keys to element indices."""

    def __init__(self, key_array: np.ndarray):
        self.order = np.argsort(key_array, kind="stable")
        self.sorted = key_array[self.order]

    def find(self, query: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.sorted, query)
        pos = np.clip(pos, 0, len(self.sorted) - 1)
        hit = self.sorted[pos] == query
        out = np.where(hit, self.order[pos], -1)
        return out


def _table_from_packed(packed: np.ndarray, chunk_bytes: int = 1 << 26) -> np.ndarray:
    m, n = packed.shape
    index = _KeyIndex(pm.keys(packed))
    table = np.empty((m, m), dtype=np.int64)
    rows = max(1, chunk_bytes // max(1, m * n * 8))
    for start in range(0, m, rows):
        block = pm.compose_all_packed(packed[start:start + rows], packed)
        table[start:start + rows] = index.find(pm.keys(block))
    return table


def semigroup_from_maps(maps: Sequence[PartialBijection],
                        labels: Optional[Sequence[str]] = None) -> FiniteInvSemigroup:
    """Build the table of a family of partial bijections that is already closed.

    Keeps the given element order; raises ``ValueError`` if some product or
    inverse falls outside the family.
    """
    maps = list(maps)
    if len(set(maps)) != len(maps):
        raise ValueError("maps must be distinct")
    packed = pm.pack(maps)
    table = _table_from_packed(packed)
    if (table < 0).any():
        i, j = (int(x) for x in np.argwhere(table < 0)[0])
        raise ValueError(f"family not closed under composition: {maps[i]} o {maps[j]}")
    inverse = _KeyIndex(pm.keys(packed)).find(pm.keys(pm.invert_packed(packed)))
    if (inverse < 0).any():
        i = int(np.flatnonzero(inverse < 0)[0])
        raise ValueError(f"family not closed under inversion: {maps[i]}")
    if labels is None:
        labels = [str(f) for f in maps]
    return FiniteInvSemigroup(table, inverse, labels=labels, maps=maps)


def close_generators(gens: Sequence[PartialBijection], names: Optional[Sequence[str]] = None,
                     max_order: int = MAX_ORDER, max_carrier: int = MAX_CARRIER) -> FiniteInvSemigroup:
    """Inverse subsemigroup of ``I(n)`` generated by ``gens``.

    Generators are augmented with their inverses, then elements are numbered
    breadth-first over shortlex generator words: each new element is the
    product ``w * g`` of an earlier element ``w`` with a generator ``g``.
    Labels are the shortlex-least words, generator names joined by ``*``.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].carrier_size
    if any(g.carrier_size != n for g in gens):
        raise ValueError("generators must share a carrier")
    if n > max_carrier:
        raise CapExceededError("max-carrier", max_carrier, f"carrier size {n} exceeds cap {max_carrier}")
    if names is None:
        names = [f"g{i}" for i in range(len(gens))]
    names = list(names)
    if len(names) != len(gens):
        raise ValueError("one name per generator")

    aug: list[PartialBijection] = []
    aug_names: list[str] = []
    for g, name in zip(gens, names):
        if g not in aug:
            aug.append(g)
            aug_names.append(name)
    for g, name in list(zip(aug, aug_names)):
        gi = pm.invert(g)
        if gi not in aug:
            aug.append(gi)
            aug_names.append(name + "^-1")

    gpack = pm.pack(aug)
    k = len(aug)
    elements = gpack.copy()
    words = list(aug_names)
    seen = set(pm.keys(gpack).tolist())
    frontier = np.arange(k)
    if k > max_order:
        raise CapExceededError("max-order", max_order)
    while len(frontier):
        # products w * g for w in frontier (in order) and every generator g
        prods = pm.compose_all_packed(elements[frontier], gpack).reshape(-1, n)
        pkeys = pm.keys(prods)
        uniq, first = np.unique(pkeys, return_index=True)
        fresh = np.array([key not in seen for key in uniq.tolist()], dtype=bool)
        first = np.sort(first[fresh])
        if len(elements) + len(first) > max_order:
            raise CapExceededError("max-order", max_order, f"closure exceeds {max_order} elements")
        start = len(elements)
        elements = np.concatenate([elements, prods[first]])
        for pos in first.tolist():
            parent, gen = divmod(pos, k)
            words.append(words[frontier[parent]] + "*" + aug_names[gen])
        seen.update(pkeys[first].tolist())
        frontier = np.arange(start, len(elements))

    maps = [pm.unpack(row) for row in elements]
    table = _table_from_packed(elements)
    inverse = _KeyIndex(pm.keys(elements)).find(pm.keys(pm.invert_packed(elements)))
    assert (table >= 0).all() and (inverse >= 0).all()
    return FiniteInvSemigroup(table, inverse, labels=words, maps=maps)


def verify_axioms(S: FiniteInvSemigroup, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> None:
    """Re-check the stored tables; raises :class:`NotInverseSemigroupError`."""
    T, inv = S.product, S.inverse
    bad = check_associative(T, exhaustive_limit=exhaustive_limit)
    if bad is not None:
        raise NotInverseSemigroupError("not associative", witness=bad)
    ar = np.arange(S.order)
    wrong = (T[T[ar, inv], ar] != ar) | (T[T[inv, ar], inv] != inv)
    if wrong.any():
        raise NotInverseSemigroupError("inverse table wrong", witness=(int(np.flatnonzero(wrong)[0]),))
    idem = S.idempotents
    sub = T[np.ix_(idem, idem)]
    if (sub != sub.T).any():
        i, j = np.argwhere(sub != sub.T)[0]
        raise NotInverseSemigroupError("idempotents do not commute", witness=(int(idem[i]), int(idem[j])))
    aba = T[T, ar[:, None]]
    bab = T[T.T, ar[None, :]]
    counts = ((aba == ar[:, None]) & (bab == ar[None, :])).sum(axis=1)
    if (counts != 1).any():
        a = int(np.flatnonzero(counts != 1)[0])
        raise NotInverseSemigroupError("inverse not unique", witness=(a,))
