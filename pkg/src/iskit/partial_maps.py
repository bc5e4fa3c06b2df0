"""Partial bijections on a finite carrier ``{0, ..., n-1}``.

A :class:`PartialBijection` stores one image per point, ``None`` where the map
is undefined.  Composition follows the convention that the right factor acts
first, so ``compose(f, g)(x) == f(g(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterable, Optional, Sequence

import numpy as np

MAX_ENUMERATED_CARRIER = 5


@dataclass(frozen=True)
class PartialBijection:
    images: tuple[Optional[int], ...]

    def __post_init__(self):
        images = tuple(None if y is None else int(y) for y in self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        if n == 0:
            raise ValueError("carrier size must be positive")
        seen = set()
        for x, y in enumerate(images):
            if y is None:
                continue
            if not 0 <= y < n:
                raise ValueError(f"image {y} of point {x} outside carrier of size {n}")
            if y in seen:
                raise ValueError(f"point {y} is hit twice; map is not injective")
            seen.add(y)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "PartialBijection":
        images: list[Optional[int]] = [None] * n
        for x, y in pairs:
            if not 0 <= x < n:
                raise ValueError(f"point {x} outside carrier of size {n}")
            if images[x] is not None and images[x] != y:
                raise ValueError(f"point {x} given two images")
            images[x] = y
        return cls(tuple(images))

    @classmethod
    def identity(cls, n: int, subset: Optional[Iterable[int]] = None) -> "PartialBijection":
        """The partial identity ``1_A``; ``subset=None`` means the whole carrier."""
        if subset is None:
            return cls(tuple(range(n)))
        keep = set(subset)
        return cls(tuple(x if x in keep else None for x in range(n)))

    @classmethod
    def empty(cls, n: int) -> "PartialBijection":
        return cls((None,) * n)

    @property
    def carrier_size(self) -> int:
        return len(self.images)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.images) if y is not None)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(y for y in self.images if y is not None)

    @property
    def rank(self) -> int:
        return sum(y is not None for y in self.images)

    def graph(self) -> frozenset[tuple[int, int]]:
        return frozenset((x, y) for x, y in enumerate(self.images) if y is not None)

    def __call__(self, x: int) -> Optional[int]:
        return self.images[x]

    def __str__(self) -> str:
        body = ", ".join(f"{x}->{y}" for x, y in sorted(self.graph()))
        return "{" + body + "}"


def _check_same_carrier(f: PartialBijection, g: PartialBijection) -> None:
    if f.carrier_size != g.carrier_size:
        raise ValueError(f"carrier sizes differ: {f.carrier_size} != {g.carrier_size}")


def compose(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """``x -> f(g(x))``, defined when ``g(x)`` is defined and lies in the domain of ``f``."""
    _check_same_carrier(f, g)
    fi = f.images
    return PartialBijection(tuple(None if y is None else fi[y] for y in g.images))


def invert(f: PartialBijection) -> PartialBijection:
    images: list[Optional[int]] = [None] * f.carrier_size
    for x, y in enumerate(f.images):
        if y is not None:
            images[y] = x
    return PartialBijection(tuple(images))


def is_idempotent(f: PartialBijection) -> bool:
    return all(y is None or y == x for x, y in enumerate(f.images))


def restriction_leq(f: PartialBijection, g: PartialBijection) -> bool:
    """True iff ``f`` is the restriction of ``g`` to ``domain(f)``."""
    _check_same_carrier(f, g)
    return f.graph() <= g.graph()


def compatible(f: PartialBijection, g: PartialBijection) -> bool:
    return is_idempotent(compose(invert(f), g)) and is_idempotent(compose(f, invert(g)))


def orthogonal(f: PartialBijection, g: PartialBijection) -> bool:
    _check_same_carrier(f, g)
    return not (f.domain & g.domain) and not (f.image & g.image)


def meet(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """The largest common restriction: ``f`` where ``f`` and ``g`` agree."""
    _check_same_carrier(f, g)
    return PartialBijection(
        tuple(y if y is not None and y == z else None for y, z in zip(f.images, g.images))
    )


def join_compatible(fs: Iterable[PartialBijection]) -> Optional[PartialBijection]:
    """Union of graphs, or ``None`` when the union is not an injective partial function."""
    fs = list(fs)
    if not fs:
        raise ValueError("join of an empty family needs a carrier size")
    n = fs[0].carrier_size
    images: list[Optional[int]] = [None] * n
    for f in fs:
        if f.carrier_size != n:
            raise ValueError("carrier sizes differ")
        for x, y in enumerate(f.images):
            if y is None:
                continue
            if images[x] is not None and images[x] != y:
                return None
            images[x] = y
    defined = [y for y in images if y is not None]
    if len(defined) != len(set(defined)):
        return None
    return PartialBijection(tuple(images))


def symmetric_inverse_monoid_order(n: int) -> int:
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


def symmetric_inverse_monoid(n: int, cap: int = MAX_ENUMERATED_CARRIER) -> list[PartialBijection]:
    """Every injective partial map on ``n`` points, ordered by rank, then domain, then images."""
    if n < 1:
        raise ValueError("carrier size must be positive")
    if n > cap:
        raise ValueError(f"carrier size {n} exceeds enumeration cap {cap}")
    out = []
    for k in range(n + 1):
        for dom in combinations(range(n), k):
            for img in combinations(range(n), k):
                for perm in permutations(img):
                    out.append(PartialBijection.from_pairs(n, zip(dom, perm)))
    return out


# -- vectorised helpers used by the closure engine --------------------------------
#
# Maps are packed into integer arrays of shape (k, n) where the value n stands for
# "undefined".  Appending a column holding n makes composition a single gather.


def pack(maps: Sequence[PartialBijection]) -> np.ndarray:
    if not maps:
        raise ValueError("no maps to pack")
    n = maps[0].carrier_size
    arr = np.full((len(maps), n), n, dtype=np.int64)
    for i, f in enumerate(maps):
        if f.carrier_size != n:
            raise ValueError("carrier sizes differ")
        for x, y in enumerate(f.images):
            if y is not None:
                arr[i, x] = y
    return arr


def unpack(row: np.ndarray) -> PartialBijection:
    n = len(row)
    return PartialBijection(tuple(None if y == n else int(y) for y in row))


def extend(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[1]
    return np.concatenate([arr, np.full((arr.shape[0], 1), n, dtype=arr.dtype)], axis=1)


def compose_packed(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row-wise ``left[i] o right[i]`` for equally long stacks."""
    ext = extend(left)
    return ext[np.arange(len(left))[:, None], right]


def compose_all_packed(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """All products ``left[i] o right[j]``, shape ``(len(left), len(right), n)``."""
    ext = extend(left)
    return ext[np.arange(len(left))[:, None, None], right[None, :, :]]


def invert_packed(arr: np.ndarray) -> np.ndarray:
    k, n = arr.shape
    out = np.full((k, n + 1), n, dtype=arr.dtype)
    rows = np.repeat(np.arange(k), n)
    out[rows, arr.ravel()] = np.tile(np.arange(n), k)
    return out[:, :n]


def keys(arr: np.ndarray) -> np.ndarray:
    """Injective integer code of each packed map (base ``n + 1`` digits)."""
    n = arr.shape[-1]
    weights = (n + 1) ** np.arange(n, dtype=np.int64)
    return arr.astype(np.int64) @ weights
