"""Partitions of ``range(m)`` stored as canonical block-id arrays."""

from __future__ import annotations

from typing import Iterable

import numpy as np
from scipy.cluster.hierarchy import DisjointSet


def canonical_blocks(keys: Iterable) -> np.ndarray:
    """Block ids numbered by first occurrence, so equal partitions give equal arrays."""
    ids: dict = {}
    out = [ids.setdefault(k, len(ids)) for k in keys]
    return np.array(out, dtype=np.int64)


def blocks_from_rows(rows: np.ndarray) -> np.ndarray:
    """Partition by equality of rows of a 2-D array."""
    rows = np.ascontiguousarray(rows)
    return canonical_blocks(r.tobytes() for r in rows)


def blocks_from_relation(rel: np.ndarray) -> np.ndarray:
    """Partition of an equivalence relation given as a boolean matrix.

    Raises ``ValueError`` if the relation is not an equivalence.
    """
    rel = np.asarray(rel, dtype=bool)
    m = len(rel)
    if not rel[np.arange(m), np.arange(m)].all():
        raise ValueError("relation is not reflexive")
    if (rel != rel.T).any():
        raise ValueError("relation is not symmetric")
    blocks = blocks_from_rows(rel)
    if (relation_from_blocks(blocks) != rel).any():
        raise ValueError("relation is not transitive")
    return blocks


def relation_from_blocks(blocks: np.ndarray) -> np.ndarray:
    return blocks[:, None] == blocks[None, :]


def classes(blocks: np.ndarray) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(int(blocks.max()) + 1)] if len(blocks) else []
    for i, b in enumerate(blocks.tolist()):
        out[b].append(i)
    return out


def refines(fine: np.ndarray, coarse: np.ndarray) -> bool:
    """True iff every block of ``fine`` sits inside a block of ``coarse``."""
    rep = np.zeros(int(fine.max()) + 1, dtype=np.int64)
    rep[fine] = coarse
    return bool((rep[fine] == coarse).all())


def join_blocks(*partitions: np.ndarray) -> np.ndarray:
    """Finest partition coarser than all the given ones (equivalence join)."""
    m = len(partitions[0])
    ds = DisjointSet(range(m))
    for blocks in partitions:
        first: dict[int, int] = {}
        for i, b in enumerate(blocks.tolist()):
            if b in first:
                ds.merge(first[b], i)
            else:
                first[b] = i
    return canonical_blocks(ds[i] for i in range(m))


def meet_blocks(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return canonical_blocks(zip(a.tolist(), b.tolist()))
