"""Brute-force reference computations, written without iskit.

Everything here works on plain Python lists so that a bug in the package's
vectorised code cannot leak into the expected values.
"""

from __future__ import annotations

import itertools
from math import comb, factorial


def closed_form_In(n: int) -> int:
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


def closed_form_idempotents(n: int) -> int:
    return 2 ** n


def all_partial_bijections(n: int) -> list[tuple]:
    """Every injective partial map on ``range(n)`` as a tuple with ``None`` for undefined."""
    out = []
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img in itertools.permutations(range(n), k):
                f = [None] * n
                for x, y in zip(dom, img):
                    f[x] = y
                out.append(tuple(f))
    return out


def pb_compose(f: tuple, g: tuple) -> tuple:
    """``f after g``."""
    return tuple(None if g[x] is None else f[g[x]] for x in range(len(g)))


def pb_invert(f: tuple) -> tuple:
    out = [None] * len(f)
    for x, y in enumerate(f):
        if y is not None:
            out[y] = x
    return tuple(out)


def fixpoint_closure(gens: list[tuple]) -> set[tuple]:
    """Naive closure under composition and inversion."""
    elems = set(gens) | {pb_invert(g) for g in gens}
    while True:
        new = {pb_compose(f, g) for f in elems for g in elems} - elems
        if not new:
            return elems
        elems |= new


# -- tables -----------------------------------------------------------------------


def table_of(elems: list[tuple]) -> list[list[int]]:
    idx = {f: i for i, f in enumerate(elems)}
    return [[idx[pb_compose(f, g)] for g in elems] for f in elems]


def inverses(T) -> list[list[int]]:
    m = len(T)
    return [[b for b in range(m) if T[T[a][b]][a] == a and T[T[b][a]][b] == b] for a in range(m)]


def idempotents(T) -> list[int]:
    return [e for e in range(len(T)) if T[e][e] == e]


def natural_leq(T) -> list[list[bool]]:
    """``s <= t`` iff ``s = te`` for an idempotent ``e``."""
    m = len(T)
    E = idempotents(T)
    return [[any(T[t][e] == s for e in E) for t in range(m)] for s in range(m)]


def zero_of(T):
    m = len(T)
    for z in range(m):
        if all(T[z][s] == z and T[s][z] == z for s in range(m)):
            return z
    return None


# -- Green's relations ------------------------------------------------------------


def _left_ideal(T, s):
    return frozenset({s} | {T[x][s] for x in range(len(T))})


def _right_ideal(T, s):
    return frozenset({s} | {T[s][x] for x in range(len(T))})


def _two_sided(T, s):
    m = len(T)
    one = {s} | {T[x][s] for x in range(m)} | {T[s][x] for x in range(m)}
    return frozenset(one | {T[T[x][s]][y] for x in range(m) for y in range(m)})


def green_brute(T) -> dict[str, list[list[bool]]]:
    m = len(T)
    Li = [_left_ideal(T, s) for s in range(m)]
    Ri = [_right_ideal(T, s) for s in range(m)]
    Ji = [_two_sided(T, s) for s in range(m)]
    L = [[Li[s] == Li[t] for t in range(m)] for s in range(m)]
    R = [[Ri[s] == Ri[t] for t in range(m)] for s in range(m)]
    H = [[L[s][t] and R[s][t] for t in range(m)] for s in range(m)]
    D = [[any(L[s][u] and R[u][t] for u in range(m)) for t in range(m)] for s in range(m)]
    J = [[Ji[s] == Ji[t] for t in range(m)] for s in range(m)]
    return {"L": L, "R": R, "H": H, "D": D, "J": J}


def relation_of_blocks(blocks) -> list[list[bool]]:
    b = list(blocks)
    return [[b[s] == b[t] for t in range(len(b))] for s in range(len(b))]


# -- congruences ------------------------------------------------------------------


def _close(T, pairs, parent):
    """Least congruence containing ``pairs`` and the relation encoded in ``parent``."""
    m = len(T)

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in pairs:
        union(a, b)
    changed = True
    while changed:
        changed = False
        for a in range(m):
            for b in range(a + 1, m):
                if find(a) == find(b):
                    for c in range(m):
                        changed |= union(T[a][c], T[b][c])
                        changed |= union(T[c][a], T[c][b])
    return tuple(find(x) for x in range(m))


def canonical(keys) -> tuple:
    seen = {}
    return tuple(seen.setdefault(k, len(seen)) for k in keys)


def all_congruences(T) -> set[tuple]:
    """Every congruence, by saturating equality with one extra pair at a time."""
    m = len(T)
    start = tuple(range(m))
    found = {start}
    todo = [start]
    while todo:
        cur = todo.pop()
        for a in range(m):
            for b in range(a + 1, m):
                if cur[a] == cur[b]:
                    continue
                nxt = canonical(_close(T, [(a, b)], list(_roots(cur))))
                if nxt not in found:
                    found.add(nxt)
                    todo.append(nxt)
    return {canonical(c) for c in found}


def _roots(blocks):
    first = {}
    return [first.setdefault(b, i) for i, b in enumerate(blocks)]


def set_partitions(m: int):
    """Restricted growth strings of length ``m``."""
    def rec(prefix, top):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for v in range(top + 2):
            yield from rec(prefix + [v], max(top, v))
    if m == 0:
        yield ()
        return
    yield from rec([0], 0)


def is_congruence(T, blocks) -> bool:
    m = len(T)
    for a in range(m):
        for b in range(m):
            if blocks[a] == blocks[b]:
                for c in range(m):
                    if blocks[T[a][c]] != blocks[T[b][c]] or blocks[T[c][a]] != blocks[T[c][b]]:
                        return False
    return True


def congruences_by_partitions(T) -> set[tuple]:
    return {p for p in set_partitions(len(T)) if is_congruence(T, p)}


def refines(a, b) -> bool:
    return all(b[x] == b[y] for x in range(len(a)) for y in range(len(a)) if a[x] == a[y])


def quotient_is_group(T, blocks) -> bool:
    """The quotient has a single idempotent class."""
    E = idempotents(T)
    return len({blocks[e] for e in E}) == 1


def least_group_congruence(T, congs) -> tuple:
    groups = [c for c in congs if quotient_is_group(T, c)]
    least = [c for c in groups if all(refines(c, d) for d in groups)]
    assert len(least) == 1
    return least[0]


def largest_idempotent_separating(T, congs) -> tuple:
    E = idempotents(T)
    sep = [c for c in congs if len({c[e] for e in E}) == len(E)]
    top = [c for c in sep if all(refines(d, c) for d in sep)]
    assert len(top) == 1
    return top[0]


def xi_brute(T) -> tuple:
    """``s xi t`` iff ``asb = 0 <=> atb = 0`` for all ``a, b`` in ``S`` with an identity adjoined."""
    m = len(T)
    z = zero_of(T)
    ctx = list(range(m)) + [None]

    def prod(a, s, b):
        x = s if a is None else T[a][s]
        return x if b is None else T[x][b]

    sig = [tuple(prod(a, s, b) == z for a in ctx for b in ctx) for s in range(m)]
    return canonical(sig)


def is_isomorphic_brute(T1, T2) -> bool:
    m = len(T1)
    if m != len(T2):
        return False
    for p in itertools.permutations(range(m)):
        if all(p[T1[a][b]] == T2[p[a]][p[b]] for a in range(m) for b in range(m)):
            return True
    return False
