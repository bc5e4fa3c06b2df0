"""Groupoids with zero, presheaves of groups, semidirect products, and recognisers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .congruences import (Congruence, enumerate_congruences, max_group_image, quotient, sigma)
from .morphisms import Homomorphism, find_isomorphism, generating_set, is_isomorphism
from .partitions import canonical_blocks
from .semigroup import EXHAUSTIVE_LIMIT, FiniteInvSemigroup, from_cayley_table
from .semilattice import SemilatticePoset, idempotent_semilattice
from .structure import (InconsistentTableError, _verify_category, compatibility, green_relations,
                        is_clifford, is_E_unitary, is_group, is_groupoid_with_zero, natural_order)


# -- groupoids --------------------------------------------------------------------


class GroupoidAxiomError(ValueError):
    pass


class FiniteGroupoid:
    """Arrows ``0 .. k-1`` with a partial composition table (``-1`` = undefined).

    ``composition[x, y]`` is ``x . y``, defined iff ``d(x) = r(y)``.
    """

    def __init__(self, composition, identities: Sequence[int], labels: Optional[Sequence[str]] = None,
                 exhaustive_limit: int = EXHAUSTIVE_LIMIT):
        C = np.asarray(composition, dtype=np.int64)
        k = len(C)
        if C.shape != (k, k) or k == 0:
            raise GroupoidAxiomError("composition table must be square and non-empty")
        if (C < -1).any() or (C >= k).any():
            raise GroupoidAxiomError("composition entries out of range")
        ids = sorted(set(int(e) for e in identities))
        ar = np.arange(k)
        for e in ids:
            row, col = C[e], C[:, e]
            if ((row != -1) & (row != ar)).any() or ((col != -1) & (col != ar)).any():
                raise GroupoidAxiomError(f"arrow {e} does not act as an identity")
        try:
            _verify_category(C, exhaustive_limit)
        except InconsistentTableError as exc:
            raise GroupoidAxiomError(str(exc)) from None
        dom = np.full(k, -1, dtype=np.int64)
        ran = np.full(k, -1, dtype=np.int64)
        for x in range(k):
            ds = [e for e in ids if C[x, e] != -1]
            rs = [e for e in ids if C[e, x] != -1]
            if len(ds) != 1 or len(rs) != 1:
                raise GroupoidAxiomError(f"(C3) fails at arrow {x}")
            dom[x], ran[x] = ds[0], rs[0]
        defined = C != -1
        if (defined != (dom[:, None] == ran[None, :])).any():
            raise GroupoidAxiomError("composition defined where d(x) != r(y) or vice versa")
        inverse = np.full(k, -1, dtype=np.int64)
        for x in range(k):
            cands = np.flatnonzero((C[x] == ran[x]) & (C[:, x] == dom[x]))
            if len(cands) == 0:
                raise GroupoidAxiomError(f"arrow {x} has no inverse")
            inverse[x] = cands[0]
        self.composition = C
        self.identities = tuple(ids)
        self.dom, self.ran, self.inverse = dom, ran, inverse
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(k))
        if len(set(self.labels)) != k:
            raise GroupoidAxiomError("labels must be distinct")

    def __len__(self) -> int:
        return len(self.composition)

    def hom(self, e: int, f: int) -> list[int]:
        return np.flatnonzero((self.dom == e) & (self.ran == f)).tolist()

    def end(self, e: int) -> list[int]:
        return self.hom(e, e)


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Arrows ``(i, j)`` from ``j`` to ``i`` at index ``i*n + j``."""
    k = n * n
    C = np.full((k, k), -1, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for l in range(n):
                C[i * n + j, j * n + l] = i * n + l
    labels = [f"({i},{j})" for i in range(n) for j in range(n)]
    return FiniteGroupoid(C, [i * n + i for i in range(n)], labels)


def groupoid_from_semigroup(S: FiniteInvSemigroup, elements: Optional[Sequence[int]] = None) -> tuple[FiniteGroupoid, list[int]]:
    """The restricted product on ``elements`` (default: all of S)."""
    elems = sorted(set(elements)) if elements is not None else list(range(S.order))
    pos = {s: i for i, s in enumerate(elems)}
    k = len(elems)
    C = np.full((k, k), -1, dtype=np.int64)
    for i, s in enumerate(elems):
        for j, t in enumerate(elems):
            if S.d[s] == S.r[t]:
                p = S.mul(s, t)
                if p not in pos:
                    raise GroupoidAxiomError("subset not closed under the restricted product")
                C[i, j] = pos[p]
    ids = [pos[s] for s in elems if S.idempotent_mask[s]]
    return FiniteGroupoid(C, ids, [S.labels[s] for s in elems]), elems


def adjoin_zero(G: FiniteGroupoid) -> FiniteInvSemigroup:
    """Undefined products become a new zero at the last index."""
    k = len(G)
    T = np.full((k + 1, k + 1), k, dtype=np.int64)
    T[:k, :k] = np.where(G.composition < 0, k, G.composition)
    label = "0" if "0" not in G.labels else "zero"
    S = from_cayley_table(T, labels=list(G.labels) + [label])
    if S.zero != k or not is_groupoid_with_zero(S):
        raise InconsistentTableError("adjoined zero misbehaves")
    return S


# -- presheaves of groups and Clifford semigroups ---------------------------------


class PresheafAxiomError(ValueError):
    pass


def _group_table(table) -> np.ndarray:
    G = np.asarray(table, dtype=np.int64)
    S = from_cayley_table(G)
    if not is_group(S) or S.identity != 0:
        raise PresheafAxiomError("each group table must be a group with identity at index 0")
    return G


class PresheafOfGroups:
    """Groups ``G_e`` over a semilattice with restrictions ``phi[(e, f)]`` for ``f <= e``.

    Group ``e`` is a Cayley table with identity at index 0.  Missing maps are
    filled by composing along chains, or as the trivial map when ``G_f`` is
    trivial; anything else missing is an error.  ``source`` optionally records
    the semigroup element behind each group element.
    """

    def __init__(self, semilattice: SemilatticePoset, groups: Sequence, maps: dict,
                 source: Optional[Sequence[Sequence[int]]] = None):
        Y = semilattice
        k = len(Y)
        if len(groups) != k:
            raise PresheafAxiomError("need one group per semilattice point")
        self.semilattice = Y
        self.groups = [_group_table(g) for g in groups]
        phi = {}
        for (e, f), img in maps.items():
            if not Y.leq[f, e]:
                raise PresheafAxiomError(f"map {e}->{f} given but {f} is not below {e}")
            arr = np.asarray(img, dtype=np.int64)
            if arr.shape != (len(self.groups[e]),) or (arr < 0).any() or (arr >= len(self.groups[f])).any():
                raise PresheafAxiomError(f"map {e}->{f} has the wrong shape")
            phi[(e, f)] = arr
        for e in range(k):
            phi.setdefault((e, e), np.arange(len(self.groups[e])))
        changed = True
        while changed:
            changed = False
            for (e, f) in list(phi):
                for (f2, g) in list(phi):
                    if f2 == f and (e, g) not in phi:
                        phi[(e, g)] = phi[(f, g)][phi[(e, f)]]
                        changed = True
        for e in range(k):
            for f in range(k):
                if Y.leq[f, e] and (e, f) not in phi:
                    # only maps out of or into a trivial group may be left out
                    Gf = self.groups[f]
                    if len(self.groups[e]) == 1:
                        one = int(np.flatnonzero(np.diag(Gf) == np.arange(len(Gf)))[0])
                        phi[(e, f)] = np.array([one], dtype=np.int64)
                    elif len(Gf) == 1:
                        phi[(e, f)] = np.zeros(len(self.groups[e]), dtype=np.int64)
                    else:
                        raise PresheafAxiomError(f"no restriction map from {e} to {f}")
        self.maps = phi
        self.source = [list(s) for s in source] if source is not None else None
        self.verify()

    def verify(self) -> None:
        Y, G, phi = self.semilattice, self.groups, self.maps
        k = len(Y)
        for (e, f), img in phi.items():
            A, B = G[e], G[f]
            if (img[A] != B[img[:, None], img[None, :]]).any():
                raise PresheafAxiomError(f"map {e}->{f} is not a homomorphism")
        for e in range(k):
            if not np.array_equal(phi[(e, e)], np.arange(len(G[e]))):
                raise PresheafAxiomError(f"(PG1) fails at {e}")
            for f in range(k):
                for g in range(k):
                    if Y.leq[f, e] and Y.leq[g, f]:
                        if not np.array_equal(phi[(f, g)][phi[(e, f)]], phi[(e, g)]):
                            raise PresheafAxiomError(f"(PG2) fails at {e} >= {f} >= {g}")

    def offsets(self) -> np.ndarray:
        sizes = [len(g) for g in self.groups]
        return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)

    def carrier_map(self) -> np.ndarray:
        """Element of the source semigroup behind each carrier index."""
        if self.source is None:
            raise ValueError("presheaf has no recorded source")
        return np.array([s for grp in self.source for s in grp], dtype=np.int64)


def clifford_from_presheaf(P: PresheafOfGroups) -> FiniteInvSemigroup:
    """Disjoint union of the groups; ``xy = phi(x) phi(y)`` in the group over ``e ^ f``.

    Element ``x`` of ``G_e`` sits at index ``offsets[e] + x``.
    """
    Y, G, phi = P.semilattice, P.groups, P.maps
    off = P.offsets()
    m = int(off[-1])
    point = np.repeat(np.arange(len(Y)), [len(g) for g in G])
    local = np.arange(m) - off[point]
    T = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        e, x = point[a], local[a]
        for b in range(m):
            f, y = point[b], local[b]
            i = Y.meet[e, f]
            T[a, b] = off[i] + G[i][phi[(e, i)][x], phi[(f, i)][y]]
    labels = [f"{Y.labels[point[a]]}:{local[a]}" for a in range(m)]
    S = from_cayley_table(T, labels=labels)
    if not is_clifford(S):
        raise InconsistentTableError("presheaf product is not Clifford")
    if sorted(S.idempotents.tolist()) != off[:-1].tolist():
        raise InconsistentTableError("idempotents are not the group identities")
    return S


def presheaf_from_clifford(S: FiniteInvSemigroup) -> PresheafOfGroups:
    """``G_e = {s : d(s) = e = r(s)}`` and ``phi(a) = a f``; the round trip is checked."""
    if not is_clifford(S):
        raise ValueError("semigroup is not Clifford")
    if not (S.d == S.r).all():
        raise InconsistentTableError("Clifford semigroup with d(s) != r(s)")
    Y = idempotent_semilattice(S)
    E = list(Y.source)
    members = []
    for e in E:
        grp = [s for s in range(S.order) if S.d[s] == e and s != e]
        members.append([e] + grp)
    tables, local = [], {}
    for grp in members:
        for i, s in enumerate(grp):
            local[s] = i
        tables.append(np.array([[local[S.mul(a, b)] for b in grp] for a in grp], dtype=np.int64))
    maps = {}
    for i, e in enumerate(E):
        for j, f in enumerate(E):
            if Y.leq[j, i]:
                maps[(i, j)] = np.array([local[S.mul(a, f)] for a in members[i]], dtype=np.int64)
    P = PresheafOfGroups(Y, tables, maps, source=members)
    back = clifford_from_presheaf(P)
    if not is_isomorphism(back, S, P.carrier_map()):
        raise InconsistentTableError("Clifford round trip is not an isomorphism")
    return P


# -- semidirect products ----------------------------------------------------------


class ActionAxiomError(ValueError):
    pass


class SemilatticeGroupAction:
    """A group acting on a semilattice by order automorphisms; ``act[g, e] = g . e``."""

    def __init__(self, group: FiniteInvSemigroup, semilattice: SemilatticePoset, act):
        if not is_group(group):
            raise ActionAxiomError("acting object is not a group")
        A = np.asarray(act, dtype=np.int64)
        G, Y = group, semilattice
        if A.shape != (G.order, len(Y)) or (A < 0).any() or (A >= len(Y)).any():
            raise ActionAxiomError("action table has the wrong shape")
        if (A[G.identity] != np.arange(len(Y))).any():
            raise ActionAxiomError("identity does not act trivially")
        # (gh).e = g.(h.e)
        if (A[G.product] != A[np.arange(G.order)[:, None, None], A[None, :, :]]).any():
            raise ActionAxiomError("action is not compatible with the group product")
        for g in range(G.order):
            if (Y.leq[np.ix_(A[g], A[g])] != Y.leq).any():
                raise ActionAxiomError(f"element {g} is not an order automorphism")
        if (A[:, Y.meet] != Y.meet[A[:, :, None], A[:, None, :]]).any():
            raise InconsistentTableError("order automorphism fails to preserve meets")
        self.group, self.semilattice, self.act = G, Y, A


def semidirect_product(A: SemilatticeGroupAction) -> FiniteInvSemigroup:
    """``P(G, Y)``: ``(e, g)(f, h) = (e ^ g.f, gh)``; ``(e, g)`` sits at ``e*|G| + g``."""
    G, Y, act = A.group, A.semilattice, A.act
    n, k = G.order, len(Y)
    m = n * k
    e = np.repeat(np.arange(k), n)
    g = np.tile(np.arange(n), k)
    left = Y.meet[e[:, None], act[g[:, None], e[None, :]]]
    T = left * n + G.product[g[:, None], g[None, :]]
    labels = [f"({Y.labels[e[i]]},{G.labels[g[i]]})" for i in range(m)]
    S = from_cayley_table(T, labels=labels)
    if not is_E_unitary(S):
        raise InconsistentTableError("semidirect product is not E-unitary")
    if set(S.idempotents.tolist()) != set((np.arange(k) * n + G.identity).tolist()):
        raise InconsistentTableError("idempotents are not (e, 1)")
    expected = Y.leq[e[:, None], e[None, :]] & (g[:, None] == g[None, :])
    if (natural_order(S) != expected).any():
        raise InconsistentTableError("natural order differs from e <= f and g = h")
    if not np.array_equal(sigma(S).blocks, canonical_blocks(g.tolist())):
        raise InconsistentTableError("sigma differs from equality of group coordinates")
    return S


def semilattice_automorphisms(Y: SemilatticePoset) -> list[np.ndarray]:
    """All order automorphisms, by backtracking with down-set/up-set size pruning."""
    k = len(Y)
    leq = Y.leq
    sig = [(int(leq[:, e].sum()), int(leq[e, :].sum())) for e in range(k)]
    out: list[np.ndarray] = []
    perm = [-1] * k
    used = [False] * k

    def rec(i: int) -> None:
        if i == k:
            out.append(np.array(perm, dtype=np.int64))
            return
        for c in range(k):
            if used[c] or sig[c] != sig[i]:
                continue
            if all(leq[j, i] == leq[perm[j], c] and leq[i, j] == leq[c, perm[j]] for j in range(i)):
                perm[i], used[c] = c, True
                rec(i + 1)
                perm[i], used[c] = -1, False

    rec(0)
    return out


def group_actions_on(G: FiniteInvSemigroup, Y: SemilatticePoset) -> list[np.ndarray]:
    """Every action of the group ``G`` on ``Y`` by order automorphisms."""
    auts = semilattice_automorphisms(Y)
    gens, parent, via = generating_set(G)
    order = _spanning_order(parent)
    out = []

    def rec(i: int, chosen: list[np.ndarray]) -> None:
        if i == len(gens):
            act = np.full((G.order, len(Y)), -1, dtype=np.int64)
            for g, a in zip(gens, chosen):
                act[g] = a
            for p in order:
                if parent[p] >= 0:
                    act[p] = act[parent[p]][act[via[p]]]
            try:
                SemilatticeGroupAction(G, Y, act)
            except ActionAxiomError:
                return
            out.append(act)
            return
        for a in auts:
            rec(i + 1, chosen + [a])

    rec(0, [])
    return out


def _spanning_order(parent: np.ndarray) -> list[int]:
    """Vertices ordered so that each parent precedes its children."""
    children: dict[int, list[int]] = {}
    roots = []
    for v, p in enumerate(parent.tolist()):
        if p < 0:
            roots.append(v)
        else:
            children.setdefault(p, []).append(v)
    out, stack = [], list(reversed(roots))
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(children.get(v, [])))
    return out


# -- star maps and recognition ----------------------------------------------------


def star_maps(theta: Homomorphism) -> tuple[bool, bool]:
    """``(star_injective, star_surjective)`` for the restrictions ``L_s -> L_theta(s)``.

    Star injectivity is checked against: idempotent preimages of idempotents,
    and relation-kernel inside compatibility.
    """
    S, T = theta.source, theta.target
    LS, LT = green_relations(S).L, green_relations(T).L
    img = theta.images
    injective = len(set(zip(LS.tolist(), img.tolist()))) == S.order
    surjective = True
    for cls in range(int(LS.max()) + 1):
        members = np.flatnonzero(LS == cls)
        target = set(np.flatnonzero(LT == LT[img[members[0]]]).tolist())
        if set(img[members].tolist()) != target:
            surjective = False
            break
    by_idem = bool(S.idempotent_mask[T.idempotent_mask[img]].all())
    ker = img[:, None] == img[None, :]
    by_compat = not (ker & ~compatibility(S)).any()
    if not injective == by_idem == by_compat:
        raise InconsistentTableError("star-injective characterisations disagree")
    return injective, surjective


def _group_congruences(G: FiniteInvSemigroup) -> list[Congruence]:
    return enumerate_congruences(G, cap=max(G.order, 1))


@dataclass
class RecognitionReport:
    conditions: dict[int, bool]
    agree: bool
    isomorphism: Optional[np.ndarray] = None   # S -> product, index array
    product: Optional[FiniteInvSemigroup] = None
    action: Optional[SemilatticeGroupAction] = None
    notes: list[str] = field(default_factory=list)

    @property
    def recognized(self) -> bool:
        return self.agree and all(self.conditions.values())


def _pair_bijective(S: FiniteInvSemigroup, first: np.ndarray) -> bool:
    sig = sigma(S).blocks
    pairs = set(zip(first.tolist(), sig.tolist()))
    return len(pairs) == S.order == len(S.idempotents) * (int(sig.max()) + 1)


def semidirect_recognition(S: FiniteInvSemigroup) -> RecognitionReport:
    """Evaluate six equivalent conditions for ``S`` being ``P(G, Y)``, independently."""
    G = max_group_image(S)
    Y = idempotent_semilattice(S)
    rho = sigma(S)
    conds: dict[int, bool] = {}
    notes: list[str] = []

    # (1) isomorphic to some P(S/sigma, E(S))
    found = None
    if G.order * len(Y) == S.order:
        for act in group_actions_on(G, Y):
            P = semidirect_product(SemilatticeGroupAction(G, Y, act))
            iso = find_isomorphism(S, P)
            if iso is not None:
                found = iso
                break
    conds[1] = found is not None

    # (2) E-unitary, and every (a, e) has b ~ a with d(b) = e
    two = is_E_unitary(S)
    if two:
        C = compatibility(S)
        E = set(S.idempotents.tolist())
        two = all(set(S.d[C[a]].tolist()) >= E for a in range(S.order))
    conds[2] = two

    # (3) the natural map to S/sigma is star bijective
    conds[3] = all(star_maps(Homomorphism(S, G, rho.blocks, strict=False)))

    # (4) some homomorphism onto a group is star bijective
    four = False
    for c in _group_congruences(G):
        blocks = c.blocks[rho.blocks]
        H = quotient(S, Congruence(S, blocks))
        if all(star_maps(Homomorphism(S, H, canonical_blocks(blocks.tolist()), strict=False))):
            four = True
            break
    conds[4] = four

    # (5) a -> (d(a), sigma(a)) and (6) a -> (r(a), sigma(a)) are bijections
    conds[5] = _pair_bijective(S, S.d)
    conds[6] = _pair_bijective(S, S.r)

    agree = len(set(conds.values())) == 1
    if not agree:
        notes.append("conditions disagree")
    report = RecognitionReport(conds, agree, notes=notes)
    if conds[5] and conds[6]:
        # sigma(s) . e = r(t) where d(t) = e and sigma(t) = sigma(s)
        n = G.order
        pos = {e: i for i, e in enumerate(Y.source)}
        act = np.empty((n, len(Y)), dtype=np.int64)
        for t in range(S.order):
            act[rho.blocks[t], pos[int(S.d[t])]] = pos[int(S.r[t])]
        A = SemilatticeGroupAction(G, Y, act)
        P = semidirect_product(A)
        iso = np.array([pos[int(S.r[a])] * n + rho.blocks[a] for a in range(S.order)], dtype=np.int64)
        if not is_isomorphism(S, P, iso):
            raise InconsistentTableError("(r(a), sigma(a)) is not an isomorphism onto P(G, Y)")
        report.isomorphism, report.product, report.action = iso, P, A
    return report
