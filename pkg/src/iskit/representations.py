"""Wagner-Preston, the Munn semigroup and representation, and related reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import partial_maps as pm
from .congruences import (NormalSubsemigroup, centralizer_of_idempotents, is_fundamental,
                          kernel_of_hom, mu)
from .constructions import PresheafOfGroups, presheaf_from_clifford
from .morphisms import Homomorphism
from .partial_maps import PartialBijection
from .semigroup import MAX_CARRIER, CapExceededError, FiniteInvSemigroup, semigroup_from_maps
from .semilattice import SemilatticePoset, idempotent_semilattice
from .structure import InconsistentTableError


class NotFundamentalError(ValueError):
    pass


# -- Wagner-Preston ---------------------------------------------------------------


def wagner_preston_maps(S: FiniteInvSemigroup) -> list[PartialBijection]:
    """``theta_a(x) = ax`` on ``d(a) S``, as partial bijections of the elements of S."""
    T, d = S.product, S.d
    m = S.order
    out = []
    for a in range(m):
        in_dom = T[d[a]] == np.arange(m)  # x in eS iff ex = x
        out.append(PartialBijection(tuple(int(T[a, x]) if in_dom[x] else None for x in range(m))))
    return out


def wagner_preston(S: FiniteInvSemigroup) -> Homomorphism:
    """Injective homomorphism into the partial bijections of ``|S|`` points.

    The target is the image (the maps themselves, in element order, labelled as
    in ``S``).  ``theta_a theta_b = theta_ab`` is checked as partial maps.
    """
    maps = wagner_preston_maps(S)
    if len(set(maps)) != S.order:
        raise InconsistentTableError("Wagner-Preston map is not injective")
    packed = pm.pack(maps)
    composed = pm.compose_all_packed(packed, packed)  # composed[a, b] = theta_a theta_b
    expected = packed[S.product]
    if (composed != expected).any():
        a, b = np.argwhere((composed != expected).any(axis=2))[0]
        raise InconsistentTableError(f"theta_a theta_b != theta_ab at ({a}, {b})")
    target = semigroup_from_maps(maps, labels=S.labels)
    return Homomorphism(S, target, np.arange(S.order))


# -- Munn semigroup ---------------------------------------------------------------


def _order_isomorphisms(E: SemilatticePoset, e: int, f: int) -> list[dict[int, int]]:
    """Order isomorphisms from the ideal below ``e`` onto the ideal below ``f``."""
    src, dst = E.down(e).tolist(), E.down(f).tolist()
    if len(src) != len(dst):
        return []
    leq = E.leq
    size = {x: (int(leq[src][:, x].sum()), int(leq[x, src].sum())) for x in src}
    dsize = {y: (int(leq[dst][:, y].sum()), int(leq[y, dst].sum())) for y in dst}
    out = []
    assign: dict[int, int] = {}

    def rec(i: int) -> None:
        if i == len(src):
            out.append(dict(assign))
            return
        x = src[i]
        for y in dst:
            if y in assign.values() or dsize[y] != size[x]:
                continue
            if all(leq[x, u] == leq[y, v] and leq[u, x] == leq[v, y] for u, v in assign.items()):
                assign[x] = y
                rec(i + 1)
                del assign[x]

    rec(0)
    return out


def munn_semigroup(E: SemilatticePoset, cap: int = MAX_CARRIER) -> FiniteInvSemigroup:
    """``T_E``: order isomorphisms between principal ideals, as partial bijections of E's points."""
    k = len(E)
    if k > cap:
        raise CapExceededError("max-carrier", cap, f"semilattice of size {k} exceeds cap {cap}")
    ideals = sorted(range(k), key=lambda e: (len(E.down(e)), int(E.down(e).min()), e))
    maps = []
    for e in ideals:
        for f in ideals:
            for iso in _order_isomorphisms(E, e, f):
                maps.append(PartialBijection.from_pairs(k, sorted(iso.items())))
    TE = semigroup_from_maps(maps)
    # E(T_E) is E via e -> 1_{e down}
    idx = np.array([TE.index_of_map(PartialBijection.identity(k, E.down(e).tolist())) for e in range(k)])
    if sorted(idx.tolist()) != TE.idempotents.tolist():
        raise InconsistentTableError("idempotents of T_E are not the ideal identities")
    if (TE.product[idx[:, None], idx[None, :]] != idx[E.meet]).any():
        raise InconsistentTableError("E(T_E) is not isomorphic to E")
    return TE


def munn_maps(S: FiniteInvSemigroup) -> list[PartialBijection]:
    """``delta_s(e) = s e s^-1`` on the ideal below ``d(s)``; points are positions in E(S)."""
    E = idempotent_semilattice(S)
    src = np.array(E.source)
    pos = np.full(S.order, -1, dtype=np.int64)
    pos[src] = np.arange(len(src))
    T, inv = S.product, S.inverse
    out = []
    for s in range(S.order):
        dom = E.down(int(pos[S.d[s]]))
        imgs = pos[T[T[s, src[dom]], inv[s]]]
        out.append(PartialBijection.from_pairs(len(E), zip(dom.tolist(), imgs.tolist())))
    return out


def munn_representation(S: FiniteInvSemigroup, cap: int = MAX_CARRIER) -> Homomorphism:
    """The Munn representation ``delta``.

    The target is ``T_E(S)`` when ``|E(S)| <= cap`` and the image semigroup
    otherwise.  Checks: idempotent-separating, relation kernel equal to ``mu``,
    image a wide inverse subsemigroup.
    """
    maps = munn_maps(S)
    E = idempotent_semilattice(S)
    if len(E) <= cap:
        target = munn_semigroup(E, cap)
    else:
        target = semigroup_from_maps(list(dict.fromkeys(maps)))
    images = np.array([target.index_of_map(f) for f in maps], dtype=np.int64)
    delta = Homomorphism(S, target, images, strict=False)
    if not delta.is_idempotent_separating():
        raise InconsistentTableError("Munn representation is not idempotent-separating")
    if not np.array_equal(delta.relation_kernel(), mu(S).blocks):
        raise InconsistentTableError("kernel of the Munn representation differs from mu")
    img = set(images.tolist())
    if not set(target.idempotents.tolist()) <= img:
        raise InconsistentTableError("Munn image is not wide")
    target.subsemigroup(img)  # raises unless an inverse subsemigroup
    return delta


def munn_image(S: FiniteInvSemigroup, cap: int = MAX_CARRIER) -> tuple[FiniteInvSemigroup, Homomorphism]:
    """The image of ``delta`` as a semigroup, with the surjection onto it."""
    delta = munn_representation(S, cap)
    sub, incl = delta.target.subsemigroup(delta.image_set())
    pos = np.full(delta.target.order, -1, dtype=np.int64)
    pos[incl] = np.arange(len(incl))
    return sub, Homomorphism(S, sub, pos[delta.images], strict=False)


# -- T0 realisation ---------------------------------------------------------------


@dataclass
class T0Report:
    points: list[str]
    base: list[list[str]]
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def t0_realization_check(S: FiniteInvSemigroup) -> T0Report:
    """Realise a fundamental ``S`` on the points of ``E(S)`` with base ``{e down}``."""
    if not is_fundamental(S):
        raise NotFundamentalError("semigroup is not fundamental")
    E = idempotent_semilattice(S)
    k = len(E)
    base = [frozenset(E.down(e).tolist()) for e in range(k)]
    base_set = set(base)
    checks = {}
    checks["covers points"] = set().union(*base) == set(range(k))
    checks["closed under intersection"] = all((a & b) in base_set or not (a & b) for a in base for b in base)
    checks["T0"] = all(any((x in B) != (y in B) for B in base) for x in range(k) for y in range(x + 1, k))
    maps = munn_maps(S)
    opens = []
    ok = True
    for f in maps:
        dom = frozenset(f.domain)
        img = frozenset(f.image)
        if dom not in base_set or img not in base_set:
            ok = False
        # basic open subsets of the domain go to basic open sets
        for B in base:
            if B <= dom and frozenset(f(x) for x in B) not in base_set:
                ok = False
        opens.append(dom)
    checks["maps are homeomorphisms between open sets"] = ok
    checks["domains form the base"] = set(opens) == base_set
    checks["faithful"] = len(set(maps)) == S.order
    order = sorted(range(k), key=lambda e: (len(base[e]), min(base[e]), e))
    base_labels = [[E.labels[x] for x in sorted(base[e])] for e in order]
    return T0Report(list(E.labels), base_labels, checks)


# -- idempotent-separating extension ----------------------------------------------


@dataclass
class ExtensionDecomposition:
    kernel: NormalSubsemigroup
    presheaf: PresheafOfGroups
    image: FiniteInvSemigroup
    delta: Homomorphism


def extension_decomposition(S: FiniteInvSemigroup, cap: int = MAX_CARRIER) -> ExtensionDecomposition:
    """``S`` as an idempotent-separating extension of ``Z(E(S))`` by its Munn image."""
    K = centralizer_of_idempotents(S)
    sub, _ = S.subsemigroup(K.elements)
    P = presheaf_from_clifford(sub)
    image, delta = munn_image(S, cap)
    if kernel_of_hom(delta).elements != K.elements:
        raise InconsistentTableError("Kernel of delta differs from Z(E(S))")
    if not is_fundamental(image):
        raise InconsistentTableError("Munn image is not fundamental")
    return ExtensionDecomposition(K, P, image, delta)
