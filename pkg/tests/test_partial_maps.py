import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from iskit import partial_maps as pm
from iskit.partial_maps import PartialBijection

import oracles


@st.composite
def partial_bijections(draw, n=None):
    n = draw(st.integers(1, 5)) if n is None else n
    perm = draw(st.permutations(range(n)))
    keep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PartialBijection(tuple(p if k else None for p, k in zip(perm, keep)))


@st.composite
def same_carrier(draw, count):
    n = draw(st.integers(1, 5))
    return [draw(partial_bijections(n)) for _ in range(count)]


def I(n):
    return pm.symmetric_inverse_monoid(n)


def test_construction_rejects_bad_maps():
    with pytest.raises(ValueError):
        PartialBijection((0, 0))
    with pytest.raises(ValueError):
        PartialBijection((2, None))
    with pytest.raises(ValueError):
        PartialBijection(())
    with pytest.raises(ValueError):
        PartialBijection.from_pairs(2, [(0, 0), (0, 1)])


def test_compose_right_factor_first():
    f = PartialBijection.from_pairs(3, [(0, 1), (1, 2)])
    g = PartialBijection.from_pairs(3, [(2, 0)])
    assert pm.compose(f, g) == PartialBijection.from_pairs(3, [(2, 1)])
    assert pm.compose(g, f) == PartialBijection.from_pairs(3, [(1, 0)])


def test_carrier_mismatch():
    with pytest.raises(ValueError):
        pm.compose(PartialBijection.identity(2), PartialBijection.identity(3))
    with pytest.raises(ValueError):
        pm.restriction_leq(PartialBijection.identity(2), PartialBijection.identity(3))


def test_invert_examples():
    f = PartialBijection.from_pairs(3, [(0, 2), (1, 0)])
    assert pm.invert(f) == PartialBijection.from_pairs(3, [(2, 0), (0, 1)])
    assert pm.invert(PartialBijection.empty(3)) == PartialBijection.empty(3)


def test_idempotent_examples():
    assert pm.is_idempotent(PartialBijection.identity(2, [0, 1]))
    assert not pm.is_idempotent(PartialBijection.from_pairs(2, [(0, 1)]))
    assert sum(pm.is_idempotent(f) for f in I(2)) == 4


def test_restriction_examples():
    assert pm.restriction_leq(PartialBijection.identity(2, [0]), PartialBijection.identity(2))
    assert pm.restriction_leq(PartialBijection.from_pairs(2, [(0, 1)]),
                              PartialBijection.from_pairs(2, [(0, 1), (1, 0)]))
    assert not pm.restriction_leq(PartialBijection.from_pairs(2, [(0, 0)]),
                                  PartialBijection.from_pairs(2, [(0, 1)]))


def test_meet_and_join_examples():
    swap = PartialBijection.from_pairs(2, [(0, 1), (1, 0)])
    a = PartialBijection.from_pairs(2, [(0, 1)])
    assert pm.meet(swap, a) == a
    joined = pm.join_compatible([PartialBijection.identity(2, [0]), PartialBijection.identity(2, [1])])
    assert joined == PartialBijection.identity(2)
    assert pm.join_compatible([PartialBijection.from_pairs(2, [(0, 0)]),
                               PartialBijection.from_pairs(2, [(0, 1)])]) is None


def test_orthogonal_join_is_identity():
    e0, e1 = PartialBijection.identity(2, [0]), PartialBijection.identity(2, [1])
    assert pm.orthogonal(e0, e1)
    assert not pm.orthogonal(e0, e0)


def test_enumeration_sizes():
    for n, size in [(1, 2), (2, 7), (3, 34)]:
        assert len(I(n)) == size == oracles.closed_form_In(n)
    assert len(set(I(3))) == 34
    assert set(f.images for f in I(3)) == set(oracles.all_partial_bijections(3))
    assert pm.symmetric_inverse_monoid_order(5) == 1546
    with pytest.raises(ValueError):
        pm.symmetric_inverse_monoid(6)


def test_associativity_exhaustive_I3():
    maps = I(3)
    idx = {f: i for i, f in enumerate(maps)}
    T = np.array([[idx[pm.compose(f, g)] for g in maps] for f in maps])
    ar = np.arange(len(maps))
    left = T[T[:, :, None], ar[None, None, :]]
    right = T[ar[:, None, None], T[None, :, :]]
    assert (left == right).all()


def test_laws_exhaustive_I3():
    maps = I(3)
    for f, g in itertools.product(maps, maps):
        assert pm.invert(pm.compose(f, g)) == pm.compose(pm.invert(g), pm.invert(f))
        graph_leq = f.graph() <= g.graph()
        assert pm.restriction_leq(f, g) == graph_leq
        assert graph_leq == (f == pm.compose(g, pm.compose(pm.invert(f), f)))
        union = f.graph() | g.graph()
        xs = [x for x, _ in union]
        ys = [y for _, y in union]
        is_pb = len(set(xs)) == len(xs) and len(set(ys)) == len(ys)
        assert pm.compatible(f, g) == is_pb
        assert (pm.join_compatible([f, g]) is not None) == is_pb


def test_idempotents_commute_exhaustive_I3():
    E = [f for f in I(3) if pm.is_idempotent(f)]
    for e, f in itertools.product(E, E):
        both = PartialBijection.identity(3, e.domain & f.domain)
        assert pm.compose(e, f) == pm.compose(f, e) == both


def test_packed_round_trip():
    maps = I(2)
    P = pm.pack(maps)
    assert [pm.unpack(r) for r in P] == maps
    inv = pm.invert_packed(P)
    assert [pm.unpack(r) for r in inv] == [pm.invert(f) for f in maps]


@given(same_carrier(3))
def test_associativity(fs):
    f, g, h = fs
    assert pm.compose(pm.compose(f, g), h) == pm.compose(f, pm.compose(g, h))


@given(same_carrier(2))
def test_inverse_laws(fs):
    f, g = fs
    assert pm.compose(f, pm.compose(pm.invert(f), f)) == f
    assert pm.invert(pm.invert(f)) == f
    assert pm.invert(pm.compose(f, g)) == pm.compose(pm.invert(g), pm.invert(f))
    assert pm.is_idempotent(pm.compose(pm.invert(f), f))


@given(same_carrier(2))
def test_meet_is_glb(fs):
    f, g = fs
    m = pm.meet(f, g)
    assert pm.restriction_leq(m, f) and pm.restriction_leq(m, g)
    assert m.graph() == f.graph() & g.graph()


@given(same_carrier(2))
def test_compatibility_matches_union(fs):
    f, g = fs
    union = f.graph() | g.graph()
    xs, ys = [x for x, _ in union], [y for _, y in union]
    assert pm.compatible(f, g) == (len(set(xs)) == len(xs) and len(set(ys)) == len(ys))
    if pm.orthogonal(f, g):
        assert pm.compatible(f, g)


@given(same_carrier(3))
def test_join_is_union(fs):
    j = pm.join_compatible(fs)
    if j is not None:
        assert j.graph() == frozenset().union(*(f.graph() for f in fs))
        assert all(pm.restriction_leq(f, j) for f in fs)


@given(same_carrier(2))
def test_packed_compose_agrees(fs):
    f, g = fs
    P = pm.pack([f, g])
    assert pm.unpack(pm.compose_packed(P[:1], P[1:])[0]) == pm.compose(f, g)
