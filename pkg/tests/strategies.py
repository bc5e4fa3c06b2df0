"""Hypothesis strategies producing small inverse semigroups."""

from hypothesis import strategies as st

from iskit.partial_maps import PartialBijection
from iskit.semigroup import close_generators


@st.composite
def partial_bijection(draw, n):
    perm = draw(st.permutations(range(n)))
    keep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PartialBijection(tuple(p if k else None for p, k in zip(perm, keep)))


@st.composite
def generator_sets(draw, max_points=3, max_gens=3):
    n = draw(st.integers(1, max_points))
    k = draw(st.integers(1, max_gens))
    return [draw(partial_bijection(n)) for _ in range(k)]


@st.composite
def generated_semigroups(draw, max_points=3, max_gens=3):
    """Inverse subsemigroups of ``I(n)`` with ``n <= max_points`` (so at most 34 elements)."""
    return close_generators(draw(generator_sets(max_points, max_gens)))


def table_lists(S):
    return S.product.tolist()
