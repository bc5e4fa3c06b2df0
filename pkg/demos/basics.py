"""Build a few inverse semigroups and look at their structure."""

from iskit import structure as st
from iskit.catalog import b2, symmetric_inverse_monoid_semigroup
from iskit.partial_maps import PartialBijection, invert
from iskit.semigroup import close_generators


def main():
    for n in (1, 2, 3):
        S = symmetric_inverse_monoid_semigroup(n)
        print(f"I({n}): {S.order} elements, {len(S.idempotents)} idempotents")

    # B2 from a single partial bijection x -> y
    a = PartialBijection.from_pairs(2, [(0, 1)])
    S = close_generators([a, invert(a)], names=["a", "a^-1"])
    print("generated:", S.order, "elements, labels", ", ".join(S.labels))

    B = b2()
    green = st.green_relations(B)
    print("B2 D-class sizes:", green.class_sizes("D"))
    leq = st.natural_order(B)
    print("pairs s <= t in B2:", int(leq.sum()))
    print("B2 is a groupoid with zero:", st.is_groupoid_with_zero(B))


if __name__ == "__main__":
    main()
