"""I(2) acting on two points, compared with its coset action."""

from iskit import actions as ac
from iskit.catalog import symmetric_inverse_monoid_semigroup


def main():
    S = symmetric_inverse_monoid_semigroup(2)
    A = ac.natural_action(S)
    H = ac.stabilizer(A, 0)
    print("stabiliser of point 0:", [S.labels[h] for h in H])
    space = ac.coset_space(S, H)
    for rep, coset in zip(space.representatives, space.cosets):
        print(f"  coset of {S.labels[rep]}: {[S.labels[c] for c in coset]}")
    B, alpha = ac.canonical_equivalence(A, 0)
    print("point -> coset:", alpha.tolist(), "equivariant:", ac.is_equivalence(A, B, alpha))
    s = ac.are_conjugate(S, H, ac.stabilizer(A, 1))
    print("conjugating element:", S.labels[s])


if __name__ == "__main__":
    main()
