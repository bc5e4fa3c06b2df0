"""sigma, mu and xi on small fixtures, and congruence counts by enumeration."""

from iskit import congruences as cg
from iskit.catalog import small_fixtures


def main():
    print(f"{'name':28} {'|S|':>3} {'sigma':>5} {'mu':>3} {'xi':>3} {'congs':>5}  fundamental")
    for name, S in small_fixtures(12).items():
        xi = cg.xi(S).num_classes if S.zero is not None else "-"
        n = len(cg.enumerate_congruences(S))
        print(f"{name:28} {S.order:>3} {cg.sigma(S).num_classes:>5} {cg.mu(S).num_classes:>3} "
              f"{xi!s:>3} {n:>5}  {cg.is_fundamental(S)}")


if __name__ == "__main__":
    main()
