"""Sphere sizes of a few groups, read off their Markov codings.

Run: python demos/sphere_growth.py
"""

from markovcesaro.codings import (
    build_finite_group_shortlex,
    build_free_group,
    build_free_semigroup,
    symmetric_group_oracle,
    verify_bijectivity,
    free_group_oracle,
)
from markovcesaro.counting import count_table


def show(name, g, n_max=8):
    spheres = count_table(g, n_max).spheres
    print(f"{name:<22} {list(spheres)}")


print("Paths of length n from the start vertex are the elements of norm n.\n")
show("free semigroup, k=2", build_free_semigroup(2))
show("free group, k=1 (Z)", build_free_group(1))
show("free group, k=2", build_free_group(2))
s4 = symmetric_group_oracle(4)
show("S4, adjacent swaps", build_finite_group_shortlex(s4))

# The counts are exact integers, so there is no trouble far beyond 64 bits.
big = count_table(build_free_group(2), 200).spheres[200]
print(f"\n#S(200) in F2 has {len(str(big))} digits and equals 4*3^199: {big == 4 * 3**199}")

# The automaton really is a coding: compare against reduced words directly.
print("\nchecking the F2 automaton against free reductions up to length 7 ...")
print(verify_bijectivity(build_free_group(2), free_group_oracle(2), 7))
