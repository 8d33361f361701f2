"""Asymptotics of path counts: period, growth rate and constant per residue.

Run: python demos/regular_asymptotics.py
"""

from markovcesaro.codings import build_free_group
from markovcesaro.graph import parse_graph
from markovcesaro.regularity import (
    descriptor_of_pair,
    descriptor_of_spheres,
    subsequence_constants,
    validate_descriptor,
)


def describe(title, d):
    print(title)
    for r, cls in enumerate(d.classes):
        if cls.is_zero and cls.horizon < r:
            print(f"  n = {r} mod {d.q}: always zero")
        elif cls.is_zero:
            print(f"  n = {r} mod {d.q}: zero beyond n = {cls.horizon}")
        else:
            print(f"  n = {r} mod {d.q}: ~ {float(cls.a):.6g} * n^{cls.b} * {cls.c:.6g}^n")
    report = validate_descriptor(d, 100, 200)
    print(f"  worst relative deviation on [100, 200]: {report.max_deviation:.3g}\n")


# Two loops feeding into three loops: 3^n - 2^n paths, so the constant is 1.
loops = parse_graph("""
alphabet a b c
vertex u
vertex v
edge u u a
edge u u b
edge u v c
edge v v a
edge v v b
edge v v c
""")
describe("two loops, then three loops (u -> v)", descriptor_of_pair(loops, "u", "v"))

# Equal rates stacked in a chain give polynomial corrections.
chain = parse_graph("alphabet a\nvertex u\nvertex v\nvertex w\n"
                    "edge u u a\nedge u v a\nedge v v a\nedge v w a\nedge w w a\n")
describe("three single loops in a chain (u -> w)", descriptor_of_pair(chain, "u", "w"))

# A bipartite block has period 2; odd lengths never return.
bip = parse_graph("alphabet a b\nvertex u\nvertex v\n"
                  "edge u v a\nedge u v b\nedge v u a\nedge v u b\n")
d = descriptor_of_pair(bip, "u", "u")
describe("bipartite block (u -> u)", d)
a, b, c = subsequence_constants(d, 0)
print(f"  along n = 2k the same limit reads {float(a):g} * k^{b} * {c:g}^k\n")

describe("F2 sphere sizes", descriptor_of_spheres(build_free_group(2)))
