"""Independent brute-force oracles used by the tests.

Nothing here imports the code paths being checked, apart from the plain
graph container.
"""

import itertools
import math
from collections import deque
from fractions import Fraction

import numpy as np

from markovcesaro.graph import Arc, LabelledGraph


def random_graph(rng, n_vertices, p=0.4, max_parallel=2, symbols=("a", "b"), start=0):
    arcs = []
    for u in range(n_vertices):
        for v in range(n_vertices):
            if rng.random() < p:
                for _ in range(int(rng.integers(1, max_parallel + 1))):
                    arcs.append(Arc(u, v, symbols[int(rng.integers(len(symbols)))]))
    return LabelledGraph(
        tuple(f"v{i}" for i in range(n_vertices)), tuple(arcs), tuple(symbols), start
    )


def reachability(g):
    """Transitive-reflexive closure by repeated relaxation."""
    n = g.n_vertices
    reach = [[u == v for v in range(n)] for u in range(n)]
    changed = True
    while changed:
        changed = False
        for a in g.arcs:
            for w in range(n):
                if reach[a.head][w] and not reach[a.tail][w]:
                    reach[a.tail][w] = True
                    changed = True
    return reach


def scc_by_reachability(g):
    reach = reachability(g)
    n = g.n_vertices
    comps = {frozenset(v for v in range(n) if reach[u][v] and reach[v][u]) for u in range(n)}
    return comps


def brute_path_count(g, u, v, n):
    """Count paths by walking arc by arc with a dictionary of frontier counts."""
    frontier = {u: 1}
    for _ in range(n):
        nxt = {}
        for w, k in frontier.items():
            for a in g.arcs:
                if a.tail == w:
                    nxt[a.head] = nxt.get(a.head, 0) + k
        frontier = nxt
    return frontier.get(v, 0)


def plain_matmul(x, y):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def arc_counts(g):
    n = g.n_vertices
    m = [[0] * n for _ in range(n)]
    for a in g.arcs:
        m[a.tail][a.head] += 1
    return m


def reduced_words(k, n):
    """Reduced words of length n in the free group with letters a.. / A..."""
    letters = [chr(ord("a") + i) for i in range(k)]
    letters += [s.upper() for s in letters]
    out = []
    for w in itertools.product(letters, repeat=n):
        if all(w[i] != w[i + 1].swapcase() for i in range(n - 1)):
            out.append(w)
    return out


def cayley_spheres(n_elements, mul, identity, gens, n_max):
    dist = {identity: 0}
    todo = deque([identity])
    while todo:
        x = todo.popleft()
        for s in gens:
            y = mul(x, s)
            if y not in dist:
                dist[y] = dist[x] + 1
                todo.append(y)
    assert len(dist) == n_elements
    return [sum(1 for d in dist.values() if d == n) for n in range(n_max + 1)]


def simple_cycle_lengths(g, comp):
    """Lengths of all simple directed cycles inside ``comp`` (brute force)."""
    comp = sorted(comp)
    adj = {u: {a.head for a in g.arcs if a.tail == u and a.head in comp} for u in comp}
    lengths = set()
    for size in range(1, len(comp) + 1):
        for cyc in itertools.permutations(comp, size):
            if cyc[0] != min(cyc):
                continue
            if all(cyc[(i + 1) % size] in adj[cyc[i]] for i in range(size)):
                lengths.add(size)
    return lengths


def cycle_gcd(g, comp):
    return math.gcd(*simple_cycle_lengths(g, comp))


def beta_by_expansion(m, n):
    """Integral of x^m (1-x)^n over [0, 1] by binomial expansion."""
    return sum(Fraction((-1) ** k * math.comb(n, k), m + k + 1) for k in range(n + 1))


def brute_spherical_average(act, g, phi, n):
    """Average of phi o T_l over all length-n paths from the start, by
    explicit enumeration and explicit composition of point maps."""
    phi = np.asarray(phi, dtype=float)
    paths = []

    def walk(v, labels):
        if len(labels) == n:
            paths.append(list(labels))
            return
        for a in g.arcs:
            if a.tail == v:
                walk(a.head, labels + [a.label])

    walk(g.start, [])
    if not paths:
        return np.zeros_like(phi)
    total = np.zeros_like(phi)
    for labels in paths:
        vals = np.empty_like(phi)
        for x in range(len(phi)):
            y = x
            for sym in reversed(labels):  # T_{l1} o ... o T_{lk}: last label acts first
                y = int(act.maps[sym][y])
            vals[x] = phi[y]
        total += vals
    return total / len(paths)
