"""Built-in Markov codings and a brute-force bijectivity verifier.

A coding is a labelled graph with a start vertex whose paths from the start
correspond one-to-one, and length-preservingly, to elements of a
(semi)group with its word norm.
"""

from __future__ import annotations

import re
import string
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .counting import PathCapExceeded, enumerate_paths
from .graph import Arc, LabelledGraph

__all__ = [
    "GroupOracle",
    "BijectivityReport",
    "generator_symbols",
    "free_semigroup_oracle",
    "free_group_oracle",
    "finite_group_oracle",
    "cyclic_group_oracle",
    "symmetric_group_oracle",
    "parse_group_table",
    "free_group_inverses",
    "build_free_semigroup",
    "build_free_group",
    "build_finite_group_shortlex",
    "verify_bijectivity",
]


def generator_symbols(k: int) -> tuple[str, ...]:
    if not 1 <= k <= 26:
        raise ValueError("number of generators must be between 1 and 26")
    return tuple(string.ascii_lowercase[:k])


def free_group_inverses(k: int) -> dict[str, str]:
    """Symbol -> inverse symbol for the free group alphabet (a <-> A, ...)."""
    out = {}
    for s in generator_symbols(k):
        out[s] = s.upper()
        out[s.upper()] = s
    return out


@dataclass(frozen=True)
class GroupOracle:
    """Reference (semi)group: evaluates words and knows the word norm.

    ``kind`` is ``"free_semigroup"``, ``"free_group"`` or ``"finite"``.  For
    finite groups ``table[i][j]`` is the index of ``elements[i] * elements[j]``.
    """

    kind: str
    rank: int = 0
    elements: tuple[str, ...] = ()
    table: tuple[tuple[int, ...], ...] = ()
    generators: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind in ("free_semigroup", "free_group"):
            generator_symbols(self.rank)
        elif self.kind == "finite":
            self._check_table()
        else:
            raise ValueError(f"unknown oracle kind {self.kind!r}")

    def _check_table(self) -> None:
        n = len(self.elements)
        t = np.array(self.table, dtype=int)
        if t.shape != (n, n) or n == 0 or t.min() < 0 or t.max() >= n:
            raise ValueError("multiplication table must be square over the elements")
        if not np.array_equal(t[t, :], t[:, t]):
            raise ValueError("multiplication table is not associative")
        e = self.identity
        for i in range(n):
            if e not in t[i]:
                raise ValueError(f"element {self.elements[i]!r} has no inverse")
        unknown = [s for s in self.generators if s not in self.elements]
        if unknown:
            raise ValueError(f"unknown generators {unknown}")
        if len(self._distances()) != n:
            raise ValueError("generators do not generate the group")

    @cached_property
    def identity(self) -> int:
        t = self.table
        for e in range(len(self.elements)):
            if all(t[e][x] == x and t[x][e] == x for x in range(len(self.elements))):
                return e
        raise ValueError("multiplication table has no identity")

    def symbols(self) -> tuple[str, ...]:
        if self.kind == "free_semigroup":
            return generator_symbols(self.rank)
        if self.kind == "free_group":
            gens = generator_symbols(self.rank)
            return gens + tuple(s.upper() for s in gens)
        return self.generators

    def _distances(self) -> dict[int, int]:
        return self._cayley_distances

    @cached_property
    def _cayley_distances(self) -> dict[int, int]:
        gens = [self.elements.index(s) for s in self.generators]
        start = self.identity
        dist = {start: 0}
        todo = deque([start])
        while todo:
            x = todo.popleft()
            for s in gens:
                y = self.table[x][s]
                if y not in dist:
                    dist[y] = dist[x] + 1
                    todo.append(y)
        return dist

    def evaluate(self, word: Sequence[str]):
        if self.kind == "free_semigroup":
            return tuple(word)
        if self.kind == "free_group":
            out: list[str] = []
            for s in word:
                if out and out[-1] == s.swapcase():
                    out.pop()
                else:
                    out.append(s)
            return tuple(out)
        index = {name: i for i, name in enumerate(self.elements)}
        x = self.identity
        for s in word:
            x = self.table[x][index[s]]
        return x

    def norm(self, element) -> int:
        if self.kind != "finite":
            return len(element)
        return self._distances()[element]

    def sphere_size(self, n: int) -> int:
        if self.kind == "free_semigroup":
            return self.rank**n
        if self.kind == "free_group":
            return 1 if n == 0 else 2 * self.rank * (2 * self.rank - 1) ** (n - 1)
        return sum(1 for d in self._distances().values() if d == n)

    def inverse(self, name: str) -> str:
        i = self.elements.index(name)
        e = self.identity
        j = next(j for j in range(len(self.elements)) if self.table[i][j] == e)
        return self.elements[j]

    def symmetrized(self) -> tuple["GroupOracle", bool]:
        """Oracle whose generator list is closed under inverses."""
        gens = list(self.generators)
        for s in self.generators:
            inv = self.inverse(s)
            if inv not in gens:
                gens.append(inv)
        changed = len(gens) != len(self.generators)
        return GroupOracle("finite", 0, self.elements, self.table, tuple(gens)), changed


def free_semigroup_oracle(k: int) -> GroupOracle:
    return GroupOracle("free_semigroup", rank=k)


def free_group_oracle(k: int) -> GroupOracle:
    return GroupOracle("free_group", rank=k)


def finite_group_oracle(
    elements: Sequence[str], table: Sequence[Sequence[int]], generators: Sequence[str]
) -> GroupOracle:
    return GroupOracle(
        "finite", 0, tuple(elements), tuple(tuple(int(x) for x in row) for row in table), tuple(generators)
    )


def cyclic_group_oracle(n: int) -> GroupOracle:
    """Z/n with generators +1 and -1, elements named by residue."""
    names = [str(i) for i in range(n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    gens = [] if n == 1 else sorted({"1", str(n - 1)}, key=int)
    return finite_group_oracle(names, table, gens)


def symmetric_group_oracle(n: int) -> GroupOracle:
    """S_n as one-line permutations with adjacent transpositions as generators.

    The product x*y acts as "first x, then y" on positions.
    """
    from itertools import permutations

    perms = list(permutations(range(n)))
    names = ["".join(str(i + 1) for i in p) for p in perms]
    where = {p: i for i, p in enumerate(perms)}
    table = [[where[tuple(y[x[i]] for i in range(n))] for y in perms] for x in perms]
    gens = []
    for i in range(n - 1):
        t = list(range(n))
        t[i], t[i + 1] = t[i + 1], t[i]
        gens.append(names[where[tuple(t)]])
    return finite_group_oracle(names, table, gens)


def parse_group_table(text: str) -> GroupOracle:
    """Element names, one table row per element, then ``generators: ...``."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 3 or not lines[-1].startswith("generators:"):
        raise ValueError("group table needs names, rows and a final generators line")
    split = lambda s: [t for t in re.split(r"[,\s]+", s) if t]
    names = split(lines[0])
    rows = [split(ln) for ln in lines[1:-1]]
    gens = split(lines[-1][len("generators:") :])
    if len(rows) != len(names) or any(len(r) != len(names) for r in rows):
        raise ValueError("table must have one full row per element")
    index = {name: i for i, name in enumerate(names)}
    try:
        table = [[index[x] for x in row] for row in rows]
    except KeyError as exc:
        raise ValueError(f"unknown element {exc.args[0]!r} in table") from None
    return finite_group_oracle(names, table, gens)


def build_free_semigroup(k: int) -> LabelledGraph:
    """One vertex carrying k loops."""
    syms = generator_symbols(k)
    return LabelledGraph(("o",), tuple(Arc(0, 0, s) for s in syms), syms, 0)


def build_free_group(k: int) -> LabelledGraph:
    """No-backtracking automaton for the free group on k generators.

    Vertex ``s`` means "the last letter was s"; it has an arc to every letter
    except the inverse of s, labelled by that letter.
    """
    gens = generator_symbols(k)
    syms = gens + tuple(s.upper() for s in gens)
    vertices = ("start",) + syms
    arcs = [Arc(0, 1 + j, s) for j, s in enumerate(syms)]
    for i, s in enumerate(syms):
        for j, t in enumerate(syms):
            if t != s.swapcase():
                arcs.append(Arc(1 + i, 1 + j, t))
    return LabelledGraph(vertices, tuple(arcs), syms, 0)


def build_finite_group_shortlex(oracle: GroupOracle) -> LabelledGraph:
    """Tree of shortlex-least geodesics in the Cayley graph.

    Breadth-first search from the identity, expanding elements in shortlex
    order of their normal forms and generators in list order, reaches every
    element first through its shortlex-least geodesic nf(g)*s.  Those
    discovery arcs are the coding.
    """
    if oracle.kind != "finite":
        raise ValueError("shortlex coding needs a finite group table")
    sym, changed = oracle.symmetrized()
    if changed:
        warnings.warn(
            f"generating set closed under inverses: {list(sym.generators)}", stacklevel=2
        )
    gens = [sym.elements.index(s) for s in sym.generators]
    root = sym.identity
    order = [root]
    seen = {root}
    arcs = []
    for x in order:
        for s, name in zip(gens, sym.generators):
            y = sym.table[x][s]
            if y not in seen:
                seen.add(y)
                order.append(y)
                arcs.append((x, y, name))
    if len(order) != len(sym.elements):
        raise ValueError("generators do not generate the group")
    pos = {x: i for i, x in enumerate(order)}
    return LabelledGraph(
        tuple(sym.elements[x] for x in order),
        tuple(Arc(pos[x], pos[y], s) for x, y, s in arcs),
        sym.generators,
        0,
    )


@dataclass(frozen=True)
class BijectivityReport:
    passed: bool
    n_max: int
    spheres: tuple[int, ...]
    failure_n: Optional[int] = None
    witness: Optional[tuple[str, ...]] = None
    reason: str = ""

    def __str__(self) -> str:
        if self.passed:
            return f"pass: n <= {self.n_max}, spheres {list(self.spheres)}"
        word = "".join(self.witness or ()) or "(empty word)"
        return f"fail at n = {self.failure_n}: {self.reason}; witness {word}"


def verify_bijectivity(
    g: LabelledGraph, oracle: GroupOracle, n_max: int, cap: int = 10**6
) -> BijectivityReport:
    """Check that paths from the start map injectively onto spheres of the
    oracle with norm equal to path length, for every length up to n_max."""
    if g.start is None:
        raise ValueError("graph has no start vertex")
    alien = [s for s in g.alphabet if s not in oracle.symbols()]
    if alien:
        raise ValueError(f"labels {alien} are not generators of the oracle")
    seen: dict = {}
    spheres = []
    budget = cap
    for n in range(n_max + 1):
        words = enumerate_paths(g, g.start, None, n, cap=budget)
        budget -= len(words)
        if budget < 0:
            raise PathCapExceeded(f"more than {cap} paths up to length {n}")
        for word in words:
            x = oracle.evaluate(word)
            if oracle.norm(x) != n:
                return BijectivityReport(
                    False, n_max, tuple(spheres), n, word,
                    f"element has norm {oracle.norm(x)}, path length {n}",
                )
            if x in seen:
                return BijectivityReport(
                    False, n_max, tuple(spheres), n, word,
                    f"same element as path {''.join(seen[x]) or '(empty)'}",
                )
            seen[x] = word
        expected = oracle.sphere_size(n)
        if len(words) != expected:
            return BijectivityReport(
                False, n_max, tuple(spheres), n, None,
                f"{len(words)} paths cover a sphere of {expected} elements",
            )
        spheres.append(len(words))
    return BijectivityReport(True, n_max, tuple(spheres))
