"""Finite labelled directed multigraphs and their text format.

A graph is a list of named vertices, an ordered generator alphabet and a list
of labelled arcs.  Loops and parallel arcs are allowed; parallel arcs are kept
as separate entries because their labels may differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

__all__ = [
    "Arc",
    "LabelledGraph",
    "Condensation",
    "GraphFormatError",
    "parse_graph",
    "serialize_graph",
    "strongly_connected_components",
    "induced_subgraph",
    "graph_power",
    "reachable_from",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph files; carries the offending line number."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    label: str


@dataclass(frozen=True)
class LabelledGraph:
    """Directed multigraph with arcs labelled by alphabet symbols.

    Vertices and symbols are identified by name; indices into ``vertices``
    and ``alphabet`` are an internal convenience.
    """

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    alphabet: tuple[str, ...]
    start: Optional[int] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(
            self, "arcs", tuple(a if isinstance(a, Arc) else Arc(*a) for a in self.arcs)
        )
        _check_names(self.vertices, "vertex")
        _check_names(self.alphabet, "symbol")
        n = len(self.vertices)
        symbols = set(self.alphabet)
        for a in self.arcs:
            if not (0 <= a.tail < n and 0 <= a.head < n):
                raise ValueError(f"arc {a} has an endpoint out of range")
            if a.label not in symbols:
                raise ValueError(f"arc label {a.label!r} is not in the alphabet")
        if self.start is not None and not 0 <= self.start < n:
            raise ValueError(f"start index {self.start} out of range")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.vertices)})

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str | int) -> int:
        """Vertex index from a name (ints pass through after a range check)."""
        if isinstance(vertex, int):
            if not 0 <= vertex < self.n_vertices:
                raise IndexError(f"vertex index {vertex} out of range")
            return vertex
        try:
            return self._index[vertex]
        except KeyError:
            raise KeyError(f"unknown vertex {vertex!r}") from None

    def out_arcs(self, v: int) -> list[int]:
        """Indices of arcs leaving ``v``, in arc order."""
        return [i for i, a in enumerate(self.arcs) if a.tail == v]

    def successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in self.vertices]
        for a in self.arcs:
            succ[a.tail].append(a.head)
        return succ

    def arc_multiset(self) -> dict[tuple[str, str, str], int]:
        out: dict[tuple[str, str, str], int] = {}
        for a in self.arcs:
            key = (self.vertices[a.tail], self.vertices[a.head], a.label)
            out[key] = out.get(key, 0) + 1
        return out

    def same_content(self, other: "LabelledGraph") -> bool:
        """Equality up to arc order."""
        return (
            self.vertices == other.vertices
            and self.alphabet == other.alphabet
            and self.start == other.start
            and self.arc_multiset() == other.arc_multiset()
        )


def _check_names(names: Sequence[str], what: str) -> None:
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
            raise ValueError(f"invalid {what} name {name!r}")
        if name in seen:
            raise ValueError(f"duplicate {what} {name!r}")
        seen.add(name)


def parse_graph(text: str) -> LabelledGraph:
    """Parse the line-oriented graph format.

    Directives are ``alphabet``, ``start``, ``vertex`` and ``edge``; ``#``
    starts a comment.  Vertices and symbols keep first-appearance order.
    """
    alphabet: Optional[list[str]] = None
    start_name: Optional[str] = None
    start_line = 0
    vertices: list[str] = []
    vindex: dict[str, int] = {}
    arcs: list[Arc] = []
    pending: list[tuple[int, str, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()
        if keyword == "alphabet":
            if alphabet is not None:
                raise GraphFormatError("second alphabet declaration", lineno)
            if len(set(args)) != len(args):
                dup = next(s for s in args if args.count(s) > 1)
                raise GraphFormatError(f"duplicate symbol {dup!r}", lineno)
            alphabet = list(args)
        elif keyword == "start":
            if len(args) != 1:
                raise GraphFormatError("start takes exactly one vertex", lineno)
            if start_name is not None:
                raise GraphFormatError("second start declaration", lineno)
            start_name, start_line = args[0], lineno
        elif keyword == "vertex":
            if len(args) != 1:
                raise GraphFormatError("vertex takes exactly one name", lineno)
            if args[0] in vindex:
                raise GraphFormatError(f"duplicate vertex {args[0]!r}", lineno)
            vindex[args[0]] = len(vertices)
            vertices.append(args[0])
        elif keyword == "edge":
            if len(args) != 3:
                raise GraphFormatError("edge takes tail, head and label", lineno)
            if alphabet is None:
                raise GraphFormatError("edge before alphabet declaration", lineno)
            pending.append((lineno, *args))
        else:
            raise GraphFormatError(f"unknown directive {keyword!r}", lineno)

    if alphabet is None:
        raise GraphFormatError("missing alphabet declaration")
    if not vertices:
        raise GraphFormatError("graph has no vertices")
    symbols = set(alphabet)
    for lineno, tail, head, label in pending:
        for name in (tail, head):
            if name not in vindex:
                raise GraphFormatError(f"unknown vertex {name!r}", lineno)
        if label not in symbols:
            raise GraphFormatError(f"unknown symbol {label!r}", lineno)
        arcs.append(Arc(vindex[tail], vindex[head], label))
    start = None
    if start_name is not None:
        if start_name not in vindex:
            raise GraphFormatError(f"unknown vertex {start_name!r}", start_line)
        start = vindex[start_name]
    return LabelledGraph(tuple(vertices), tuple(arcs), tuple(alphabet), start)


def serialize_graph(g: LabelledGraph) -> str:
    lines = ["alphabet" + "".join(" " + s for s in g.alphabet)]
    if g.start is not None:
        lines.append(f"start {g.vertices[g.start]}")
    lines.extend(f"vertex {v}" for v in g.vertices)
    lines.extend(f"edge {g.vertices[a.tail]} {g.vertices[a.head]} {a.label}" for a in g.arcs)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Condensation:
    """SCCs of a graph and the DAG between them.

    ``components[i]`` is a sorted tuple of vertex indices; ``topo_order``
    lists component indices sources first.  Components are numbered in
    topological order, so ``topo_order`` is the identity permutation.
    """

    components: tuple[tuple[int, ...], ...]
    dag_arcs: tuple[tuple[int, int], ...]
    topo_order: tuple[int, ...]
    component_of: tuple[int, ...]

    def is_trivial(self, i: int, g: LabelledGraph) -> bool:
        """True for a single vertex without a loop."""
        comp = self.components[i]
        if len(comp) > 1:
            return False
        v = comp[0]
        return not any(a.tail == v and a.head == v for a in g.arcs)


def _tarjan(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan; returns SCCs in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def strongly_connected_components(g: LabelledGraph) -> Condensation:
    comps = _tarjan(g.n_vertices, g.successors())
    comps.reverse()
    component_of = [0] * g.n_vertices
    for i, comp in enumerate(comps):
        for v in comp:
            component_of[v] = i
    dag = sorted(
        {
            (component_of[a.tail], component_of[a.head])
            for a in g.arcs
            if component_of[a.tail] != component_of[a.head]
        }
    )
    return Condensation(
        tuple(tuple(c) for c in comps),
        tuple(dag),
        tuple(range(len(comps))),
        tuple(component_of),
    )


def reachable_from(succ: Sequence[Sequence[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def induced_subgraph(g: LabelledGraph, vs: Iterable[int | str]) -> LabelledGraph:
    """Subgraph on ``vs`` (original vertex order kept) with all arcs inside it."""
    keep = sorted({g.index(v) for v in vs})
    if not keep:
        raise ValueError("induced subgraph needs a nonempty vertex set")
    new_index = {v: i for i, v in enumerate(keep)}
    arcs = tuple(
        Arc(new_index[a.tail], new_index[a.head], a.label)
        for a in g.arcs
        if a.tail in new_index and a.head in new_index
    )
    start = new_index.get(g.start) if g.start is not None else None
    return LabelledGraph(tuple(g.vertices[v] for v in keep), arcs, g.alphabet, start)


def graph_power(g: LabelledGraph, n: int, max_arcs: int = 10**6) -> LabelledGraph:
    """Graph on the same vertices whose arcs are the length-``n`` paths of ``g``.

    Each arc is labelled by the concatenation of its path's labels; the
    alphabet is the set of words that occur, in first-appearance order.
    """
    if n < 1:
        raise ValueError("graph power needs n >= 1")
    from .counting import count_matrix, matrix_power

    total = sum(int(x) for x in matrix_power(count_matrix(g).entries, n).flat)
    if total > max_arcs:
        raise ValueError(f"graph power has {total} arcs, above the cap {max_arcs}")

    out_arcs = [g.out_arcs(v) for v in range(g.n_vertices)]
    arcs: list[Arc] = []
    words: dict[str, None] = {}

    def extend(origin: int, v: int, depth: int, labels: list[str]) -> None:
        if depth == n:
            word = "".join(labels)
            words.setdefault(word, None)
            arcs.append(Arc(origin, v, word))
            return
        for i in out_arcs[v]:
            a = g.arcs[i]
            labels.append(a.label)
            extend(origin, a.head, depth + 1, labels)
            labels.pop()

    for u in range(g.n_vertices):
        extend(u, u, 0, [])
    return LabelledGraph(g.vertices, tuple(arcs), tuple(words), g.start)
