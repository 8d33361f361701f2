"""Exact path and sphere counts.

Counts are Python integers held in ``dtype=object`` arrays, so matrix
products never overflow and never touch floating point.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import LabelledGraph, induced_subgraph

__all__ = [
    "CountMatrix",
    "CountTable",
    "PathCapExceeded",
    "count_matrix",
    "matrix_power",
    "count_table",
    "enumerate_paths",
    "enumerate_arc_paths",
    "verify_cut_convolution",
    "count_table_csv",
]


class PathCapExceeded(RuntimeError):
    pass


def _int_zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def _int_identity(n: int) -> np.ndarray:
    out = _int_zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matrix_power(entries: np.ndarray, n: int) -> np.ndarray:
    """Exact ``entries**n`` for an object-dtype integer matrix."""
    result = _int_identity(entries.shape[0])
    base = entries
    while n:
        if n & 1:
            result = result.dot(base)
        base = base.dot(base)
        n >>= 1
    return result


@dataclass(frozen=True)
class CountMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.entries.tolist()]


def count_matrix(g: LabelledGraph) -> CountMatrix:
    """Matrix whose (u, v) entry is the number of arcs from u to v."""
    m = _int_zeros(g.n_vertices, g.n_vertices)
    for a in g.arcs:
        m[a.tail, a.head] += 1
    return CountMatrix(m)


@dataclass(frozen=True)
class CountTable:
    """Path counts ``per_pair[n, u, v]`` for n = 0..n_max and sphere sizes."""

    n_max: int
    per_pair: np.ndarray
    spheres: Optional[tuple[int, ...]]
    vertices: tuple[str, ...]

    def pair(self, u: int, v: int) -> list[int]:
        return list(self.per_pair[:, u, v])


def count_table(g: LabelledGraph, n_max: int) -> CountTable:
    """Powers N, N^2, ... of the count matrix, accumulated one step at a time."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    n = g.n_vertices
    base = count_matrix(g).entries
    table = np.empty((n_max + 1, n, n), dtype=object)
    table[0] = _int_identity(n)
    for k in range(1, n_max + 1):
        table[k] = table[k - 1].dot(base)
    spheres = None
    if g.start is not None:
        spheres = tuple(int(sum(table[k, g.start, :])) for k in range(n_max + 1))
    return CountTable(n_max, table, spheres, g.vertices)


def enumerate_arc_paths(
    g: LabelledGraph,
    u: int | str,
    v: int | str | None,
    n: int,
    cap: int = 10**6,
) -> list[tuple[int, ...]]:
    """All length-``n`` paths from ``u`` (to ``v``, or anywhere if ``v`` is
    None) as tuples of arc indices, in lexicographic arc-index order."""
    u = g.index(u)
    target = None if v is None else g.index(v)
    out_arcs = [g.out_arcs(w) for w in range(g.n_vertices)]
    found: list[tuple[int, ...]] = []
    path: list[int] = []

    def walk(w: int) -> None:
        if len(path) == n:
            if target is None or w == target:
                if len(found) >= cap:
                    raise PathCapExceeded(f"more than {cap} paths of length {n}")
                found.append(tuple(path))
            return
        for i in out_arcs[w]:
            path.append(i)
            walk(g.arcs[i].head)
            path.pop()

    walk(u)
    return found


def enumerate_paths(
    g: LabelledGraph,
    u: int | str,
    v: int | str | None,
    n: int,
    cap: int = 10**6,
) -> list[tuple[str, ...]]:
    """Label words of all length-``n`` paths; brute-force oracle for counts."""
    return [tuple(g.arcs[i].label for i in p) for p in enumerate_arc_paths(g, u, v, n, cap)]


def verify_cut_convolution(
    g: LabelledGraph,
    partition: tuple[Sequence[int | str], Sequence[int | str]],
    u: int | str | None,
    v: int | str | None,
    n_max: int,
) -> bool:
    """Check the path-count convolution across a cut with no back arcs.

    Every path from ``u`` in V1 to ``v`` in V2 crosses the cut exactly once,
    so its count splits as a sum over crossing arcs u'->v' of
    (paths u->u' inside V1) * (arcs u'->v') * (paths v'->v inside V2).
    Passing None for ``u`` or ``v`` checks every vertex of that part.
    """
    first = {g.index(w) for w in partition[0]}
    second = {g.index(w) for w in partition[1]}
    if first & second or len(first | second) != g.n_vertices or not first or not second:
        raise ValueError("partition must split the vertices into two nonempty parts")
    if any(a.tail in second and a.head in first for a in g.arcs):
        raise ValueError("partition has an arc from the second part back to the first")
    first_idx, second_idx = sorted(first), sorted(second)
    rows = list(range(len(first_idx))) if u is None else [g.index(u)]
    cols = list(range(len(second_idx))) if v is None else [g.index(v)]
    if u is not None:
        if rows[0] not in first:
            raise ValueError("u must lie in the first part")
        rows = [first_idx.index(rows[0])]
    if v is not None:
        if cols[0] not in second:
            raise ValueError("v must lie in the second part")
        cols = [second_idx.index(cols[0])]

    t1 = count_table(induced_subgraph(g, first_idx), n_max).per_pair[:, rows, :]
    t2 = count_table(induced_subgraph(g, second_idx), n_max).per_pair[:, :, cols]
    whole = count_table(g, n_max).per_pair[np.ix_(range(n_max + 1), [first_idx[i] for i in rows], [second_idx[j] for j in cols])]
    cross = count_matrix(g).entries[np.ix_(first_idx, second_idx)]
    left = [t1[k].dot(cross) for k in range(n_max + 1)]
    for n in range(n_max + 1):
        total = _int_zeros(len(rows), len(cols))
        for k in range(n):
            total = total + left[k].dot(t2[n - 1 - k])
        if not np.array_equal(total, whole[n]):
            return False
    return True


def count_table_csv(table: CountTable, pairs: Sequence[tuple[int, int]] = ()) -> str:
    buf = io.StringIO()
    header = ["n"]
    if table.spheres is not None:
        header.append("sphere")
    header.extend(f"{table.vertices[u]}->{table.vertices[v]}" for u, v in pairs)
    buf.write(",".join(header) + "\n")
    for n in range(table.n_max + 1):
        row = [str(n)]
        if table.spheres is not None:
            row.append(str(table.spheres[n]))
        row.extend(str(table.per_pair[n, u, v]) for u, v in pairs)
        buf.write(",".join(row) + "\n")
    return buf.getvalue()
