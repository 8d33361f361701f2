"""Measure-preserving actions on finite probability spaces and the
spherical / Cesaro averaging operators they induce.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .graph import LabelledGraph

__all__ = [
    "ActionError",
    "FiniteSpace",
    "FiniteAction",
    "AverageSeries",
    "LadderStep",
    "ConvergenceReport",
    "ContractReport",
    "InvarianceReport",
    "parse_action",
    "load_action",
    "random_action",
    "spherical_averages",
    "lp_norm",
    "convergence_report",
    "operator_contract_check",
    "invariance_probe",
    "series_csv",
    "ladder_csv",
]


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteSpace:
    """Points with positive rational weights ``numerators[i] / denominator``."""

    points: tuple[str, ...]
    numerators: tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if len(self.points) != len(self.numerators) or not self.points:
            raise ActionError("need one positive weight per point")
        if any(w <= 0 for w in self.numerators):
            raise ActionError("weights must be positive")
        if sum(self.numerators) != self.denominator:
            raise ActionError("weights must sum to 1")

    @classmethod
    def uniform(cls, points: Sequence[str] | int) -> "FiniteSpace":
        if isinstance(points, int):
            points = [f"p{i}" for i in range(points)]
        return cls(tuple(points), (1,) * len(points), len(points))

    @classmethod
    def from_fractions(cls, points: Sequence[str], weights: Sequence[Fraction]) -> "FiniteSpace":
        weights = [Fraction(w) for w in weights]
        den = math.lcm(*(w.denominator for w in weights))
        return cls(tuple(points), tuple(int(w * den) for w in weights), den)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.denominator) for w in self.numerators)

    @property
    def nu(self) -> np.ndarray:
        return np.array(self.numerators, dtype=float) / self.denominator


@dataclass(frozen=True)
class FiniteAction:
    """One permutation of the points per generator symbol.

    ``maps[s][i]`` is the index of the image of point i under T_s.
    """

    space: FiniteSpace
    maps: Mapping[str, np.ndarray]

    def __post_init__(self):
        n = self.space.size
        w = self.space.numerators
        for sym, perm in self.maps.items():
            perm = np.asarray(perm)
            if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
                raise ActionError(f"map for {sym!r} is not a bijection of the points")
            for i, j in enumerate(perm.tolist()):
                if w[i] != w[j]:
                    raise ActionError(
                        f"measure not preserved by {sym!r} at point {self.space.points[j]!r}"
                    )

    def compose(self, word: Sequence[str]) -> np.ndarray:
        """Index array of T_{w1} o ... o T_{wk} (last letter applied first)."""
        out = np.arange(self.space.size)
        for sym in reversed(word):
            out = self.maps[sym][out]
        return out

    def pullback(self, phi: np.ndarray, word: Sequence[str]) -> np.ndarray:
        """``phi o T_word`` as an array over the points."""
        return np.asarray(phi)[self.compose(word)]


def _parse_weight(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ActionError(f"bad weight {tok!r}") from None


def parse_action(text: str) -> FiniteAction:
    points = None
    weights = None
    images: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key == "points":
            if points is not None:
                raise ActionError(f"line {lineno}: second points declaration")
            if len(set(args)) != len(args) or not args:
                raise ActionError(f"line {lineno}: point names must be unique and nonempty")
            points = args
        elif key == "weights":
            weights = [_parse_weight(t) for t in args]
        elif key == "map":
            if not args:
                raise ActionError(f"line {lineno}: map needs a symbol")
            if args[0] in images:
                raise ActionError(f"line {lineno}: second map for {args[0]!r}")
            images[args[0]] = args[1:]
        else:
            raise ActionError(f"line {lineno}: unknown directive {key!r}")
    if points is None:
        raise ActionError("missing points declaration")
    if weights is None:
        space = FiniteSpace.uniform(points)
    else:
        if len(weights) != len(points):
            raise ActionError("one weight per point required")
        if sum(weights) != 1:
            raise ActionError("weights must sum to 1")
        space = FiniteSpace.from_fractions(points, weights)
    where = {p: i for i, p in enumerate(points)}
    maps = {}
    for sym, imgs in images.items():
        if len(imgs) != len(points) or any(p not in where for p in imgs):
            raise ActionError(f"map for {sym!r} must list one known image per point")
        maps[sym] = np.array([where[p] for p in imgs])
    return FiniteAction(space, maps)


def load_action(text: str, g: LabelledGraph) -> FiniteAction:
    """Parse an action file and check that it covers the graph's alphabet."""
    act = parse_action(text)
    missing = [s for s in g.alphabet if s not in act.maps]
    extra = [s for s in act.maps if s not in g.alphabet]
    if missing or extra:
        raise ActionError(f"alphabet mismatch: missing {missing}, unexpected {extra}")
    return act


def random_action(
    alphabet: Sequence[str],
    n_points: int,
    rng: np.random.Generator,
    inverses: Optional[Mapping[str, str]] = None,
) -> FiniteAction:
    """Uniform space with a random permutation per symbol.

    ``inverses`` maps a symbol to its partner; the partner gets the inverse
    permutation, so the action factors through a group.
    """
    inverses = inverses or {}
    maps: dict[str, np.ndarray] = {}
    for sym in alphabet:
        if sym in maps:
            continue
        perm = rng.permutation(n_points)
        maps[sym] = perm
        partner = inverses.get(sym)
        if partner is not None and partner != sym:
            maps[partner] = np.argsort(perm)
    return FiniteAction(FiniteSpace.uniform(n_points), maps)


@dataclass(frozen=True)
class AverageSeries:
    """``s[n]`` for n = 0..n_max and ``c[N-1]`` = c_N for N = 1..n_max."""

    s: np.ndarray
    c: np.ndarray
    spheres: tuple[int, ...]
    empty_sphere: tuple[bool, ...]

    @property
    def n_max(self) -> int:
        return self.s.shape[0] - 1

    def cesaro(self, N: int) -> np.ndarray:
        if not 1 <= N <= self.c.shape[0]:
            raise IndexError(f"c_N available for N = 1..{self.c.shape[0]}")
        return self.c[N - 1]


def spherical_averages(
    act: FiniteAction,
    g: LabelledGraph,
    phi,
    n_max: int,
    exact: bool = False,
) -> AverageSeries:
    """Spherical averages s_n(phi) and their Cesaro means.

    A layer f_n(v) holds the average of phi o T_l over paths l from the start
    to v of length n.  Appending an arc e: v -> w pre-composes with T_e, so
    f_{n+1}(w)(x) is the count-weighted mean of f_n(v)(T_e x).  Keeping
    averages rather than sums stops the layers from overflowing.

    With ``exact=True`` the arithmetic is in Fractions (object arrays).
    """
    if g.start is None:
        raise ValueError("graph has no start vertex")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    missing = [s for s in g.alphabet if s not in act.maps]
    if missing:
        raise ActionError(f"action has no map for {missing}")
    size = act.space.size
    if exact:
        phi = np.array([Fraction(x) for x in phi], dtype=object)
        zero = np.array([Fraction(0)] * size, dtype=object)
    else:
        phi = np.asarray(phi, dtype=float)
        zero = np.zeros(size)
    if phi.shape != (size,):
        raise ValueError("observable must have one value per point")

    nv = g.n_vertices
    perms = [act.maps[a.label] for a in g.arcs]
    arcs = [(a.tail, a.head, p) for a, p in zip(g.arcs, perms)]
    counts = [0] * nv
    counts[g.start] = 1
    layer = [zero.copy() for _ in range(nv)]
    layer[g.start] = phi.copy()

    s_rows = []
    spheres = []

    def emit(counts, layer):
        total = sum(counts)
        spheres.append(total)
        if total == 0:
            s_rows.append(zero.copy())
            return
        acc = zero.copy()
        for v in range(nv):
            if counts[v]:
                w = Fraction(counts[v], total) if exact else counts[v] / total
                acc = acc + w * layer[v]
        s_rows.append(acc)

    emit(counts, layer)
    for _ in range(n_max):
        new_counts = [0] * nv
        for tail, head, _p in arcs:
            new_counts[head] += counts[tail]
        new_layer = [zero.copy() for _ in range(nv)]
        for tail, head, perm in arcs:
            if counts[tail]:
                c_new = new_counts[head]
                w = Fraction(counts[tail], c_new) if exact else counts[tail] / c_new
                new_layer[head] = new_layer[head] + w * layer[tail][perm]
        counts, layer = new_counts, new_layer
        emit(counts, layer)

    dtype = object if exact else float
    s = np.array(s_rows, dtype=dtype).reshape(n_max + 1, size)
    csum = np.cumsum(s[:n_max], axis=0)
    Ns = np.arange(1, n_max + 1).reshape(-1, 1)
    if exact:
        c = np.array([[x / int(N) for x in row] for row, N in zip(csum, Ns[:, 0])], dtype=object)
    else:
        c = csum / Ns
    return AverageSeries(s, c, tuple(spheres), tuple(t == 0 for t in spheres))


def lp_norm(space: FiniteSpace, phi, p) -> float:
    """``(sum |phi|^p nu)^(1/p)``, or ``max |phi|`` for p = inf."""
    if isinstance(p, str):
        p = math.inf if p == "inf" else float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    vals = np.abs(np.asarray(phi, dtype=float))
    if math.isinf(p):
        return float(vals.max())
    return float(np.sum(vals**p * space.nu) ** (1.0 / p))


@dataclass(frozen=True)
class LadderStep:
    N: int
    N_next: int
    distance: float
    oscillation: float


@dataclass(frozen=True)
class ConvergenceReport:
    p: float
    steps: tuple[LadderStep, ...]

    @property
    def distances(self) -> list[float]:
        return [st.distance for st in self.steps]

    @property
    def monotone(self) -> bool:
        d = self.distances
        return all(b <= a for a, b in zip(d, d[1:]))


def convergence_report(
    series: AverageSeries,
    space: FiniteSpace,
    p=1,
    window_growth: float = 2.0,
    start: int = 1,
) -> ConvergenceReport:
    """Cauchy diagnostics for c_N along N_{j+1} = ceil(growth * N_j).

    Reports ||c_{N_{j+1}} - c_{N_j}||_p and the per-point oscillation
    max over N in [N_j, N_{j+1}] of |c_N(x) - c_{N_j}(x)|.
    """
    if window_growth <= 1:
        raise ValueError("window_growth must exceed 1")
    top = series.c.shape[0]
    ladder = [start]
    while math.ceil(window_growth * ladder[-1]) <= top:
        ladder.append(max(math.ceil(window_growth * ladder[-1]), ladder[-1] + 1))
    if len(ladder) < 3:
        raise ValueError("series too short for two ladder windows")
    c = np.asarray(series.c, dtype=float)
    steps = []
    for lo, hi in zip(ladder, ladder[1:]):
        ref = c[lo - 1]
        osc = float(np.abs(c[lo - 1 : hi] - ref).max())
        steps.append(LadderStep(lo, hi, lp_norm(space, c[hi - 1] - ref, p), osc))
    if isinstance(p, str):
        p = math.inf if p == "inf" else float(p)
    return ConvergenceReport(float(p), tuple(steps))


@dataclass(frozen=True)
class ContractReport:
    checked: int
    violations: tuple[str, ...]
    min_slack: float

    @property
    def passed(self) -> bool:
        return not self.violations


def operator_contract_check(
    act: FiniteAction,
    g: LabelledGraph,
    n_max: int,
    trials: int = 5,
    rng: Optional[np.random.Generator] = None,
    atol: float = 1e-12,
) -> ContractReport:
    """Check that each normalized s_n fixes constants, preserves positivity
    and contracts the L^1, L^2 and L^inf norms."""
    rng = rng if rng is not None else np.random.default_rng(0)
    size = act.space.size
    violations = []
    min_slack = math.inf
    checked = 0
    ones = spherical_averages(act, g, np.ones(size), n_max)
    for n, row in enumerate(ones.s):
        if not ones.empty_sphere[n] and np.abs(row - 1).max() > atol:
            violations.append(f"s_{n}(1) != 1")
    for _ in range(trials):
        pos = rng.random(size)
        signed = rng.uniform(-1, 1, size)
        sp = spherical_averages(act, g, pos, n_max)
        ss = spherical_averages(act, g, signed, n_max)
        for n in range(n_max + 1):
            checked += 1
            if sp.s[n].min() < -atol:
                violations.append(f"s_{n} not positive")
            for p in (1, 2, math.inf):
                slack = lp_norm(act.space, signed, p) - lp_norm(act.space, ss.s[n], p)
                min_slack = min(min_slack, slack)
                if slack < -atol:
                    violations.append(f"||s_{n}||_{p} exceeds ||phi||_{p} by {-slack:.3g}")
    return ContractReport(checked, tuple(violations), min_slack)


@dataclass(frozen=True)
class InvarianceReport:
    N: int
    per_generator: dict
    value: float


def invariance_probe(series: AverageSeries, act: FiniteAction, g: LabelledGraph, N: int) -> InvarianceReport:
    """``max_s ||c_N o T_s - c_N||_1`` over generators.  Diagnostic only."""
    cN = np.asarray(series.cesaro(N), dtype=float)
    per = {
        sym: lp_norm(act.space, cN[act.maps[sym]] - cN, 1) for sym in g.alphabet if sym in act.maps
    }
    return InvarianceReport(N, per, max(per.values(), default=0.0))


def series_csv(series: AverageSeries, space: FiniteSpace, p=1) -> str:
    buf = io.StringIO()
    buf.write("n,sphere,s_norm\n")
    for n, row in enumerate(series.s):
        buf.write(f"{n},{series.spheres[n]},{lp_norm(space, row, p)!r}\n")
    return buf.getvalue()


def ladder_csv(report: ConvergenceReport, invariance: Optional[InvarianceReport] = None) -> str:
    buf = io.StringIO()
    buf.write("N,N_next,distance,oscillation,invariance_probe\n")
    for i, st in enumerate(report.steps):
        probe = ""
        if invariance is not None and i == len(report.steps) - 1:
            probe = repr(invariance.value)
        buf.write(f"{st.N},{st.N_next},{st.distance!r},{st.oscillation!r},{probe}\n")
    return buf.getvalue()
