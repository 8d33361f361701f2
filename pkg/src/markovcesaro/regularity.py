"""Regular sequences: period q and, per residue class, either eventual
vanishing or asymptotics ``x_n ~ a * n**b * c**n``.

Constants are kept in the absolute-index form ``x_n / (a n^b c^n) -> 1``
along ``n = r (mod q)``.  Every descriptor carries an exact term oracle, so
any claimed asymptotic can be checked against true integer values.

Path-count sequences of a graph are classified by splitting the graph along
its condensation: strongly connected blocks are handled by Perron-Frobenius,
and the pieces are glued with shift, scale, sum and convolution rules.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .counting import count_matrix
from .graph import LabelledGraph, _tarjan, reachable_from

__all__ = [
    "Kind",
    "ResidueClass",
    "RegularDescriptor",
    "PerronData",
    "RegularityOptions",
    "ClassDeviation",
    "ValidationReport",
    "PerronConvergenceError",
    "SeriesTruncationError",
    "beta_int",
    "zero_descriptor",
    "delta_descriptor",
    "geometric_descriptor",
    "subsequence_constants",
    "scc_period",
    "perron_analyze",
    "descriptor_of_pair",
    "descriptor_of_spheres",
    "descriptor_shift",
    "descriptor_scale",
    "descriptor_sum",
    "descriptor_convolve",
    "class_deviation",
    "validate_descriptor",
    "validation_csv",
]


class PerronConvergenceError(RuntimeError):
    pass


class SeriesTruncationError(RuntimeError):
    pass


class Kind(enum.Enum):
    EVENTUALLY_ZERO = "eventually_zero"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class ResidueClass:
    kind: Kind
    horizon: int = 0
    a: Fraction = Fraction(0)
    b: int = 0
    c: float = 0.0

    @classmethod
    def zero(cls, horizon: int = 0) -> "ResidueClass":
        return cls(Kind.EVENTUALLY_ZERO, horizon=max(horizon, 0))

    @classmethod
    def asymptotic(cls, a, b: int, c: float) -> "ResidueClass":
        a = Fraction(a)
        if a <= 0 or b < 0 or c < 1:
            raise ValueError(f"invalid asymptotic constants a={a}, b={b}, c={c}")
        return cls(Kind.ASYMPTOTIC, a=a, b=int(b), c=float(c))

    @property
    def is_zero(self) -> bool:
        return self.kind is Kind.EVENTUALLY_ZERO

    def log_bound(self, n: int) -> float:
        """Natural log of a heuristic upper bound ``2 a n^b c^n``."""
        if self.is_zero:
            return -math.inf if n > self.horizon else math.inf
        return math.log(2 * self.a) + self.b * math.log(max(n, 1)) + n * math.log(self.c)


def _memo(fn: Callable[[int], int]) -> Callable[[int], int]:
    cached = lru_cache(maxsize=None)(fn)

    def terms(n: int) -> int:
        if n < 0:
            return 0
        return cached(n)

    return terms


@dataclass(frozen=True, eq=False)
class RegularDescriptor:
    """Period, per-residue classes and an exact term oracle.

    ``tolerance_resolved`` is set when two growth rates closer than the
    comparison band were treated as equal somewhere in the construction.
    """

    q: int
    classes: tuple[ResidueClass, ...]
    terms: Callable[[int], int] = field(repr=False)
    tolerance_resolved: bool = False

    def __post_init__(self):
        if self.q < 1 or len(self.classes) != self.q:
            raise ValueError("need exactly q residue classes")

    def residue_class(self, n: int) -> ResidueClass:
        return self.classes[n % self.q]

    def tail_bound(self, n: int) -> float:
        """Heuristic upper bound on ``terms(n)`` from the class constants."""
        cls = self.residue_class(n)
        if cls.is_zero:
            return 0.0 if n > cls.horizon else float(self.terms(n))
        try:
            return math.exp(cls.log_bound(n))
        except OverflowError:
            return math.inf

    def expanded(self, q: int) -> tuple[ResidueClass, ...]:
        """Classes restated for a multiple ``q`` of the period."""
        if q % self.q:
            raise ValueError(f"{q} is not a multiple of the period {self.q}")
        return tuple(self.classes[r % self.q] for r in range(q))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero and c.horizon == 0 for c in self.classes) and self.terms(0) == 0


@dataclass(frozen=True)
class RegularityOptions:
    tol: float = 1e-10
    max_iter: int = 100_000
    window: int = 400
    band: float = 1e-6
    series_max_terms: int = 20_000


def _make(q: int, classes: Sequence[ResidueClass], terms, flag: bool) -> RegularDescriptor:
    """Build a descriptor, tightening eventually-zero horizons to the exact
    last nonzero index (the incoming horizons are upper bounds)."""
    exact = []
    for r, cls in enumerate(classes):
        if cls.is_zero:
            last = 0
            for n in range(r, cls.horizon + 1, q):
                if terms(n):
                    last = n
            cls = ResidueClass.zero(last)
        exact.append(cls)
    return RegularDescriptor(q, tuple(exact), terms, flag)


def zero_descriptor() -> RegularDescriptor:
    return RegularDescriptor(1, (ResidueClass.zero(0),), _memo(lambda n: 0))


def delta_descriptor() -> RegularDescriptor:
    """The sequence 1, 0, 0, ... (identity for convolution)."""
    return RegularDescriptor(1, (ResidueClass.zero(0),), _memo(lambda n: int(n == 0)))


def geometric_descriptor(a: int, c: int) -> RegularDescriptor:
    """The sequence ``a * c**n`` for positive integers a and c."""
    if a < 1 or c < 1:
        raise ValueError("geometric descriptor needs positive integers")
    return RegularDescriptor(1, (ResidueClass.asymptotic(a, 0, c),), _memo(lambda n: a * c**n))


def subsequence_constants(D: RegularDescriptor, r: int) -> tuple[Fraction, int, float]:
    """Constants (a', b, c') with ``x_{qk+r} / (a' k^b c'^k) -> 1`` as k grows.

    Descriptors store constants against the absolute index n; along the
    subsequence n = qk + r the same limit reads with a' = a q^b c^r and
    c' = c^q.
    """
    if not 0 <= r < D.q:
        raise ValueError(f"residue must lie in [0, {D.q})")
    cls = D.classes[r]
    if cls.is_zero:
        raise ValueError(f"residue {r} is eventually zero")
    return cls.a * D.q**cls.b * Fraction(cls.c) ** r, cls.b, cls.c**D.q


def beta_int(m: int, n: int) -> Fraction:
    """Exact B(m+1, n+1) = m! n! / (m+n+1)!."""
    return Fraction(math.factorial(m) * math.factorial(n), math.factorial(m + n + 1))


def _compare(c1: float, c2: float, band: float) -> tuple[int, bool]:
    """Sign of c1 - c2 with a relative tie band; second value flags a tie
    that was decided by the band rather than by exact equality."""
    if c1 == c2:
        return 0, False
    if abs(c1 - c2) <= band * max(c1, c2):
        return 0, True
    return (1 if c1 > c2 else -1), False


def _sum_class(x: ResidueClass, y: ResidueClass, band: float) -> tuple[ResidueClass, bool]:
    if x.is_zero and y.is_zero:
        return ResidueClass.zero(max(x.horizon, y.horizon)), False
    if y.is_zero:
        return x, False
    if x.is_zero:
        return y, False
    sign, flag = _compare(x.c, y.c, band)
    if sign > 0:
        return x, False
    if sign < 0:
        return y, False
    if x.b != y.b:
        return (x if x.b > y.b else y), flag
    return ResidueClass.asymptotic(x.a + y.a, x.b, max(x.c, y.c)), flag


# -- composition rules -------------------------------------------------------


def descriptor_shift(F: RegularDescriptor, M: int) -> RegularDescriptor:
    """Descriptor of ``n -> F_{n+M}`` (terms at negative indices read as 0)."""
    if M == 0:
        return F
    q = F.q
    classes = []
    for r in range(q):
        src = F.classes[(r + M) % q]
        if src.is_zero:
            classes.append(ResidueClass.zero(src.horizon - M))
        else:
            classes.append(ResidueClass.asymptotic(src.a * Fraction(src.c) ** M, src.b, src.c))
    terms = _memo(lambda n: F.terms(n + M))
    return _make(q, classes, terms, F.tolerance_resolved)


def descriptor_scale(F: RegularDescriptor, factor) -> RegularDescriptor:
    """Descriptor of ``n -> factor * F_n`` for a nonnegative constant."""
    if factor < 0:
        raise ValueError("scale factor must be nonnegative")
    if factor == 0:
        return zero_descriptor()
    if factor == 1:
        return F
    lam = factor if isinstance(factor, int) else Fraction(factor)
    classes = [
        cls if cls.is_zero else ResidueClass.asymptotic(cls.a * lam, cls.b, cls.c)
        for cls in F.classes
    ]
    return RegularDescriptor(F.q, tuple(classes), _memo(lambda n: lam * F.terms(n)), F.tolerance_resolved)


def descriptor_sum(
    F: RegularDescriptor, G: RegularDescriptor, band: float = 1e-6
) -> RegularDescriptor:
    q = math.lcm(F.q, G.q)
    flag = F.tolerance_resolved or G.tolerance_resolved
    classes = []
    for x, y in zip(F.expanded(q), G.expanded(q)):
        cls, tie = _sum_class(x, y, band)
        classes.append(cls)
        flag |= tie
    terms = _memo(lambda n: F.terms(n) + G.terms(n))
    return _make(q, classes, terms, flag)


def _finite_weighted_sum(G: RegularDescriptor, r: int, q: int, last: int, c: float) -> Fraction:
    """Exact sum of G_m c^{-m} over m = r (mod q), m <= last."""
    C = Fraction(c)
    return sum((Fraction(G.terms(m)) / C**m for m in range(r, last + 1, q)), Fraction(0))


def _weighted_series(
    G: RegularDescriptor,
    cls: ResidueClass,
    r: int,
    q: int,
    c: float,
    opts: RegularityOptions,
) -> Fraction:
    """Sum of G_m c^{-m} over m = r (mod q) for a class growing slower than c.

    Partial sums are exact; summation runs until the estimated tail falls
    below double precision, and fails if even ``opts.tol`` cannot be
    certified within ``opts.series_max_terms`` terms.
    """
    C = Fraction(c)
    p, s = C.numerator, C.denominator
    log_c = math.log(c)
    ratio = (cls.c / c) ** q
    num, den = 0, 1
    m_prev = None
    m = r
    count = 0
    while True:
        t = G.terms(m)
        if m_prev is None:
            num, den = t * s**m, p**m
        else:
            step = p ** (m - m_prev)
            num = num * step + t * s**m
            den *= step
        m_prev = m
        count += 1
        partial = num / den if num else 0.0
        # tail estimate from the class constants and the last exact term
        log_next = max(cls.log_bound(m + q), math.log(t) + q * math.log(cls.c) if t else -math.inf)
        log_next -= (m + q) * log_c
        grow = ratio * ((m + 2 * q) / (m + q)) ** cls.b
        tail = math.inf if grow >= 1 else math.exp(min(log_next, 700.0)) / (1 - grow)
        if count >= 8 and partial > 0 and tail <= 1e-18 * partial:
            return Fraction(num / den)
        if count >= opts.series_max_terms:
            if partial > 0 and tail <= opts.tol * partial:
                return Fraction(num / den)
            raise SeriesTruncationError(
                f"series did not reach relative tolerance {opts.tol} in {count} terms "
                f"(rates {cls.c} vs {c})"
            )
        m += q


def descriptor_convolve(
    F: RegularDescriptor,
    G: RegularDescriptor,
    tol: float = 1e-10,
    opts: Optional[RegularityOptions] = None,
) -> RegularDescriptor:
    """Descriptor of the Cauchy product ``H_n = sum_{k+m=n} F_k G_m``.

    Both inputs are restated with the common period q; class r of H is the
    sum over residue pairs r' + r'' = r (mod q) of the sparse convolutions
    of F's class r' with G's class r''.  Each pair falls in one of three
    cases: one rate dominates (constant is the dominant coefficient times a
    weighted series of the other factor), or the rates tie (constant is a
    Beta integral, divided by q for the sparse residue lattice).
    """
    opts = opts or RegularityOptions(tol=tol)
    q = math.lcm(F.q, G.q)
    fc, gc = F.expanded(q), G.expanded(q)
    flag = F.tolerance_resolved or G.tolerance_resolved
    classes = []
    for r in range(q):
        acc = ResidueClass.zero(0)
        for r1 in range(q):
            r2 = (r - r1) % q
            part, tie = _convolve_pair(F, G, fc[r1], gc[r2], r1, r2, q, opts)
            acc, tie2 = _sum_class(acc, part, opts.band)
            flag |= tie | tie2
        classes.append(acc)

    def terms(n: int) -> int:
        return sum(F.terms(k) * G.terms(n - k) for k in range(n + 1))

    return _make(q, classes, _memo(terms), flag)


def _convolve_pair(F, G, x, y, r1, r2, q, opts) -> tuple[ResidueClass, bool]:
    if x.is_zero and y.is_zero:
        return ResidueClass.zero(x.horizon + y.horizon), False
    if y.is_zero:
        w = _finite_weighted_sum(G, r2, q, y.horizon, x.c)
        return (ResidueClass.asymptotic(x.a * w, x.b, x.c) if w else ResidueClass.zero(0)), False
    if x.is_zero:
        w = _finite_weighted_sum(F, r1, q, x.horizon, y.c)
        return (ResidueClass.asymptotic(y.a * w, y.b, y.c) if w else ResidueClass.zero(0)), False
    sign, tie = _compare(x.c, y.c, opts.band)
    if sign > 0:
        w = _weighted_series(G, y, r2, q, x.c, opts)
        return ResidueClass.asymptotic(x.a * w, x.b, x.c), False
    if sign < 0:
        w = _weighted_series(F, x, r1, q, y.c, opts)
        return ResidueClass.asymptotic(y.a * w, y.b, y.c), False
    a = x.a * y.a * beta_int(x.b, y.b) / q
    return ResidueClass.asymptotic(a, x.b + y.b + 1, max(x.c, y.c)), tie


# -- strongly connected blocks -----------------------------------------------


def _cyclic_levels(m: np.ndarray, comp: Sequence[int]) -> tuple[int, dict[int, int]]:
    """BFS levels inside a component and the gcd of level defects over arcs."""
    inside = set(comp)
    root = comp[0]
    level = {root: 0}
    order = [root]
    for v in order:
        for w in comp:
            if m[v, w] and w not in level:
                level[w] = level[v] + 1
                order.append(w)
    period = 0
    for v in comp:
        for w in comp:
            if m[v, w]:
                period = math.gcd(period, level[v] + 1 - level[w])
    if len(level) != len(inside):
        raise ValueError("component is not strongly connected")
    return abs(period), level


def scc_period(g: LabelledGraph, component) -> int:
    """gcd of the cycle lengths inside a strongly connected component."""
    comp = sorted(g.index(v) for v in component)
    m = count_matrix(g).entries
    if not any(m[v, w] for v in comp for w in comp):
        raise ValueError("component has no arcs")
    period, _ = _cyclic_levels(m, comp)
    return period


def _int_det(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def _power_iteration(b: np.ndarray, tol: float, max_iter: int) -> float:
    x = np.ones(b.shape[0]) / math.sqrt(b.shape[0])
    for _ in range(max_iter):
        y = b @ x
        lam = float(x @ y)
        if np.linalg.norm(y - lam * x) <= tol * abs(lam):
            return lam
        norm = np.linalg.norm(y)
        if norm == 0:
            raise PerronConvergenceError("iteration collapsed to zero")
        x = y / norm
    raise PerronConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps")


class _MatrixPowers:
    """Exact powers of a fixed integer matrix, extended on demand."""

    def __init__(self, base: np.ndarray):
        self.base = base
        ident = np.empty(base.shape, dtype=object)
        ident.fill(0)
        for i in range(base.shape[0]):
            ident[i, i] = 1
        self.powers = [ident]

    def __call__(self, n: int) -> np.ndarray:
        while len(self.powers) <= n:
            self.powers.append(self.powers[-1].dot(self.base))
        return self.powers[n]


@dataclass(frozen=True)
class PerronData:
    """Growth data of one strongly connected component.

    ``coefficients`` maps (u, v) to (residue, a): the only residue mod the
    period on which paths u -> v exist, and the constant with
    ``count_n(u, v) / (a c^n) -> 1`` along it.  Other residues vanish.
    """

    component: tuple[int, ...]
    period: int
    spectral_radius: float
    levels: dict
    coefficients: dict
    powers: _MatrixPowers = field(repr=False, compare=False)

    def coefficient(self, u: int, v: int, r: int) -> Optional[Fraction]:
        residue, a = self.coefficients[(u, v)]
        return a if residue == r % self.period else None


def _perron(m: np.ndarray, comp: tuple[int, ...], opts: RegularityOptions) -> PerronData:
    sub = m[np.ix_(comp, comp)]
    if not any(sub.flat):
        raise ValueError("component has no arcs")
    period, level = _cyclic_levels(m, list(comp))
    powers = _MatrixPowers(sub)
    pos = {v: i for i, v in enumerate(comp)}
    cls0 = [pos[v] for v in comp if level[v] % period == 0]
    block = powers(period)[np.ix_(cls0, cls0)].astype(float)
    lam = _power_iteration(block, opts.tol, opts.max_iter)
    c = lam ** (1.0 / period)
    k = round(c)
    if k >= 1 and abs(c - k) <= 1e-9 * c:
        ident = np.eye(len(comp), dtype=int)
        if _int_det((sub - k * ident).tolist()) == 0:
            c = float(k)
    if c < 1:
        raise PerronConvergenceError(f"spectral radius {c} below 1 for a component with arcs")

    C = Fraction(c)
    p, s = C.numerator, C.denominator
    coefficients = {}
    top = opts.window
    for u in comp:
        for v in comp:
            r = (level[v] - level[u]) % period
            last = top - ((top - r) % period)
            ns = [n for n in range(last, -1, -period)][:10]
            hi = ns[0]
            num = sum(powers(n)[pos[u], pos[v]] * s**n * p ** (hi - n) for n in ns)
            a = num / (len(ns) * p**hi)
            coefficients[(u, v)] = (r, Fraction(a))
    return PerronData(comp, period, c, dict(level), coefficients, powers)


def perron_analyze(
    g: LabelledGraph, component, tol: float = 1e-10, opts: Optional[RegularityOptions] = None
) -> PerronData:
    """Period, Perron root and per-pair constants of a strongly connected
    component with at least one arc.

    The root comes from power iteration on one cyclic class of N^q; the
    constants are empirical averages of count_n / c^n over the last ten
    admissible n below ``opts.window``.
    """
    opts = opts or RegularityOptions(tol=tol)
    comp = tuple(sorted(g.index(v) for v in component))
    return _perron(count_matrix(g).entries, comp, opts)


# -- graphs ------------------------------------------------------------------


class _Builder:
    """Recursive classification of path counts by splitting the graph along
    cuts with no back arcs.  Caches live for one top-level call."""

    def __init__(self, g: LabelledGraph, opts: RegularityOptions):
        self.g = g
        self.opts = opts
        self.m = count_matrix(g).entries
        n = g.n_vertices
        self.succ = [[w for w in range(n) if self.m[v, w]] for v in range(n)]
        self.pred = [[w for w in range(n) if self.m[w, v]] for v in range(n)]
        self._perron: dict = {}
        self._pairs: dict = {}

    def relevant(self, vs: frozenset, u: int, v: int) -> frozenset:
        fwd = reachable_from([[w for w in s if w in vs] for s in self.succ], [u])
        bwd = reachable_from([[w for w in s if w in vs] for s in self.pred], [v])
        return frozenset(fwd & bwd & vs)

    def base(self, comp: frozenset, u: int, v: int) -> RegularDescriptor:
        key = tuple(sorted(comp))
        if len(key) == 1 and not self.m[key[0], key[0]]:
            return delta_descriptor() if u == v else zero_descriptor()
        if key not in self._perron:
            self._perron[key] = _perron(self.m, key, self.opts)
        data = self._perron[key]
        r, a = data.coefficients[(u, v)]
        pos = {w: i for i, w in enumerate(key)}
        iu, iv = pos[u], pos[v]
        classes = [
            ResidueClass.asymptotic(a, 0, data.spectral_radius) if k == r else ResidueClass.zero(0)
            for k in range(data.period)
        ]
        powers = data.powers
        return RegularDescriptor(data.period, tuple(classes), _memo(lambda n: powers(n)[iu, iv]))

    def pair(self, vs: frozenset, u: int, v: int) -> RegularDescriptor:
        key = (vs, u, v)
        if key in self._pairs:
            return self._pairs[key]
        rel = self.relevant(vs, u, v)
        if not rel:
            out = zero_descriptor()
        else:
            idx = sorted(rel)
            local = {w: i for i, w in enumerate(idx)}
            comps = _tarjan(len(idx), [[local[w] for w in self.succ[x] if w in rel] for x in idx])
            first = frozenset(idx[i] for i in comps[-1])  # source component holds u
            if len(comps) == 1:
                out = self.base(first, u, v)
            else:
                out = self.split(first, rel - first, u, v)
        self._pairs[key] = out
        return out

    def split(self, first: frozenset, second: frozenset, u: int, v: int) -> RegularDescriptor:
        band = self.opts.band
        total = zero_descriptor()
        for u1 in sorted(first):
            for v1 in sorted(second):
                k = self.m[u1, v1]
                if not k:
                    continue
                right = self.pair(second, v1, v)
                if right.is_zero:
                    continue
                left = descriptor_scale(self.base(first, u, u1), k)
                piece = descriptor_shift(
                    descriptor_convolve(left, right, self.opts.tol, self.opts), -1
                )
                total = piece if total.is_zero else descriptor_sum(total, piece, band)
        return total


def descriptor_of_pair(
    g: LabelledGraph, u, v, opts: Optional[RegularityOptions] = None
) -> RegularDescriptor:
    """Descriptor of ``n -> #paths of length n from u to v``."""
    opts = opts or RegularityOptions()
    builder = _Builder(g, opts)
    return builder.pair(frozenset(range(g.n_vertices)), g.index(u), g.index(v))


def descriptor_of_spheres(g: LabelledGraph, opts: Optional[RegularityOptions] = None) -> RegularDescriptor:
    """Descriptor of the sphere sizes ``n -> sum_v #paths(start, v, n)``."""
    if g.start is None:
        raise ValueError("graph has no start vertex")
    opts = opts or RegularityOptions()
    builder = _Builder(g, opts)
    everything = frozenset(range(g.n_vertices))
    total = None
    for v in range(g.n_vertices):
        d = builder.pair(everything, g.start, v)
        total = d if total is None else descriptor_sum(total, d, opts.band)
    return total


# -- validation --------------------------------------------------------------


def class_deviation(D: RegularDescriptor, n: int) -> float:
    """``|terms(n) / (a n^b c^n) - 1|`` for an asymptotic class, or for an
    eventually-zero class 0.0 if the term is consistent with the horizon and
    1.0 otherwise."""
    cls = D.residue_class(n)
    t = D.terms(n)
    if cls.is_zero:
        return 0.0 if (n <= cls.horizon or t == 0) else 1.0
    if cls.b and n == 0:
        raise ValueError("deviation undefined at n = 0 when b > 0")
    predicted = cls.a * n**cls.b * Fraction(cls.c) ** n
    return float(abs(Fraction(t) / predicted - 1))


@dataclass(frozen=True)
class ClassDeviation:
    residue: int
    cls: ResidueClass
    max_deviation: float
    window: tuple[int, int]
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    q: int
    rows: tuple[ClassDeviation, ...]
    tol: float
    tolerance_resolved: bool

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_deviation(self) -> float:
        return max((r.max_deviation for r in self.rows), default=0.0)


def validate_descriptor(
    D: RegularDescriptor, n_lo: int, n_hi: int, tol: float = 1e-6
) -> ValidationReport:
    """Worst deviation of exact terms from each class's prediction on [n_lo, n_hi]."""
    if not 0 <= n_lo < n_hi:
        raise ValueError("need 0 <= n_lo < n_hi")
    rows = []
    for r, cls in enumerate(D.classes):
        start = n_lo + ((r - n_lo) % D.q)
        if cls.b and start == 0:
            start += D.q
        devs = [class_deviation(D, n) for n in range(start, n_hi + 1, D.q)]
        worst = max(devs, default=0.0)
        ok = worst == 0.0 if cls.is_zero else worst <= tol
        rows.append(ClassDeviation(r, cls, worst, (n_lo, n_hi), ok))
    return ValidationReport(D.q, tuple(rows), tol, D.tolerance_resolved)


def _fmt(x) -> str:
    return repr(float(x))


def validation_csv(report: ValidationReport, target: str = "", header: bool = True) -> str:
    buf = io.StringIO()
    if header:
        buf.write("target,q,residue,kind,a,b,c,horizon,max_deviation,window,warning\n")
    warn = "tolerance-resolved" if report.tolerance_resolved else ""
    for row in report.rows:
        cls = row.cls
        a, b, c = ("", "", "") if cls.is_zero else (_fmt(cls.a), str(cls.b), _fmt(cls.c))
        horizon = str(cls.horizon) if cls.is_zero else ""
        buf.write(
            f"{target},{report.q},{row.residue},{cls.kind.value},{a},{b},{c},{horizon},"
            f"{_fmt(row.max_deviation)},{row.window[0]}-{row.window[1]},{warn}\n"
        )
    return buf.getvalue()
