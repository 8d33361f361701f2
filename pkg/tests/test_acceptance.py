"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line
that is echoed in the terminal summary."""

import itertools
import math
import time

import numpy as np
import pytest

from markovcesaro.action import (
    convergence_report,
    operator_contract_check,
    random_action,
    spherical_averages,
)
from markovcesaro.cli import main
from markovcesaro.codings import (
    build_finite_group_shortlex,
    build_free_group,
    build_free_semigroup,
    cyclic_group_oracle,
    free_group_inverses,
    free_group_oracle,
    free_semigroup_oracle,
    symmetric_group_oracle,
    verify_bijectivity,
)
from markovcesaro.counting import count_table, enumerate_arc_paths, verify_cut_convolution
from markovcesaro.graph import Arc, LabelledGraph, strongly_connected_components
from markovcesaro.regularity import (
    class_deviation,
    descriptor_convolve,
    descriptor_of_pair,
    descriptor_of_spheres,
    descriptor_sum,
    geometric_descriptor,
    perron_analyze,
    validate_descriptor,
)

import conftest
from oracles import brute_spherical_average, random_graph

pytestmark = pytest.mark.acceptance


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_01_counting_matches_enumeration():
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    mismatches = 0
    graphs = 1000
    for _ in range(graphs):
        g = random_graph(rng, int(rng.integers(1, 6)), p=0.3, max_parallel=2)
        table = count_table(g, 8)
        for u in range(g.n_vertices):
            for n in range(9):
                ends = np.zeros(g.n_vertices, dtype=object)
                for path in enumerate_arc_paths(g, u, None, n):
                    ends[g.arcs[path[-1]].head if path else u] += 1
                mismatches += int(any(ends[v] != table.per_pair[n, u, v] for v in range(g.n_vertices)))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    assert record(1, "counting oracle equivalence", ok,
                  f"{graphs} graphs, n <= 8, {mismatches} mismatches, {elapsed:.1f} s")


def test_02_sphere_formulas():
    checks = {}
    for k in (1, 2, 3):
        checks[f"free semigroup k={k}"] = count_table(build_free_semigroup(k), 60).spheres == tuple(
            k**n for n in range(61)
        )
    checks["free group k=2"] = count_table(build_free_group(2), 200).spheres == (1,) + tuple(
        4 * 3 ** (n - 1) for n in range(1, 201)
    )
    checks["Z"] = count_table(build_free_group(1), 50).spheres == (1,) + (2,) * 50
    checks["Z/6"] = count_table(build_finite_group_shortlex(cyclic_group_oracle(6)), 20).spheres == (
        1, 2, 2, 1) + (0,) * 17
    failed = [name for name, ok in checks.items() if not ok]
    assert record(2, "sphere formulas", not failed, "all exact" if not failed else f"failed {failed}")


def _admissible_partitions(g):
    n = g.n_vertices
    for size in range(1, n):
        for first in itertools.combinations(range(n), size):
            first = set(first)
            if not any(a.tail not in first and a.head in first for a in g.arcs):
                yield sorted(first), sorted(set(range(n)) - first)


def test_03_cut_convolution():
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    graphs = partitions = failures = 0
    while graphs < 200:
        g = random_graph(rng, int(rng.integers(2, 6)), p=0.35)
        if len(strongly_connected_components(g).components) < 2:
            continue
        graphs += 1
        for first, second in _admissible_partitions(g):
            partitions += 1
            failures += not verify_cut_convolution(g, (first, second), None, None, 30)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and partitions > 0 and elapsed < 60
    assert record(3, "cut-convolution identity", ok,
                  f"{graphs} graphs, {partitions} partitions, n <= 30, {failures} failures, {elapsed:.1f} s")


def test_04_regularity_constants():
    def rel(x, y):
        return abs(float(x) - y) / abs(y)

    def constants(d):
        cls = d.classes[0]
        return cls.a, cls.b, cls.c

    two, one, three = geometric_descriptor(1, 2), geometric_descriptor(1, 1), geometric_descriptor(1, 3)
    results = {}
    d = descriptor_convolve(two, one)
    a, b, c = constants(d)
    results["2^n * 1"] = (d.q == 1 and rel(a, 2) <= 1e-9 and b == 0 and rel(c, 2) <= 1e-9
                          and all(d.terms(n) == 2 ** (n + 1) - 1 for n in range(200)))
    d = descriptor_convolve(one, one)
    a, b, c = constants(d)
    results["1 * 1"] = (d.q == 1 and a == 1 and b == 1 and c == 1.0
                        and all(d.terms(n) == n + 1 for n in range(200)))
    a, b, c = constants(descriptor_sum(two, three))
    results["2^n + 3^n"] = rel(a, 1) <= 1e-9 and b == 0 and rel(c, 3) <= 1e-9
    a, b, c = constants(descriptor_sum(two, two))
    results["2^n + 2^n"] = rel(a, 2) <= 1e-9 and b == 0 and rel(c, 2) <= 1e-9
    failed = [k for k, ok in results.items() if not ok]
    assert record(4, "regularity constants", not failed,
                  "4 of 4 cases within 1e-9" if not failed else f"failed {failed}")


def _separated_graphs(rng, count):
    found = []
    while len(found) < count:
        g = random_graph(rng, int(rng.integers(3, 7)), p=0.35, symbols=("a",))
        cond = strongly_connected_components(g)
        radii = [
            perron_analyze(g, comp).spectral_radius
            for i, comp in enumerate(cond.components)
            if not cond.is_trivial(i, g)
        ]
        if len(radii) >= 2 and all(abs(x - y) >= 0.2 for x, y in itertools.combinations(radii, 2)):
            found.append(g)
    return found


def test_05_descriptor_validation(loop_pair_graph):
    loop = class_deviation(descriptor_of_pair(loop_pair_graph, "u", "v"), 200)
    free = validate_descriptor(descriptor_of_spheres(build_free_group(2)), 1, 200).max_deviation
    worst200, bad = 0.0, 0
    for g in _separated_graphs(np.random.default_rng(1), 20):
        for u in range(g.n_vertices):
            for v in range(g.n_vertices):
                d = descriptor_of_pair(g, u, v)
                for r, cls in enumerate(d.classes):
                    if cls.is_zero:
                        continue
                    d200 = class_deviation(d, 200 - (200 - r) % d.q)
                    d100 = class_deviation(d, 100 - (100 - r) % d.q)
                    worst200 = max(worst200, d200)
                    bad += not (d200 <= 0.05 and (d200 < d100 or d200 == 0.0))
    ok = loop <= 1e-30 and free == 0.0 and bad == 0
    assert record(5, "descriptor validation", ok,
                  f"loop pair {loop:.2e}, F2 spheres {free}, 20 random graphs worst {worst200:.2e}, "
                  f"{bad} non-decreasing classes")


def test_06_operator_contract():
    rng = np.random.default_rng(606)
    failures = []
    worst_mean = 0.0
    for trial in range(100):
        g = random_graph(rng, int(rng.integers(1, 6)), p=0.4)
        act = random_action(g.alphabet, int(rng.integers(1, 13)), rng)
        report = operator_contract_check(act, g, 12, trials=1, rng=rng, atol=1e-12)
        if not report.passed:
            failures.append((trial, report.violations[:2]))
        phi = rng.uniform(-1, 1, act.space.size)
        series = spherical_averages(act, g, phi, 12)
        nu = act.space.nu
        for n in range(13):
            if not series.empty_sphere[n]:
                worst_mean = max(worst_mean, abs(series.s[n] @ nu - phi @ nu))
    ok = not failures and worst_mean <= 1e-10
    assert record(6, "averaging operator contract", ok,
                  f"100 triples, {len(failures)} contract failures, mean error {worst_mean:.1e}")


def test_07_dp_matches_brute_force():
    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(200):
        g = random_graph(rng, int(rng.integers(1, 5)), p=0.4)
        act = random_action(g.alphabet, int(rng.integers(1, 9)), rng)
        phi = rng.uniform(-1, 1, act.space.size)
        series = spherical_averages(act, g, phi, 6)
        for n in range(7):
            worst = max(worst, float(np.abs(series.s[n] - brute_spherical_average(act, g, phi, n)).max()))
    assert record(7, "DP vs brute force", worst <= 1e-12, f"200 trials, max abs error {worst:.1e}")


def test_08_cesaro_ladder_decay():
    start = time.perf_counter()
    g = build_free_group(2)
    rows = []
    ok = True
    for seed in (81, 82):
        rng = np.random.default_rng(seed)
        act = random_action(g.alphabet, 64, rng, free_group_inverses(2))
        for _ in range(5):
            phi = rng.uniform(-1, 1, 64)
            series = spherical_averages(act, g, phi, 4096)
            d = convergence_report(series, act.space, 1, 2.0, start=64).distances
            good = (len(d) == 6 and all(math.isfinite(x) for x in d)
                    and d[-1] <= d[0] / 4 and d[-1] <= 0.05)
            ok &= good
            rows.append(d[-1] / d[0] if d[0] else 0.0)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    assert record(8, "Cesaro ladder decay", ok,
                  f"10 runs, worst d_last/d_first {max(rows):.3f}, {elapsed:.1f} s")


def test_09_coding_verification():
    cases = [(build_free_semigroup(k), free_semigroup_oracle(k), 7) for k in (1, 2, 3)]
    cases += [(build_free_group(k), free_group_oracle(k), 7 if k < 3 else 5) for k in (1, 2, 3)]
    for n in range(1, 9):
        o = cyclic_group_oracle(n)
        cases.append((build_finite_group_shortlex(o), o, n // 2 + 2))
    for n in (2, 3, 4):
        o = symmetric_group_oracle(n)
        cases.append((build_finite_group_shortlex(o), o, n * (n - 1) // 2 + 2))
    passed = sum(verify_bijectivity(g, o, n).passed for g, o, n in cases)
    good = build_free_group(2)
    broken = LabelledGraph(good.vertices, good.arcs + (Arc(1, 3, "A"),), good.alphabet, good.start)
    report = verify_bijectivity(broken, free_group_oracle(2), 5)
    caught = not report.passed and report.failure_n == 2 and report.witness == ("a", "A")
    ok = passed == len(cases) and caught
    assert record(9, "coding verification", ok,
                  f"{passed}/{len(cases)} built-ins pass, corrupted automaton: {report}")


def test_10_cli_determinism(tmp_path, capsys):
    configs = [
        ["count", "--builtin", "free_group:2", "--nmax", "60"],
        ["analyze", "--builtin", "free_group:2", "--nmax", "120"],
        ["simulate", "--builtin", "free_group:2", "--random-points", "32", "--Nmax", "512", "--seed", "5"],
    ]
    mismatched = []
    for i, argv in enumerate(configs):
        outputs = []
        for rep in range(2):
            out = tmp_path / f"c{i}_{rep}.csv"
            code = main(argv + ["--out", str(out)])
            files = sorted(tmp_path.glob(f"c{i}_{rep}*.csv"))
            outputs.append((code, [f.read_bytes() for f in files]))
        if outputs[0] != outputs[1] or outputs[0][0] != 0:
            mismatched.append(argv[0])
    capsys.readouterr()
    ok = not mismatched
    assert record(10, "CLI determinism", ok,
                  "count, analyze, simulate byte-identical" if ok else f"differs: {mismatched}")
