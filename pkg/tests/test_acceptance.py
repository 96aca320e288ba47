"""Acceptance criteria 1-9, one test each.

Every test prints one ``criterion N: PASS|FAIL`` line (also collected into
the pytest terminal summary) and asserts the same condition, so a FAIL line
always comes with a red test.
"""
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES
from mothergraph import electric, mothercuts, verify
from mothergraph.schreier import build_from_criterion, build_projected, project_network
from mothergraph.words import BINARY, TreeShape

MIXED = TreeShape((3, 2, 4))


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_path_law():
    worst, ok = 0.0, True
    for n in range(1, 13):
        start = time.perf_counter()
        net = build_projected(0, BINARY, n)
        pos = net.positions
        is_path = len(net.edges) == (1 << n) - 1 and all(pos[e.v] - pos[e.u] == 1 for e in net.edges)
        res = electric.effective_resistance(net, [net.vertices[0]], [net.vertices[-1]], mode="exact")
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        ok &= is_path and res == (1 << n) - 1 and isinstance(res, Fraction) and elapsed < 1.0
    report(1, ok, f"d=0 paths n=1..12, Res = 2^n - 1 exactly; slowest n took {worst:.3f}s (< 1s)")


def test_criterion_2_dual_construction():
    start = time.perf_counter()
    shapes = [TreeShape.constant(2), TreeShape.constant(3), TreeShape.constant(4), MIXED,
              TreeShape((4, 2, 3)), TreeShape((2, 4))]
    result = verify.action_suite([0, 1, 2], shapes, range(1, 7))
    elapsed = time.perf_counter() - start
    report(2, result.ok and elapsed < 30, f"{result.checks} (d, shape, n) cases identical; {elapsed:.1f}s (< 30s)")


def test_criterion_3_wnw_soundness():
    start = time.perf_counter()
    result = verify.wnw_soundness_suite(1000, seed=2024, max_vertices=64, tol=1e-9)
    elapsed = time.perf_counter() - start
    report(3, result.ok and result.checks >= 1000 and elapsed < 60,
           f"{result.checks} fuzzed allocations, bound <= Res + 1e-9 in all; {elapsed:.1f}s (< 60s)")


def test_criterion_4_wnw_achievability():
    start = time.perf_counter()
    exact = verify.wnw_optimal_suite(100, seed=7, max_vertices=100, mode="exact")
    floating = verify.wnw_optimal_suite(100, seed=8, max_vertices=400, min_vertices=100, mode="float", rtol=1e-8)
    elapsed = time.perf_counter() - start
    report(4, exact.ok and floating.ok and elapsed < 120,
           f"exact equality on {exact.checks} graphs (<= 100 vertices), rel err <= 1e-8 on "
           f"{floating.checks} graphs (100-400 vertices); {elapsed:.1f}s (< 120s)")


def _lemma_family():
    for d in (1, 2):
        for n in range(1, 11):
            yield f"binary d={d}", n, build_projected(d, BINARY, n), BINARY
    for d in (1, 2):
        for n in range(1, 8):
            yield f"(3,2,4) d={d}", n, project_network(build_from_criterion(d, MIXED, n), MIXED), MIXED


def test_criterion_5_membership_lemma():
    start = time.perf_counter()
    pairs, bad = 0, 0
    for _, n, net, _ in _lemma_family():
        rep = mothercuts.lemma_membership_check(net, n)
        pairs += rep.pairs
        bad += len(rep.violations)
    elapsed = time.perf_counter() - start
    report(5, bad == 0 and elapsed < 600, f"{pairs} (edge, a) pairs, {bad} counterexamples; {elapsed:.1f}s")


def test_criterion_6_weight_sums():
    edges, bad = 0, 0
    for _, n, net, shape in _lemma_family():
        for e in net.edges:
            edges += 1
            if mothercuts.weight_sum_over_cutsets(e, shape) != mothercuts.weight_sum_bruteforce(e, shape, n):
                bad += 1
    report(6, bad == 0, f"{edges} edges, closed form == enumeration exactly, {bad} mismatches")


def test_criterion_7_theorem_soundness():
    result = verify.theorem_suite([1, 2], [BINARY, MIXED], [1, 2], range(3, 13), mode="float")
    spot = mothercuts.theorem_bound(1, BINARY, 1, 2, 3, mode="exact", certify=True)
    spot_ok = spot.bound == Fraction(2, 5) and spot.resistance == Fraction(5, 3)
    report(7, result.ok and spot_ok,
           f"{result.checks} windows with bound <= Res; spot value bound={spot.bound} Res={spot.resistance}")


SCALING = {}


def _scaling(d):
    if d not in SCALING:
        SCALING[d] = mothercuts.scaling_rows(d, BINARY, 1, range(2, 13), n_offset=2, mode="float")
    return SCALING[d]


def test_criterion_8_scaling():
    start = time.perf_counter()
    d1 = [r.per_step for r in _scaling(1)]
    d2 = [r.per_log for r in _scaling(2)]
    sound = all(float(r.bound) <= r.resistance * (1 + 1e-9) for d in (1, 2) for r in _scaling(d))
    lo1, hi1, q1 = verify.bracket(d1)
    lo2, hi2, q2 = verify.bracket(d2)
    elapsed = time.perf_counter() - start
    ok = sound and lo1 > 0 and lo2 > 0 and q1 <= 8 and q2 <= 8 and elapsed < 600
    report(8, ok, f"d=1 bound/(t-s) in [{lo1:.4f}, {hi1:.4f}] (ratio {q1:.2f}); "
                  f"d=2 bound/(ln t - ln s) in [{lo2:.4f}, {hi2:.4f}] (ratio {q2:.2f}); {elapsed:.1f}s")


def test_criterion_9_recurrence():
    series = {d: mothercuts.recurrence_experiment(d, BINARY, 12) for d in (1, 2)}
    increasing = all(
        b.bound > a.bound for rows in series.values() for a, b in zip(rows, rows[1:])
    )
    inc1 = [float(r.increment) for r in series[1] if r.t >= 2]
    inc2 = [float(r.increment) * r.t for r in series[2] if r.t >= 2]
    lo1, hi1, q1 = verify.bracket(inc1)
    lo2, hi2, q2 = verify.bracket(inc2)
    report(9, increasing and q1 <= 4 and q2 <= 4,
           f"series strictly increasing; d=1 increments in [{lo1:.4f}, {hi1:.4f}] (ratio {q1:.2f}); "
           f"d=2 increment*t in [{lo2:.4f}, {hi2:.4f}] (ratio {q2:.2f})")
