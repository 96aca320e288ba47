"""Verification suites shared by the CLI and the test-suite.

Each suite returns a ``SuiteResult``; ``failures`` lists every counterexample found.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import electric, fuzz, mothercuts, nashwilliams
from .schreier import build_from_action, build_from_criterion, build_projected, project_network
from .words import TreeShape


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else f"FAIL ({len(self.failures)})"
        return f"{self.name}: {status}, {self.checks} checks"


def action_suite(d_values, shapes, n_values) -> SuiteResult:
    """Generator-action graph equals criterion graph, as typed edge sets."""
    out = SuiteResult("action")
    for shape in shapes:
        for d in d_values:
            for n in n_values:
                a = build_from_action(d, shape, n).typed_pairs()
                c = build_from_criterion(d, shape, n).typed_pairs()
                out.checks += 1
                if a != c:
                    out.failures.append((d, shape.spec(), n, sorted(a ^ c)[:5]))
    return out


def _lemma_nets(d, shape, n, project):
    if project:
        return project_network(build_from_criterion(d, shape, n), shape)
    return build_projected(d, shape, n)


def lemma_suite(d_values, shapes, n_values, project=False) -> SuiteResult:
    """Plain vs enlarged cutset membership over every (edge, a) pair."""
    out = SuiteResult("lemma")
    for shape in shapes:
        for d in d_values:
            for n in n_values:
                rep = mothercuts.lemma_membership_check(_lemma_nets(d, shape, n, project), n)
                out.checks += rep.pairs
                out.notes.append(f"d={d} {shape} {rep.summary()}")
                for frame, a, count in rep.violations:
                    out.failures.append((d, shape.spec(), n, str(frame.lo), str(frame.hi), str(a), count))
    return out


def weights_suite(d_values, shapes, n_values, project=False) -> SuiteResult:
    """Closed-form weight sums equal brute-force enumeration, exactly."""
    out = SuiteResult("weights")
    for shape in shapes:
        for d in d_values:
            for n in n_values:
                net = _lemma_nets(d, shape, n, project)
                for e in net.edges:
                    closed = mothercuts.weight_sum_over_cutsets(e, shape)
                    brute = mothercuts.weight_sum_bruteforce(e, shape, n)
                    out.checks += 1
                    if closed != brute:
                        out.failures.append((d, shape.spec(), n, str(e.u), str(e.v), closed, brute))
    return out


def wnw_soundness_suite(trials: int, seed: int = 0, max_vertices: int = 64, tol: float = 1e-9) -> SuiteResult:
    """Random valid allocations never bound above the solver resistance."""
    rng = random.Random(seed)
    out = SuiteResult("wnw-soundness")
    for trial in range(trials):
        net = fuzz.random_network(rng, rng.randint(3, max_vertices))
        A, B = fuzz.random_terminals(rng, net)
        cutsets = fuzz.random_cutsets(rng, net, A, B, rng.randint(1, 12))
        alloc = fuzz.random_allocation(rng, net, cutsets)
        rep = nashwilliams.wnw_bound(net, cutsets, alloc, A, B)
        res = electric.effective_resistance(net, A, B, mode="float")
        out.checks += 1
        if not float(rep.bound) <= res + tol:
            out.failures.append((trial, float(rep.bound), res))
    return out


def wnw_optimal_suite(trials: int, seed: int = 0, max_vertices: int = 100, mode: str = "exact",
                      rtol: float = 1e-8, min_vertices: int = 3) -> SuiteResult:
    """The voltage level-set allocation reproduces ``Res(A, B)``."""
    rng = random.Random(seed)
    out = SuiteResult(f"wnw-optimal-{mode}")
    for trial in range(trials):
        net = fuzz.random_network(rng, rng.randint(min_vertices, max_vertices), rational=(mode == "exact"))
        A, B = fuzz.random_terminals(rng, net)
        cutsets, weights, alloc, volt = nashwilliams.optimal_allocation(net, A, B, mode)
        rep = nashwilliams.wnw_bound(net, cutsets, alloc, A, B, weights=weights)
        res = volt.resistance
        out.checks += 1
        if mode == "exact":
            good = rep.bound == res
        else:
            good = abs(float(rep.bound) - res) <= rtol * res
        if not good:
            out.failures.append((trial, len(net.vertices), rep.bound, res))
    return out


def theorem_suite(d_values, shapes, s_values, n_values, mode="float", tol=1e-9) -> SuiteResult:
    """``theorem_bound <= Res`` over every admissible window."""
    out = SuiteResult("theorem")
    for shape in shapes:
        for d in d_values:
            for n in n_values:
                for s in s_values:
                    for t in range(s + 1, n - 1):
                        rep = mothercuts.theorem_bound(d, shape, s, t, n, mode=mode)
                        out.checks += 1
                        if not float(rep.bound) <= float(rep.resistance) * (1 + tol):
                            out.failures.append((d, shape.spec(), s, t, n, rep.bound, rep.resistance))
    return out


def bracket(values) -> tuple:
    lo, hi = min(values), max(values)
    return lo, hi, (hi / lo if lo > 0 else math.inf)


def parse_shape(spec: str | None, explicit: str | None = None) -> TreeShape:
    if explicit:
        return TreeShape.parse(explicit, mode="pad")
    return TreeShape.parse(spec or "2")
