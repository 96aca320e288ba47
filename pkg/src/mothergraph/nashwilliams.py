"""Nash-Williams lower bounds over possibly overlapping cutsets.

Every edge may split its resistance among the cutsets that contain it
(an *allocation*). The split conductance of a cutset is the sum of the
reciprocals of its edges' shares, and the sum of the inverse split
conductances never exceeds the effective resistance. Allocating in
proportion to the voltage level sets attains it.

Edges are referred to by their index in ``net.edges``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from . import electric
from .schreier import Network

LEVEL_TOL = 1e-9


class InvalidAllocation(ValueError):
    pass


@dataclass(frozen=True)
class Cutset:
    id: Hashable
    edges: frozenset
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __len__(self):
        return len(self.edges)


@dataclass
class Allocation:
    """Partial resistances ``R[e, i]`` keyed by ``(edge index, cutset id)``."""

    shares: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.shares.get(key, 0)

    def per_edge(self) -> dict:
        totals = {}
        for (e, _), r in self.shares.items():
            totals[e] = totals.get(e, 0) + r
        return totals

    def validate(self, net: Network, cutsets: Sequence[Cutset], rtol: float = 1e-12):
        members = {c.id: c.edges for c in cutsets}
        for (e, i), r in self.shares.items():
            if r < 0:
                raise InvalidAllocation(f"negative share on edge {e} for cutset {i}")
            if r > 0 and (i not in members or e not in members[i]):
                raise InvalidAllocation(f"edge {e} has a share in cutset {i} but is not in it")
        for e, total in self.per_edge().items():
            budget = net.edges[e].resistance
            if isinstance(total, Fraction):
                ok = total <= budget
            else:
                ok = total <= float(budget) * (1 + rtol)
            if not ok:
                raise InvalidAllocation(f"edge {e} allocates {total} > R_e = {budget}")


@dataclass
class CutsetRow:
    id: Hashable
    size: int
    weight: Fraction | float | None
    conductance: Fraction | float
    contribution: Fraction | float


@dataclass
class BoundReport:
    rows: list
    bound: Fraction | float
    resistance: Fraction | float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def gap_ratio(self):
        if self.resistance is None or not self.bound:
            return None
        return float(self.resistance) / float(self.bound)

    def to_json(self) -> dict:
        return {
            "meta": {k: _plain(v) for k, v in self.meta.items()},
            "bound": _plain(self.bound),
            "resistance": _plain(self.resistance),
            "gap_ratio": self.gap_ratio,
            "cutsets": [
                {
                    "id": _plain(r.id),
                    "size": r.size,
                    "weight": _plain(r.weight),
                    "conductance": _plain(r.conductance),
                    "contribution": _plain(r.contribution),
                }
                for r in self.rows
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cutset", "size", "weight", "split_conductance", "contribution"])
        for r in self.rows:
            w.writerow([_plain(r.id), r.size, _plain(r.weight), _plain(r.conductance), _plain(r.contribution)])
        return buf.getvalue()


def _plain(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, tuple):
        return list(v)
    return v


def validate_cutset(net: Network, S: Iterable[int], A, B) -> bool:
    """True iff removing the edges ``S`` leaves no path from ``A`` to ``B``."""
    S = set(S)
    A, B = set(A), set(B)
    adj = {v: [] for v in net.vertices}
    for i, e in enumerate(net.edges):
        if i in S:
            continue
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen = set(A)
    queue = deque(A)
    while queue:
        x = queue.popleft()
        if x in B:
            return False
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return True


def split_conductance(cutset: Cutset, alloc: Allocation):
    """Sum of ``1 / R[e, i]`` over the cutset; ``inf`` if any member has a zero share."""
    total = 0
    for e in cutset.edges:
        r = alloc[(e, cutset.id)]
        if r == 0:
            return math.inf
        total += 1 / r
    return total


def wnw_bound(
    net: Network,
    cutsets: Sequence[Cutset],
    alloc: Allocation,
    A=None,
    B=None,
    weights: dict | None = None,
    resistance=None,
    check: bool = True,
) -> BoundReport:
    """``sum_i C(S_i)^-1`` with per-cutset detail.

    With ``A`` and ``B`` given and ``check`` on, every cutset must separate them.
    ``resistance`` may be a value or one of ``"exact"`` / ``"float"`` to run the solver.
    """
    if check:
        alloc.validate(net, cutsets)
        if A is not None and B is not None:
            for c in cutsets:
                if not validate_cutset(net, c.edges, A, B):
                    raise ValueError(f"cutset {c.id} does not separate A from B")
    rows = []
    bound = 0
    for c in cutsets:
        cond = split_conductance(c, alloc)
        contrib = 0 if math.isinf(cond) or cond == 0 else 1 / cond
        bound += contrib
        rows.append(CutsetRow(c.id, len(c), (weights or {}).get(c.id), cond, contrib))
    if isinstance(resistance, str):
        resistance = electric.effective_resistance(net, A, B, mode=resistance)
    return BoundReport(rows, bound, resistance)


def proportional_allocation(net: Network, cutsets: Sequence[Cutset], weights: dict) -> Allocation:
    """``R[e, i] = R_e K_i / sum_{j: e in S_j} K_j``; edges with zero total weight get nothing."""
    if any(k < 0 for k in weights.values()):
        raise InvalidAllocation("negative cutset weight")
    totals = {}
    for c in cutsets:
        for e in c.edges:
            totals[e] = totals.get(e, 0) + weights[c.id]
    shares = {}
    for c in cutsets:
        k = weights[c.id]
        for e in c.edges:
            if totals[e] > 0 and k > 0:
                r = net.edges[e].resistance
                if not isinstance(k, Fraction) and not isinstance(k, int):
                    r = float(r)
                shares[(e, c.id)] = r * k / totals[e]
    return Allocation(shares)


def _levels(values, exact: bool):
    vals = sorted(set(values))
    if exact:
        return vals
    levels = []
    for v in vals:
        if not levels or v - levels[-1] > LEVEL_TOL:
            levels.append(v)
    return levels


def optimal_allocation(net: Network, A, B, mode: str = "exact"):
    """Level-set cutsets of the equilibrium voltage with weights ``a_i - a_{i-1}``.

    Returns ``(cutsets, weights, allocation, voltage)``; the resulting bound
    equals ``Res(A, B)``.
    """
    volt = electric.equilibrium_voltage(net, A, B, mode)
    exact = volt.exact
    levels = _levels(volt.values.values(), exact)
    if exact:
        snap = volt.values
    else:
        # voltages within LEVEL_TOL of a level are read as that level
        snap = {}
        for v, x in volt.values.items():
            lo, hi = 0, len(levels) - 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if levels[mid] <= x + LEVEL_TOL:
                    lo = mid
                else:
                    hi = mid - 1
            snap[v] = levels[lo]
        levels = [min(max(l, 0.0), 1.0) for l in levels]
    rank = {lv: i for i, lv in enumerate(levels)}
    buckets = {}
    for i, e in enumerate(net.edges):
        ru, rv = rank[snap[e.u]], rank[snap[e.v]]
        if ru == rv:
            continue
        lo, hi = min(ru, rv), max(ru, rv)
        # edge crosses U_j = {V < a_j} for j in (lo, hi]
        for j in range(lo + 1, hi + 1):
            buckets.setdefault(j, []).append(i)
    cutsets = [Cutset(j, frozenset(buckets.get(j, ())), {"level": levels[j]}) for j in range(1, len(levels))]
    weights = {j: levels[j] - levels[j - 1] for j in range(1, len(levels))}
    alloc = proportional_allocation(net, cutsets, weights)
    return cutsets, weights, alloc, volt


def divergence_series(net: Network, families: Sequence[Sequence[Cutset]], alloc: Allocation) -> list:
    """Cumulative bound after each successive family of cutsets (one family per scale)."""
    out = []
    total = 0
    for family in families:
        for c in family:
            cond = split_conductance(c, alloc)
            if not (math.isinf(cond) or cond == 0):
                total += 1 / cond
        out.append(total)
    return out


def classical_bound(net: Network, cutsets: Sequence[Cutset]):
    """Disjoint-cutset Nash-Williams: ``sum_i (sum_{e in S_i} C_e)^-1``."""
    seen = set()
    total = 0
    for c in cutsets:
        if seen & c.edges:
            raise ValueError("classical bound needs pairwise disjoint cutsets")
        seen |= c.edges
        cond = sum(net.edges[e].conductance for e in c.edges)
        total += 1 / cond
    return total
