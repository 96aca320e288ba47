"""Effective resistance, equilibrium voltage and flow on finite networks.

Two solvers sit behind one interface. ``mode="exact"`` eliminates interior
vertices one at a time (star-mesh / Schur complement on the Laplacian) over
``Fraction`` and returns rationals. ``mode="float"`` solves the Dirichlet
Laplacian system with Jacobi-preconditioned CG, falling back to a sparse
direct solve if CG stalls.

Boundary sets are contracted to two super-nodes first; parallel edges are
merged by adding conductances.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from . import kernels
from .schreier import Network

_SRC = ("__A__",)
_SNK = ("__B__",)

EXACT_LIMIT = 400
FLOAT_RTOL = 1e-12
RESIDUAL_LIMIT = 1e-10


class Disconnected(ValueError):
    """A and B lie in different components."""


@dataclass
class VoltageProfile:
    values: dict
    A: frozenset
    B: frozenset
    resistance: Fraction | float
    residual: float = 0.0
    exact: bool = True

    def __getitem__(self, v):
        return self.values[v]


@dataclass
class Flow:
    """Antisymmetric edge flow, stored once per undirected edge as ``u -> v``."""

    values: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)

    def __getitem__(self, uv):
        u, v = uv
        if (u, v) in self.values:
            return self.values[(u, v)]
        return -self.values[(v, u)]

    def divergence(self, x) -> Fraction | float:
        total = 0
        for (u, v), f in self.values.items():
            if u == x:
                total += f
            elif v == x:
                total -= f
        return total

    def out_of(self, S: Collection) -> Fraction | float:
        S = set(S)
        return sum(
            (f if u in S else -f)
            for (u, v), f in self.values.items()
            if (u in S) != (v in S)
        )


def _check_sets(net: Network, A, B):
    A, B = frozenset(A), frozenset(B)
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    if A & B:
        raise ValueError("A and B overlap")
    missing = (A | B) - set(net.index)
    if missing:
        raise ValueError(f"unknown vertices {sorted(map(str, missing))[:5]}")
    return A, B


def _contracted_adjacency(net: Network, A, B):
    def node(v):
        return _SRC if v in A else _SNK if v in B else v

    adj = {_SRC: {}, _SNK: {}}
    for v in net.vertices:
        if v not in A and v not in B:
            adj[v] = {}
    for e in net.edges:
        a, b = node(e.u), node(e.v)
        if a == b:
            continue
        c = Fraction(e.conductance)
        adj[a][b] = adj[a].get(b, 0) + c
        adj[b][a] = adj[b].get(a, 0) + c
    return adj


def _exact_solve(net: Network, A, B):
    """Eliminate every interior vertex in min-degree order; back-substitute voltages."""
    adj = _contracted_adjacency(net, A, B)
    heap = [(len(nb), i, v) for i, (v, nb) in enumerate(adj.items()) if v not in (_SRC, _SNK)]
    order_key = {v: i for _, i, v in heap}
    heapq.heapify(heap)
    done = set()
    stack = []
    while heap:
        deg, i, v = heapq.heappop(heap)
        if v in done or deg != len(adj[v]):
            continue
        done.add(v)
        nbrs = adj.pop(v)
        for u in nbrs:
            del adj[u][v]
        total = sum(nbrs.values())
        stack.append((v, nbrs, total))
        items = list(nbrs.items())
        for a in range(len(items)):
            u, cu = items[a]
            for b in range(a + 1, len(items)):
                w, cw = items[b]
                c = cu * cw / total
                adj[u][w] = adj[u].get(w, 0) + c
                adj[w][u] = adj[w].get(u, 0) + c
        for u, _ in items:
            if u not in (_SRC, _SNK):
                heapq.heappush(heap, (len(adj[u]), order_key[u], u))
    c_ab = adj[_SRC].get(_SNK, Fraction(0))
    if c_ab == 0:
        raise Disconnected("A and B are not connected")
    volt = {_SRC: Fraction(0), _SNK: Fraction(1)}
    for v, nbrs, total in reversed(stack):
        if total == 0:
            volt[v] = Fraction(0)
        else:
            volt[v] = sum(c * volt[u] for u, c in nbrs.items()) / total
    values = {}
    for x in net.vertices:
        values[x] = Fraction(0) if x in A else Fraction(1) if x in B else volt[x]
    return 1 / c_ab, values


def _float_solve(net: Network, A, B, rtol=FLOAT_RTOL, method="cg"):
    nv = len(net.vertices)
    idx = net.index
    src, dst, cond = net.arrays()
    keep = src != dst
    src, dst, cond = src[keep], dst[keep], cond[keep]
    role = np.zeros(nv, np.int8)  # 0 interior, 1 in A, 2 in B
    role[[idx[v] for v in A]] = 1
    role[[idx[v] for v in B]] = 2

    adj = sp.coo_matrix((np.ones(len(src)), (src, dst)), shape=(nv, nv))
    _, comp = connected_components(adj, directed=False)
    a_comps = set(comp[role == 1].tolist())
    b_comps = set(comp[role == 2].tolist())
    if not a_comps & b_comps:
        raise Disconnected("A and B are not connected")
    live = np.isin(comp, list(a_comps | b_comps))
    interior = np.flatnonzero((role == 0) & live)
    local = -np.ones(nv, np.int64)
    local[interior] = np.arange(len(interior))

    # Dirichlet system on the interior: L_II V = C_IB * 1
    lap = sp.coo_matrix(
        (np.concatenate([cond, cond]), (np.concatenate([src, dst]), np.concatenate([dst, src]))),
        shape=(nv, nv),
    ).tocsr()
    deg = np.asarray(lap.sum(axis=1)).ravel()
    L = sp.diags(deg) - lap
    L_ii = L[interior][:, interior].tocsr()
    rhs = np.asarray(lap[interior][:, np.flatnonzero(role == 2)].sum(axis=1)).ravel()

    volt = np.zeros(nv)
    volt[role == 2] = 1.0
    residual = 0.0
    if len(interior):
        x = None
        if method == "cg":
            x, _, residual = kernels.pcg(L_ii, rhs, tol=rtol)
            if not residual <= RESIDUAL_LIMIT:
                x = None
        if x is None:
            x = np.atleast_1d(spsolve(L_ii.tocsc(), rhs))
        bnorm = np.linalg.norm(rhs)
        residual = float(np.linalg.norm(rhs - L_ii @ x) / bnorm) if bnorm else 0.0
        volt[interior] = x

    # current out of A = energy at unit potential gap
    drop = volt[dst] - volt[src]
    energy = float(np.sum(cond * drop * drop))
    a_mask = role == 1
    leave = a_mask[src] != a_mask[dst]
    current = float(np.sum(np.where(a_mask[src], drop, -drop)[leave] * cond[leave]))
    flux = current if current > 0 else energy
    values = {v: float(volt[i]) for v, i in idx.items()}
    return 1.0 / flux, values, residual


def equilibrium_voltage(net: Network, A, B, mode: str = "exact", method: str = "cg") -> VoltageProfile:
    """Voltage with ``V = 0`` on ``A`` and ``V = 1`` on ``B``, harmonic elsewhere.

    Vertices in components touching neither set are assigned 0.
    """
    A, B = _check_sets(net, A, B)
    if mode == "exact":
        res, values = _exact_solve(net, A, B)
        return VoltageProfile(values, A, B, res, 0.0, True)
    if mode == "float":
        res, values, residual = _float_solve(net, A, B, method=method)
        return VoltageProfile(values, A, B, res, residual, False)
    raise ValueError(f"unknown mode {mode!r}")


def effective_resistance(net: Network, A, B, mode: str = "exact", method: str = "cg"):
    """``Res(A, B)``; ``math.inf`` when the sets are not connected."""
    try:
        return equilibrium_voltage(net, A, B, mode, method).resistance
    except Disconnected:
        return math.inf


def equilibrium_flow(voltage: VoltageProfile, net: Network) -> Flow:
    """``f(u, v) = (V_v - V_u) * C_uv``, parallel edges summed."""
    flow = Flow()
    for e in net.edges:
        f = (voltage.values[e.v] - voltage.values[e.u]) * (
            e.conductance if voltage.exact else float(e.conductance)
        )
        if (e.v, e.u) in flow.values:
            flow.values[(e.v, e.u)] -= f
        else:
            flow.values[(e.u, e.v)] = flow.values.get((e.u, e.v), 0) + f
        flow.edges.append((e, f))
    return flow


def energy(flow: Flow) -> Fraction | float:
    return sum(f * f / e.conductance if isinstance(f, Fraction) else f * f / float(e.conductance)
               for e, f in flow.edges)


def resistance_monotonicity_check(net: Network, A, B, edge: int, mode: str = "exact") -> bool:
    """Deleting edge ``edge`` (an index into ``net.edges``) never lowers ``Res(A, B)``."""
    before = effective_resistance(net, A, B, mode)
    after = effective_resistance(net.without([edge]), A, B, mode)
    if mode == "exact" or math.isinf(after):
        return after >= before
    return after >= before * (1 - 1e-9)


def default_mode(net: Network) -> str:
    return "exact" if len(net.vertices) <= EXACT_LIMIT else "float"


def result_json(res) -> dict:
    if isinstance(res, Fraction):
        return {"res": f"{res.numerator}/{res.denominator}"}
    if math.isinf(res):
        return {"res": "inf"}
    return {"res": res}
