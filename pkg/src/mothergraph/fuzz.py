"""Random networks, cutsets and allocations for soundness sweeps."""
from __future__ import annotations

import random
from fractions import Fraction

from .nashwilliams import Allocation, Cutset
from .schreier import Network


def random_network(rng: random.Random, nv: int, extra: float = 0.6, rational: bool = True) -> Network:
    """Connected graph: a random spanning tree plus about ``extra * nv`` chords."""
    edges = {}
    order = list(range(nv))
    rng.shuffle(order)
    for i in range(1, nv):
        u, v = order[i], order[rng.randrange(i)]
        edges[frozenset((u, v))] = None
    for _ in range(int(extra * nv)):
        u, v = rng.sample(range(nv), 2)
        edges[frozenset((u, v))] = None
    out = []
    for pair in edges:
        u, v = sorted(pair)
        if rational:
            c = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        else:
            c = Fraction(rng.uniform(0.1, 10.0))
        out.append((u, v, c))
    return Network.from_edges(out, vertices=range(nv))


def random_terminals(rng: random.Random, net: Network, max_size: int = 3):
    verts = list(net.vertices)
    rng.shuffle(verts)
    a = rng.randint(1, max_size)
    b = rng.randint(1, max_size)
    a = min(a, len(verts) - 1)
    b = min(b, len(verts) - a)
    return verts[:a], verts[a : a + b]


def boundary(net: Network, U) -> frozenset:
    U = set(U)
    return frozenset(i for i, e in enumerate(net.edges) if (e.u in U) != (e.v in U))


def random_cutsets(rng: random.Random, net: Network, A, B, count: int) -> list:
    """Edge boundaries of random sets containing ``A`` and missing ``B``.

    Half are BFS balls around ``A`` (thin, nested), half random supersets of ``A``.
    """
    A, B = set(A), set(B)
    adj = {v: [] for v in net.vertices}
    for e in net.edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    dist = {v: 0 for v in A}
    frontier = list(A)
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    radius = max(dist.values(), default=0)
    interior = [v for v in net.vertices if v not in A and v not in B]
    out = []
    for i in range(count):
        if i % 2 == 0 and radius > 0:
            r = rng.randrange(radius + 1)
            U = {v for v, dv in dist.items() if dv <= r and v not in B} | A
        else:
            U = A | {v for v in interior if rng.random() < 0.5}
        S = boundary(net, U)
        if S:
            out.append(Cutset(i, S))
    return out


def random_allocation(rng: random.Random, net: Network, cutsets, exact: bool = False) -> Allocation:
    """Each edge splits a random fraction of its resistance among its cutsets at random proportions."""
    holders = {}
    for c in cutsets:
        for e in c.edges:
            holders.setdefault(e, []).append(c.id)
    shares = {}
    for e, ids in holders.items():
        chosen = ids
        raw = [rng.randint(1, 10) for _ in chosen]
        budget = net.edges[e].resistance * Fraction(rng.randint(1, 10), 10)
        total = sum(raw)
        for i, w in zip(chosen, raw):
            share = budget * w / total
            shares[(e, i)] = share if exact else float(share)
    return Allocation(shares)
