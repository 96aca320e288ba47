"""Schreier graphs of the mother groups on level ``n`` of the tree.

Two builders produce the same edge set: ``build_from_action`` applies every
generator to every word, ``build_from_criterion`` scans pairs of words that
differ in one digit. ``build_projected`` gives the binary quotient with
multiplicity conductances, which is what the resistance code works on.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import kernels
from .words import (
    BINARY,
    DigitWord,
    TreeShape,
    all_words,
    ell_position,
    mask_beta_inverse,
    mask_to_position,
    project_binary,
)

DEFAULT_CAP = 1 << 20
ACTION_SHAPE_LIMIT = 4
TYPE_COLORS = {-1: "black", 0: "red", 1: "blue", 2: "green"}


class CapExceeded(RuntimeError):
    """Raised when a level has more vertices than the configured cap."""


@dataclass(frozen=True)
class Generator:
    degree: int
    sigma: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        if self.degree < -1:
            raise ValueError("degree must be >= -1")
        for size, perm in self.sigma.items():
            if sorted(perm) != list(range(size)):
                raise ValueError(f"sigma_{size} = {perm} is not a permutation of [{size}]")

    def permute(self, size: int, digit: int) -> int:
        perm = self.sigma.get(size)
        return digit if perm is None else perm[digit]


def apply_generator(x: DigitWord, g: Generator, shape: TreeShape) -> DigitWord:
    """Permute the digit just above the ``g.degree``-th nonzero digit.

    Words are level-``len(x)`` vertices: if that digit lies outside the word
    the generator fixes ``x``.
    """
    k = 1 + ell_position(x, g.degree)
    if k >= len(x):
        return x
    return x.replace(k, g.permute(shape[k], x[k]))


def all_generators(d: int, sizes: Iterable[int]) -> list[Generator]:
    """Every generator of degree ``-1..d`` with sigma over the full symmetric groups."""
    sizes = sorted(set(sizes))
    perm_lists = [list(itertools.permutations(range(s))) for s in sizes]
    out = []
    for t in range(-1, d + 1):
        for choice in itertools.product(*perm_lists):
            out.append(Generator(t, dict(zip(sizes, choice))))
    return out


def edge_type(x: DigitWord, y: DigitWord, d: int) -> int | None:
    """Type of the pair ``(x, y)`` in the degree-``d`` graph, or ``None`` if not an edge."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {x} vs {y}")
    diff = [i for i in range(len(x)) if x[i] != y[i]]
    if len(diff) != 1:
        return None
    k = diff[0]
    if k == 0:
        return -1
    if x[k - 1] == 0:
        return None
    t = sum(1 for i in range(k - 1) if x[i])
    return t if t <= d else None


@dataclass(frozen=True)
class Edge:
    u: Hashable
    v: Hashable
    conductance: Fraction = Fraction(1)
    k: int | None = None
    type: int | None = None

    @property
    def resistance(self) -> Fraction:
        return 1 / self.conductance

    def key(self):
        return (frozenset((self.u, self.v)), self.type)

    @property
    def heavy(self) -> DigitWord:
        """Endpoint whose digit ``k`` is nonzero (the one with more nonzero digits)."""
        return self.v if self.v[self.k] else self.u

    @property
    def light(self) -> DigitWord:
        return self.u if self.v[self.k] else self.v

    @property
    def prefix(self) -> DigitWord:
        """Digits strictly left of position ``k``, shared by both endpoints."""
        return DigitWord(self.u.digits[self.k + 1 :])


@dataclass(frozen=True)
class Network:
    vertices: tuple
    edges: tuple[Edge, ...]
    d: int | None = None
    n: int | None = None
    shape: TreeShape | None = None
    binary: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"self-loop at {e.u}")
            if not e.conductance > 0:
                raise ValueError(f"non-positive conductance on {e}")
            if e.type is None:
                continue
            key = e.key()
            if key in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(key)

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence], vertices: Iterable | None = None) -> Network:
        """Generic network from ``(u, v)`` or ``(u, v, conductance)`` tuples."""
        items = []
        verts = dict.fromkeys(vertices or ())
        for item in edges:
            u, v = item[0], item[1]
            c = Fraction(item[2]) if len(item) > 2 else Fraction(1)
            items.append(Edge(u, v, c))
            verts.setdefault(u)
            verts.setdefault(v)
        return cls(tuple(verts), tuple(items))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def positions(self) -> dict:
        """Linear position of every vertex (of its binary projection)."""
        return {v: mask_to_position(v.mask()) for v in self.vertices}

    def arrays(self):
        """``(src, dst, conductance)`` arrays over vertex indices."""
        idx = self.index
        src = np.fromiter((idx[e.u] for e in self.edges), np.int64, len(self.edges))
        dst = np.fromiter((idx[e.v] for e in self.edges), np.int64, len(self.edges))
        cond = np.fromiter((float(e.conductance) for e in self.edges), np.float64, len(self.edges))
        return src, dst, cond

    def edge_set(self) -> set:
        return {e.key() for e in self.edges}

    def typed_pairs(self) -> set:
        """Edges as ``(word, word, type)`` with the two words sorted by their printed form."""
        out = set()
        for e in self.edges:
            a, b = sorted((str(e.u), str(e.v)))
            out.add((a, b, e.type))
        return out

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if e.u == v or e.v == v)

    def vertices_in(self, lo: int, hi: int | None = None) -> list:
        """Vertices with linear position in ``[lo, hi)``."""
        pos = self.positions
        return [v for v in self.vertices if pos[v] >= lo and (hi is None or pos[v] < hi)]

    def without(self, drop: Iterable[int]) -> Network:
        drop = set(drop)
        kept = tuple(e for i, e in enumerate(self.edges) if i not in drop)
        return Network(self.vertices, kept, self.d, self.n, self.shape, self.binary)


def _check_cap(shape: TreeShape, n: int, cap: int) -> int:
    count = math.prod(shape.sizes(n))
    if count > cap:
        raise CapExceeded(f"level {n} of {shape} has {count} vertices (cap {cap})")
    return count


def _orient(x: DigitWord, y: DigitWord):
    """Order endpoints by linear position, then by printed word."""
    px, py = mask_to_position(x.mask()), mask_to_position(y.mask())
    if (px, str(x)) <= (py, str(y)):
        return x, y
    return y, x


def _digit_matrix(sizes: Sequence[int]):
    words = list(all_words(sizes))
    digits = np.array([w.digits for w in words], dtype=np.int64).reshape(len(words), len(sizes))
    strides = np.cumprod([1] + list(sizes[:-1])).astype(np.int64)
    return words, digits, strides


def build_from_criterion(d: int, shape: TreeShape, n: int, cap: int = DEFAULT_CAP) -> Network:
    """Level-``n`` Schreier graph, edges by the single-digit criterion (unit conductances)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(shape, n, cap)
    sizes = shape.sizes(n)
    words, digits, strides = _digit_matrix(sizes)
    src, dst, ks, ts = kernels.mixed_edges(digits, strides, sizes, d)
    edges = []
    for i, j, k, t in zip(src.tolist(), dst.tolist(), ks.tolist(), ts.tolist()):
        u, v = _orient(words[i], words[j])
        edges.append(Edge(u, v, Fraction(1), k, t))
    return Network(tuple(words), tuple(edges), d, n, shape, False)


def build_from_action(
    d: int,
    shape: TreeShape,
    n: int,
    cap: int = DEFAULT_CAP,
    generators: Sequence[Generator] | None = None,
) -> Network:
    """Level-``n`` Schreier graph, edges ``{x, x g}`` for every generator ``g``.

    Enumerates the full symmetric group at each alphabet size, so it is
    restricted to shapes with entries up to 4; use it as an oracle for
    ``build_from_criterion``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if shape.bound > ACTION_SHAPE_LIMIT and generators is None:
        raise ValueError(f"action builder limited to alphabet sizes <= {ACTION_SHAPE_LIMIT}")
    _check_cap(shape, n, cap)
    sizes = shape.sizes(n)
    words, digits, strides = _digit_matrix(sizes)
    if generators is None:
        generators = all_generators(d, sizes)
    nv = len(words)
    rows = np.arange(nv)
    width = max(sizes)

    # k = 1 + ell_t per vertex, n when the generator acts outside the word
    nz = digits != 0
    rank = np.cumsum(nz, axis=1) - 1
    kpos = {}
    for t in range(-1, d + 1):
        if t == -1:
            kpos[t] = np.zeros(nv, np.int64)
            continue
        hit = nz & (rank == t)
        found = hit.any(axis=1)
        kpos[t] = np.where(found, hit.argmax(axis=1) + 1, n)

    found_edges = {}
    for g in generators:
        if g.degree > d:
            continue
        table = np.tile(np.arange(width), (n, 1))
        for k in range(n):
            perm = g.sigma.get(sizes[k])
            if perm is not None:
                table[k, : sizes[k]] = perm
        k = kpos[g.degree]
        act = rows[k < n]
        kk = k[act]
        old = digits[act, kk]
        new = table[kk, old]
        moved = new != old
        src = act[moved]
        dst = src + (new[moved] - old[moved]) * strides[kk[moved]]
        for i, j, kk_ in zip(src.tolist(), dst.tolist(), kk[moved].tolist()):
            key = (min(i, j), max(i, j), g.degree)
            found_edges[key] = kk_
    edges = []
    for (i, j, t), k in sorted(found_edges.items()):
        u, v = _orient(words[i], words[j])
        edges.append(Edge(u, v, Fraction(1), k, t))
    return Network(tuple(words), tuple(edges), d, n, shape, False)


def projected_conductance(heavy_mask: int, shape: TreeShape) -> int:
    """Number of preimages of a binary edge: product of ``m_i - 1`` over the heavy endpoint's ones."""
    return mask_beta_inverse(heavy_mask, shape)


def build_projected(d: int, shape: TreeShape = BINARY, n: int = 1) -> Network:
    """Binary quotient graph on ``{0,1}^n`` with multiplicity conductances.

    ``vertices[p]`` is the word at linear position ``p``; every edge is
    oriented with ``u`` before ``v`` in that order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    light, heavy, ks, ts = kernels.binary_edges(n, d)
    pos = kernels.positions_of_masks(np.arange(1 << n))
    words = [None] * (1 << n)
    for mask, p in enumerate(pos.tolist()):
        words[p] = DigitWord.from_mask(mask, n)
    binary = shape.is_binary
    edges = []
    for lo, hi, k, t in zip(light.tolist(), heavy.tolist(), ks.tolist(), ts.tolist()):
        c = Fraction(1) if binary else Fraction(projected_conductance(hi, shape))
        u, v = words[pos[lo]], words[pos[hi]]
        if pos[lo] > pos[hi]:
            u, v = v, u
        edges.append(Edge(u, v, c, k, t))
    edges.sort(key=lambda e: (mask_to_position(e.u.mask()), mask_to_position(e.v.mask())))
    return Network(tuple(words), tuple(edges), d, n, shape, True)


def project_network(net: Network, shape: TreeShape | None = None) -> Network:
    """Quotient of a full-alphabet graph by permutations of the nonzero letters.

    Edges whose endpoints share their nonzero pattern become loops and are
    dropped; every surviving class gets the preimage-count conductance.
    """
    shape = shape or net.shape
    if shape is None or net.n is None:
        raise ValueError("projection needs the network's shape and level")
    n = net.n
    pos = kernels.positions_of_masks(np.arange(1 << n))
    words = [None] * (1 << n)
    for mask, p in enumerate(pos.tolist()):
        words[p] = DigitWord.from_mask(mask, n)
    classes = {}
    for e in net.edges:
        if e.u[e.k] and e.v[e.k]:
            continue
        heavy = project_binary(e.heavy)
        light = project_binary(e.light)
        u, v = _orient(light, heavy)
        classes[(u, v, e.type)] = (e.k, heavy)
    edges = [
        Edge(u, v, Fraction(projected_conductance(heavy.mask(), shape)), k, t)
        for (u, v, t), (k, heavy) in classes.items()
    ]
    edges.sort(key=lambda e: (mask_to_position(e.u.mask()), mask_to_position(e.v.mask())))
    return Network(tuple(words), tuple(edges), net.d, n, shape, True)


def preimage_counts(net: Network) -> dict:
    """Count full-graph edges over each binary edge (an oracle for the conductance formula)."""
    counts = {}
    for e in net.edges:
        if e.u[e.k] and e.v[e.k]:
            continue
        u, v = _orient(project_binary(e.light), project_binary(e.heavy))
        counts[(u, v, e.type)] = counts.get((u, v, e.type), 0) + 1
    return counts


def is_connected(net: Network) -> bool:
    if len(net.vertices) <= 1:
        return True
    src, dst, _ = net.arrays()
    nv = len(net.vertices)
    adj = sp.coo_matrix((np.ones(len(src)), (src, dst)), shape=(nv, nv))
    ncomp, _ = connected_components(adj, directed=False)
    return ncomp == 1


def embed(net: Network, n: int) -> set:
    """Typed edge set of ``net`` with every word padded by zeros to length ``n``."""
    return {(frozenset(w.padded(n) for w in pair), t) for pair, t in net.edge_set()}


# ---------------------------------------------------------------------------
# serialization


def _rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    return Fraction(text) if not isinstance(text, float) else Fraction(text)


def to_json(net: Network) -> dict:
    vertices = []
    word_like = all(isinstance(v, DigitWord) for v in net.vertices)
    for v in net.vertices:
        row = {"word": str(v)}
        if word_like:
            row["pos"] = net.positions[v]
        vertices.append(row)
    edges = [
        {"u": str(e.u), "v": str(e.v), "type": e.type, "conductance": _rational(e.conductance)}
        for e in net.edges
    ]
    return {
        "shape": list(net.shape.pattern) if net.shape else None,
        "shape_mode": net.shape.mode if net.shape else None,
        "d": net.d,
        "n": net.n,
        "binary": net.binary,
        "vertices": vertices,
        "edges": edges,
    }


def from_json(data: dict) -> Network:
    shape = None
    if data.get("shape"):
        shape = TreeShape(tuple(data["shape"]), data.get("shape_mode") or "repeat")
    words = [row["word"] for row in data["vertices"]]
    as_words = all("pos" in row for row in data["vertices"])
    lookup = {w: (DigitWord.parse(w) if as_words else w) for w in words}
    edges = []
    for row in data["edges"]:
        u, v = lookup[row["u"]], lookup[row["v"]]
        k = None
        if as_words and len(u) == len(v):
            diff = [i for i in range(len(u)) if u[i] != v[i]]
            k = diff[0] if len(diff) == 1 else None
        edges.append(Edge(u, v, Fraction(row["conductance"]), k, row.get("type")))
    return Network(
        tuple(lookup[w] for w in words),
        tuple(edges),
        data.get("d"),
        data.get("n"),
        shape,
        bool(data.get("binary")),
    )


def to_dot(net: Network) -> str:
    """Graphviz source with vertices placed left to right by linear position."""
    lines = ["graph G {", "  node [shape=circle, fontsize=9];"]
    word_like = all(isinstance(v, DigitWord) for v in net.vertices)
    col = {}
    for v in net.vertices:
        if word_like:
            p = net.positions[v]
            col[p] = col.get(p, -1) + 1
            lines.append(f'  "{v}" [pos="{p},{col[p]}!"];')
        else:
            lines.append(f'  "{v}";')
    for e in net.edges:
        color = TYPE_COLORS.get(e.type, "gray")
        label = "" if e.conductance == 1 else f', label="{_rational(e.conductance)}"'
        lines.append(f'  "{e.u}" -- "{e.v}" [color={color}{label}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
