"""Linear-order cutsets on the binary quotient graphs and the resulting bounds.

For a binary word ``a`` with linear position ``p``, the plain cutset holds
the edges ``(x, y)`` with ``pos(x) < p <= pos(y)``. The enlarged cutset
replaces that test by a digit rule that is easier to count: types -1 and 0
keep the positional test, higher types need ``a`` to agree with the edge
above its ``(t-1)``-th nonzero digit (position ``k`` excepted). Each enlarged
cutset gets weight ``beta^a`` and edges split their resistance in proportion
to those weights.

All cutset quantities are exact rationals; only the solver comparison is
floating point.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import electric, kernels
from .nashwilliams import Allocation, BoundReport, Cutset, CutsetRow, wnw_bound
from .schreier import Edge, Network, build_projected
from .words import (
    DigitWord,
    TreeShape,
    ell_position,
    inverse_linear_position,
    linear_position,
    mask_beta_inverse,
    mask_to_position,
    position_to_mask,
)


@dataclass(frozen=True)
class MotherCutset:
    a: DigitWord
    position: int
    edges: frozenset
    kind: str = "plain"

    def __len__(self):
        return len(self.edges)

    def as_cutset(self) -> Cutset:
        return Cutset(self.position, self.edges, {"a": str(self.a), "kind": self.kind})


@dataclass(frozen=True)
class EdgeFrame:
    """An edge read in linear order: ``lo`` before ``hi``."""

    lo: DigitWord
    hi: DigitWord
    plo: int
    phi: int
    k: int
    type: int
    anchor: int  # position of the type-th nonzero digit (ell_{t-1}); -1 for types -1, 0

    @classmethod
    def of(cls, e: Edge) -> EdgeFrame:
        u, v = e.u, e.v
        pu, pv = mask_to_position(u.mask()), mask_to_position(v.mask())
        if pu > pv:
            u, v, pu, pv = v, u, pv, pu
        t = e.type
        anchor = ell_position(u, t - 1) if t >= 1 else -1
        return cls(u, v, pu, pv, e.k, t, anchor)

    def fixed_positions(self, n: int) -> range:
        return range(self.anchor + 1, n)


def _word(a, n: int) -> DigitWord:
    if isinstance(a, DigitWord):
        return a.padded(n)
    return inverse_linear_position(int(a), n)


def cutset_plain(a, net: Network) -> MotherCutset:
    """Edges with ``pos(x) < pos(a) <= pos(y)``; ``a`` is a word or a position."""
    a = _word(a, net.n)
    p = linear_position(a)
    pos = net.positions
    members = frozenset(
        i for i, e in enumerate(net.edges) if min(pos[e.u], pos[e.v]) < p <= max(pos[e.u], pos[e.v])
    )
    return MotherCutset(a, p, members, "plain")


def enlarged_membership(e: Edge | EdgeFrame, a: DigitWord) -> bool:
    f = e if isinstance(e, EdgeFrame) else EdgeFrame.of(e)
    if f.type <= 0:
        p = linear_position(a)
        return f.plo == p - 1 and f.phi == p
    n = max(len(a), len(f.lo))
    return all(a[i] == f.lo[i] == f.hi[i] for i in f.fixed_positions(n) if i != f.k)


def cutset_enlarged(a, net: Network) -> MotherCutset:
    a = _word(a, net.n)
    members = frozenset(i for i, e in enumerate(net.edges) if enlarged_membership(e, a))
    return MotherCutset(a, linear_position(a), members, "enlarged")


# ---------------------------------------------------------------------------
# exhaustive lemma check


@dataclass
class MembershipReport:
    n: int
    edges: int
    pairs: int
    by_type: Counter
    violations: list = field(default_factory=list)
    plain_counts: np.ndarray | None = None
    enlarged_counts: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        types = ", ".join(f"t={t}: {c}" for t, c in sorted(self.by_type.items()))
        status = "no counterexample" if self.ok else f"{len(self.violations)} counterexample edges"
        return f"n={self.n}: {self.edges} edges x {1 << self.n} words ({types}); {status}"


def _frames(net: Network):
    frames = [EdgeFrame.of(e) for e in net.edges]
    cols = {
        "lo": [f.lo.mask() for f in frames],
        "hi": [f.hi.mask() for f in frames],
        "plo": [f.plo for f in frames],
        "phi": [f.phi for f in frames],
        "k": [f.k for f in frames],
        "t": [f.type for f in frames],
        "anchor": [f.anchor for f in frames],
    }
    return frames, {k: np.asarray(v, dtype=np.int64) for k, v in cols.items()}


def lemma_membership_check(net: Network, n: int | None = None) -> MembershipReport:
    """Compare plain and enlarged membership for every edge and every ``a`` in ``{0,1}^n``.

    Types -1 and 0: equivalence. Type 1: equivalence for ``a`` other than the
    lower endpoint. Type 2: plain implies enlarged.
    """
    n = net.n if n is None else n
    frames, cols = _frames(net)
    apos = kernels.positions_of_masks(np.arange(1 << n))
    out = kernels.membership_scan(
        cols["lo"], cols["hi"], cols["plo"], cols["phi"], cols["k"], cols["t"], cols["anchor"], n, apos
    )
    violations = [
        (frames[i], DigitWord.from_mask(int(out[i, 3]), n), int(out[i, 2]))
        for i in np.flatnonzero(out[:, 2])
    ]
    return MembershipReport(
        n,
        len(frames),
        len(frames) << n,
        Counter(f.type for f in frames),
        violations,
        out[:, 0].copy(),
        out[:, 1].copy(),
    )


# ---------------------------------------------------------------------------
# weights


def _beta_prod(mask: int, shape: TreeShape) -> Fraction:
    return Fraction(1, mask_beta_inverse(mask, shape))


def weight_sum_over_cutsets(e: Edge | EdgeFrame, shape: TreeShape) -> Fraction:
    """``sum of beta^a`` over the enlarged cutsets containing ``e`` (closed form).

    Types -1, 0: the single cutset at the upper endpoint. Type ``t >= 1``:
    digits above the anchor are pinned to the edge's (except ``k``, which is
    free), so the sum factors as
    ``prod_{i > anchor, i != k} beta_i^{x_i} * (1 + beta_k) * prod_{i <= anchor} (1 + beta_i)``.
    """
    f = e if isinstance(e, EdgeFrame) else EdgeFrame.of(e)
    if f.type <= 0:
        return _beta_prod(f.hi.mask(), shape)
    total = Fraction(1)
    for i in range(f.anchor + 1, len(f.lo)):
        if i != f.k and f.lo[i]:
            total *= shape.beta(i)
    total *= 1 + shape.beta(f.k)
    for i in range(f.anchor + 1):
        total *= 1 + shape.beta(i)
    return total


@lru_cache(maxsize=32)
def _beta_table(shape: TreeShape, n: int) -> tuple:
    return tuple(_beta_prod(mask, shape) for mask in range(1 << n))


def weight_sum_bruteforce(e: Edge | EdgeFrame, shape: TreeShape, n: int) -> Fraction:
    """Same sum by testing every ``a`` in ``{0,1}^n`` against the membership rule."""
    f = e if isinstance(e, EdgeFrame) else EdgeFrame.of(e)
    masks = np.arange(1 << n, dtype=np.int64)
    if f.type <= 0:
        apos = kernels.positions_of_masks(masks)
        hit = (apos - 1 == f.plo) & (apos == f.phi)
    else:
        pinned = 0
        for i in f.fixed_positions(n):
            if i != f.k:
                pinned |= 1 << i
        hit = ((masks ^ f.lo.mask()) & pinned) == 0
    table = _beta_table(shape, n)
    return sum((table[a] for a in np.flatnonzero(hit).tolist()), Fraction(0))


def allocation_share(e: Edge, a: DigitWord, shape: TreeShape) -> Fraction:
    """``R_{e,a} = R_e beta^a / sum_b beta^b`` (sum over all enlarged cutsets holding ``e``)."""
    return e.resistance * _beta_prod(a.mask(), shape) / weight_sum_over_cutsets(e, shape)


def cutset_conductance(a, net: Network, shape: TreeShape | None = None) -> Fraction:
    """Split conductance of the enlarged cutset at ``a``, computed edge by edge."""
    shape = shape or net.shape
    a = _word(a, net.n)
    if linear_position(a) < 1:
        raise ValueError("cutsets start at position 1")
    beta_a = _beta_prod(a.mask(), shape)
    total = Fraction(0)
    for e in net.edges:
        f = EdgeFrame.of(e)
        if enlarged_membership(f, a):
            total += e.conductance * weight_sum_over_cutsets(f, shape) / beta_a
    return total


@dataclass(frozen=True)
class LevelCutsets:
    """Split conductances and sizes of every enlarged cutset at one level, indexed by position."""

    d: int
    shape: TreeShape
    n: int
    conductance: tuple  # conductance[p] for p >= 1; entry 0 is None
    size: tuple

    def window(self, lo: int, hi: int) -> range:
        return range(max(lo, 1), hi)


@lru_cache(maxsize=64)
def level_cutsets(d: int, shape: TreeShape, n: int) -> LevelCutsets:
    """All ``C_a`` at level ``n`` at once, accumulating every edge into the cutsets that hold it.

    Edge ``e`` adds ``C_e W(e) / beta^a`` to ``C_a``; everything is carried as
    integers over the common denominator ``prod_{i<n} (m_i - 1)``.
    """
    net = build_projected(d, shape, n)
    denom = 1
    for i in range(n):
        denom *= shape[i] - 1
    base, nlow, kbit, value = [], [], [], []
    for e in net.edges:
        f = EdgeFrame.of(e)
        scaled = e.conductance * weight_sum_over_cutsets(f, shape) * denom
        if scaled.denominator != 1:
            raise ArithmeticError(f"non-integral scaled weight on {e}")
        value.append(scaled.numerator)
        if f.type <= 0:
            base.append(f.hi.mask())
            nlow.append(0)
            kbit.append(-1)
        else:
            free = ((1 << (f.anchor + 1)) - 1) | (1 << f.k)
            base.append(f.lo.mask() & ~free)
            nlow.append(f.anchor + 1)
            kbit.append(f.k)
    acc = kernels.accumulate_cutsets(base, nlow, kbit, value, n)
    sizes = kernels.accumulate_cutsets(base, nlow, kbit, [1] * len(value), n)
    cond = [None] * (1 << n)
    size = [0] * (1 << n)
    for p in range(1, 1 << n):
        mask = position_to_mask(p)
        cond[p] = Fraction(acc[mask], denom) * mask_beta_inverse(mask, shape)
        size[p] = sizes[mask]
    return LevelCutsets(d, shape, n, tuple(cond), tuple(size))


def asymptotic_conductance(a, shape: TreeShape, d: int) -> float:
    """``beta^-a prod_{i < log2 p} (1 + beta_i)``, times ``log2 p`` when ``d = 2``."""
    p = a if isinstance(a, int) else linear_position(a)
    if p < 2:
        raise ValueError("asymptotic form needs position >= 2")
    mask = position_to_mask(p)
    lg = math.log2(p)
    value = float(mask_beta_inverse(mask, shape))
    i = 0
    while i < lg:
        value *= 1 + float(shape.beta(i))
        i += 1
    if d == 2:
        value *= lg
    elif d != 1:
        raise ValueError("asymptotic form is stated for d = 1, 2")
    return value


def cutset_profile(a, net: Network) -> dict:
    """Edges of the enlarged cutset grouped by type, each a Counter over the anchor position."""
    a = _word(a, net.n)
    out = {}
    for e in net.edges:
        f = EdgeFrame.of(e)
        if enlarged_membership(f, a):
            out.setdefault(f.type, Counter())[f.anchor] += 1
    return out


# ---------------------------------------------------------------------------
# resistance bounds


def _sets(net: Network, s_pos: int, t_pos: int):
    A = net.vertices[:s_pos]
    B = net.vertices[t_pos:]
    return A, B


def theorem_bound(
    d: int,
    shape: TreeShape,
    s: int,
    t: int,
    n: int,
    mode: str = "float",
    closed: bool = False,
    solve: bool = True,
    certify: bool = False,
) -> BoundReport:
    """Bound ``Res({pos < 2^s}, {pos >= 2^t})`` by the enlarged cutsets at positions ``[2^s, 2^t)``.

    ``closed=True`` also uses the cutset at ``2^t``, which still separates the
    two sets. ``certify=True`` rebuilds the allocation explicitly and runs it
    through the generic bound, checking every cutset separates ``A`` from ``B``.
    """
    if not 0 <= s < t < n:
        raise ValueError(f"need 0 <= s < t < n, got s={s}, t={t}, n={n}")
    level = level_cutsets(d, shape, n)
    hi = (1 << t) + (1 if closed else 0)
    rows = []
    bound = Fraction(0)
    for p in range(1 << s, hi):
        c = level.conductance[p]
        contrib = 1 / c
        bound += contrib
        weight = Fraction(1, mask_beta_inverse(position_to_mask(p), shape))
        rows.append(CutsetRow(p, level.size[p], weight, c, contrib))
    meta = {"d": d, "shape": shape.spec(), "shape_mode": shape.mode, "s": s, "t": t, "n": n,
            "window": [1 << s, hi], "mode": mode}
    report = BoundReport(rows, bound, None, meta)
    if solve or certify:
        net = build_projected(d, shape, n)
        A, B = _sets(net, 1 << s, 1 << t)
        if solve:
            report.resistance = electric.effective_resistance(net, A, B, mode=mode)
        if certify:
            generic = certify_allocation(net, shape, range(1 << s, hi), A, B)
            if generic.bound != bound:
                raise ArithmeticError(f"generic bound {generic.bound} != {bound}")
            report.meta["certificate"] = certificate_json(net, shape, range(1 << s, hi))
    return report


def certify_allocation(net: Network, shape: TreeShape, positions, A, B) -> BoundReport:
    """Build the enlarged cutsets and beta-proportional shares explicitly and bound through ``wnw_bound``."""
    frames = [EdgeFrame.of(e) for e in net.edges]
    cutsets, shares, weights = [], {}, {}
    for p in positions:
        a = inverse_linear_position(p, net.n)
        members = frozenset(i for i, f in enumerate(frames) if enlarged_membership(f, a))
        cutsets.append(Cutset(p, members, {"a": str(a)}))
        weights[p] = _beta_prod(a.mask(), shape)
        for i in members:
            shares[(i, p)] = allocation_share(net.edges[i], a, shape)
    return wnw_bound(net, cutsets, Allocation(shares), A, B, weights=weights)


def certificate_json(net: Network, shape: TreeShape, positions) -> list:
    out = []
    for p in positions:
        a = inverse_linear_position(p, net.n)
        edges = []
        for e in net.edges:
            f = EdgeFrame.of(e)
            if enlarged_membership(f, a):
                share = allocation_share(e, a, shape)
                edges.append({"u": str(f.lo), "v": str(f.hi), "type": f.type,
                              "share": f"{share.numerator}/{share.denominator}"})
        out.append({"pos": p, "a": str(a), "edges": edges})
    return out


@dataclass
class ScalingRow:
    t: int
    bound: Fraction
    resistance: float | None
    per_step: float | None
    per_log: float | None
    increment: Fraction | None = None


def scaling_rows(d, shape, s, ts, n_offset=2, mode="float", solve=True, closed=None):
    """One ``theorem_bound`` per ``t`` at level ``t + n_offset``."""
    closed = (d == 0) if closed is None else closed
    rows = []
    for t in ts:
        rep = theorem_bound(d, shape, s, t, t + n_offset, mode=mode, closed=closed, solve=solve)
        per_log = float(rep.bound) / (math.log(t) - math.log(s)) if s > 0 else None
        rows.append(ScalingRow(t, rep.bound, rep.resistance, float(rep.bound) / (t - s), per_log))
    return rows


def recurrence_experiment(d: int, shape: TreeShape, max_t: int, n: int | None = None,
                          solve: bool = False, mode: str = "float") -> list:
    """Cumulative bound on ``Res(root, {pos >= 2^t})`` for ``t = 1..max_t``.

    Uses one level ``n`` (default ``max_t + 2``) for every ``t``; the cutsets
    at positions below ``2^(n-1)`` do not change with the level.
    """
    if d not in (0, 1, 2):
        raise ValueError("recurrence experiment covers d = 0, 1, 2")
    n = max_t + 2 if n is None else n
    level = level_cutsets(d, shape, n)
    net = build_projected(d, shape, n) if solve else None
    rows = []
    total = Fraction(0)
    for t in range(1, max_t + 1):
        inc = sum((1 / level.conductance[p] for p in range(1 << (t - 1), 1 << t)), Fraction(0))
        total += inc
        res = None
        if solve:
            A, B = _sets(net, 1, 1 << t)
            res = electric.effective_resistance(net, A, B, mode=mode)
        rows.append(ScalingRow(t, total, res, None, None, inc))
    return rows
