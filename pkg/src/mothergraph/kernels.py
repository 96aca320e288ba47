"""Hot loops, each with a numba body and a pure-numpy twin.

The public functions dispatch on ``USE_NUMBA`` (see ``_accel``); the
``*_numba`` / ``*_numpy`` pairs are importable directly so tests and the
benchmark can compare them.
"""
import numpy as np
import scipy.sparse as sp

from ._accel import USE_NUMBA, njit


# ---------------------------------------------------------------------------
# edge enumeration on {0,1}^n (bitmask vertices)


@njit(cache=True)
def _popcount(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c


@njit(cache=True)
def binary_edges_numba(n, d):
    size = 1 << n
    cap = size * n // 2 + 1
    light = np.empty(cap, np.int64)
    heavy = np.empty(cap, np.int64)
    ks = np.empty(cap, np.int64)
    ts = np.empty(cap, np.int64)
    m = 0
    for x in range(size):
        for k in range(n):
            if (x >> k) & 1:
                continue
            if k == 0:
                t = -1
            else:
                if not (x >> (k - 1)) & 1:
                    continue
                t = _popcount(x & ((1 << (k - 1)) - 1))
                if t > d:
                    continue
            light[m] = x
            heavy[m] = x | (1 << k)
            ks[m] = k
            ts[m] = t
            m += 1
    return light[:m], heavy[:m], ks[:m], ts[:m]


def _popcount_array(v):
    v = v.astype(np.int64, copy=True)
    out = np.zeros_like(v)
    while np.any(v):
        out += v & 1
        v >>= 1
    return out


def binary_edges_numpy(n, d):
    xs = np.arange(1 << n, dtype=np.int64)
    parts = []
    for k in range(n):
        x = xs[((xs >> k) & 1) == 0]
        if k == 0:
            t = np.full(x.shape, -1, np.int64)
        else:
            x = x[((x >> (k - 1)) & 1) == 1]
            t = _popcount_array(x & ((1 << (k - 1)) - 1))
            keep = t <= d
            x, t = x[keep], t[keep]
        parts.append((x, x | (1 << k), np.full(x.shape, k, np.int64), t))
    # same ordering as the numba loop: by light endpoint, then k
    light = np.concatenate([p[0] for p in parts])
    heavy = np.concatenate([p[1] for p in parts])
    ks = np.concatenate([p[2] for p in parts])
    ts = np.concatenate([p[3] for p in parts])
    order = np.lexsort((ks, light))
    return light[order], heavy[order], ks[order], ts[order]


def binary_edges(n, d):
    """Edges of the level-``n`` binary graph of degree ``d``.

    Returns ``(light, heavy, k, type)`` arrays; ``heavy = light | 1 << k``.
    """
    if USE_NUMBA:
        return binary_edges_numba(n, d)
    return binary_edges_numpy(n, d)


# ---------------------------------------------------------------------------
# edge enumeration on mixed-radix words


@njit(cache=True)
def mixed_edges_numba(digits, strides, sizes, d):
    nv, n = digits.shape
    cap = 0
    for k in range(n):
        cap += nv * (sizes[k] - 1)
    cap = cap // 2 + 1
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    ks = np.empty(cap, np.int64)
    ts = np.empty(cap, np.int64)
    m = 0
    for i in range(nv):
        below = 0  # nonzero digits strictly below k - 1
        for k in range(n):
            if k >= 2 and digits[i, k - 2] != 0:
                below += 1
            if k == 0:
                t = -1
            else:
                if digits[i, k - 1] == 0 or below > d:
                    continue
                t = below
            xk = digits[i, k]
            for v in range(xk + 1, sizes[k]):
                src[m] = i
                dst[m] = i + (v - xk) * strides[k]
                ks[m] = k
                ts[m] = t
                m += 1
    return src[:m], dst[:m], ks[:m], ts[:m]


def mixed_edges_numpy(digits, strides, sizes, d):
    nv, n = digits.shape
    idx = np.arange(nv, dtype=np.int64)
    nz = (digits != 0).astype(np.int64)
    below = np.zeros((nv, n), np.int64)
    if n > 2:
        below[:, 2:] = np.cumsum(nz[:, : n - 2], axis=1)
    parts = []
    for k in range(n):
        if k == 0:
            ok = np.ones(nv, bool)
            t = np.full(nv, -1, np.int64)
        else:
            t = below[:, k]
            ok = (digits[:, k - 1] != 0) & (t <= d)
        for v in range(1, int(sizes[k])):
            sel = ok & (digits[:, k] < v)
            i = idx[sel]
            j = i + (v - digits[sel, k]) * strides[k]
            parts.append((i, j, np.full(i.shape, k, np.int64), t[sel], np.full(i.shape, v)))
    if not parts:
        e = np.empty(0, np.int64)
        return e, e, e, e
    src = np.concatenate([p[0] for p in parts])
    dst = np.concatenate([p[1] for p in parts])
    ks = np.concatenate([p[2] for p in parts])
    ts = np.concatenate([p[3] for p in parts])
    vs = np.concatenate([p[4] for p in parts])
    order = np.lexsort((vs, ks, src))
    return src[order], dst[order], ks[order], ts[order]


def mixed_edges(digits, strides, sizes, d):
    """Criterion edges between mixed-radix words (rows of ``digits``).

    Each unordered pair is emitted once, from the endpoint with the smaller
    digit at ``k``. Returns vertex-index arrays ``(src, dst, k, type)``.
    """
    digits = np.ascontiguousarray(digits, dtype=np.int64)
    strides = np.asarray(strides, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    if USE_NUMBA:
        return mixed_edges_numba(digits, strides, sizes, d)
    return mixed_edges_numpy(digits, strides, sizes, d)


# ---------------------------------------------------------------------------
# linear positions


def positions_of_masks(masks):
    masks = np.asarray(masks, dtype=np.int64)
    pos = masks.copy()
    shifted = masks >> 1
    while np.any(shifted):
        pos ^= shifted
        shifted = shifted >> 1
    return pos


# ---------------------------------------------------------------------------
# cutset membership scan


@njit(cache=True)
def membership_scan_numba(lo, hi, plo, phi, ks, ts, lprev, n, apos):
    """Per edge: (# plain, # enlarged, # rule violations, first violating a)."""
    ne = lo.shape[0]
    na = 1 << n
    full = na - 1
    out = np.zeros((ne, 4), np.int64)
    for e in range(ne):
        out[e, 3] = -1
        t = ts[e]
        if t >= 1:
            fixed = full & ~((1 << (lprev[e] + 1)) - 1) & ~(1 << ks[e])
        else:
            fixed = 0
        for a in range(na):
            pa = apos[a]
            plain = plo[e] < pa and pa <= phi[e]
            if t <= 0:
                enl = plo[e] == pa - 1 and phi[e] == pa
            else:
                enl = ((a ^ lo[e]) & fixed) == 0
            if plain:
                out[e, 0] += 1
            if enl:
                out[e, 1] += 1
            if t <= 0:
                bad = plain != enl
            elif t == 1:
                bad = a != lo[e] and plain != enl
            else:
                bad = plain and not enl
            if bad:
                out[e, 2] += 1
                if out[e, 3] < 0:
                    out[e, 3] = a
    return out


def membership_scan_numpy(lo, hi, plo, phi, ks, ts, lprev, n, apos):
    na = 1 << n
    full = na - 1
    a = np.arange(na, dtype=np.int64)
    out = np.zeros((lo.shape[0], 4), np.int64)
    for e in range(lo.shape[0]):
        t = ts[e]
        plain = (plo[e] < apos) & (apos <= phi[e])
        if t <= 0:
            enl = (plo[e] == apos - 1) & (phi[e] == apos)
            bad = plain != enl
        else:
            fixed = full & ~((1 << (int(lprev[e]) + 1)) - 1) & ~(1 << int(ks[e]))
            enl = ((a ^ lo[e]) & fixed) == 0
            if t == 1:
                bad = (a != lo[e]) & (plain != enl)
            else:
                bad = plain & ~enl
        nbad = int(bad.sum())
        out[e] = (plain.sum(), enl.sum(), nbad, int(np.argmax(bad)) if nbad else -1)
    return out


def membership_scan(lo, hi, plo, phi, ks, ts, lprev, n, apos):
    """Check plain (linear-order) against enlarged (digit-rule) cutset membership.

    ``lo``/``hi`` are the edge endpoints as masks, ordered so that
    ``plo < phi`` (their linear positions); ``lprev`` is the position of the
    ``type``-th nonzero digit of ``lo`` (unused for types -1 and 0).
    """
    args = [np.ascontiguousarray(v, dtype=np.int64) for v in (lo, hi, plo, phi, ks, ts, lprev)]
    apos = np.ascontiguousarray(apos, dtype=np.int64)
    if USE_NUMBA:
        return membership_scan_numba(*args, n, apos)
    return membership_scan_numpy(*args, n, apos)


# ---------------------------------------------------------------------------
# per-cutset accumulation


@njit(cache=True)
def accumulate_cutsets_numba(base, nlow, kbit, value, nbits):
    acc = np.zeros(1 << nbits, np.int64)
    for e in range(base.shape[0]):
        hi_choices = 2 if kbit[e] >= 0 else 1
        for low in range(1 << nlow[e]):
            for b in range(hi_choices):
                a = base[e] | low
                if b:
                    a |= 1 << kbit[e]
                acc[a] += value[e]
    return acc


def accumulate_cutsets_numpy(base, nlow, kbit, value, nbits):
    acc = np.zeros(1 << nbits, np.int64)
    for e in range(base.shape[0]):
        members = base[e] | np.arange(1 << int(nlow[e]), dtype=np.int64)
        if kbit[e] >= 0:
            members = np.concatenate([members, members | (1 << int(kbit[e]))])
        np.add.at(acc, members, value[e])
    return acc


def accumulate_cutsets_object(base, nlow, kbit, value, nbits):
    """Arbitrary-precision variant; ``value`` may hold Python ints of any size."""
    acc = [0] * (1 << nbits)
    for e in range(len(base)):
        b0 = int(base[e])
        k = int(kbit[e])
        v = value[e]
        for low in range(1 << int(nlow[e])):
            acc[b0 | low] += v
            if k >= 0:
                acc[b0 | low | (1 << k)] += v
    return acc


def accumulate_cutsets(base, nlow, kbit, value, nbits):
    """Sum ``value[e]`` into every cutset index ``base[e] | low | {0, 1 << kbit[e]}``.

    ``low`` ranges over ``[0, 2**nlow[e])``; ``kbit < 0`` means no optional
    high bit. Falls back to Python integers when int64 could overflow.
    """
    incidences = sum((1 << int(l)) * (2 if kb >= 0 else 1) for l, kb in zip(nlow, kbit))
    biggest = max((abs(int(v)) for v in value), default=0)
    if biggest * max(incidences, 1) >= 1 << 62:
        return accumulate_cutsets_object(base, nlow, kbit, list(value), nbits)
    args = (
        np.asarray(base, np.int64),
        np.asarray(nlow, np.int64),
        np.asarray(kbit, np.int64),
        np.asarray([int(v) for v in value], np.int64),
        nbits,
    )
    if USE_NUMBA:
        acc = accumulate_cutsets_numba(*args)
    else:
        acc = accumulate_cutsets_numpy(*args)
    return [int(v) for v in acc]


# ---------------------------------------------------------------------------
# Jacobi-preconditioned conjugate gradient


@njit(cache=True)
def pcg_numba(indptr, indices, data, b, dinv, tol, maxiter):
    # fused loops, no temporaries inside the iteration
    n = b.shape[0]
    x = np.zeros(n)
    r = b.copy()
    p = np.empty(n)
    q = np.empty(n)
    bnorm = 0.0
    rz = 0.0
    for i in range(n):
        bnorm += b[i] * b[i]
        p[i] = r[i] * dinv[i]
        rz += r[i] * p[i]
    bnorm = np.sqrt(bnorm)
    if bnorm == 0.0:
        return x, 0, 0.0
    it = 0
    res = 1.0
    while it < maxiter:
        pq = 0.0
        for i in range(n):
            s = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                s += data[j] * p[indices[j]]
            q[i] = s
            pq += p[i] * s
        alpha = rz / pq
        rr = 0.0
        rz_new = 0.0
        for i in range(n):
            x[i] += alpha * p[i]
            r[i] -= alpha * q[i]
            rr += r[i] * r[i]
            rz_new += r[i] * r[i] * dinv[i]
        it += 1
        res = np.sqrt(rr) / bnorm
        if res <= tol:
            break
        beta = rz_new / rz
        for i in range(n):
            p[i] = r[i] * dinv[i] + beta * p[i]
        rz = rz_new
    return x, it, res


def pcg_numpy(indptr, indices, data, b, dinv, tol, maxiter):
    mat = sp.csr_matrix((data, indices, indptr), shape=(b.shape[0], b.shape[0]))
    x = np.zeros_like(b)
    r = b.copy()
    z = r * dinv
    p = z.copy()
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return x, 0, 0.0
    rz = r @ z
    it = 0
    res = 1.0
    while it < maxiter:
        q = mat @ p
        alpha = rz / (p @ q)
        x += alpha * p
        r -= alpha * q
        it += 1
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            break
        z = r * dinv
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, it, res


def pcg(matrix, b, tol=1e-12, maxiter=None):
    """Solve the SPD system ``matrix @ x = b``; returns ``(x, iterations, relative residual)``."""
    matrix = sp.csr_matrix(matrix)
    matrix.sort_indices()
    n = b.shape[0]
    diag = matrix.diagonal()
    dinv = np.where(diag > 0, 1.0 / np.where(diag > 0, diag, 1.0), 1.0)
    maxiter = 10 * n + 100 if maxiter is None else maxiter
    args = (
        matrix.indptr.astype(np.int64),
        matrix.indices.astype(np.int64),
        matrix.data.astype(np.float64),
        np.asarray(b, dtype=np.float64),
        dinv,
        float(tol),
        int(maxiter),
    )
    if USE_NUMBA:
        return pcg_numba(*args)
    return pcg_numpy(*args)
