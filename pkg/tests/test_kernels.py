"""The numba and numpy paths of every kernel agree."""
import numpy as np
import pytest
import scipy.sparse as sp

from mothergraph import kernels
from mothergraph.schreier import _digit_matrix
from mothergraph.words import TreeShape


@pytest.mark.parametrize("n", [1, 2, 5, 9])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_binary_edges_agree(n, d):
    a = kernels.binary_edges_numba(n, d)
    b = kernels.binary_edges_numpy(n, d)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("pattern", [(2,), (3,), (3, 2, 4)])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_mixed_edges_agree(pattern, d):
    sizes = TreeShape(pattern).sizes(5)
    _, digits, strides = _digit_matrix(sizes)
    sizes = np.asarray(sizes, np.int64)
    a = kernels.mixed_edges_numba(digits, strides, sizes, d)
    b = kernels.mixed_edges_numpy(digits, strides, sizes, d)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_positions_match_scalar():
    from mothergraph.words import mask_to_position

    masks = np.arange(1 << 10)
    assert kernels.positions_of_masks(masks).tolist() == [mask_to_position(int(m)) for m in masks]


def test_accumulate_agree():
    rng = np.random.default_rng(3)
    base = rng.integers(0, 1 << 6, 40) << 4
    nlow = rng.integers(0, 4, 40)
    kbit = np.where(rng.random(40) < 0.5, rng.integers(4, 10, 40), -1)
    value = rng.integers(1, 1000, 40)
    a = kernels.accumulate_cutsets_numba(base, nlow, kbit, value, 10)
    b = kernels.accumulate_cutsets_numpy(base, nlow, kbit, value, 10)
    c = kernels.accumulate_cutsets_object(base.tolist(), nlow.tolist(), kbit.tolist(), value.tolist(), 10)
    assert a.tolist() == b.tolist() == c


def test_accumulate_big_values_stay_exact():
    huge = 1 << 70
    acc = kernels.accumulate_cutsets([0], [1], [-1], [huge], 2)
    assert acc == [huge, huge, 0, 0]


def test_membership_agree():
    from mothergraph.mothercuts import _frames
    from mothergraph.schreier import build_projected

    net = build_projected(2, n=7)
    _, c = _frames(net)
    apos = kernels.positions_of_masks(np.arange(1 << 7))
    args = (c["lo"], c["hi"], c["plo"], c["phi"], c["k"], c["t"], c["anchor"], 7, apos)
    np.testing.assert_array_equal(kernels.membership_scan_numba(*args), kernels.membership_scan_numpy(*args))


def test_pcg_paths_agree():
    n = 300
    lap = sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]).tocsr()
    b = np.zeros(n)
    b[-1] = 1.0
    m = sp.csr_matrix(lap)
    args = (m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data, b, 0.5 * np.ones(n), 1e-12, 5000)
    x1, it1, r1 = kernels.pcg_numba(*args)
    x2, it2, r2 = kernels.pcg_numpy(*args)
    assert r1 <= 1e-12 and r2 <= 1e-12
    np.testing.assert_allclose(x1, x2, rtol=1e-8)
    np.testing.assert_allclose(x1, np.arange(1, n + 1) / (n + 1), rtol=1e-8)
