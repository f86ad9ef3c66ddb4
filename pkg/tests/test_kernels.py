import numpy as np
import pytest

from twolevel import _backend

BACKENDS = ["python"]
try:
    _backend.load("cython")
    BACKENDS.append("cython")
except ImportError:
    pass


def _inputs(n=2000, seed=7):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0, 5, n)
    d = rng.uniform(-20, 20, n)
    d[::50] = 0.0
    d[1::50] = 1e-12
    t = rng.uniform(0, 30, n)
    return w, d, t


@pytest.mark.parametrize("name", BACKENDS)
def test_points_match_grid_bitwise(name):
    k = _backend.load(name)
    taus = np.linspace(0, 4 * np.pi, 33)
    dets = np.linspace(-3, 3, 29)
    for pts, grid in ((k.p1_points, k.p1_grid), (k.p2_points, k.p2_grid)):
        g = np.empty((taus.size, dets.size))
        grid(1.7, taus, dets, g)
        tt, dd = np.meshgrid(taus, dets, indexing="ij")
        flat = np.empty(tt.size)
        pts(np.full(tt.size, 1.7), np.ascontiguousarray(dd.ravel()), np.ascontiguousarray(tt.ravel()), flat)
        assert np.array_equal(flat.reshape(g.shape), g)
        one = np.empty(1)
        pts(np.array([1.7]), np.array([dets[5]]), np.array([taus[9]]), one)
        assert one[0] == g[9, 5]


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")
def test_backends_agree():
    c, py = _backend.load("cython"), _backend.load("python")
    w, d, t = _inputs()
    for name in ("p1_points", "p2_points"):
        a, b = np.empty(w.size), np.empty(w.size)
        getattr(c, name)(w, d, t, a)
        getattr(py, name)(w, d, t, b)
        assert np.max(np.abs(a - b)) <= 1e-13


def test_backend_selection_reported():
    assert _backend.BACKEND in ("cython", "python")
    with pytest.raises(ValueError):
        _backend.load("fortran")
