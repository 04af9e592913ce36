import importlib

import numpy as np
import pytest

from huapickrell import _backend, _pykernels, pseudo_jacobi as pj

ck = pytest.importorskip("huapickrell._ckernels")


def test_compiled_backend_selected():
    assert _backend.NAME == "cython"


def test_environment_override(monkeypatch):
    monkeypatch.setenv("HUAPICKRELL_BACKEND", "python")
    mod = importlib.reload(_backend)
    try:
        assert mod.NAME == "python"
        assert mod.hyp1f1 is _pykernels.hyp1f1
    finally:
        monkeypatch.delenv("HUAPICKRELL_BACKEND")
        importlib.reload(_backend)


@pytest.mark.parametrize(
    "a, c, z",
    [(0.3 + 0.1j, 1.6, 0.5), (1 + 0.5j, 2 + 1j, 20j), (0.4, 1.8, -40 + 3j), (2.2 - 0.7j, 5.4, 150j)],
)
def test_hyp1f1_agree(a, c, z):
    x = ck.hyp1f1(a, c, np.array([z]))[0]
    y = _pykernels.hyp1f1(a, c, np.array([z]))[0]
    assert abs(x - y) <= 1e-13 * abs(y)


def test_hyp2f1_agree():
    z = np.array([0.2, -0.6 + 0.1j, 1.5j])
    x = ck.hyp2f1_terminating(7, 0.4 + 0.2j, 1.9 - 0.3j, z)
    y = _pykernels.hyp2f1_terminating(7, 0.4 + 0.2j, 1.9 - 0.3j, z)
    assert np.allclose(x, y, rtol=1e-14, atol=0)


@pytest.mark.parametrize("s, N", [(0.0, 12), (0.7 + 1.1j, 30), (-0.3 + 0.4j, 200)])
def test_recurrence_agree(s, N):
    p = pj.EnsembleParams(s, N)
    B, C = pj.recurrence_coefficients(N, p)
    x = np.linspace(-50, 50, 41)
    a = ck.ops_recurrence(x, B, C, N)
    b = _pykernels.ops_recurrence(x, B, C, N)
    assert np.array_equal(a[6], b[6])
    assert np.allclose(a[:6], b[:6], rtol=1e-12, atol=1e-300)
