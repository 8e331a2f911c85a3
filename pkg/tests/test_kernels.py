import os
import subprocess
import sys

import numpy as np
import pytest

from lpcompact import kernels

py = kernels.implementation("python")
try:
    cy = kernels.implementation("cython")
except ImportError:  # extension not built
    cy = None

needs_cython = pytest.mark.skipif(cy is None, reason="compiled kernels not built")
PS = [1.0, 4 / 3, 2.0, 3.0]


def _cplx(rng, *shape):
    return np.ascontiguousarray(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@needs_cython
@pytest.mark.parametrize("p", PS)
def test_tail_powers_parity(p):
    rng = np.random.default_rng(0)
    mod = np.abs(rng.standard_normal((7, 30)))
    assert np.allclose(cy.tail_powers(mod, p), py.tail_powers(mod, p), rtol=1e-13, atol=0)


@needs_cython
@pytest.mark.parametrize("p,is_inf", [(p, False) for p in PS] + [(1.0, True)])
def test_pnorm_dist_parity(p, is_inf):
    rng = np.random.default_rng(1)
    X, x = _cplx(rng, 9, 5), _cplx(rng, 5)
    assert np.allclose(cy.pnorm_dist_to(X, x, p, is_inf), py.pnorm_dist_to(X, x, p, is_inf), rtol=1e-13)


@needs_cython
@pytest.mark.parametrize("p", PS)
def test_gradient_kernel_parity(p):
    rng = np.random.default_rng(2)
    T, x, y = _cplx(rng, 3, 4, 4), _cplx(rng, 4), _cplx(rng, 4)
    g1, G1 = cy.joint_obj_grad(T, x, p)
    g2, G2 = py.joint_obj_grad(T, x, p)
    assert g1 == pytest.approx(g2, rel=1e-13) and np.allclose(G1, G2, rtol=1e-12)
    a1, b1, c1 = cy.pair_obj_grad(T, x, y, p)
    a2, b2, c2 = py.pair_obj_grad(T, x, y, p)
    assert a1 == pytest.approx(a2, rel=1e-13)
    assert np.allclose(b1, b2, rtol=1e-12) and np.allclose(c1, c2, rtol=1e-12)


@needs_cython
@pytest.mark.parametrize("p", PS)
def test_grid_kernel_parity(p):
    rng = np.random.default_rng(3)
    T = _cplx(rng, 2, 2, 2)
    r1 = cy.grid_radius_d2(T, p, 0.0, 1.5, 41, 0.0, 6.2, 53)
    r2 = py.grid_radius_d2(T, p, 0.0, 1.5, 41, 0.0, 6.2, 53)
    assert r1[0] == pytest.approx(r2[0], rel=1e-12) and r1[1:] == pytest.approx(r2[1:])
    lo, hi, n = np.zeros(4), np.array([1.5, 6.2, 1.5, 6.2]), np.array([9, 11, 9, 11], dtype=np.intp)
    s1, arg1 = cy.grid_pairnorm_d2(T, p, lo, hi, n)
    s2, arg2 = py.grid_pairnorm_d2(T, p, lo, hi, n)
    assert s1 == pytest.approx(s2, rel=1e-12) and np.allclose(arg1, arg2)


def test_kernels_accept_read_only_input():
    T = np.eye(2, dtype=np.complex128)[None].copy()
    T.setflags(write=False)
    x = np.array([1, 0], dtype=np.complex128)
    x.setflags(write=False)
    g, _ = kernels.joint_obj_grad(T, x, 2.0)
    assert g == 1.0


def test_pure_python_switch():
    env = dict(os.environ, LPCOMPACT_PURE_PYTHON="1")
    code = "from lpcompact import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("p", PS)
def test_dispatcher_matches_reference(p):
    rng = np.random.default_rng(4)
    mod = np.abs(rng.standard_normal((5, 12)))
    assert np.allclose(kernels.tail_powers(mod, p), py.tail_powers(mod, p), rtol=1e-13, atol=0)
    X, x = _cplx(rng, 6, 3), _cplx(rng, 3)
    assert np.allclose(kernels.pnorm_dist_to(X, x, p, False), py.pnorm_dist_to(X, x, p, False), rtol=1e-13)
    T = _cplx(rng, 2, 2, 2)
    lo, hi, n = np.zeros(4), np.ones(4), np.array([5, 5, 5, 5], dtype=np.intp)
    assert kernels.grid_pairnorm_d2(T, p, lo, hi, n)[0] == pytest.approx(py.grid_pairnorm_d2(T, p, lo, hi, n)[0], rel=1e-12)
