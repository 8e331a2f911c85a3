import math

import numpy as np
import pytest

import oracles
from lpcompact.errors import DimensionMismatch, ParseError
from lpcompact.target_space import (
    CGridSpace,
    CnSpace,
    DualFunctional,
    MatrixSpace,
    OptimizerOptions,
    dual_ball_maximize,
    space_from_json,
)

SPACES = [CnSpace(3, 2), CnSpace(4, "4/3"), CnSpace(2, "inf"), CnSpace(3, 1), CGridSpace([0, 0.5, 1]), MatrixSpace(2), MatrixSpace(3)]
IDS = ["cn-l2", "cn-l4/3", "cn-linf", "cn-l1", "cgrid", "mat2", "mat3"]


def test_norm_examples():
    assert CnSpace(2, 2).norm([3, 4]) == 5
    assert CGridSpace([0, 0.5, 1]).norm([1, -2, 0.5]) == 2
    assert MatrixSpace(2).norm([[0, 1], [0, 0]]) == pytest.approx(1)


def test_dual_apply_examples():
    g = CGridSpace([0, 0.5, 1])
    assert g.dual_apply(g.point_mass(1), [1, -2, 0.5]) == -2
    m = MatrixSpace(2)
    assert m.dual_apply(m.rank_one([1, 0], [1, 0]), np.diag([5, 7])) == 5
    c = CnSpace(2, 2)
    phi = DualFunctional("vector", np.array([1, 1]) / math.sqrt(2))
    assert abs(c.dual_apply(phi, [1, -1])) < 1e-15


def test_rank_one_is_inner_product():
    m = MatrixSpace(3)
    rng = np.random.default_rng(0)
    T = m.random_element(rng)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    phi = m.rank_one(x, y)
    xn, yn = x / np.linalg.norm(x), y / np.linalg.norm(y)
    assert m.dual_apply(phi, T) == pytest.approx(np.vdot(yn, T @ xn), abs=1e-13)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_norm_axioms(space):
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = space.random_element(rng), space.random_element(rng)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        assert space.norm(a) >= 0
        assert space.norm(lam * a) == pytest.approx(abs(lam) * space.norm(a), rel=1e-12)
        assert space.norm(a + b) <= space.norm(a) + space.norm(b) + 1e-12
    assert space.norm(space.zero()) == 0


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_dual_ball_containment(space):
    rng = np.random.default_rng(2)
    funcs = space.sample_dual_ball(200, rng)
    elems = [space.random_element(rng) for _ in range(5)]
    for phi in funcs:
        assert space.dual_norm(phi) <= 1 + 1e-12
        for a in elems:
            assert abs(space.dual_apply(phi, a)) <= space.norm(a) * (1 + 1e-10)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_norming_functional_attains_norm(space):
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = space.random_element(rng)
        phi = space.norming_functional(a)
        val = space.dual_apply(phi, a)
        assert abs(val.imag) <= 1e-10 * space.norm(a)
        assert val.real == pytest.approx(space.norm(a), rel=1e-10)
        assert space.dual_norm(phi) == pytest.approx(1.0, rel=1e-10)


def test_sample_shapes():
    c = CnSpace(4, 3)
    (phi,) = c.sample_dual_ball(1, 0)
    assert c.dual_norm(phi) == pytest.approx(1)
    g = CGridSpace([0, 0.25, 0.5, 0.75, 1])
    for phi in g.sample_dual_ball(50, 0):
        assert np.abs(phi.rep).sum() <= 1 + 1e-12


def test_sampling_is_deterministic():
    m = MatrixSpace(2)
    a = m.sample_dual_ball(30, 11)
    b = m.sample_dual_ball(30, 11)
    assert all(np.array_equal(u.rep, v.rep) for u, v in zip(a, b))


def test_maximize_examples():
    opts = OptimizerOptions(restarts=4, samples=32)
    res = dual_ball_maximize(CnSpace(2, 2), lambda phi: 0.0, opts)
    assert res.value == 0
    c1 = CnSpace(1, 2)
    res = dual_ball_maximize(c1, lambda phi: abs(c1.dual_apply(phi, [1])), opts)
    assert res.value == pytest.approx(1)
    m = MatrixSpace(2)
    N = np.array([[0, 1], [0, 0]])
    res = dual_ball_maximize(m, lambda phi: abs(m.dual_apply(phi, N)), opts)
    assert res.value == pytest.approx(oracles.dense_tuple_norm_d2(N[None], 1.0), abs=1e-6)


@pytest.mark.parametrize("space", SPACES, ids=IDS)
def test_maximizer_dominates_fresh_samples(space):
    rng = np.random.default_rng(4)
    a = space.random_element(rng)
    b = space.random_element(rng)
    obj = lambda phi: abs(space.dual_apply(phi, a)) ** 2 + abs(space.dual_apply(phi, b)) ** 2
    res = dual_ball_maximize(space, obj, OptimizerOptions(restarts=8, samples=64))
    fresh = max(obj(phi) for phi in space.sample_dual_ball(500, 99))
    assert res.value >= fresh - 1e-9


def test_rank_one_sup_equals_spectral_norm():
    m = MatrixSpace(3)
    rng = np.random.default_rng(5)
    for _ in range(10):
        T = m.random_element(rng)
        res = dual_ball_maximize(m, lambda phi: abs(m.dual_apply(phi, T)), OptimizerOptions(restarts=8, samples=64))
        assert res.value == pytest.approx(m.norm(T), rel=1e-6)


def test_space_json():
    for s in SPACES:
        t = space_from_json(s.descriptor())
        assert t.descriptor() == s.descriptor()
    with pytest.raises(ParseError):
        space_from_json({"space": "hilbert"})
    with pytest.raises(ParseError):
        space_from_json({"space": "cn"})
    with pytest.raises(DimensionMismatch):
        CnSpace(2).element_from_json([[1, 0], [2, 0], [3, 0]])
