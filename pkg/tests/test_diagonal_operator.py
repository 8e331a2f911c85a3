import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lpcompact import instances
from lpcompact.diagonal_operator import (
    OperatorSeq,
    apply,
    c0_decay_check,
    classify,
    dual_map,
    dual_pair_residual,
    operator_norm,
    rank_one_sup,
    strong_norm,
    triple_norm,
    truncation_convergence,
)
from lpcompact.errors import EmptySequence
from lpcompact.seq_core import Exponent, holder_pair, p_norm
from lpcompact.target_space import CGridSpace, CnSpace, MatrixSpace, OptimizerOptions

OPTS = OptimizerOptions(restarts=8, samples=64)


def test_apply_basis_vector_picks_term():
    a = instances.random_sequence(np.random.default_rng(0), "mat", 2, N=4)
    for j in range(4):
        e = np.zeros(4)
        e[j] = 1
        assert np.array_equal(apply(a, e), a.terms[j])


def test_apply_scalar_example():
    a = OperatorSeq(CnSpace(1, 2), [[1], [0.5], [1 / 3]], 2)
    assert apply(a, [1, 1, 1])[0] == pytest.approx(11 / 6, abs=1e-15)


@pytest.mark.parametrize("p", ["1", "4/3", "2", "3"])
def test_scalar_sequence_triple_norm_is_lp_norm(p):
    vals = np.array([[3.0], [-1.0], [2j], [0.5]])
    a = OperatorSeq(CnSpace(1, 2), vals, p)
    t, _ = triple_norm(a, OPTS)
    assert t == pytest.approx(p_norm(vals[:, 0], p), rel=1e-12)


def test_harmonic_basis_norms():
    a = instances.harmonic_basis(100)
    t, _ = triple_norm(a, OPTS)
    assert t == pytest.approx(1.0, abs=1e-9)
    o, _ = operator_norm(a, OPTS)
    assert o == pytest.approx(1.0, abs=1e-9)


def test_operator_norm_example():
    a = OperatorSeq(CnSpace(1, 2), [[3], [4]], 2)
    o, beta = operator_norm(a, OPTS)
    assert o == pytest.approx(5, rel=1e-12)
    assert p_norm(beta, 2) == pytest.approx(1, rel=1e-12)


def test_single_term_norm_equals_term_norm():
    m = MatrixSpace(3)
    T = m.random_element(np.random.default_rng(1))
    for p in ("1", "2", "3", "inf"):
        a = OperatorSeq(m, T[None], p)
        assert triple_norm(a, OPTS)[0] == pytest.approx(m.norm(T), rel=1e-6)
        assert strong_norm(a) == pytest.approx(m.norm(T), rel=1e-12)


def test_single_term_classified_as_everything():
    a = OperatorSeq(CnSpace(2, 2), [[1, 1j]], 2)
    rep = classify(a, opts=OPTS)
    assert rep.finite_support and rep.in_lp and rep.in_lpb and rep.in_lpc


def test_harmonic_basis_is_compact_not_strong():
    rep = classify(instances.harmonic_basis(100), opts=OPTS)
    assert rep.in_lpc and rep.in_lpb and not rep.in_lp
    assert rep.strong_partial_sums == pytest.approx(list(oracles.harmonic_partial_norms(100)), rel=1e-12)


def test_unit_basis_is_bounded_only():
    rep = classify(instances.unit_basis(20), opts=OPTS)
    assert rep.in_lpb and not rep.in_lpc and not rep.in_lp


def test_p1_reports_c0_domain():
    rep = classify(OperatorSeq(CnSpace(2, 2), [[1, 0], [0, 0.5]], 1), opts=OPTS)
    assert rep.domain == "c0"
    assert classify(instances.unit_basis(4), opts=OPTS).domain == "l^2"


def test_pinf_uses_nets():
    rep = classify(OperatorSeq(CnSpace(2, 2), np.tile([1, 0], (6, 1)), "inf"), opts=OPTS)
    assert rep.in_lpc and all(n.size == 1 for n in rep.nets)
    rep = classify(OperatorSeq(CnSpace(6, 2), np.eye(6), "inf"), opts=OPTS)
    assert not rep.in_lpc


def test_truncation_harmonic():
    a = instances.harmonic_basis(100)
    cut = [0, 1, 4, 9, 24, 50, 99, 100]
    prof = truncation_convergence(a, cut, OPTS)
    for n, v in prof:
        assert v == pytest.approx(oracles.harmonic_sup_tail(n, 100), abs=1e-9)
    vals = [v for _, v in sorted(prof)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_truncation_unit_basis_stays_at_one():
    prof = truncation_convergence(instances.unit_basis(20), [0, 5, 10, 19, 20], OPTS)
    assert [v for _, v in prof] == pytest.approx([1, 1, 1, 1, 0], abs=1e-12)


def test_c0_decay():
    space = CnSpace(2, 2)
    const = OperatorSeq(space, np.tile([0.6, 0.8], (10, 1)), 1)
    assert not c0_decay_check(const).decays
    assert not c0_decay_check(instances.unit_basis(10, p=1)).decays
    geo = OperatorSeq(space, np.array([[0.6, 0.8]]) * (2.0 ** -np.arange(1, 11))[:, None], 1)
    rep = c0_decay_check(geo)
    assert rep.decays and rep.norms[0] == pytest.approx(0.5)


def test_empty_sequence_errors():
    a = OperatorSeq(CnSpace(2, 2), np.zeros((0, 2)), 2)
    with pytest.raises(EmptySequence):
        triple_norm(a)
    with pytest.raises(EmptySequence):
        classify(a)


def test_json_round_trip():
    a = instances.random_sequence(np.random.default_rng(7), "cgrid", "4/3")
    b = OperatorSeq.from_json(a.to_json())
    assert np.array_equal(a.terms, b.terms) and b.p == Exponent("4/3")


# -- oracle comparisons ----------------------------------------------------


@pytest.mark.parametrize("p", ["1", "4/3", "2", "3"])
def test_cgrid_shadow_norm_matches_point_mass_oracle(p):
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = instances.random_sequence(rng, "cgrid", p)
        t, _ = triple_norm(a, OPTS)
        assert t == pytest.approx(oracles.shadow_norm_cgrid(a.terms, a.p.value), rel=1e-9)


def test_l2_shadow_norm_is_spectral_norm():
    rng = np.random.default_rng(12)
    for _ in range(10):
        N, n = rng.integers(1, 7, size=2)
        terms = rng.standard_normal((N, n)) + 1j * rng.standard_normal((N, n))
        a = OperatorSeq(CnSpace(int(n), 2), terms, 2)
        assert triple_norm(a, OPTS)[0] == pytest.approx(oracles.shadow_norm_cn_r2_p2(terms), rel=1e-8)
        assert operator_norm(a, OPTS)[0] == pytest.approx(oracles.shadow_norm_cn_r2_p2(terms), rel=1e-8)


@pytest.mark.parametrize("p", ["1", "2", "3"])
def test_linf_shadow_norm_matches_extreme_points(p):
    rng = np.random.default_rng(13)
    for _ in range(5):
        terms = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        a = OperatorSeq(CnSpace(3, "inf"), terms, p)
        assert triple_norm(a, OPTS)[0] == pytest.approx(oracles.shadow_norm_cn_rinf(terms, a.p.value), rel=1e-9)


# -- properties ------------------------------------------------------------

KINDS = st.sampled_from(["cn", "cgrid", "mat"])
PS = st.sampled_from(["1", "4/3", "2", "3"])


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), KINDS, PS)
def test_triple_norm_matches_operator_norm_and_strong_bound(seed, kind, p):
    a = instances.random_sequence(np.random.default_rng(seed), kind, p)
    t, phi = triple_norm(a, OPTS)
    o, beta = operator_norm(a, OPTS, seed_functionals=[phi])
    assert abs(t - o) <= 1e-6 * max(1.0, t)
    assert t <= strong_norm(a) * (1 + 1e-12) + 1e-12
    # witnesses certify the values they report
    assert p_norm(dual_map(a, phi), p) == pytest.approx(t, rel=1e-12)
    assert a.space.norm(apply(a, beta)) == pytest.approx(o, rel=1e-12)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), KINDS, PS)
def test_dual_pair_identity(seed, kind, p):
    rng = np.random.default_rng(seed)
    a = instances.random_sequence(rng, kind, p)
    (phi,) = a.space.sample_dual_ball(1, rng)
    beta = rng.standard_normal(a.N) + 1j * rng.standard_normal(a.N)
    assert dual_pair_residual(a, phi, beta) <= 1e-12


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), KINDS, PS)
def test_hoelder_domination(seed, kind, p):
    rng = np.random.default_rng(seed)
    a = instances.random_sequence(rng, kind, p)
    t, _ = triple_norm(a, OPTS)
    q = a.q
    for _ in range(5):
        beta = rng.standard_normal(a.N) + 1j * rng.standard_normal(a.N)
        assert a.space.norm(apply(a, beta)) <= t * p_norm(beta, q) * (1 + 1e-6) + 1e-12
        (phi,) = a.space.sample_dual_ball(1, rng)
        assert abs(holder_pair(beta, dual_map(a, phi))) <= p_norm(beta, q) * t * (1 + 1e-6) + 1e-12


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), PS)
def test_rank_one_functionals_reach_the_full_ball_sup(seed, p):
    a = instances.random_sequence(np.random.default_rng(seed), "mat", p)
    full, _ = triple_norm(a, OPTS)
    r1, phi = rank_one_sup(a, OPTS)
    assert phi.kind == "rank_one"
    assert r1 <= full * (1 + 1e-12) and abs(full - r1) <= 1e-6 * max(1.0, full)


def test_rank_one_gaps_reported_for_matrices_only():
    a = instances.random_sequence(np.random.default_rng(21), "mat", 2, N=5)
    gaps = classify(a, opts=OPTS).checks["rank_one_tail_gaps"]
    assert gaps and all(abs(g["relative_gap"]) <= 1e-6 for g in gaps)
    assert "rank_one_tail_gaps" not in classify(instances.unit_basis(4), opts=OPTS).checks
    with pytest.raises(TypeError):
        rank_one_sup(instances.unit_basis(4), OPTS)
