"""Diagonal operators beta -> sum_i beta_i a_i induced by A-valued sequences.

For a = (a_1, ..., a_N) in a target space A and exponent p with conjugate
q, the operator Lambda_a : l^q -> A has norm equal to the dual-shadow norm

    |||a|||_p = sup { ||(phi(a_1), ..., phi(a_N))||_p : phi in A*, ||phi|| <= 1 },

and Lambda_a is compact exactly when the dual shadow {phi(a)} is totally
bounded in l^p. This module estimates both sides of the norm identity by
independent routes (ascent over beta in the l^q ball versus ascent over
phi in the dual ball) and turns the shadow into tail certificates.

For p = 1 the domain of Lambda_a is c_0 rather than l^inf; at finite
support the two coincide and only the report label differs. The norm
computed there is |||a|||_1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .compactness import (
    Certificate,
    EpsilonNet,
    Family,
    certificate_curve,
    metric_epsilon_net,
    settles,
    tail_profile,
)
from .errors import EmptySequence, ParseError
from .seq_core import Exponent, ScalarSeq, as_array, holder_extremizer, holder_pair, p_norm
from .target_space import (
    DualFunctional,
    MatrixSpace,
    OptimizerOptions,
    TargetSpace,
    dual_ball_maximize,
    space_from_json,
)

__all__ = [
    "OperatorSeq",
    "MembershipReport",
    "DecayReport",
    "apply",
    "dual_map",
    "strong_norm",
    "triple_norm",
    "operator_norm",
    "classify",
    "truncation_convergence",
    "c0_decay_check",
    "dual_pair_residual",
    "rank_one_sup",
    "DEFAULT_EPS_GRID",
]

DEFAULT_EPS_GRID = (0.5, 0.3, 0.2)


@dataclass(frozen=True, eq=False)
class OperatorSeq:
    """A truncated sequence (a_1, ..., a_N) of elements of ``space``."""

    space: TargetSpace
    terms: np.ndarray
    p: Exponent

    def __post_init__(self):
        terms = self.space.check_terms(self.terms).copy()
        terms.setflags(write=False)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "p", Exponent(self.p))

    @property
    def N(self) -> int:
        return int(self.terms.shape[0])

    @property
    def q(self) -> Exponent:
        return self.p.conjugate()

    def term_norms(self) -> np.ndarray:
        return np.array([self.space.norm(t) for t in self.terms])

    def tail(self, n: int) -> "OperatorSeq":
        """The sequence (a_{n+1}, ..., a_N); the zeros in front do not change any norm."""
        return OperatorSeq(self.space, self.terms[n:], self.p)

    def head(self, n: int) -> "OperatorSeq":
        return OperatorSeq(self.space, self.terms[:n], self.p)

    @classmethod
    def from_json(cls, data: dict) -> "OperatorSeq":
        if not isinstance(data, dict):
            raise ParseError("sequence file must be a JSON object")
        for key in ("space", "p", "terms"):
            if key not in data:
                raise ParseError(f"sequence file missing {key!r}")
        space = space_from_json(data["space"])
        try:
            p = Exponent(data["p"])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad exponent: {exc}") from None
        raw = data["terms"]
        if not isinstance(raw, list):
            raise ParseError("'terms' must be a list")
        terms = [space.element_from_json(t) for t in raw]
        arr = np.array(terms, dtype=np.complex128) if terms else space.check_terms([])
        return cls(space, arr, p)

    def to_json(self) -> dict:
        return {
            "space": self.space.descriptor(),
            "p": self.p.to_json(),
            "terms": [self.space.element_to_json(t) for t in self.terms],
        }


def apply(a: OperatorSeq, beta) -> np.ndarray:
    """Lambda_a(beta) = sum_{i <= N} beta_i a_i; entries of beta past N are ignored."""
    b = as_array(beta)
    n = min(b.size, a.N)
    if n == 0:
        return a.space.zero()
    return (b[:n] @ a.terms[:n].reshape(n, -1)).reshape(a.space.element_shape)


def dual_map(a: OperatorSeq, phi: DualFunctional) -> ScalarSeq:
    """Gamma_a(phi) = (phi(a_1), ..., phi(a_N))."""
    return ScalarSeq(a.space.dual_apply_many(phi, a.terms))


def strong_norm(a: OperatorSeq) -> float:
    """||a||_p = (sum ||a_i||^p)^(1/p), or max ||a_i|| for p = inf."""
    return p_norm(a.term_norms(), a.p)


def _shadow_value(a: OperatorSeq):
    def objective(phi):
        return p_norm(a.space.dual_apply_many(phi, a.terms), a.p)

    return objective


def _shadow_step(a: OperatorSeq):
    # linearization step for the convex map phi -> ||phi(a)||_p
    def step(phi):
        shadow = a.space.dual_apply_many(phi, a.terms)
        if not np.any(shadow):
            return phi
        beta = holder_extremizer(shadow, a.p)
        return a.space.norming_functional(apply(a, beta))

    return step


def triple_norm(
    a: OperatorSeq,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    starts: Sequence[DualFunctional] = (),
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, DualFunctional]:
    """Estimate |||a|||_p by ascent over the dual ball; returns (value, witness).

    The value is attained by the witness, hence a lower bound. For p = inf
    the supremum is max_i ||a_i||, returned exactly with the norming
    functional of the largest term as witness.
    """
    if a.N == 0:
        raise EmptySequence("triple norm of an empty sequence")
    if a.p.is_inf:
        norms = a.term_norms()
        k = int(np.argmax(norms))
        return float(norms[k]), a.space.norming_functional(a.terms[k])
    # the largest term's norming functional already attains max ||a_i||, and
    # keeps the ascent off zero shadows when the sample budget misses the support
    k = int(np.argmax(a.term_norms()))
    seeds = list(starts) + [a.space.norming_functional(a.terms[k])] if np.any(a.terms[k]) else list(starts)
    res = dual_ball_maximize(
        a.space, _shadow_value(a), opts, step=_shadow_step(a), starts=seeds, rng=rng
    )
    return res.value, res.functional


def rank_one_sup(
    a: OperatorSeq,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, DualFunctional]:
    """|||a|||_p with phi restricted to rank-one functionals T -> <Tx, y>.

    Only for matrix-valued sequences. Starts are rank-one samples and the
    norming functionals of the terms; the linearization step maps rank-one
    functionals to rank-one functionals, so the restriction holds along
    the whole ascent.
    """
    if not isinstance(a.space, MatrixSpace):
        raise TypeError("rank-one functionals exist for matrix-valued sequences")
    if a.N == 0:
        raise EmptySequence("rank-one sup of an empty sequence")
    rng = rng if rng is not None else np.random.default_rng(np.random.SeedSequence([opts.seed, 4]))
    space, d = a.space, a.space.d
    value, step = _shadow_value(a), _shadow_step(a)
    cands = [space.norming_functional(t) for t in a.terms if np.any(t)] + space._slate()
    while len(cands) < max(opts.samples, 1) + a.N:
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        y = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        cands.append(space.rank_one(x, y))
    vals = np.array([value(phi) for phi in cands])
    order = np.argsort(-vals, kind="stable")
    best_val, best = float(vals[order[0]]), cands[int(order[0])]
    for k in order[: max(1, opts.restarts)]:
        phi, val = cands[int(k)], float(vals[int(k)])
        for _ in range(opts.iters):
            nxt = step(phi)
            nv = value(nxt)
            if not nv > val * (1 + opts.rel_tol):
                break
            phi, val = nxt, nv
        if val > best_val:
            best_val, best = val, phi
    return best_val, best


def _random_unit(rng, n, q: Exponent):
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return b / p_norm(b, q)


def operator_norm(
    a: OperatorSeq,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    seed_functionals: Sequence[DualFunctional] = (),
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, np.ndarray]:
    """Estimate ||Lambda_a|| = sup ||Lambda_a(beta)|| over unit beta in l^q.

    Starts are basis vectors, Hoelder extremizers of sampled dual shadows,
    random unit vectors, and the extremizers built from any
    ``seed_functionals``. Each start is pushed uphill by the linearization
    step beta -> extremizer(Gamma_a(phi_beta)), where phi_beta norms
    Lambda_a(beta). Returns (value, beta witness).
    """
    if a.N == 0:
        raise EmptySequence("operator norm of an empty sequence")
    rng = rng if rng is not None else np.random.default_rng(np.random.SeedSequence([opts.seed, 1]))
    N, q, space = a.N, a.q, a.space

    def value(beta):
        return space.norm(apply(a, beta))

    def from_functional(phi):
        shadow = space.dual_apply_many(phi, a.terms)
        if not np.any(shadow):
            return None
        return holder_extremizer(shadow, a.p).entries

    explicit = [b for b in (from_functional(phi) for phi in seed_functionals) if b is not None]
    cands = [np.eye(N, dtype=np.complex128)[i] for i in range(N)]
    n_random = max(0, opts.samples - N)
    for phi in space.sample_dual_ball(max(1, n_random // 2), rng):
        b = from_functional(phi)
        if b is not None:
            cands.append(b)
    while len(cands) < N + n_random:
        cands.append(_random_unit(rng, N, q))
    batch = explicit + cands
    vals = np.array([value(b) for b in batch])
    top = int(np.argmax(vals))
    best_val, best_beta = float(vals[top]), batch[top]
    if opts.restarts <= 0:
        return best_val, best_beta
    ne = len(explicit)
    order = list(range(ne)) + [int(k) + ne for k in np.argsort(-vals[ne:], kind="stable")]
    for k in order[: ne + opts.restarts]:
        beta, val = batch[k], float(vals[k])
        for _ in range(opts.iters):
            v = apply(a, beta)
            if not np.any(v):
                break
            nxt = from_functional(space.norming_functional(v))
            if nxt is None:
                break
            nv = value(nxt)
            if not nv > val:
                break
            gain = nv - val
            beta, val = nxt, nv
            if gain <= opts.rel_tol * max(1.0, val):
                break
        if val > best_val:
            best_val, best_beta = val, beta
    return best_val, best_beta


@dataclass
class MembershipReport:
    """Desk-scale membership of a truncated sequence in l^p(A), l^p_b(A), l^p_c(A).

    At truncation N a flag is set when every certificate cutoff over the
    epsilon grid settles within the first half of the horizon (see
    :func:`lpcompact.compactness.settles`). Sequences marked finite are
    elements of c_00(A) and belong to every space.
    """

    p: str
    domain: str
    N: int
    finite_support: bool
    strong_norm: float
    triple_norm: float
    operator_norm: float
    strong_partial_sums: list
    shadow_tail_profile: list
    shadow_certificates: list
    strong_certificates: list
    in_lp: bool
    in_lpb: bool
    in_lpc: bool
    pointwise_bound: float
    nets: list = field(default_factory=list)
    shadow_family_size: int = 0
    checks: dict = field(default_factory=dict)
    rule: str = (
        "a membership flag holds when, for every epsilon in the grid, the certified cutoff "
        "m(epsilon) is at most N // 2; the report describes the truncation, not the infinite sequence"
    )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "domain": self.domain,
            "N": self.N,
            "finite_support": self.finite_support,
            "strong_norm": self.strong_norm,
            "triple_norm": self.triple_norm,
            "operator_norm": self.operator_norm,
            "strong_partial_sums": self.strong_partial_sums,
            "in_lp": self.in_lp,
            "in_lpb": self.in_lpb,
            "in_lpc": self.in_lpc,
            "pointwise_bound": self.pointwise_bound,
            "shadow_family_size": self.shadow_family_size,
            "shadow_certificates": [c.to_json() for c in self.shadow_certificates],
            "strong_certificates": [c.to_json() for c in self.strong_certificates],
            "nets": [n.to_json() for n in self.nets],
            "checks": self.checks,
            "rule": self.rule,
        }


def _shadow_family(a: OperatorSeq, functionals) -> Family:
    rows = np.array([a.space.dual_apply_many(phi, a.terms) for phi in functionals])
    return Family.from_rows(rows, label="dual shadow")


def _tail_triple(a: OperatorSeq, m: int, opts, starts, rng) -> tuple[float, DualFunctional]:
    tail = a.tail(m)
    if tail.N == 0:
        return 0.0, starts[0] if starts else a.space.sample_dual_ball(1)[0]
    return triple_norm(tail, opts, starts=starts, rng=rng)


def _verified_certificate(a, cert: Certificate, sampled_tails, opts, starts, rng) -> Certificate:
    """Raise the cutoff until an optimized tail supremum also sits below epsilon."""
    m = cert.cutoff_m
    while m < a.N:
        val, phi = _tail_triple(a, m, opts, starts, rng)
        sup = max(val, sampled_tails[m])
        if sup < cert.epsilon:
            return Certificate(cert.epsilon, m, sup, True)
        starts = list(starts) + [phi]
        m += 1
    return Certificate(cert.epsilon, a.N, 0.0, True)


def classify(
    a: OperatorSeq,
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    finite: Optional[bool] = None,
    shadow_samples: int = 512,
) -> MembershipReport:
    """Membership report for a truncated sequence.

    ``finite`` marks a as an element of c_00(A); by default only a one-term
    sequence is treated that way, since it carries no tail information.
    For finite p the dual shadow is sampled (extreme-point slate, random
    functionals and the optimizer witness), its tails are certified, and
    each certificate is cross-checked by optimizing the tail supremum at
    the certified cutoff. For p = inf the test is an epsilon-net of
    {a_1, ..., a_N} in the norm of A.
    """
    if a.N == 0:
        raise EmptySequence("cannot classify an empty sequence")
    if finite is None:
        finite = a.N == 1
    eps_grid = [float(e) for e in eps_grid]
    rng = np.random.default_rng(np.random.SeedSequence([opts.seed, 2]))
    norms = a.term_norms()
    s_norm = strong_norm(a)
    t_norm, witness = triple_norm(a, opts, rng=rng)
    o_norm, _ = operator_norm(a, opts, seed_functionals=[witness], rng=rng)

    if a.p.is_inf:
        partial = np.maximum.accumulate(norms)
    else:
        partial = np.cumsum(norms ** a.p.value) ** (1.0 / a.p.value)
    checks = {
        "triple_le_strong": bool(t_norm <= s_norm * (1 + 1e-12) + 1e-12),
        # (sum_{i<=n} |phi(a_i)|^p)^(1/p) <= ||Lambda_a|| for every phi in the ball
        "shadow_le_operator_norm": bool(t_norm <= o_norm * (1 + 1e-9) + 1e-12),
        "norm_gap": abs(o_norm - t_norm) / max(1.0, t_norm),
    }
    shadow_certs: list[Certificate] = []
    strong_certs: list[Certificate] = []
    profile: list = []
    nets: list[EpsilonNet] = []
    fam_size = 0
    if a.p.is_inf:
        for eps in eps_grid:
            nets.append(metric_epsilon_net(list(a.terms), lambda u, v: a.space.norm(u - v), eps))
        in_lpc = all(n.size <= max(1, a.N // 2) for n in nets)
        in_lp = True
    else:
        functionals = [witness] + a.space.sample_dual_ball(shadow_samples, rng)
        fam = _shadow_family(a, functionals)
        fam_size = len(fam)
        raw = certificate_curve(fam, a.p, eps_grid)
        profile = tail_profile(fam, a.p, range(a.N + 1))
        sampled = [v for _, v in profile]
        shadow_certs = [_verified_certificate(a, c, sampled, opts, [witness], rng) for c in raw]
        strong_fam = Family([norms])
        strong_certs = certificate_curve(strong_fam, a.p, eps_grid)
        in_lpc = all(settles(c.cutoff_m, a.N) for c in shadow_certs)
        in_lp = all(settles(c.cutoff_m, a.N) for c in strong_certs)
        if isinstance(a.space, MatrixSpace):
            # tail sups over the full trace-class ball against rank-one functionals only
            gaps = []
            for m in sorted({c.cutoff_m for c in shadow_certs if c.cutoff_m < a.N} | {0}):
                full, _ = _tail_triple(a, m, opts, [witness], rng)
                r1, _ = rank_one_sup(a.tail(m), opts, rng=rng)
                gaps.append({"m": m, "full_ball": full, "rank_one": r1,
                             "relative_gap": (full - r1) / max(1.0, full)})
            checks["rank_one_tail_gaps"] = gaps
    if finite:
        in_lp = in_lpc = True
    return MembershipReport(
        p=str(a.p),
        domain="c0" if a.p == 1 else f"l^{a.q}",
        N=a.N,
        finite_support=bool(finite),
        strong_norm=s_norm,
        triple_norm=t_norm,
        operator_norm=o_norm,
        strong_partial_sums=[float(v) for v in partial],
        shadow_tail_profile=profile,
        shadow_certificates=shadow_certs,
        strong_certificates=strong_certs,
        in_lp=bool(in_lp),
        in_lpb=True,
        in_lpc=bool(in_lpc),
        pointwise_bound=float(norms.max()),
        nets=nets,
        shadow_family_size=fam_size,
        checks=checks,
    )


def truncation_convergence(
    a: OperatorSeq,
    cutoffs: Sequence[int],
    opts: OptimizerOptions = OptimizerOptions(),
) -> list[tuple[int, float]]:
    """[(n, |||a_n - a|||_p)] where a_n keeps the first n terms.

    Cutoffs are processed from the largest down and each optimization is
    seeded with the previous witness, so the profile is nonincreasing in n.
    """
    rng = np.random.default_rng(np.random.SeedSequence([opts.seed, 3]))
    order = sorted({int(n) for n in cutoffs}, reverse=True)
    values: dict[int, float] = {}
    starts: list = []
    for n in order:
        if n < 0:
            raise ValueError("cutoffs are nonnegative")
        if n >= a.N:
            values[n] = 0.0
            continue
        val, phi = triple_norm(a.tail(n), opts, starts=starts, rng=rng)
        values[n] = val
        starts = [phi]
    return [(int(n), values[int(n)]) for n in cutoffs]


@dataclass
class DecayReport:
    norms: list
    entries: list  # (epsilon, decay index k, decays)
    decays: bool

    def to_json(self) -> dict:
        return {
            "norms": self.norms,
            "entries": [{"epsilon": e, "k": k, "decays": d} for e, k, d in self.entries],
            "decays": self.decays,
        }


def c0_decay_check(a: OperatorSeq, eps_grid: Sequence[float] = DEFAULT_EPS_GRID) -> DecayReport:
    """Does ||a_i|| drop below each epsilon for good, early in the horizon?

    k(epsilon) is the least k with ||a_i|| < epsilon for all i > k.
    """
    norms = a.term_norms()
    # suffix maxima: tail_max[k] = max_{i > k} ||a_i|| (1-based), 0 past the end
    tail_max = np.zeros(a.N + 1)
    if a.N:
        tail_max[:-1] = np.maximum.accumulate(norms[::-1])[::-1]
    entries = []
    for eps in eps_grid:
        below = np.flatnonzero(tail_max < eps)
        k = int(below[0])
        entries.append((float(eps), k, settles(k, a.N)))
    return DecayReport([float(v) for v in norms], entries, all(d for _, _, d in entries))


def dual_pair_residual(a: OperatorSeq, phi: DualFunctional, beta) -> float:
    """|<beta, Gamma_a(phi)> - phi(Lambda_a beta)|, relative to the larger side."""
    lhs = holder_pair(beta, dual_map(a, phi))
    rhs = a.space.dual_apply(phi, apply(a, beta))
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale
