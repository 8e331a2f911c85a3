"""Operator tuples on C^d: joint numerical range, joint numerical radius,
tuple norm and their relations.

Inner products are linear in the first slot: <u, v> = v^H u. For a tuple
T = (T_1, ..., T_N) and exponent p in (1, inf):

    <Tx, y>   = (<T_1 x, y>, ..., <T_N x, y>)
    ||T||     = sup_{|x| = |y| = 1} ||<Tx, y>||_p
    omega(T)  = sup_{|x| = 1} ||<Tx, x>||_p = sup_{||beta||_q <= 1} w(T beta)
    ||T|| / 2 <= omega(T) <= ||T||

where T beta = sum beta_i T_i and w is the single-operator numerical radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .compactness import Family, certificate_curve
from .errors import DimensionMismatch, ParseError, ZeroVector
from .seq_core import Exponent, ScalarSeq, complex_array_from_json, complex_array_to_json, holder_extremizer, p_norm
from .target_space import OptimizerOptions

__all__ = [
    "OperatorTuple",
    "RangeSample",
    "RadiusReport",
    "pair_sequence",
    "pairing_residual",
    "single_numerical_radius",
    "joint_objective",
    "joint_gradient",
    "ascent_direction",
    "maximize_joint_radius",
    "joint_numerical_radius",
    "operator_tuple_norm",
    "polarization_check",
    "polarization_scale",
    "sup_radius_over_beta",
    "tail_comparison",
    "radius_duality_check",
    "numerical_range_sample",
    "oracle_joint_radius_d2",
    "oracle_numerical_radius_d2",
    "oracle_tuple_norm_d2",
]

THETA_GRID = 720
GOLDEN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    operators: np.ndarray  # (N, d, d)
    p: Exponent

    def __post_init__(self):
        ops = np.asarray(self.operators, dtype=np.complex128)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise DimensionMismatch(f"operators must be square d x d matrices, got {ops.shape}")
        if ops.shape[0] < 1:
            raise ValueError("a tuple needs at least one operator")
        p = Exponent(self.p)
        if p.is_inf or p == 1:
            raise ValueError("the tuple exponent must lie in (1, inf)")
        ops = ops.copy()
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return int(self.operators.shape[0])

    @property
    def d(self) -> int:
        return int(self.operators.shape[1])

    @property
    def q(self) -> Exponent:
        return self.p.conjugate()

    def combine(self, beta) -> np.ndarray:
        """T beta = sum_i beta_i T_i."""
        b = np.asarray(beta.entries if isinstance(beta, ScalarSeq) else beta, dtype=np.complex128)
        n = min(b.size, self.N)
        return np.tensordot(b[:n], self.operators[:n], axes=(0, 0))

    @classmethod
    def from_json(cls, data: dict) -> "OperatorTuple":
        if not isinstance(data, dict):
            raise ParseError("tuple file must be a JSON object")
        for key in ("d", "p", "operators"):
            if key not in data:
                raise ParseError(f"tuple file missing {key!r}")
        d = int(data["d"])
        ops = []
        for raw in data["operators"]:
            arr = complex_array_from_json(raw)
            if arr.size != d * d:
                raise DimensionMismatch(f"operator has {arr.size} entries, expected {d * d}")
            ops.append(arr.reshape(d, d))
        if not ops:
            raise ParseError("at least one operator is required")
        try:
            return cls(np.array(ops), data["p"])
        except ValueError as exc:
            if isinstance(exc, DimensionMismatch):
                raise
            raise ParseError(str(exc)) from None

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "p": self.p.to_json(),
            "operators": [complex_array_to_json(t) for t in self.operators],
        }


def _unit(v, what="vector") -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ZeroVector(f"{what} must be nonzero")
    return v / n


def _gauge(x: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero coordinate is real positive."""
    nz = np.flatnonzero(np.abs(x) > 1e-14 * max(1.0, np.abs(x).max()))
    if nz.size == 0:
        return x
    z = x[nz[0]]
    return x * np.exp(-1j * np.angle(z))


def _check_vec(T: OperatorTuple, v):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size != T.d:
        raise DimensionMismatch(f"vector of length {v.size} for d = {T.d}")
    return v


def pair_sequence(T: OperatorTuple, x, y) -> ScalarSeq:
    """<Tx, y> for unit x, y (both are normalized first)."""
    x = _unit(_check_vec(T, x), "x")
    y = _unit(_check_vec(T, y), "y")
    return ScalarSeq(np.conj(y) @ (T.operators @ x).T)


def pairing_residual(T: OperatorTuple, x, y, beta) -> float:
    """|sum beta_i <T_i x, y> - <(T beta) x, y>|, relative to the larger side."""
    x = _check_vec(T, x)
    y = _check_vec(T, y)
    b = np.asarray(beta, dtype=np.complex128)
    c = np.conj(y) @ (T.operators @ x).T
    lhs = complex(np.sum(b[: T.N] * c[: b.size]))
    rhs = complex(np.conj(y) @ (T.combine(b) @ x))
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


# -- single operator -------------------------------------------------------


def _lam_max(M, theta):
    e = np.exp(1j * np.asarray(theta))[..., None, None]
    H = 0.5 * (e * M + np.conj(e) * M.conj().T)
    return np.linalg.eigvalsh(H)[..., -1]


def single_numerical_radius(M) -> tuple[float, float, np.ndarray]:
    """w(M) = max_theta lambda_max((e^{i theta} M + e^{-i theta} M^H) / 2).

    Sweeps 720 angles, then refines the best bracket by golden-section search
    to 1e-10 in theta. Returns (w, theta*, x*) with x* the top eigenvector
    at theta*, phase-gauged.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch("numerical radius needs a square matrix")
    thetas = np.arange(THETA_GRID) * (2 * np.pi / THETA_GRID)
    lam = _lam_max(M, thetas)
    k = int(np.argmax(lam))
    h = 2 * np.pi / THETA_GRID
    a, b = thetas[k] - h, thetas[k] + h
    best_t, best = float(thetas[k]), float(lam[k])
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = float(_lam_max(M, c)), float(_lam_max(M, d))
    while b - a > GOLDEN_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = float(_lam_max(M, c))
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = float(_lam_max(M, d))
    for t, v in ((c, fc), (d, fd)):
        if v > best:
            best, best_t = v, float(t)
    best_t = best_t % (2 * np.pi)
    e = np.exp(1j * best_t)
    _, vecs = np.linalg.eigh(0.5 * (e * M + np.conj(e) * M.conj().T))
    x = _gauge(vecs[:, -1])
    return max(best, 0.0), best_t, x


# -- joint numerical radius ------------------------------------------------


def joint_objective(T: OperatorTuple, x) -> float:
    """(sum_i |<T_i x, x>|^p)^(1/p) at x (no normalization)."""
    g, _ = kernels.joint_obj_grad(T.operators, _check_vec(T, x), T.p.value)
    return g ** (1.0 / T.p.value)


def joint_gradient(T: OperatorTuple, x) -> np.ndarray:
    """Real gradient of x -> (sum |<T_i x, x>|^p)^(1/p), packed as grad_re + i grad_im.

    Vanishing terms contribute zero.
    """
    pv = T.p.value
    g, G = kernels.joint_obj_grad(T.operators, _check_vec(T, x), pv)
    if g == 0.0:
        return np.zeros(T.d, dtype=np.complex128)
    return (g ** (1.0 / pv - 1.0) / pv) * G


def _tangent(x, G):
    return G - np.real(np.vdot(x, G)) * x


def ascent_direction(T: OperatorTuple, x) -> np.ndarray:
    """Gradient of the joint objective on the unit sphere at unit x.

    This is the real gradient projected onto the tangent space; its inner
    product Re <v, dir> with a tangent v is the derivative of
    t -> f((x + t v) / |x + t v|) at t = 0.
    """
    x = _check_vec(T, x)
    return _tangent(x, joint_gradient(T, x))


def _random_sphere(rng, n, d):
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _ascend_sphere(T, x, pv, opts):
    """Projected gradient ascent of sum |<T_i x, x>|^p on the unit sphere."""
    ops = T.operators
    g, G = kernels.joint_obj_grad(ops, x, pv)
    eta = 1.0 / max(np.linalg.norm(G), 1e-300)
    for _ in range(opts.iters):
        Gt = _tangent(x, G)
        if np.linalg.norm(Gt) <= 1e-15 * max(g, 1e-300):
            break
        moved = False
        while eta * np.linalg.norm(Gt) > opts.min_step:
            cand = x + eta * Gt
            cand /= np.linalg.norm(cand)
            gc, Gc = kernels.joint_obj_grad(ops, cand, pv)
            if gc > g:
                gain = gc - g
                x, g, G = cand, gc, Gc
                eta *= 2.0
                moved = True
                break
            eta *= opts.shrink
        if not moved or gain <= opts.rel_tol * g:
            break
    return x, g


def maximize_joint_radius(
    T: OperatorTuple,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    starts: Sequence[np.ndarray] = (),
    candidates: Sequence[np.ndarray] = (),
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, np.ndarray]:
    """Multistart projected ascent for omega(T); returns (value, unit witness).

    Every entry of ``starts`` is ascended; ``candidates`` only join the
    screened pool.
    """
    rng = rng if rng is not None else np.random.default_rng(np.random.SeedSequence([opts.seed, 10]))
    pv = T.p.value
    pool = [_unit(s) for s in starts]
    pool += [_unit(c) for c in candidates]
    pool += list(np.eye(T.d, dtype=np.complex128))
    for Ti in T.operators:
        # top eigenvectors of the Hermitian parts are natural candidates
        pool.append(np.linalg.eigh(0.5 * (Ti + Ti.conj().T))[1][:, -1])
    extra = max(0, opts.samples - len(pool))
    pool += list(_random_sphere(rng, extra, T.d))
    vals = np.array([kernels.joint_obj_grad(T.operators, x, pv)[0] for x in pool])
    k = int(np.argmax(vals))
    best_g, best_x = float(vals[k]), pool[k]
    if opts.restarts > 0:
        ne = len(starts)
        order = list(range(ne)) + [int(j) + ne for j in np.argsort(-vals[ne:], kind="stable")]
        for j in order[: ne + opts.restarts]:
            x, g = _ascend_sphere(T, pool[j], pv, opts)
            if g > best_g:
                best_g, best_x = g, x
    return best_g ** (1.0 / pv), _gauge(best_x)


# -- tuple norm ------------------------------------------------------------


def _pair_value(T, x, y, pv):
    return kernels.pair_obj_grad(T.operators, x, y, pv)[0]


def operator_tuple_norm(
    T: OperatorTuple,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    starts: Sequence[tuple] = (),
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """||T|| by alternating ascent over (x, y) on the product of spheres.

    For fixed y the map x -> sum |<T_i x, y>|^p is convex, so replacing x by
    its normalized gradient never decreases it; likewise for y.
    """
    rng = rng if rng is not None else np.random.default_rng(np.random.SeedSequence([opts.seed, 11]))
    pv = T.p.value
    ops = T.operators
    pool = [(_unit(x), _unit(y)) for x, y in starts]
    eye = np.eye(T.d, dtype=np.complex128)
    pool += [(eye[k], eye[j]) for j in range(T.d) for k in range(T.d)]
    for Ti in ops:
        u, _, vh = np.linalg.svd(Ti)
        pool.append((np.conj(vh[0]), u[:, 0]))
    extra = max(0, opts.samples - len(pool))
    xs, ys = _random_sphere(rng, extra, T.d), _random_sphere(rng, extra, T.d)
    pool += list(zip(xs, ys))
    vals = np.array([_pair_value(T, x, y, pv) for x, y in pool])
    k = int(np.argmax(vals))
    best_g, best = float(vals[k]), pool[k]
    if opts.restarts > 0:
        ne = len(starts)
        order = list(range(ne)) + [int(j) + ne for j in np.argsort(-vals[ne:], kind="stable")]
        for j in order[: ne + opts.restarts]:
            x, y = pool[j]
            g = float(vals[j])
            for _ in range(opts.iters):
                _, gx, _ = kernels.pair_obj_grad(ops, x, y, pv)
                if not np.any(gx):
                    break
                x = gx / np.linalg.norm(gx)
                _, _, gy = kernels.pair_obj_grad(ops, x, y, pv)
                y = gy / np.linalg.norm(gy)
                gn = _pair_value(T, x, y, pv)
                gain = gn - g
                g = max(g, gn)
                if gain <= opts.rel_tol * g:
                    break
            if g > best_g:
                best_g, best = g, (x, y)
    return best_g ** (1.0 / pv), (_gauge(best[0]), _gauge(best[1]))


# -- identities ------------------------------------------------------------


def polarization_check(T: OperatorTuple, x, y) -> float:
    """max_i |<T_i x, y> - 1/4 sum_k i^k <T_i (x + i^k y), x + i^k y>|."""
    x = _check_vec(T, x)
    y = _check_vec(T, y)
    lhs = np.conj(y) @ (T.operators @ x).T
    rhs = np.zeros(T.N, dtype=np.complex128)
    for k in range(4):
        ik = 1j**k
        u = x + ik * y
        rhs += ik * (np.conj(u) @ (T.operators @ u).T)
    rhs /= 4.0
    return float(np.max(np.abs(lhs - rhs))) if T.N else 0.0


def polarization_scale(T: OperatorTuple, x, y) -> float:
    """(|x| + |y|)^2 max_i ||T_i||, the natural size of either side."""
    nt = max(float(np.linalg.norm(Ti, 2)) for Ti in T.operators)
    return (float(np.linalg.norm(x)) + float(np.linalg.norm(y))) ** 2 * nt


# -- range sample ----------------------------------------------------------


@dataclass
class RangeSample:
    points: np.ndarray  # (count, N) values <Tx, x>
    witnesses: np.ndarray  # (count, d)
    seed: int

    def as_family(self) -> Family:
        return Family.from_rows(self.points, label="W(T) sample")

    def norms(self, p) -> np.ndarray:
        return np.array([p_norm(z, p) for z in self.points])

    def csv_rows(self):
        N, d = self.points.shape[1], self.witnesses.shape[1]
        header = [f"z{i + 1}_{part}" for i in range(N) for part in ("re", "im")]
        header += [f"x{j + 1}_{part}" for j in range(d) for part in ("re", "im")]
        rows = []
        for z, x in zip(self.points, self.witnesses):
            row = []
            for v in z:
                row += [v.real, v.imag]
            for v in x:
                row += [v.real, v.imag]
            rows.append(row)
        return header, rows


def numerical_range_sample(T: OperatorTuple, count: int, seed: int = 0) -> RangeSample:
    """Points <Tx, x> at uniformly random unit x (complex Gaussian, normalized)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 12]))
    xs = _random_sphere(rng, count, T.d)
    Tx = np.einsum("nij,cj->cni", T.operators, xs)
    pts = np.einsum("ci,cni->cn", np.conj(xs), Tx)
    return RangeSample(pts, xs, seed)


# -- duality ---------------------------------------------------------------


def _coarse_w(M, n=64):
    thetas = np.arange(n) * (2 * np.pi / n)
    return float(_lam_max(M, thetas).max())


def _coarse_witness(M, n=64):
    thetas = np.arange(n) * (2 * np.pi / n)
    t = thetas[int(np.argmax(_lam_max(M, thetas)))]
    e = np.exp(1j * t)
    return np.linalg.eigh(0.5 * (e * M + np.conj(e) * M.conj().T))[1][:, -1]


def sup_radius_over_beta(
    T: OperatorTuple,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    starts: Sequence[np.ndarray] = (),
    rng: Optional[np.random.Generator] = None,
) -> tuple[float, np.ndarray]:
    """sup over unit beta in l^q of w(T beta), by alternating ascent.

    The ascent keeps a unit x and a unit beta and never decreases
    |<(T beta) x, x>|: beta becomes the Hoelder extremizer of <Tx, x>, then
    x becomes the top eigenvector of Re(e^{i theta} T beta) with theta
    aligning the current value to the positive axis. Each restart ends with
    a full angle sweep of w(T beta) at its final beta, and that sweep value
    is what gets reported.
    """
    rng = rng if rng is not None else np.random.default_rng(np.random.SeedSequence([opts.seed, 13]))
    q = T.q
    ops = T.operators
    pool = [np.asarray(b, dtype=np.complex128) for b in starts]
    pool += list(np.eye(T.N, dtype=np.complex128))
    for x in _random_sphere(rng, max(1, opts.samples // 4), T.d):
        z = np.conj(x) @ (ops @ x).T
        if np.any(z):
            pool.append(holder_extremizer(z, T.p).entries)
    while len(pool) < max(opts.samples, len(starts) + T.N + 1):
        b = rng.standard_normal(T.N) + 1j * rng.standard_normal(T.N)
        pool.append(b / p_norm(b, q))
    screen = np.array([_coarse_w(T.combine(b)) for b in pool])
    best_w, best_b = -1.0, pool[0]
    ne = len(starts)
    order = list(range(ne)) + [int(j) + ne for j in np.argsort(-screen[ne:], kind="stable")]
    for j in order[: ne + max(1, opts.restarts)]:
        beta = pool[j]
        if opts.restarts > 0:
            x = _coarse_witness(T.combine(beta))
            val = abs(np.vdot(x, T.combine(beta) @ x))
            for _ in range(opts.iters):
                z = np.conj(x) @ (ops @ x).T
                if not np.any(z):
                    break
                beta = holder_extremizer(z, T.p).entries
                M = T.combine(beta)
                c = np.vdot(x, M @ x)
                e = np.exp(-1j * np.angle(c))
                x = np.linalg.eigh(0.5 * (e * M + np.conj(e) * M.conj().T))[1][:, -1]
                nv = abs(np.vdot(x, M @ x))
                gain = nv - val
                val = max(val, nv)
                if gain <= opts.rel_tol * val:
                    break
        w = single_numerical_radius(T.combine(beta))[0]
        if w > best_w:
            best_w, best_b = w, beta
    return best_w, best_b


@dataclass
class RadiusReport:
    p: str
    omega: float
    omega_witness: np.ndarray
    tuple_norm: float
    tuple_norm_witness: tuple
    single_radii: list
    single_norms: list
    tol: float = 1e-3
    dual_sup: Optional[float] = None
    dual_beta: Optional[np.ndarray] = None
    extras: dict = field(default_factory=dict)

    @property
    def lower_margin(self) -> float:
        """omega - ||T|| / 2 (nonnegative when the lower half holds)."""
        return self.omega - 0.5 * self.tuple_norm

    @property
    def upper_margin(self) -> float:
        return self.tuple_norm - self.omega

    @property
    def sandwich_holds(self) -> bool:
        scale = max(1.0, self.tuple_norm)
        return self.lower_margin >= -self.tol * scale and self.upper_margin >= -self.tol * scale

    @property
    def duality_gap(self) -> Optional[float]:
        if self.dual_sup is None:
            return None
        return abs(self.omega - self.dual_sup) / max(1.0, self.omega)

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "omega": self.omega,
            "omega_witness": complex_array_to_json(self.omega_witness),
            "tuple_norm": self.tuple_norm,
            "tuple_norm_witness": {
                "x": complex_array_to_json(self.tuple_norm_witness[0]),
                "y": complex_array_to_json(self.tuple_norm_witness[1]),
            },
            "single_radii": self.single_radii,
            "single_norms": self.single_norms,
            "sandwich": {
                "lower_margin": self.lower_margin,
                "upper_margin": self.upper_margin,
                "tolerance": self.tol,
                "holds": self.sandwich_holds,
            },
        }
        if self.dual_sup is not None:
            out["duality"] = {
                "sup_w_T_beta": self.dual_sup,
                "beta": complex_array_to_json(self.dual_beta),
                "relative_gap": self.duality_gap,
            }
        out.update(self.extras)
        return out


def joint_numerical_radius(
    T: OperatorTuple,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    tol: float = 1e-3,
    candidates: Sequence[np.ndarray] = (),
) -> RadiusReport:
    """omega(T) with the sandwich check against the tuple norm.

    The tuple-norm ascent is also started from (x*, x*) at the omega
    witness, a feasible pair, so the report never shows omega above the
    tuple norm merely because the latter was under-resolved.
    """
    omega, x = maximize_joint_radius(T, opts, candidates=candidates)
    tn, (u, v) = operator_tuple_norm(T, opts, starts=[(x, x)])
    radii = [single_numerical_radius(Ti)[0] for Ti in T.operators]
    norms = [float(np.linalg.norm(Ti, 2)) for Ti in T.operators]
    return RadiusReport(str(T.p), omega, x, tn, (u, v), radii, norms, tol)


def radius_duality_check(
    T: OperatorTuple,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    tol: float = 1e-3,
    candidates: Sequence[np.ndarray] = (),
) -> RadiusReport:
    """Compare omega(T) with sup_beta w(T beta), both optimized independently."""
    rep = joint_numerical_radius(T, opts, tol=tol, candidates=candidates)
    dual, beta = sup_radius_over_beta(T, opts)
    rep.dual_sup = dual
    rep.dual_beta = beta
    return rep


def tail_comparison(T: OperatorTuple, eps_grid: Sequence[float], count: int = 512, seed: int = 0) -> dict:
    """Certificates for sampled {<Tx, x>} and {<Tx, y>} families.

    At finite d both families are totally bounded; the certified cutoffs
    and sup tails are reported so their growth can be compared across
    truncations of the tuple.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 14]))
    xs = _random_sphere(rng, count, T.d)
    ys = _random_sphere(rng, count, T.d)
    Txs = np.einsum("nij,cj->cni", T.operators, xs)
    diag = np.einsum("ci,cni->cn", np.conj(xs), Txs)
    off = np.einsum("ci,cni->cn", np.conj(ys), Txs)
    fx = certificate_curve(Family.from_rows(diag), T.p, eps_grid)
    fxy = certificate_curve(Family.from_rows(off), T.p, eps_grid)
    return {
        "xx_certificates": [c.to_json() for c in fx],
        "xy_certificates": [c.to_json() for c in fxy],
    }


# -- brute-force oracles at d = 2 ------------------------------------------


def _zoom(evaluate, lo, hi, n, levels, width=2.0):
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)
    n = np.array(n)
    best, arg = evaluate(lo, hi, n)
    step = (hi - lo) / np.maximum(n - 1, 1)
    for _ in range(levels):
        lo2, hi2 = arg - width * step, arg + width * step
        n2 = np.full_like(n, 21)
        val, arg2 = evaluate(lo2, hi2, n2)
        if val > best:
            best, arg = val, arg2
        step = (hi2 - lo2) / (n2 - 1)
    return best, arg


def oracle_joint_radius_d2(T: OperatorTuple | np.ndarray, p=None, n: int = 1000, levels: int = 8) -> float:
    """omega(T) at d = 2 by a dense grid over x = (cos t, e^{if} sin t).

    The value is invariant under the global phase of x, so the two angles
    cover the unit sphere. A grid of n x n points is followed by ``levels``
    local re-grids around the best cell.
    """
    ops = T.operators if isinstance(T, OperatorTuple) else np.asarray(T, dtype=np.complex128)
    pv = (T.p.value if isinstance(T, OperatorTuple) else float(Exponent(p).value))

    def ev(lo, hi, cnt):
        g, t, f = kernels.grid_radius_d2(ops, pv, lo[0], hi[0], cnt[0], lo[1], hi[1], cnt[1])
        return g, np.array([t, f])

    g, _ = _zoom(ev, [0.0, 0.0], [np.pi / 2, 2 * np.pi], [n, n], levels)
    return g ** (1.0 / pv)


def oracle_numerical_radius_d2(M, n: int = 1000, levels: int = 8) -> float:
    """w(M) for a 2 x 2 matrix by the same dense grid."""
    M = np.asarray(M, dtype=np.complex128)
    return oracle_joint_radius_d2(M[None], 1, n, levels)


def oracle_tuple_norm_d2(T: OperatorTuple, n: int = 32, levels: int = 10) -> float:
    """||T|| at d = 2 by a dense 4-parameter grid over unit pairs (x, y)."""
    pv = T.p.value

    def ev(lo, hi, cnt):
        return kernels.grid_pairnorm_d2(T.operators, pv, lo, hi, cnt)

    lo = [0.0, 0.0, 0.0, 0.0]
    hi = [np.pi / 2, 2 * np.pi, np.pi / 2, 2 * np.pi]
    g, _ = _zoom(ev, lo, hi, [n, n, n, n], levels)
    return g ** (1.0 / pv)
