"""Concrete Banach spaces A together with their dual unit balls.

Three instances are provided:

``CnSpace(n, r)``
    complex n-space with the l^r norm; functionals are vectors w acting by
    the (unconjugated) Hoelder pairing with ||w||_{r'} <= 1.
``CGridSpace(points)``
    continuous functions on a finite grid with the sup norm; functionals
    are atomic measures (a complex weight per grid point) of total
    variation <= 1.
``MatrixSpace(d)``
    d x d complex matrices with the operator norm; functionals are
    T -> tr(T G) with trace norm of G <= 1. The rank-one functional
    T -> <Tx, y> = y^H T x corresponds to G = x y^H.

Every instance can also return a *norming functional* for an element a:
a dual-ball member phi with phi(a) = ||a||. The optimizers use it as the
linearization step when maximizing convex objectives over the dual ball.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, ParseError
from .seq_core import Exponent, complex_array_from_json, complex_array_to_json, holder_extremizer, p_norm

__all__ = [
    "DualFunctional",
    "TargetSpace",
    "CnSpace",
    "CGridSpace",
    "MatrixSpace",
    "OptimizerOptions",
    "MaximizeResult",
    "dual_ball_maximize",
    "space_from_json",
]


@dataclass(frozen=True, eq=False)
class DualFunctional:
    """A member of the dual unit ball of some TargetSpace.

    ``rep`` is the representation the space acts with: a weight vector for
    ``cn``/``cgrid`` and the matrix G of T -> tr(T G) for ``mat``. Rank-one
    matrix functionals also keep their unit vectors ``x`` and ``y``.
    """

    kind: str
    rep: np.ndarray
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "rep": complex_array_to_json(self.rep)}
        if self.x is not None:
            out["x"] = complex_array_to_json(self.x)
            out["y"] = complex_array_to_json(self.y)
        return out


class TargetSpace(ABC):
    """Interface for the target Banach space A."""

    kind: str

    @property
    @abstractmethod
    def element_shape(self) -> tuple: ...

    @abstractmethod
    def norm(self, a) -> float: ...

    @abstractmethod
    def dual_norm(self, phi: DualFunctional) -> float: ...

    @abstractmethod
    def norming_functional(self, a) -> DualFunctional: ...

    @abstractmethod
    def _slate(self) -> list: ...

    @abstractmethod
    def _random_functional(self, rng: np.random.Generator) -> DualFunctional: ...

    @abstractmethod
    def random_element(self, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def descriptor(self) -> dict: ...

    @abstractmethod
    def _from_rep(self, rep: np.ndarray) -> DualFunctional: ...

    # -- elements -------------------------------------------------------

    def check(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=np.complex128)
        if arr.shape != self.element_shape:
            raise DimensionMismatch(
                f"{self.kind} element must have shape {self.element_shape}, got {arr.shape}"
            )
        return arr

    def check_terms(self, terms) -> np.ndarray:
        arr = np.asarray(terms, dtype=np.complex128)
        if arr.size == 0:
            return np.zeros((0,) + self.element_shape, dtype=np.complex128)
        if arr.shape[1:] != self.element_shape:
            raise DimensionMismatch(
                f"{self.kind} terms must have shape (N, {', '.join(map(str, self.element_shape))}), "
                f"got {arr.shape}"
            )
        return arr

    def zero(self) -> np.ndarray:
        return np.zeros(self.element_shape, dtype=np.complex128)

    def element_from_json(self, data) -> np.ndarray:
        """Accept nested or flat (row-major) lists of [re, im] pairs."""
        arr = complex_array_from_json(data)
        size = int(np.prod(self.element_shape))
        if arr.size != size:
            raise DimensionMismatch(f"{self.kind} element needs {size} entries, got {arr.size}")
        return arr.reshape(self.element_shape)

    def element_to_json(self, a) -> list:
        return complex_array_to_json(self.check(a))

    # -- functionals ----------------------------------------------------

    def _rep_shape(self) -> tuple:
        return self.element_shape

    def dual_apply(self, phi: DualFunctional, a) -> complex:
        a = self.check(a)
        return complex(self.dual_apply_many(phi, a[None])[0])

    def dual_apply_many(self, phi: DualFunctional, terms) -> np.ndarray:
        """(phi(a_1), ..., phi(a_N)) for a stack of elements."""
        terms = np.asarray(terms, dtype=np.complex128)
        if phi.rep.shape != self._rep_shape():
            raise DimensionMismatch(f"functional of shape {phi.rep.shape} does not act on {self.kind}")
        if terms.shape[0] == 0:
            return np.zeros(0, dtype=np.complex128)
        n = int(np.prod(self.element_shape))
        return terms.reshape(terms.shape[0], n) @ self._flat_rep(phi)

    def _flat_rep(self, phi: DualFunctional) -> np.ndarray:
        return phi.rep.reshape(-1)

    def sample_dual_ball(self, count: int, seed=0) -> list:
        """Deterministic sample: extreme-point slate first, then random members."""
        if count < 1:
            raise ValueError("count must be >= 1")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        slate = self._slate()[:count]
        out = list(slate)
        while len(out) < count:
            out.append(self._random_functional(rng))
        return out

    def _gradient_element(self, G: np.ndarray) -> np.ndarray:
        """Element a with phi(a) = sum_k conj(G_k) rep_k for every phi."""
        return np.conj(G).reshape(self.element_shape)

    def project(self, rep: np.ndarray) -> DualFunctional:
        """Scale a representation onto the dual unit sphere (0 stays 0)."""
        phi = self._from_rep(rep)
        nrm = self.dual_norm(phi)
        if nrm == 0.0:
            return phi
        return self._from_rep(rep / nrm)

    def to_vector(self, phi: DualFunctional) -> np.ndarray:
        r = phi.rep.reshape(-1)
        return np.concatenate([r.real, r.imag])

    def from_vector(self, v: np.ndarray) -> DualFunctional:
        h = v.size // 2
        return self.project((v[:h] + 1j * v[h:]).reshape(self._rep_shape()))


class CnSpace(TargetSpace):
    kind = "cn"

    def __init__(self, n: int, r=2):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.r = Exponent(r)
        self.r_dual = self.r.conjugate()

    def __repr__(self):
        return f"CnSpace(n={self.n}, r={self.r})"

    @property
    def element_shape(self) -> tuple:
        return (self.n,)

    def norm(self, a) -> float:
        return p_norm(self.check(a), self.r)

    def dual_norm(self, phi) -> float:
        return p_norm(phi.rep, self.r_dual)

    def _from_rep(self, rep):
        return DualFunctional("vector", np.asarray(rep, dtype=np.complex128).reshape(self.n))

    def norming_functional(self, a) -> DualFunctional:
        a = self.check(a)
        if not np.any(a):
            return self._slate()[0]
        return self._from_rep(holder_extremizer(a, self.r).entries)

    def _slate(self):
        return [self._from_rep(np.eye(self.n, dtype=np.complex128)[j]) for j in range(self.n)]

    def _random_functional(self, rng):
        w = rng.standard_normal(self.n) + 1j * rng.standard_normal(self.n)
        if self.r_dual.is_inf and rng.random() < 0.5:
            # unimodular vectors are the extreme points of the l^inf ball
            w = np.exp(2j * np.pi * rng.random(self.n))
        return self.project(w)

    def random_element(self, rng):
        return rng.standard_normal(self.n) + 1j * rng.standard_normal(self.n)

    def descriptor(self) -> dict:
        return {"space": "cn", "n": self.n, "r": self.r.to_json()}


class CGridSpace(TargetSpace):
    """Continuous functions on a finite grid, sup norm."""

    kind = "cgrid"

    def __init__(self, points: Sequence):
        if len(points) < 1:
            raise ValueError("grid needs at least one point")
        self.points = tuple(points)
        self.size = len(self.points)

    def __repr__(self):
        return f"CGridSpace(size={self.size})"

    @property
    def element_shape(self) -> tuple:
        return (self.size,)

    def norm(self, a) -> float:
        return p_norm(self.check(a), "inf")

    def dual_norm(self, phi) -> float:
        return p_norm(phi.rep, 1)

    def _from_rep(self, rep):
        return DualFunctional("measure", np.asarray(rep, dtype=np.complex128).reshape(self.size))

    def point_mass(self, k: int, weight: complex = 1.0) -> DualFunctional:
        """delta_s at the k-th grid point (0-based), times a weight."""
        rep = np.zeros(self.size, dtype=np.complex128)
        rep[k] = weight
        return self._from_rep(rep)

    def norming_functional(self, a) -> DualFunctional:
        a = self.check(a)
        mod = np.abs(a)
        k = int(np.argmax(mod))
        if mod[k] == 0.0:
            return self.point_mass(0)
        return self.point_mass(k, np.exp(-1j * np.angle(a[k])))

    def _slate(self):
        return [self.point_mass(k) for k in range(self.size)]

    def _random_functional(self, rng):
        atoms = int(rng.integers(1, min(self.size, 4) + 1))
        where = rng.choice(self.size, size=atoms, replace=False)
        rep = np.zeros(self.size, dtype=np.complex128)
        rep[where] = rng.standard_normal(atoms) + 1j * rng.standard_normal(atoms)
        return self.project(rep)

    def random_element(self, rng):
        return rng.standard_normal(self.size) + 1j * rng.standard_normal(self.size)

    def descriptor(self) -> dict:
        pts = [list(p) if isinstance(p, (tuple, list)) else p for p in self.points]
        return {"space": "cgrid", "points": pts}


class MatrixSpace(TargetSpace):
    """d x d complex matrices with the operator (spectral) norm."""

    kind = "mat"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = int(d)

    def __repr__(self):
        return f"MatrixSpace(d={self.d})"

    @property
    def element_shape(self) -> tuple:
        return (self.d, self.d)

    def norm(self, a) -> float:
        return float(np.linalg.norm(self.check(a), 2))

    def dual_norm(self, phi) -> float:
        if phi.kind == "rank_one":
            return float(np.linalg.norm(phi.x) * np.linalg.norm(phi.y))
        return float(np.linalg.svd(phi.rep, compute_uv=False).sum())

    def _flat_rep(self, phi):
        # tr(T G) = sum_jk T_jk G_kj
        return phi.rep.T.reshape(-1)

    def _from_rep(self, rep):
        return DualFunctional("trace", np.asarray(rep, dtype=np.complex128).reshape(self.d, self.d))

    def _gradient_element(self, G):
        # phi(T) = tr(T rep) = sum_ij T_ij rep_ji
        return np.conj(G).T

    def rank_one(self, x, y) -> DualFunctional:
        """phi_{x,y}(T) = <Tx, y> = y^H T x, with x and y normalized."""
        x = np.asarray(x, dtype=np.complex128)
        y = np.asarray(y, dtype=np.complex128)
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        if nx == 0 or ny == 0:
            raise ValueError("rank-one functional needs nonzero vectors")
        x, y = x / nx, y / ny
        return DualFunctional("rank_one", np.outer(x, np.conj(y)), x, y)

    def norming_functional(self, a) -> DualFunctional:
        a = self.check(a)
        u, _, vh = np.linalg.svd(a)
        return self.rank_one(np.conj(vh[0]), u[:, 0])

    def _slate(self):
        eye = np.eye(self.d, dtype=np.complex128)
        return [self.rank_one(eye[k], eye[j]) for j in range(self.d) for k in range(self.d)]

    def _random_functional(self, rng):
        if rng.random() < 0.5:
            x = rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d)
            y = rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d)
            return self.rank_one(x, y)
        g = rng.standard_normal((self.d, self.d)) + 1j * rng.standard_normal((self.d, self.d))
        return self.project(g)

    def project(self, rep):
        rep = np.asarray(rep, dtype=np.complex128).reshape(self.d, self.d)
        s = np.linalg.svd(rep, compute_uv=False)
        total = float(s.sum())
        if total == 0.0:
            return self._from_rep(rep)
        return self._from_rep(rep / total)

    def random_element(self, rng):
        return rng.standard_normal((self.d, self.d)) + 1j * rng.standard_normal((self.d, self.d))

    def descriptor(self) -> dict:
        return {"space": "mat", "d": self.d}


def space_from_json(desc: dict) -> TargetSpace:
    if not isinstance(desc, dict) or "space" not in desc:
        raise ParseError("space descriptor must be an object with a 'space' key")
    kind = desc["space"]
    try:
        if kind == "cn":
            return CnSpace(int(desc["n"]), desc.get("r", 2))
        if kind == "cgrid":
            return CGridSpace(desc["points"])
        if kind == "mat":
            return MatrixSpace(int(desc["d"]))
    except KeyError as exc:
        raise ParseError(f"space descriptor missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad space descriptor: {exc}") from None
    raise ParseError(f"unknown space {kind!r}")


# -- optimizer -------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 32
    iters: int = 200
    shrink: float = 0.5
    min_step: float = 1e-9
    samples: int = 256
    seed: int = 0
    rel_tol: float = 1e-13

    def to_json(self) -> dict:
        return {
            "restarts": self.restarts,
            "iters": self.iters,
            "shrink": self.shrink,
            "min_step": self.min_step,
            "samples": self.samples,
            "seed": self.seed,
            "rel_tol": self.rel_tol,
        }


@dataclass(frozen=True)
class MaximizeResult:
    functional: DualFunctional
    value: float
    restart: int  # -1 when the best value came straight from the sample batch
    evaluations: int


def _pattern_search(space, objective, phi, value, opts, counter):
    v = space.to_vector(phi)
    h = 0.25 * max(1e-3, float(np.max(np.abs(v))) if v.size else 1.0)
    it = 0
    while it < opts.iters and h >= opts.min_step:
        it += 1
        best_val, best_phi, best_v = value, None, None
        for j in range(v.size):
            for sgn in (1.0, -1.0):
                trial = v.copy()
                trial[j] += sgn * h
                cand = space.from_vector(trial)
                val = objective(cand)
                counter[0] += 1
                if val > best_val:
                    best_val, best_phi, best_v = val, cand, space.to_vector(cand)
        if best_phi is None:
            h *= opts.shrink
        else:
            value, phi, v = best_val, best_phi, best_v
    return phi, value


def _gradient_step(space, objective, counter, h=1e-7):
    """Linearization step from a central-difference gradient.

    With G = df/dRe(rep) + i df/dIm(rep), the linear model of f at phi is
    maximized over the dual ball by the norming functional of the element
    a with phi(a) = sum conj(G_k) rep_k. For convex f this never decreases
    the objective.
    """

    def step(phi):
        rep = np.asarray(phi.rep, dtype=np.complex128)
        G = np.zeros_like(rep)
        flat, gflat = rep.reshape(-1), G.reshape(-1)
        for k in range(flat.size):
            for unit in (1.0, 1j):
                up, dn = flat.copy(), flat.copy()
                up[k] += unit * h
                dn[k] -= unit * h
                d = objective(space._from_rep(up.reshape(rep.shape))) - objective(space._from_rep(dn.reshape(rep.shape)))
                gflat[k] += unit * d / (2 * h)
        counter[0] += 4 * flat.size
        if not np.any(G):
            return phi
        return space.norming_functional(space._gradient_element(G))

    return step


def _fixed_point_ascent(objective, step, phi, value, opts, counter):
    for _ in range(opts.iters):
        cand = step(phi)
        val = objective(cand)
        counter[0] += 1
        if not val > value:
            break
        gain = val - value
        phi, value = cand, val
        if gain <= opts.rel_tol * max(1.0, abs(value)):
            break
    return phi, value


def dual_ball_maximize(
    space: TargetSpace,
    objective: Callable[[DualFunctional], float],
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    step: Optional[Callable[[DualFunctional], DualFunctional]] = None,
    starts: Sequence[DualFunctional] = (),
    rng: Optional[np.random.Generator] = None,
) -> MaximizeResult:
    """Multistart local ascent of ``objective`` over the dual unit ball.

    A batch of ``opts.samples`` functionals (extreme-point slate plus random
    members) is evaluated; the best ``opts.restarts`` of them, together with
    any explicit ``starts``, are improved locally. With ``step`` given (a map
    phi -> phi' expected to increase the objective, e.g. a linearization
    step for convex objectives) the ascent iterates it while it improves;
    otherwise the ascent alternates a linearization step built from a
    finite-difference gradient with a normalized compass search on the real
    coordinates of the representation. The returned value is attained by the returned
    functional, so it is a lower bound for the supremum.
    """
    rng = rng if rng is not None else np.random.default_rng(opts.seed)
    batch = list(starts) + space.sample_dual_ball(max(1, opts.samples), rng)
    values = np.array([float(objective(phi)) for phi in batch])
    counter = [len(batch)]
    top = int(np.argmax(values))
    best = MaximizeResult(batch[top], float(values[top]), -1, 0)
    if opts.restarts <= 0:
        return MaximizeResult(best.functional, best.value, -1, counter[0])
    n_explicit = len(starts)
    ranked = list(range(n_explicit)) + [
        int(k) for k in np.argsort(-values[n_explicit:], kind="stable") + n_explicit
    ]
    seen = 0
    for k in ranked:
        if seen >= opts.restarts + n_explicit:
            break
        seen += 1
        phi, val = batch[k], float(values[k])
        if step is not None:
            phi, val = _fixed_point_ascent(objective, step, phi, val, opts, counter)
        else:
            phi, val = _fixed_point_ascent(objective, _gradient_step(space, objective, counter), phi, val, opts, counter)
            phi, val = _pattern_search(space, objective, phi, val, opts, counter)
        if val > best.value:
            best = MaximizeResult(phi, val, seen - 1, 0)
    return MaximizeResult(best.functional, best.value, best.restart, counter[0])
