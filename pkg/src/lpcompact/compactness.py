"""Tail certificates and greedy epsilon-nets for finite families in l^p.

A family K of sequences is totally bounded in l^p exactly when it is
pointwise bounded and its p-tails beyond some common cutoff m are uniformly
below any given epsilon. For a finite sample the cutoff always exists; the
informative output is how the least such m grows as epsilon shrinks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InfiniteExponent
from .seq_core import Exponent, ScalarSeq, as_array

__all__ = [
    "Family",
    "Certificate",
    "EpsilonNet",
    "tail_profile",
    "kolmogorov_certificate",
    "certificate_curve",
    "epsilon_net",
    "metric_epsilon_net",
    "settles",
]


@dataclass(frozen=True)
class Family:
    members: tuple
    label: str = ""

    def __init__(self, members: Iterable, label: str = ""):
        mem = tuple(m if isinstance(m, ScalarSeq) else ScalarSeq(m) for m in members)
        if not mem:
            raise ValueError("a family needs at least one member")
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "label", label)

    @classmethod
    def from_rows(cls, rows: np.ndarray, label: str = "") -> "Family":
        rows = np.asarray(rows, dtype=np.complex128)
        return cls([ScalarSeq(r) for r in rows], label)

    def __len__(self):
        return len(self.members)

    @property
    def max_support(self) -> int:
        return max(m.support for m in self.members)

    def matrix(self) -> np.ndarray:
        """Members as rows of a zero-padded complex array."""
        n = self.max_support
        out = np.zeros((len(self.members), n), dtype=np.complex128)
        for k, m in enumerate(self.members):
            out[k, : m.support] = m.entries
        return out

    def pointwise_bound(self) -> float:
        """max over members and coordinates of |alpha_i|."""
        mat = self.matrix()
        return float(np.abs(mat).max()) if mat.size else 0.0


@dataclass(frozen=True)
class Certificate:
    epsilon: float
    cutoff_m: int
    sup_tail: float
    satisfied: bool

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "m": self.cutoff_m,
            "sup_tail": self.sup_tail,
            "satisfied": self.satisfied,
        }


def _finite_p(p) -> float:
    p = Exponent(p)
    if p.is_inf:
        raise InfiniteExponent("tail criteria need a finite exponent")
    return p.value


def _sup_tails(mat: np.ndarray, pv: float) -> np.ndarray:
    """sup over rows of the p-tail beyond each cutoff 0..N (length N + 1)."""
    if mat.shape[1] == 0:
        return np.zeros(1)
    powers = kernels.tail_powers(np.abs(mat), pv)
    sup = powers.max(axis=0)
    # compensated suffix sums can wobble by an ulp; the exact tails are monotone
    sup = np.maximum.accumulate(sup[::-1])[::-1]
    if pv == 1.0:
        return sup
    if pv == 2.0:
        return np.sqrt(sup)
    return sup ** (1.0 / pv)


def tail_profile(fam: Family, p, cutoffs: Sequence[int]) -> list[tuple[int, float]]:
    """[(m, max over members of (sum_{i>m} |alpha_i|^p)^(1/p))] for each m."""
    pv = _finite_p(p)
    sup = _sup_tails(fam.matrix(), pv)
    horizon = sup.size - 1
    out = []
    for m in cutoffs:
        if m < 0:
            raise ValueError("cutoffs are nonnegative")
        out.append((int(m), float(sup[min(int(m), horizon)])))
    return out


def kolmogorov_certificate(fam: Family, p, epsilon: float) -> Certificate:
    """Least cutoff m with uniform p-tail below epsilon (exact scan)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pv = _finite_p(p)
    sup = _sup_tails(fam.matrix(), pv)
    return _certificate_from_tails(sup, epsilon)


def _certificate_from_tails(sup: np.ndarray, epsilon: float) -> Certificate:
    below = np.flatnonzero(sup < epsilon)
    if below.size:
        m = int(below[0])
        return Certificate(float(epsilon), m, float(sup[m]), True)
    m = sup.size - 1
    return Certificate(float(epsilon), m, float(sup[m]), False)


def certificate_curve(fam: Family, p, epsilons: Sequence[float]) -> list[Certificate]:
    """Certificates for several tolerances from one tail computation."""
    pv = _finite_p(p)
    sup = _sup_tails(fam.matrix(), pv)
    return [_certificate_from_tails(sup, float(e)) for e in epsilons]


@dataclass(frozen=True)
class EpsilonNet:
    indices: tuple[int, ...]
    epsilon: float
    covering_radius: float
    insertion_radii: tuple[float, ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "size": self.size,
            "indices": list(self.indices),
            "covering_radius": self.covering_radius,
        }


def _rows(points) -> np.ndarray:
    if isinstance(points, Family):
        return points.matrix()
    rows = [as_array(m) for m in points]
    n = max((r.size for r in rows), default=0)
    out = np.zeros((len(rows), n), dtype=np.complex128)
    for k, r in enumerate(rows):
        out[k, : r.size] = r
    return out


def epsilon_net(fam, p, epsilon: float) -> EpsilonNet:
    """Greedy farthest-point epsilon-net of the members in p-norm distance.

    Starts at the first member and repeatedly adds the member farthest from
    the current net (lowest index on ties) until every member is within
    epsilon. The insertion order does not depend on epsilon, so net size is
    monotone in epsilon.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    p = Exponent(p)
    X = _rows(fam)
    if X.shape[0] == 0:
        raise ValueError("empty family")
    pv = 1.0 if p.is_inf else p.value
    dist = kernels.pnorm_dist_to(X, X[0], pv, p.is_inf)
    chosen = [0]
    radii = []
    while True:
        k = int(np.argmax(dist))
        r = float(dist[k])
        if r <= epsilon:
            break
        chosen.append(k)
        radii.append(r)
        dist = np.minimum(dist, kernels.pnorm_dist_to(X, X[k], pv, p.is_inf))
    return EpsilonNet(tuple(chosen), float(epsilon), float(dist.max()), tuple(radii))


def metric_epsilon_net(points: Sequence, distance, epsilon: float) -> EpsilonNet:
    """Greedy farthest-point epsilon-net under an arbitrary metric.

    ``distance(a, b)`` must be symmetric. Same traversal and tie rule as
    :func:`epsilon_net`.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n = len(points)
    if n == 0:
        raise ValueError("empty point set")
    dist = np.array([distance(points[0], q) for q in points], dtype=np.float64)
    chosen = [0]
    radii = []
    while True:
        k = int(np.argmax(dist))
        r = float(dist[k])
        if r <= epsilon:
            break
        chosen.append(k)
        radii.append(r)
        dist = np.minimum(dist, [distance(points[k], q) for q in points])
    return EpsilonNet(tuple(chosen), float(epsilon), float(dist.max()), tuple(radii))


def settles(cutoff: int, horizon: int) -> bool:
    """Desk-scale reading of "the tail is eventually small".

    A cutoff counts as evidence of decay when it lies in the first half of
    the truncation horizon. Cutoffs pressed against the horizon say nothing
    about an infinite sequence: every truncated tail vanishes there. A
    horizon of one term has no first half and only admits cutoff 0.
    """
    if horizon <= 1:
        return cutoff == 0
    return cutoff <= horizon // 2
