"""Sequences of continuous functions on a finite metric grid.

A sequence F = (f_1, ..., f_N) of functions on a compact space Omega
gives a map s -> F(s) = (f_1(s), ..., f_N(s)) into l^p. The operator
beta -> sum beta_i f_i is compact iff F(Omega) is totally bounded in l^p
iff F is continuous. Omega here is a finite grid with an adjacency graph,
so continuity is read off quantitatively: the modulus of continuity of F
over adjacent pairs, and the image tails sup_s (sum_{i>m} |f_i(s)|^p)^(1/p).
On a fixed finite grid every function is continuous; the meaningful
signal is how these quantities behave as the grid and N grow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from . import kernels
from .compactness import Family, certificate_curve, epsilon_net, settles, tail_profile
from .errors import DimensionMismatch, InfiniteExponent, NoCertificate, ParseError, UnknownPoint
from .seq_core import Exponent, ScalarSeq

__all__ = [
    "Grid",
    "GridFunctionSeq",
    "evaluate",
    "image_tail_profile",
    "modulus_of_continuity",
    "continuity_bound_check",
    "equicontinuity_check_pinf",
    "analyze",
    "BoundCheck",
]

# distances closer than this (relative) are treated as the same scale
_SCALE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class Grid:
    labels: tuple
    coords: np.ndarray
    edges: np.ndarray  # (E, 2) int
    lengths: np.ndarray  # (E,) metric length of each edge

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64).reshape(len(self.labels), -1)
        edges = np.asarray(self.edges, dtype=np.intp).reshape(-1, 2)
        lengths = np.asarray(self.lengths, dtype=np.float64).reshape(-1)
        K = len(self.labels)
        if len(set(self.labels)) != K:
            raise ValueError("grid labels must be unique")
        if edges.size and (edges.min() < 0 or edges.max() >= K):
            raise ValueError("adjacency refers to a missing point")
        if np.any(lengths <= 0):
            raise ValueError("adjacent points must be at positive distance")
        if K > 1:
            n_comp, _ = connected_components(self._graph(K, edges, lengths), directed=False)
            if n_comp != 1:
                raise ValueError("adjacency graph must be connected")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lengths", lengths)

    @staticmethod
    def _graph(K, edges, lengths):
        return coo_matrix((lengths, (edges[:, 0], edges[:, 1])), shape=(K, K)).tocsr()

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, s) -> int:
        """Grid index of a point given by label (or by integer position)."""
        try:
            return self.labels.index(s)
        except ValueError:
            pass
        if isinstance(s, (int, np.integer)) and not isinstance(s, bool) and 0 <= s < self.size:
            return int(s)
        raise UnknownPoint(f"no grid point {s!r}")

    def graph_distances(self, k: int) -> np.ndarray:
        """Shortest-path distances along adjacency edges from point k."""
        if self.size == 1:
            return np.zeros(1)
        g = self._graph(self.size, self.edges, self.lengths)
        return dijkstra(g, directed=False, indices=k)

    @classmethod
    def from_points(cls, coords, adjacency, labels=None) -> "Grid":
        coords = np.asarray(coords, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        labels = tuple(labels) if labels is not None else tuple(range(coords.shape[0]))
        edges = np.asarray(adjacency, dtype=np.intp).reshape(-1, 2)
        lengths = np.linalg.norm(coords[edges[:, 0]] - coords[edges[:, 1]], axis=1)
        return cls(labels, coords, edges, lengths)

    @classmethod
    def uniform_1d(cls, K: int) -> "Grid":
        """K equally spaced points on [0, 1] joined in a path."""
        xs = np.linspace(0.0, 1.0, K) if K > 1 else np.zeros(1)
        edges = [(i, i + 1) for i in range(K - 1)]
        return cls.from_points(xs, edges)

    @classmethod
    def uniform_2d(cls, K1: int, K2: int) -> "Grid":
        xs = np.linspace(0.0, 1.0, K1)
        ys = np.linspace(0.0, 1.0, K2)
        coords = np.array([(x, y) for x in xs for y in ys])
        edges = []
        for a in range(K1):
            for b in range(K2):
                k = a * K2 + b
                if b + 1 < K2:
                    edges.append((k, k + 1))
                if a + 1 < K1:
                    edges.append((k, k + K2))
        return cls.from_points(coords, edges)

    def to_json(self) -> dict:
        return {
            "points": [
                {"label": lab, "coords": [float(c) for c in self.coords[k]]}
                for k, lab in enumerate(self.labels)
            ],
            "adjacency": self.edges.tolist(),
        }


@dataclass(frozen=True, eq=False)
class GridFunctionSeq:
    """Components f_1..f_N as a value table of shape (N, grid size)."""

    grid: Grid
    components: np.ndarray
    p: Exponent

    def __post_init__(self):
        comps = np.atleast_2d(np.asarray(self.components, dtype=np.complex128))
        if comps.shape[1] != self.grid.size:
            raise DimensionMismatch(
                f"components must have {self.grid.size} values each, got {comps.shape[1]}"
            )
        comps = comps.copy()
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "p", Exponent(self.p))

    @property
    def N(self) -> int:
        return int(self.components.shape[0])

    def image_family(self) -> Family:
        """F(Omega) as a family of l^p points, one per grid point."""
        return Family.from_rows(self.components.T, label="F(grid)")

    @classmethod
    def from_json(cls, data: dict) -> "GridFunctionSeq":
        if not isinstance(data, dict):
            raise ParseError("function-sequence file must be a JSON object")
        for key in ("points", "adjacency", "components"):
            if key not in data:
                raise ParseError(f"function-sequence file missing {key!r}")
        labels, coords = [], []
        for k, pt in enumerate(data["points"]):
            if isinstance(pt, dict):
                labels.append(pt.get("label", k))
                c = pt.get("coords", [])
            else:
                labels.append(k)
                c = pt
            coords.append([float(v) for v in (c if isinstance(c, list) else [c])])
        try:
            grid = Grid.from_points(np.array(coords), data["adjacency"], labels)
        except (TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"bad grid: {exc}") from None
        comps = []
        for row in data["components"]:
            vals = []
            for v in row:
                if isinstance(v, list):
                    if len(v) != 2:
                        raise ParseError("complex values must be [re, im] pairs")
                    vals.append(complex(float(v[0]), float(v[1])))
                else:
                    vals.append(complex(float(v)))
            if len(vals) != grid.size:
                raise DimensionMismatch(
                    f"component has {len(vals)} values for {grid.size} grid points"
                )
            comps.append(vals)
        if not comps:
            raise ParseError("at least one component is required")
        try:
            p = Exponent(data.get("p", 2))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad exponent: {exc}") from None
        return cls(grid, np.array(comps), p)

    def to_json(self) -> dict:
        out = self.grid.to_json()
        comps = self.components
        if np.all(comps.imag == 0):
            out["components"] = comps.real.tolist()
        else:
            out["components"] = np.stack([comps.real, comps.imag], axis=-1).tolist()
        out["p"] = self.p.to_json()
        return out


def evaluate(F: GridFunctionSeq, s) -> ScalarSeq:
    """F(s) = (f_1(s), ..., f_N(s))."""
    return ScalarSeq(F.components[:, F.grid.index(s)])


def image_tail_profile(F: GridFunctionSeq, cutoffs: Sequence[int]) -> list[tuple[int, float]]:
    """[(m, sup_s (sum_{i>m} |f_i(s)|^p)^(1/p))]."""
    if F.p.is_inf:
        raise InfiniteExponent("image tails need a finite exponent; use equicontinuity_check_pinf")
    return tail_profile(F.image_family(), F.p, cutoffs)


def _edge_norms(F: GridFunctionSeq, p: Exponent) -> np.ndarray:
    e = F.grid.edges
    if e.size == 0:
        return np.zeros(0)
    diffs = (F.components[:, e[:, 0]] - F.components[:, e[:, 1]]).T
    pv = 1.0 if p.is_inf else p.value
    return kernels.pnorm_dist_to(diffs, np.zeros(F.N), pv, p.is_inf)


def _scales(lengths: np.ndarray) -> list[float]:
    out = []
    for v in np.sort(lengths):
        if not out or v > out[-1] * (1 + _SCALE_RTOL):
            out.append(float(v))
        else:
            out[-1] = max(out[-1], float(v))
    return out


def modulus_of_continuity(F: GridFunctionSeq, p=None) -> list[tuple[float, float]]:
    """[(delta, max ||F(s) - F(s')||_p over adjacent pairs at distance <= delta)].

    One entry per distinct edge length; nondecreasing in delta.
    """
    p = F.p if p is None else Exponent(p)
    norms = _edge_norms(F, p)
    lengths = F.grid.lengths
    out = []
    for delta in _scales(lengths):
        mask = lengths <= delta * (1 + _SCALE_RTOL)
        out.append((delta, float(norms[mask].max()) if mask.any() else 0.0))
    return out


def _settle_limit(N: int) -> int:
    return max(m for m in range(N + 1) if settles(m, N))


@dataclass
class BoundCheck:
    s0: object
    epsilon: float
    cutoff_m: int
    sup_tail: float
    threshold: float
    radius: float
    ball_size: int
    measured_max: float  # max over the ball of ||F(s) - F(s0)||_p^p
    bound: float  # (1 + 2^(p+1)) epsilon^p
    holds: bool

    def to_json(self) -> dict:
        return {
            "s0": self.s0,
            "epsilon": self.epsilon,
            "m": self.cutoff_m,
            "sup_tail": self.sup_tail,
            "threshold": self.threshold,
            "radius": self.radius,
            "ball_size": self.ball_size,
            "measured_max": self.measured_max,
            "bound": self.bound,
            "holds": self.holds,
        }


def continuity_bound_check(
    F: GridFunctionSeq, s0, epsilon: float, *, max_cutoff: Optional[int] = None
) -> BoundCheck:
    """Rebuild the epsilon-neighbourhood argument for continuity of F at s0.

    Picks the least cutoff m with sup image tail < epsilon, grows the
    largest adjacency ball U0 around s0 on which every |f_i(s) - f_i(s0)|,
    i <= m, stays within epsilon / m^(1/p), and measures
    ||F(s) - F(s0)||_p^p on U0 against (1 + 2^(p+1)) epsilon^p.
    ``max_cutoff`` defaults to the settle limit of the horizon.
    """
    if F.p.is_inf:
        raise InfiniteExponent("the tail-based bound needs a finite exponent")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pv = F.p.value
    k0 = F.grid.index(s0)
    limit = _settle_limit(F.N) if max_cutoff is None else int(max_cutoff)
    cert = certificate_curve(F.image_family(), F.p, [epsilon])[0]
    if not cert.satisfied or cert.cutoff_m > limit:
        raise NoCertificate(
            f"no cutoff m <= {limit} gives sup tail < {epsilon} (least is {cert.cutoff_m})"
        )
    m = cert.cutoff_m
    threshold = math.inf if m == 0 else epsilon / m ** (1.0 / pv)
    diffs = np.abs(F.components - F.components[:, [k0]])
    ok = np.all(diffs[:m] <= threshold, axis=0) if m else np.ones(F.grid.size, dtype=bool)
    dist = F.grid.graph_distances(k0)
    radius = 0.0
    inside = np.zeros(F.grid.size, dtype=bool)
    inside[k0] = True
    for level in _scales(dist[(dist > 0) & np.isfinite(dist)]):
        ring = (dist <= level * (1 + _SCALE_RTOL)) & ~inside
        if not np.all(ok[ring]):
            break
        inside |= ring
        radius = level
    gaps = F.components[:, inside] - F.components[:, [k0]]
    measured = float((np.abs(gaps) ** pv).sum(axis=0).max())
    bound = (1.0 + 2.0 ** (pv + 1.0)) * epsilon**pv
    return BoundCheck(
        s0=F.grid.labels[k0],
        epsilon=float(epsilon),
        cutoff_m=m,
        sup_tail=cert.sup_tail,
        threshold=threshold,
        radius=radius,
        ball_size=int(inside.sum()),
        measured_max=measured,
        bound=bound,
        holds=bool(measured <= bound * (1 + 1e-12)),
    )


@dataclass
class EquicontinuityReport:
    modulus: list
    modulus_at_finest: float
    nets: list
    totally_bounded: bool

    def to_json(self) -> dict:
        return {
            "modulus": [{"delta": d, "omega": w} for d, w in self.modulus],
            "modulus_at_finest": self.modulus_at_finest,
            "nets": [n.to_json() for n in self.nets],
            "totally_bounded": self.totally_bounded,
        }


def equicontinuity_check_pinf(
    F: GridFunctionSeq, eps_grid: Sequence[float] = (0.5, 0.25, 0.1)
) -> EquicontinuityReport:
    """The p = inf route: sup_i |f_i(s) - f_i(s')| over adjacent pairs, and
    epsilon-nets of the component set {f_1, ..., f_N} in the sup norm."""
    modulus = modulus_of_continuity(F, "inf")
    nets = [epsilon_net(Family.from_rows(F.components), "inf", e) for e in eps_grid]
    return EquicontinuityReport(
        modulus=modulus,
        modulus_at_finest=modulus[0][1] if modulus else 0.0,
        nets=nets,
        totally_bounded=all(n.size <= max(1, F.N // 2) for n in nets),
    )


@dataclass
class CfunReport:
    p: str
    N: int
    grid_size: int
    finest_delta: float
    compact_type: bool
    tail_profile: list
    certificates: list
    modulus: list
    bound_checks: list = field(default_factory=list)
    premise_failures: list = field(default_factory=list)
    equicontinuity: Optional[EquicontinuityReport] = None

    @property
    def label(self) -> str:
        return "compact-type" if self.compact_type else "non-compact-type"

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "N": self.N,
            "grid_size": self.grid_size,
            "finest_delta": self.finest_delta,
            "type": self.label,
            "certificates": [c.to_json() for c in self.certificates],
            "modulus": [{"delta": d, "omega": w} for d, w in self.modulus],
            "bound_checks": [b.to_json() for b in self.bound_checks],
            "premise_failures": self.premise_failures,
            "all_bounds_hold": all(b.holds for b in self.bound_checks),
        }
        if self.equicontinuity is not None:
            out["equicontinuity"] = self.equicontinuity.to_json()
        return out


def analyze(F: GridFunctionSeq, eps_grid: Sequence[float] = (0.5, 0.25, 0.1)) -> CfunReport:
    """Tails, modulus and the neighbourhood bound at every grid point.

    The sequence is compact-type when each epsilon in the grid is certified
    at a settled cutoff (p finite), or when the component nets settle
    (p = inf).
    """
    modulus = modulus_of_continuity(F)
    finest = modulus[0][0] if modulus else 0.0
    if F.p.is_inf:
        eq = equicontinuity_check_pinf(F, eps_grid)
        return CfunReport(str(F.p), F.N, F.grid.size, finest, eq.totally_bounded, [], [],
                          modulus, equicontinuity=eq)
    profile = image_tail_profile(F, range(F.N + 1))
    certs = certificate_curve(F.image_family(), F.p, eps_grid)
    limit = _settle_limit(F.N)
    compact = all(c.cutoff_m <= limit for c in certs)
    checks, failures = [], []
    for eps in eps_grid:
        for k in range(F.grid.size):
            try:
                checks.append(continuity_bound_check(F, k, eps))
            except NoCertificate:
                failures.append(float(eps))
                break
    return CfunReport(str(F.p), F.N, F.grid.size, finest, compact, profile, certs, modulus,
                      checks, failures)
