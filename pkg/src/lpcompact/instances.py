"""Named instances used by the tests, the acceptance suite and the CLI.

Each builder returns a ready object; :func:`write_fixtures` serializes the
whole catalogue to JSON input files.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cfun_case import Grid, GridFunctionSeq
from .diagonal_operator import OperatorSeq
from .hilbert_case import OperatorTuple
from .target_space import CGridSpace, CnSpace, MatrixSpace

NILPOTENT = np.array([[0, 1], [0, 0]], dtype=np.complex128)


# -- sequences -------------------------------------------------------------


def harmonic_basis(N: int = 100, p=2) -> OperatorSeq:
    """a_i = e_i / sqrt(i) in C^N with the Euclidean norm."""
    terms = np.diag(1.0 / np.sqrt(np.arange(1, N + 1))).astype(np.complex128)
    return OperatorSeq(CnSpace(N, 2), terms, p)


def unit_basis(N: int = 20, p=2) -> OperatorSeq:
    """a = (e_1, ..., e_N) in C^N with the Euclidean norm."""
    return OperatorSeq(CnSpace(N, 2), np.eye(N, dtype=np.complex128), p)


def zero_sequence(N: int = 5, n: int = 3, p=2) -> OperatorSeq:
    return OperatorSeq(CnSpace(n, 2), np.zeros((N, n), dtype=np.complex128), p)


def random_sequence(rng: np.random.Generator, kind: str, p, N: int | None = None) -> OperatorSeq:
    """Random instance in one of the three target-space types.

    kind is "cn" (n <= 6, random r), "cgrid" (<= 12 points) or "mat" (d <= 3).
    """
    N = int(rng.integers(1, 9)) if N is None else N
    if kind == "cn":
        n = int(rng.integers(1, 7))
        r = ["1", "4/3", "2", "3", "inf"][int(rng.integers(0, 5))]
        space = CnSpace(n, r)
    elif kind == "cgrid":
        K = int(rng.integers(2, 13))
        space = CGridSpace(list(np.round(np.linspace(0, 1, K), 12)))
    elif kind == "mat":
        space = MatrixSpace(int(rng.integers(1, 4)))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    terms = np.array([space.random_element(rng) for _ in range(N)])
    scale = rng.uniform(0.2, 3.0, size=N).reshape((N,) + (1,) * (terms.ndim - 1))
    return OperatorSeq(space, terms * scale, p)


# -- tuples ----------------------------------------------------------------


def nilpotent_singleton(p=2) -> OperatorTuple:
    return OperatorTuple(NILPOTENT[None], p)


def identity_pair(d: int = 2, p=2) -> OperatorTuple:
    eye = np.eye(d, dtype=np.complex128)
    return OperatorTuple(np.array([eye, eye]), p)


def shift_pair(p=2) -> OperatorTuple:
    return OperatorTuple(np.array([NILPOTENT, NILPOTENT.T]), p)


def identity_with_zeros(d: int = 2, p=2) -> OperatorTuple:
    z = np.zeros((d, d), dtype=np.complex128)
    return OperatorTuple(np.array([np.eye(d), z, z]), p)


def random_tuple(rng: np.random.Generator, d: int | None = None, N: int | None = None, p=None) -> OperatorTuple:
    d = int(rng.integers(1, 7)) if d is None else d
    N = int(rng.integers(1, 9)) if N is None else N
    p = ["4/3", "2", "3"][int(rng.integers(0, 3))] if p is None else p
    ops = rng.standard_normal((N, d, d)) + 1j * rng.standard_normal((N, d, d))
    return OperatorTuple(ops / np.sqrt(2 * d), p)


def d2_fixtures() -> list[tuple[str, OperatorTuple]]:
    """Twenty 2 x 2 tuples for the oracle comparison: the named ones plus seeded random ones."""
    out = [
        ("nilpotent", nilpotent_singleton()),
        ("identity-pair", identity_pair()),
        ("shift-pair", shift_pair()),
        ("identity-zeros", identity_with_zeros(p="3")),
        ("hermitian", OperatorTuple(np.diag([1.0, -2.0])[None], 2)),
    ]
    rng = np.random.default_rng(2024)
    while len(out) < 20:
        k = len(out)
        out.append((f"random-{k}", random_tuple(rng, d=2, N=int(rng.integers(1, 5)), p=["4/3", "2", "3"][k % 3])))
    return out


# -- function sequences ----------------------------------------------------


def _grid_1d(K: int) -> Grid:
    return Grid.uniform_1d(K)


def constant_fseq(K: int = 11, N: int = 12, p=2) -> GridFunctionSeq:
    """f_i = 2^{-i} everywhere."""
    g = _grid_1d(K)
    vals = np.repeat((2.0 ** -np.arange(1, N + 1))[:, None], g.size, axis=1)
    return GridFunctionSeq(g, vals, p)


def power_fseq(K: int = 3, N: int = 3, p=1) -> GridFunctionSeq:
    """f_i(s) = s^i on {0, 1/(K-1), ..., 1}."""
    g = _grid_1d(K)
    s = g.coords[:, 0]
    return GridFunctionSeq(g, np.array([s**i for i in range(1, N + 1)]), p)


def geometric_fseq(K: int = 21, N: int = 30, p=2) -> GridFunctionSeq:
    """f_i = 2^{-i} g with g(s) = sin(pi s / 2), so sup |g| = 1."""
    g = _grid_1d(K)
    base = np.sin(0.5 * np.pi * g.coords[:, 0])
    return GridFunctionSeq(g, np.array([2.0**-i * base for i in range(1, N + 1)]), p)


def geometric_fseq_2d(K: int = 6, N: int = 20, p=2) -> GridFunctionSeq:
    g = Grid.uniform_2d(K, K)
    base = g.coords[:, 0] * g.coords[:, 1]
    return GridFunctionSeq(g, np.array([2.0**-i * base for i in range(1, N + 1)]), p)


def bump_train(N: int = 12, p=2) -> GridFunctionSeq:
    """Disjoint unit bumps: f_i is 1 at grid point 2i - 1 and 0 elsewhere."""
    g = _grid_1d(2 * N + 1)
    vals = np.zeros((N, g.size))
    for i in range(N):
        vals[i, 2 * i + 1] = 1.0
    return GridFunctionSeq(g, vals, p)


def jump_fseq(K: int = 21, N: int = 8, p=2) -> GridFunctionSeq:
    """f_1 is a step at s = 1/2; the rest decay geometrically and are smooth."""
    g = _grid_1d(K)
    s = g.coords[:, 0]
    comps = [(s > 0.5).astype(float)] + [2.0**-i * s for i in range(2, N + 1)]
    return GridFunctionSeq(g, np.array(comps), p)


def harmonic_linear_fseq(K: int = 11, N: int = 10, p=2) -> GridFunctionSeq:
    """f_i(s) = s / sqrt(i)."""
    g = _grid_1d(K)
    s = g.coords[:, 0]
    return GridFunctionSeq(g, np.array([s / np.sqrt(i) for i in range(1, N + 1)]), p)


def partial_sums_fseq(K: int = 21, N: int = 12, p="inf") -> GridFunctionSeq:
    """f_i = sum_{k <= i} s^k / 2^k, partial sums of a uniformly convergent series."""
    g = _grid_1d(K)
    s = g.coords[:, 0]
    terms = np.array([(s / 2.0) ** k for k in range(1, N + 1)])
    return GridFunctionSeq(g, np.cumsum(terms, axis=0), p)


def copies_fseq(K: int = 11, N: int = 6, p="inf") -> GridFunctionSeq:
    g = _grid_1d(K)
    s = g.coords[:, 0]
    return GridFunctionSeq(g, np.repeat((s * s)[None], N, axis=0), p)


def bump_train_inf(N: int = 12) -> GridFunctionSeq:
    return bump_train(N, "inf")


def cfun_fixtures() -> dict[str, GridFunctionSeq]:
    return {
        "constant": constant_fseq(),
        "powers": power_fseq(),
        "geometric": geometric_fseq(),
        "geometric-2d": geometric_fseq_2d(),
        "bump-train": bump_train(),
        "jump": jump_fseq(),
        "harmonic-linear": harmonic_linear_fseq(),
        "partial-sums": partial_sums_fseq(),
        "copies": copies_fseq(),
        "bump-train-inf": bump_train_inf(),
    }


def sequence_fixtures() -> dict[str, OperatorSeq]:
    return {
        "harmonic-basis": harmonic_basis(),
        "unit-basis": unit_basis(),
        "zero": zero_sequence(),
    }


def tuple_fixtures() -> dict[str, OperatorTuple]:
    return {
        "nilpotent": nilpotent_singleton(),
        "identity-pair": identity_pair(),
        "shift-pair": shift_pair(),
        "identity-zeros": identity_with_zeros(),
    }


def write_fixtures(directory) -> list[Path]:
    """Write every named instance as a JSON input file; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    groups = (("seq", sequence_fixtures()), ("tuple", tuple_fixtures()), ("cfun", cfun_fixtures()))
    for prefix, group in groups:
        for name, obj in group.items():
            path = directory / f"{prefix}-{name}.json"
            path.write_text(json.dumps(obj.to_json(), indent=1) + "\n", encoding="utf-8")
            written.append(path)
    return written
