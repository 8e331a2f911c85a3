"""Finite-support complex sequences, p-norms and Hoelder duality.

Everything here is a pure function on immutable values. Sums go through
:func:`math.fsum` so that certificates comparing quantities against a
tolerance are not at the mercy of summation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .errors import ParseError, ZeroSequence

__all__ = [
    "Exponent",
    "INF",
    "ScalarSeq",
    "conjugate",
    "p_norm",
    "holder_pair",
    "holder_extremizer",
    "as_array",
]


class Exponent:
    """An exponent p in [1, inf].

    Finite values are stored as exact fractions so that conjugation is an
    involution without rounding (4 -> 4/3 -> 4). Infinity is its own case
    and is never represented by a float.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Union["Exponent", int, float, str, Fraction]):
        if isinstance(value, Exponent):
            self._value = value._value
            return
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("inf", "infinity", "oo", "∞"):
                self._value = None
                return
            try:
                value = Fraction(text)
            except ValueError:
                raise ValueError(f"not an exponent: {value!r}") from None
        if isinstance(value, float):
            if math.isinf(value) and value > 0:
                self._value = None
                return
            if math.isnan(value):
                raise ValueError("exponent is NaN")
        frac = Fraction(value)
        if frac < 1:
            raise ValueError(f"exponent must be >= 1, got {value}")
        self._value = frac

    @classmethod
    def infinity(cls) -> "Exponent":
        return cls("inf")

    @property
    def is_inf(self) -> bool:
        return self._value is None

    @property
    def fraction(self) -> Fraction:
        if self._value is None:
            raise ValueError("p = inf has no finite value")
        return self._value

    @property
    def value(self) -> float:
        """Finite value as a float. Raises for p = inf."""
        return float(self.fraction)

    def conjugate(self) -> "Exponent":
        if self._value is None:
            return Exponent(1)
        if self._value == 1:
            return Exponent.infinity()
        return Exponent(self._value / (self._value - 1))

    def __eq__(self, other):
        if not isinstance(other, Exponent):
            try:
                other = Exponent(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._value == other._value

    def __hash__(self):
        return hash(("Exponent", self._value))

    def __repr__(self):
        return f"Exponent({str(self)!r})"

    def __str__(self):
        if self._value is None:
            return "inf"
        if self._value.denominator == 1:
            return str(self._value.numerator)
        return f"{self._value.numerator}/{self._value.denominator}"

    def to_json(self):
        """``"inf"`` for infinity, a number when integral, else ``"a/b"``."""
        if self._value is None:
            return "inf"
        if self._value.denominator == 1:
            return self._value.numerator
        return str(self)


INF = Exponent.infinity()


def conjugate(p) -> Exponent:
    """Return q with 1/p + 1/q = 1 (1 <-> inf)."""
    return Exponent(p).conjugate()


@dataclass(frozen=True, eq=False)
class ScalarSeq:
    """A complex sequence with finitely many stored entries.

    Entries past ``support`` are implicitly zero.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def support(self) -> int:
        return int(self.entries.shape[0])

    def __len__(self):
        return self.support

    def __eq__(self, other):
        if not isinstance(other, ScalarSeq):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, self.support), dtype=np.complex128)
        out[: self.support] = self.entries
        return out

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.entries]

    @classmethod
    def from_json(cls, data) -> "ScalarSeq":
        return cls(complex_array_from_json(data))

    @classmethod
    def basis(cls, j: int, support: int | None = None) -> "ScalarSeq":
        """Unit vector e_j (1-based index)."""
        if j < 1:
            raise ValueError("basis index is 1-based")
        n = support if support is not None else j
        out = np.zeros(n, dtype=np.complex128)
        out[j - 1] = 1.0
        return cls(out)


def complex_array_from_json(data) -> np.ndarray:
    """Parse a (possibly nested) list of [re, im] pairs into a complex array."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        if arr.size == 0:
            return np.zeros(arr.shape[:-1] if arr.ndim > 1 else 0, dtype=np.complex128)
        raise ParseError("complex values must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def complex_array_to_json(arr) -> list:
    arr = np.asarray(arr, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def as_array(x) -> np.ndarray:
    if isinstance(x, ScalarSeq):
        return x.entries
    return np.asarray(x, dtype=np.complex128).reshape(-1)


def _abs_sum_pow(mod: np.ndarray, p: float) -> float:
    if p == 1.0:
        return math.fsum(mod.tolist())
    if p == 2.0:
        return math.fsum((mod * mod).tolist())
    return math.fsum((mod**p).tolist())


def p_norm(x: Union[ScalarSeq, Iterable[complex]], p) -> float:
    """(sum |x_i|^p)^(1/p), or max |x_i| for p = inf; 0 on empty support."""
    p = Exponent(p)
    mod = np.abs(as_array(x))
    if mod.size == 0:
        return 0.0
    top = float(mod.max())
    if top == 0.0 or p.is_inf:
        return top
    pv = p.value
    # scale by the largest entry to stay clear of overflow/underflow in |x|^p
    s = _abs_sum_pow(mod / top, pv)
    if pv == 1.0:
        return top * s
    if pv == 2.0:
        return top * math.sqrt(s)
    return top * s ** (1.0 / pv)


def holder_pair(x, y) -> complex:
    """sum_i x_i * y_i, zero-padding the shorter sequence. No conjugation."""
    xa, ya = as_array(x), as_array(y)
    n = min(xa.size, ya.size)
    prod = xa[:n] * ya[:n]
    return complex(math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist()))


def holder_extremizer(x, p) -> ScalarSeq:
    """Unit vector in the conjugate norm that attains the Hoelder bound.

    Returns y with ||y||_q = 1 and holder_pair(x, y) = ||x||_p (real,
    positive). Finite p uses y_i = conj(x_i) |x_i|^(p-2) / ||x||_p^(p-1);
    p = 1 uses the phase vector; p = inf puts a unimodular weight on the
    first entry of maximal modulus. Zero entries get y_i = 0.
    """
    p = Exponent(p)
    xa = as_array(x)
    mod = np.abs(xa)
    if mod.size == 0 or not np.any(mod > 0):
        raise ZeroSequence("extremizer of the zero sequence is undefined")
    nz = mod > 0
    y = np.zeros_like(xa)
    # exp(-i arg x) rather than conj(x) / |x|: stays finite for subnormal entries
    if p.is_inf:
        k = int(np.argmax(mod))
        y[k] = np.exp(-1j * np.angle(xa[k]))
        return ScalarSeq(y)
    phase = np.zeros_like(xa)
    phase[nz] = np.exp(-1j * np.angle(xa[nz]))
    if p == 1:
        return ScalarSeq(phase)
    pv = p.value
    u = mod / mod.max()
    norm_u = p_norm(u, p)
    weight = np.zeros_like(u)
    weight[nz] = (u[nz] / norm_u) ** (pv - 1.0)
    return ScalarSeq(phase * weight)
