"""Triangular and trapezoidal fuzzy numbers.

Arithmetic follows the usual endpoint rules for positive fuzzy numbers:
subtraction and division pair each endpoint with the opposite endpoint of the
right operand. The distance between two fuzzy numbers is the ``Dis_{p,q}``
family built on alpha-cut endpoints; ``dis_tri`` is its closed form for
triangular operands at ``p=2, q=1/2`` and ``dis_numeric`` integrates the
general definition by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AlphaOutOfRange, DivisionBySupportContainingZero, ParameterOutOfRange

OPS = ("add", "sub", "mul", "div")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval bounds out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class TriangularFuzzy:
    """Fuzzy number with piecewise-linear membership peaking at ``a2``.

    The constructor rejects unordered triplets; use :meth:`normalized` to
    repair an arbitrary triple by sorting it.
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.a1 <= self.a2 <= self.a3):
            raise ValueError(f"triangular components must satisfy a1 <= a2 <= a3, got {self.astuple()}")

    @classmethod
    def crisp(cls, value: float) -> TriangularFuzzy:
        return cls(value, value, value)

    @classmethod
    def normalized(cls, a1: float, a2: float, a3: float) -> TriangularFuzzy:
        return cls(*sorted((a1, a2, a3)))

    @classmethod
    def from_json(cls, data: Sequence[float]) -> TriangularFuzzy:
        if len(data) != 3:
            raise ValueError(f"triangular number needs 3 components, got {len(data)}")
        return cls(*data)

    def to_json(self) -> list[float]:
        return [self.a1, self.a2, self.a3]

    def astuple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)

    def membership(self, x: float) -> float:
        if x < self.a1 or x > self.a3:
            return 0.0
        if x == self.a2:
            return 1.0
        if x < self.a2:
            return (x - self.a1) / (self.a2 - self.a1)
        return (self.a3 - x) / (self.a3 - self.a2)

    def _binary(self, other, op, reflected=False):
        other = _as_tri(other)
        if other is NotImplemented:
            return NotImplemented
        return tri_arith(other, self, op) if reflected else tri_arith(self, other, op)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add", reflected=True)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return self._binary(other, "sub", reflected=True)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul", reflected=True)

    def __truediv__(self, other):
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        return self._binary(other, "div", reflected=True)


@dataclass(frozen=True)
class TrapezoidalFuzzy:
    a1: float
    a2: float
    a3: float
    a4: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.a1 <= self.a2 <= self.a3 <= self.a4):
            raise ValueError(f"trapezoidal components must be nondecreasing, got {self.astuple()}")

    @classmethod
    def normalized(cls, *components: float) -> TrapezoidalFuzzy:
        return cls(*sorted(components))

    @classmethod
    def from_json(cls, data: Sequence[float]) -> TrapezoidalFuzzy:
        if len(data) != 4:
            raise ValueError(f"trapezoidal number needs 4 components, got {len(data)}")
        return cls(*data)

    def to_json(self) -> list[float]:
        return list(self.astuple())

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)


def _as_tri(value) -> TriangularFuzzy:
    if isinstance(value, TriangularFuzzy):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return TriangularFuzzy.crisp(float(value))
    return NotImplemented


def _endpoint_arith(a: tuple, b: tuple, op: str) -> list[float]:
    # b reversed pairs a_k with b_{n-1-k}, as subtraction and division require
    if op == "add":
        return [x + y for x, y in zip(a, b)]
    if op == "sub":
        return [x - y for x, y in zip(a, reversed(b))]
    if op == "mul":
        return [x * y for x, y in zip(a, b)]
    if op == "div":
        if b[0] <= 0.0 <= b[-1]:
            raise DivisionBySupportContainingZero(f"divisor support [{b[0]}, {b[-1]}] contains zero")
        return [x / y for x, y in zip(a, reversed(b))]
    raise ValueError(f"unknown operation {op!r}; expected one of {OPS}")


def tri_arith(a: TriangularFuzzy, b: TriangularFuzzy, op: str) -> TriangularFuzzy:
    """Apply ``op`` (add, sub, mul, div) endpoint-wise.

    Products and quotients of mixed-sign operands can come out unordered; the
    result is sorted so it is always a valid triangular number.
    """
    return TriangularFuzzy.normalized(*_endpoint_arith(a.astuple(), b.astuple(), op))


def trap_arith(a: TrapezoidalFuzzy, b: TrapezoidalFuzzy, op: str) -> TrapezoidalFuzzy:
    return TrapezoidalFuzzy.normalized(*_endpoint_arith(a.astuple(), b.astuple(), op))


def alpha_cut(a: TriangularFuzzy, alpha: float) -> Interval:
    if not 0.0 < alpha <= 1.0:
        raise AlphaOutOfRange(f"alpha must lie in (0, 1], got {alpha}")
    return Interval(a.a1 + alpha * (a.a2 - a.a1), a.a3 - alpha * (a.a3 - a.a2))


def dis_numeric(a: TriangularFuzzy, b: TriangularFuzzy, p: float = 2.0, q: float = 0.5,
                steps: int = 10_000) -> float:
    """``Dis_{p,q}`` by composite trapezoid quadrature over ``steps`` alpha intervals.

    Independent of :func:`dis_tri`; kept as its numerical cross-check.
    """
    if not 1.0 < p < math.inf:
        raise ParameterOutOfRange(f"p must satisfy 1 < p < inf, got {p}")
    if not 0.0 < q < 1.0:
        raise ParameterOutOfRange(f"q must satisfy 0 < q < 1, got {q}")
    if steps < 2:
        raise ParameterOutOfRange(f"steps must be >= 2, got {steps}")
    alphas = np.linspace(0.0, 1.0, int(steps) + 1)
    lower = np.abs((a.a1 - b.a1) + alphas * ((a.a2 - a.a1) - (b.a2 - b.a1))) ** p
    upper = np.abs((a.a3 - b.a3) - alphas * ((a.a3 - a.a2) - (b.a3 - b.a2))) ** p
    h = 1.0 / steps
    lower_int = h * (lower.sum() - 0.5 * (lower[0] + lower[-1]))
    upper_int = h * (upper.sum() - 0.5 * (upper[0] + upper[-1]))
    return float(((1.0 - q) * lower_int + q * upper_int) ** (1.0 / p))


def dis_tri(a: TriangularFuzzy, b: TriangularFuzzy) -> float:
    """Closed-form ``Dis_{2,1/2}`` between triangular numbers."""
    d1, d2, d3 = b.a1 - a.a1, b.a2 - a.a2, b.a3 - a.a3
    total = d1 * d1 + d2 * d2 + d3 * d3 + d2 * d2 + d1 * d2 + d2 * d3
    # total is a positive semidefinite form; clamp rounding noise near zero
    return math.sqrt(max(total, 0.0) / 6.0)


def dis_tri_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise :func:`dis_tri` for ``(n, 3)`` arrays of triplets."""
    d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    total = (d * d).sum(axis=-1) + d[..., 1] ** 2 + d[..., 0] * d[..., 1] + d[..., 1] * d[..., 2]
    return np.sqrt(np.maximum(total, 0.0) / 6.0)


def defuzzify_centroid(a: TriangularFuzzy) -> float:
    return (a.a1 + a.a2 + a.a3) / 3.0
