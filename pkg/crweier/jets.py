# crweier/jets.py
"""
Forward-mode multivariate jets over three real coordinates.

A ``Jet`` of order K stores the Taylor coefficients ∂^α f(p) / α! for every
multi-index |α| <= K in a dense complex vector, ordered graded-lexicographically:

    (0,0,0), (1,0,0), (0,1,0), (0,0,1), (2,0,0), (1,1,0), (1,0,1), (0,2,0), ...

With this normalisation multiplication is a plain multi-index convolution.
Elementary functions compose their one-variable Taylor series with the
nilpotent part of the jet. Coordinates are real, so ``conj``/``real``/``imag``
act coefficient-wise.
"""
from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from crweier.errors import (
    BasePointMismatch,
    BranchViolation,
    DivisionNearZero,
    OrderExhausted,
    OrderMismatch,
)
from crweier.settings import DIV_EPSILON, MAX_ORDER

MultiIndex = Tuple[int, int, int]
Scalar = Union[int, float, complex]

DIM = 3


# ── multi-index tables ───────────────────────────────────────────────

@lru_cache(maxsize=None)
def multi_indices(order: int) -> Tuple[MultiIndex, ...]:
    """All α with |α| <= order, graded, lexicographically descending inside a degree."""
    out = []
    for degree in range(order + 1):
        for a1 in range(degree, -1, -1):
            for a2 in range(degree - a1, -1, -1):
                out.append((a1, a2, degree - a1 - a2))
    return tuple(out)


def coefficient_count(order: int) -> int:
    return math.comb(order + DIM, DIM)


@lru_cache(maxsize=None)
def _position(order: int) -> dict:
    return {alpha: k for k, alpha in enumerate(multi_indices(order))}


@lru_cache(maxsize=None)
def _convolution_gather(order: int) -> np.ndarray:
    """idx[t, j] = position of α_t - α_j, or N (a zero pad slot) when α_j does not divide α_t."""
    alphas = multi_indices(order)
    pos = _position(order)
    n = len(alphas)
    idx = np.full((n, n), n, dtype=np.intp)
    for t, at in enumerate(alphas):
        for j, aj in enumerate(alphas):
            diff = (at[0] - aj[0], at[1] - aj[1], at[2] - aj[2])
            if min(diff) >= 0:
                idx[t, j] = pos[diff]
    return idx


@lru_cache(maxsize=None)
def _partial_table(order: int, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    pos = _position(order)
    source, factor = [], []
    for beta in multi_indices(order - 1):
        shifted = list(beta)
        shifted[axis] += 1
        source.append(pos[tuple(shifted)])
        factor.append(shifted[axis])
    return np.asarray(source, dtype=np.intp), np.asarray(factor, dtype=float)


# ── the jet type ─────────────────────────────────────────────────────

class Jet:
    """Immutable truncated Taylor expansion of a complex function of (u1, u2, u3)."""

    __slots__ = ("order", "coeffs", "base_point")
    __array_priority__ = 1000  # keep numpy scalars from broadcasting over jets

    def __init__(self, order: int, coeffs, base_point: Sequence[float]):
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"jet order must lie in [0, {MAX_ORDER}], got {order}")
        arr = np.array(coeffs, dtype=complex)
        if arr.shape != (coefficient_count(order),):
            raise ValueError(f"order {order} needs {coefficient_count(order)} coefficients, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "base_point", tuple(float(x) for x in base_point))

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # constructors

    @classmethod
    def constant(cls, value: Scalar, order: int, base_point: Sequence[float]) -> "Jet":
        coeffs = np.zeros(coefficient_count(order), dtype=complex)
        coeffs[0] = value
        return cls(order, coeffs, base_point)

    @classmethod
    def variable(cls, axis: int, order: int, base_point: Sequence[float]) -> "Jet":
        """The coordinate function u_{axis+1} expanded at base_point."""
        coeffs = np.zeros(coefficient_count(order), dtype=complex)
        coeffs[0] = base_point[axis]
        if order >= 1:
            coeffs[1 + axis] = 1.0
        return cls(order, coeffs, base_point)

    def _like(self, coeffs: np.ndarray, order: int | None = None) -> "Jet":
        return Jet(self.order if order is None else order, coeffs, self.base_point)

    # inspection

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def coefficient(self, alpha: MultiIndex) -> complex:
        return complex(self.coeffs[_position(self.order)[tuple(alpha)]])

    def derivative(self, alpha: MultiIndex) -> complex:
        """Un-normalised partial derivative ∂^α f at the base point."""
        scale = math.prod(math.factorial(k) for k in alpha)
        return self.coefficient(alpha) * scale

    def gradient(self) -> np.ndarray:
        if self.order < 1:
            raise OrderExhausted("gradient")
        return np.array(self.coeffs[1:4])

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderMismatch(self.order, order)
        if order == self.order:
            return self
        return self._like(self.coeffs[: coefficient_count(order)], order)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # coefficient-wise maps (valid because the coordinates are real)

    def conj(self) -> "Jet":
        return self._like(np.conj(self.coeffs))

    @property
    def real(self) -> "Jet":
        return self._like(self.coeffs.real.astype(complex))

    @property
    def imag(self) -> "Jet":
        return self._like(self.coeffs.imag.astype(complex))

    # arithmetic; mixed orders restrict to the lower order

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.base_point != self.base_point:
                raise BasePointMismatch(self.base_point, other.base_point)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Jet.constant(complex(other), self.order, self.base_point)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = _align(self, other)
        return a._like(a.coeffs + b.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = _align(self, other)
        return a._like(a.coeffs - b.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._like(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self._like(self.coeffs * complex(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = _align(self, other)
        return a._like(_convolve(a.coeffs, b.coeffs, a.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            if abs(other) <= DIV_EPSILON:
                raise DivisionNearZero(complex(other), DIV_EPSILON)
            return self._like(self.coeffs / complex(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * reciprocal(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return reciprocal(self) ** (-exponent)
        result = Jet.constant(1.0, self.order, self.base_point)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, value={self.value:.6g}, at={self.base_point})"


def _align(a: Jet, b: Jet) -> Tuple[Jet, Jet]:
    k = min(a.order, b.order)
    return a.truncate(k), b.truncate(k)


def _convolve(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    padded = np.append(a, 0.0)
    return padded[_convolution_gather(order)] @ b


# ── public operations ────────────────────────────────────────────────

def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Strict binary arithmetic: both jets must share base point and order."""
    if a.base_point != b.base_point:
        raise BasePointMismatch(a.base_point, b.base_point)
    if a.order != b.order:
        raise OrderMismatch(a.order, b.order)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def _compose(a: Jet, series: Sequence[complex]) -> Jet:
    """Σ_k series[k] (a - a0)^k truncated at a.order, by Horner's rule."""
    h = a.coeffs.copy()
    h[0] = 0.0
    acc = np.zeros_like(h)
    acc[0] = series[a.order]
    for k in range(a.order - 1, -1, -1):
        acc = _convolve(acc, h, a.order)
        acc[0] += series[k]
    return a._like(acc)


def _check_branch(fn: str, z: complex) -> None:
    if abs(z) <= DIV_EPSILON or (z.real < 0.0 and abs(z.imag) <= DIV_EPSILON):
        raise BranchViolation(fn, z)


def reciprocal(a: Jet) -> Jet:
    z = a.value
    if abs(z) <= DIV_EPSILON:
        raise DivisionNearZero(z, DIV_EPSILON)
    return _compose(a, [(-1) ** k / z ** (k + 1) for k in range(a.order + 1)])


def _series(fn: str, z: complex, order: int) -> list:
    ks = range(order + 1)
    if fn == "exp":
        e = cmath.exp(z)
        return [e / math.factorial(k) for k in ks]
    if fn == "sin":
        cycle = (cmath.sin(z), cmath.cos(z), -cmath.sin(z), -cmath.cos(z))
        return [cycle[k % 4] / math.factorial(k) for k in ks]
    if fn == "cos":
        cycle = (cmath.cos(z), -cmath.sin(z), -cmath.cos(z), cmath.sin(z))
        return [cycle[k % 4] / math.factorial(k) for k in ks]
    if fn == "log":
        _check_branch(fn, z)
        return [cmath.log(z)] + [(-1) ** (k + 1) / (k * z ** k) for k in ks if k > 0]
    if fn == "sqrt":
        _check_branch(fn, z)
        root = cmath.sqrt(z)
        out, binom = [], 1.0
        for k in ks:
            out.append(root * binom / z ** k)
            binom *= (0.5 - k) / (k + 1)
        return out
    raise ValueError(f"unknown elementary function {fn!r}")


ELEMENTARY = ("exp", "sin", "cos", "sqrt", "log")


def jet_elementary(a: Jet, fn: str) -> Jet:
    """fn(a) for fn in exp, sin, cos, sqrt, log (principal branches, cut on the negative reals)."""
    return _compose(a, _series(fn, a.value, a.order))


def exp(a: Jet) -> Jet:
    return jet_elementary(a, "exp")


def sin(a: Jet) -> Jet:
    return jet_elementary(a, "sin")


def cos(a: Jet) -> Jet:
    return jet_elementary(a, "cos")


def sqrt(a: Jet) -> Jet:
    return jet_elementary(a, "sqrt")


def log(a: Jet) -> Jet:
    return jet_elementary(a, "log")


def partial(a: Jet, axis: int) -> Jet:
    """∂f/∂u_{axis+1}; the result has order K-1."""
    if a.order == 0:
        raise OrderExhausted()
    source, factor = _partial_table(a.order, axis)
    return a._like(a.coeffs[source] * factor, a.order - 1)


def apply_field(field: Sequence[Jet], f: Jet) -> Jet:
    """The directional derivative Σ V^i ∂_i f, of order f.order - 1."""
    if f.order == 0:
        raise OrderExhausted("vector field derivative")
    target = f.order - 1
    out = None
    for axis, component in enumerate(field):
        if component.order < target:
            raise OrderMismatch(component.order, target)
        term = component.truncate(target) * partial(f, axis)
        out = term if out is None else out + term
    return out


def lie_bracket(v: Sequence[Jet], w: Sequence[Jet]) -> Tuple[Jet, Jet, Jet]:
    """[V, W]^k = V(W^k) - W(V^k)."""
    return tuple(apply_field(v, w[k]) - apply_field(w, v[k]) for k in range(DIM))


def constant_like(value: Scalar, like: Jet) -> Jet:
    return Jet.constant(value, like.order, like.base_point)


def values(jets: Iterable[Jet]) -> np.ndarray:
    return np.array([j.value for j in jets], dtype=complex)
