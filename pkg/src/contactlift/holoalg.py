"""Holomorphic expression trees, exact differentiation, truncated jets, maps.

Expressions are immutable trees over complex constants and indexed variables.
All antiholomorphic data (conjugated parameters of maps, absolute values)
must be baked into constants at construction time; the trees themselves are
holomorphic in every variable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArityMismatch, DomainError

TWO_PI_I = 2j * math.pi

CVec = tuple  # sequence of complex coordinates


def as_cvec(p) -> tuple:
    return tuple(complex(x) for x in p)


class Expr:
    """Base class; structural equality via dataclass fields."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, _coerce(other))

    def __radd__(self, other):
        return Add(_coerce(other), self)

    def __sub__(self, other):
        return Sub(self, _coerce(other))

    def __rsub__(self, other):
        return Sub(_coerce(other), self)

    def __mul__(self, other):
        return Mul(self, _coerce(other))

    def __rmul__(self, other):
        return Mul(_coerce(other), self)

    def __truediv__(self, other):
        return Div(self, _coerce(other))

    def __rtruediv__(self, other):
        return Div(_coerce(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k: int):
        return PowInt(self, int(k))


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(complex(x))


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Var(Expr):
    index: int


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class PowInt(Expr):
    a: Expr
    k: int


@dataclass(frozen=True)
class Exp(Expr):
    a: Expr


@dataclass(frozen=True)
class Log(Expr):
    a: Expr
    branch: int = 0


@dataclass(frozen=True)
class Sqrt(Expr):
    a: Expr
    branch: int = 0


ZERO = Const(0.0)
ONE = Const(1.0)


def arity(expr: Expr) -> int:
    """Minimal number of variables the expression reads."""
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, Var):
        return expr.index + 1
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return max(arity(expr.a), arity(expr.b))
    return arity(expr.a)


def evaluate(expr: Expr, p: Sequence[complex]) -> complex:
    p = as_cvec(p)
    if arity(expr) > len(p):
        raise ArityMismatch(
            f"expression reads {arity(expr)} variables, point has {len(p)}"
        )
    return _eval(expr, p)


def _eval(expr: Expr, p: tuple) -> complex:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return p[expr.index]
    if isinstance(expr, Add):
        return _eval(expr.a, p) + _eval(expr.b, p)
    if isinstance(expr, Sub):
        return _eval(expr.a, p) - _eval(expr.b, p)
    if isinstance(expr, Neg):
        return -_eval(expr.a, p)
    if isinstance(expr, Mul):
        return _eval(expr.a, p) * _eval(expr.b, p)
    if isinstance(expr, Div):
        den = _eval(expr.b, p)
        if den == 0:
            raise DomainError("division by zero", node=expr, point=p)
        return _eval(expr.a, p) / den
    if isinstance(expr, PowInt):
        base = _eval(expr.a, p)
        if expr.k < 0 and base == 0:
            raise DomainError("zero raised to a negative power", node=expr, point=p)
        return base ** expr.k
    if isinstance(expr, Exp):
        return cmath.exp(_eval(expr.a, p))
    if isinstance(expr, Log):
        v = _eval(expr.a, p)
        if v == 0:
            raise DomainError("log of zero", node=expr, point=p)
        return cmath.log(v) + TWO_PI_I * expr.branch
    if isinstance(expr, Sqrt):
        v = _eval(expr.a, p)
        root = cmath.sqrt(v)
        return -root if expr.branch else root
    raise TypeError(f"unknown node {type(expr).__name__}")


def derive(expr: Expr, i: int) -> Expr:
    """Exact symbolic partial derivative with respect to variable i."""
    if isinstance(expr, Const):
        return ZERO
    if isinstance(expr, Var):
        return ONE if expr.index == i else ZERO
    if isinstance(expr, Add):
        return _add(derive(expr.a, i), derive(expr.b, i))
    if isinstance(expr, Sub):
        return _sub(derive(expr.a, i), derive(expr.b, i))
    if isinstance(expr, Neg):
        return _neg(derive(expr.a, i))
    if isinstance(expr, Mul):
        return _add(
            _mul(derive(expr.a, i), expr.b),
            _mul(expr.a, derive(expr.b, i)),
        )
    if isinstance(expr, Div):
        num = _sub(
            _mul(derive(expr.a, i), expr.b),
            _mul(expr.a, derive(expr.b, i)),
        )
        return _div(num, PowInt(expr.b, 2))
    if isinstance(expr, PowInt):
        if expr.k == 0:
            return ZERO
        return _mul(
            _mul(Const(expr.k), PowInt(expr.a, expr.k - 1)),
            derive(expr.a, i),
        )
    if isinstance(expr, Exp):
        return _mul(expr, derive(expr.a, i))
    if isinstance(expr, Log):
        return _div(derive(expr.a, i), expr.a)
    if isinstance(expr, Sqrt):
        return _div(derive(expr.a, i), _mul(Const(2.0), expr))
    raise TypeError(f"unknown node {type(expr).__name__}")


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0


def _is_one(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 1


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a, b):
    if _is_zero(b):
        return a
    if _is_zero(a):
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def _mul(a, b):
    if _is_zero(a) or _is_zero(b):
        return ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def _div(a, b):
    if _is_zero(a):
        return ZERO
    if _is_one(b):
        return a
    return Div(a, b)


def substitute(expr: Expr, replacements: Sequence[Expr]) -> Expr:
    """Replace Var(i) by replacements[i]; composes expressions and maps."""
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Var):
        if expr.index >= len(replacements):
            raise ArityMismatch(
                f"no replacement for variable {expr.index}"
            )
        return replacements[expr.index]
    if isinstance(expr, Add):
        return _add(substitute(expr.a, replacements), substitute(expr.b, replacements))
    if isinstance(expr, Sub):
        return _sub(substitute(expr.a, replacements), substitute(expr.b, replacements))
    if isinstance(expr, Neg):
        return _neg(substitute(expr.a, replacements))
    if isinstance(expr, Mul):
        return _mul(substitute(expr.a, replacements), substitute(expr.b, replacements))
    if isinstance(expr, Div):
        return _div(substitute(expr.a, replacements), substitute(expr.b, replacements))
    if isinstance(expr, PowInt):
        return PowInt(substitute(expr.a, replacements), expr.k)
    if isinstance(expr, Exp):
        return Exp(substitute(expr.a, replacements))
    if isinstance(expr, Log):
        return Log(substitute(expr.a, replacements), expr.branch)
    if isinstance(expr, Sqrt):
        return Sqrt(substitute(expr.a, replacements), expr.branch)
    raise TypeError(f"unknown node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# Truncated univariate jets


class Jet:
    """Taylor coefficients a_0..a_K of t -> f(p + t*u), truncated at order K."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = [complex(c) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order):
        return cls([value] + [0.0] * order)

    @classmethod
    def variable(cls, value, velocity, order):
        c = [complex(value)] + [0.0] * order
        if order >= 1:
            c[1] = complex(velocity)
        return cls(c)

    def __add__(self, other):
        return Jet([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return Jet([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Jet([-a for a in self.coeffs])

    def __mul__(self, other):
        K = self.order
        out = [0.0 + 0.0j] * (K + 1)
        for k in range(K + 1):
            s = 0.0 + 0.0j
            for j in range(k + 1):
                s += self.coeffs[j] * other.coeffs[k - j]
            out[k] = s
        return Jet(out)

    def __truediv__(self, other):
        if other.coeffs[0] == 0:
            raise DomainError("jet division by a jet vanishing at the base point")
        K = self.order
        out = [0.0 + 0.0j] * (K + 1)
        b0 = other.coeffs[0]
        for k in range(K + 1):
            s = self.coeffs[k]
            for j in range(k):
                s -= out[j] * other.coeffs[k - j]
            out[k] = s / b0
        return Jet(out)

    def pow_int(self, k: int):
        K = self.order
        if k == 0:
            return Jet.constant(1.0, K)
        if k < 0:
            return Jet.constant(1.0, K) / self.pow_int(-k)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def exp(self):
        K = self.order
        out = [0.0 + 0.0j] * (K + 1)
        out[0] = cmath.exp(self.coeffs[0])
        for k in range(1, K + 1):
            s = 0.0 + 0.0j
            for j in range(1, k + 1):
                s += j * self.coeffs[j] * out[k - j]
            out[k] = s / k
        return Jet(out)

    def log(self, branch=0):
        if self.coeffs[0] == 0:
            raise DomainError("jet log at zero")
        K = self.order
        a0 = self.coeffs[0]
        out = [0.0 + 0.0j] * (K + 1)
        out[0] = cmath.log(a0) + TWO_PI_I * branch
        for k in range(1, K + 1):
            s = k * self.coeffs[k]
            for j in range(1, k):
                s -= j * out[j] * self.coeffs[k - j]
            out[k] = s / (k * a0)
        return Jet(out)

    def sqrt(self, branch=0):
        if self.coeffs[0] == 0:
            raise DomainError("jet sqrt at a branch point")
        K = self.order
        out = [0.0 + 0.0j] * (K + 1)
        b0 = cmath.sqrt(self.coeffs[0])
        if branch:
            b0 = -b0
        out[0] = b0
        for k in range(1, K + 1):
            s = self.coeffs[k]
            for j in range(1, k):
                s -= out[j] * out[k - j]
            out[k] = s / (2 * b0)
        return Jet(out)


def jet_eval(expr: Expr, p: Sequence[complex], u: Sequence[complex], K: int) -> Jet:
    """Jet of t -> expr(p + t*u) at t = 0, truncated at order K >= 1."""
    if K < 1:
        raise ValueError("jet order must be >= 1")
    p = as_cvec(p)
    u = as_cvec(u)
    if len(p) != len(u):
        raise ArityMismatch("point and direction dimensions differ")
    seeds = [Jet.variable(pi, ui, K) for pi, ui in zip(p, u)]
    return _jet(expr, seeds, K)


def _jet(expr: Expr, seeds, K) -> Jet:
    if isinstance(expr, Const):
        return Jet.constant(expr.value, K)
    if isinstance(expr, Var):
        return seeds[expr.index]
    if isinstance(expr, Add):
        return _jet(expr.a, seeds, K) + _jet(expr.b, seeds, K)
    if isinstance(expr, Sub):
        return _jet(expr.a, seeds, K) - _jet(expr.b, seeds, K)
    if isinstance(expr, Neg):
        return -_jet(expr.a, seeds, K)
    if isinstance(expr, Mul):
        return _jet(expr.a, seeds, K) * _jet(expr.b, seeds, K)
    if isinstance(expr, Div):
        return _jet(expr.a, seeds, K) / _jet(expr.b, seeds, K)
    if isinstance(expr, PowInt):
        return _jet(expr.a, seeds, K).pow_int(expr.k)
    if isinstance(expr, Exp):
        return _jet(expr.a, seeds, K).exp()
    if isinstance(expr, Log):
        return _jet(expr.a, seeds, K).log(expr.branch)
    if isinstance(expr, Sqrt):
        return _jet(expr.a, seeds, K).sqrt(expr.branch)
    raise TypeError(f"unknown node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# Holomorphic maps


@dataclass(frozen=True)
class HoloMap:
    """A holomorphic map C^m -> C^n given by component expressions."""

    m: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            if arity(c) > self.m:
                raise ArityMismatch(
                    f"component reads {arity(c)} variables, map arity is {self.m}"
                )

    @property
    def n(self) -> int:
        return len(self.components)

    def __call__(self, p) -> tuple:
        p = as_cvec(p)
        if len(p) != self.m:
            raise ArityMismatch(f"expected {self.m} coordinates, got {len(p)}")
        return tuple(_eval(c, p) for c in self.components)

    def derivative(self, p, u) -> tuple:
        """Directional derivative dF_p(u)."""
        return tuple(jet_eval(c, p, u, 1).coeffs[1] for c in self.components)

    def compose(self, inner: "HoloMap") -> "HoloMap":
        """self o inner, by symbolic substitution."""
        if inner.n != self.m:
            raise ArityMismatch("composition arity mismatch")
        comps = tuple(substitute(c, inner.components) for c in self.components)
        return HoloMap(inner.m, comps)


def identity_map(n: int) -> HoloMap:
    return HoloMap(n, tuple(Var(i) for i in range(n)))


def jacobian(F: HoloMap, p) -> np.ndarray:
    """Matrix of partials, entry (r, c) = dF_r / dz_c at p."""
    p = as_cvec(p)
    J = np.empty((F.n, F.m), dtype=complex)
    for r, comp in enumerate(F.components):
        for c in range(F.m):
            J[r, c] = _eval(derive(comp, c), p)
    return J
