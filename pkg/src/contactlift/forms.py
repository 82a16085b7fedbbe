"""Pointwise exterior algebra, holomorphic differential forms, path integrals.

A ``FormValue`` is an alternating k-tensor at a point, stored as a map from
strictly increasing index tuples to complex coefficients.  A ``DiffForm``
carries expression coefficients and evaluates to form values.  Integration
uses adaptive composite 15-point Gauss-Legendre panels; integrands here are
analytic on compact parameter intervals, so convergence is superalgebraic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, Sequence, Tuple

import numpy as np

from . import holoalg as ha
from .errors import (
    DimensionMismatch,
    NotClosed,
    QuadratureNotConverged,
)
from .holoalg import Const, Expr, HoloMap, Var, as_cvec

IndexTuple = Tuple[int, ...]

DEFAULT_TOL = 1e-10
MAX_PANELS = 2 ** 14

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _merge_sign(I: IndexTuple, J: IndexTuple):
    """Sorted merge of two disjoint increasing tuples with shuffle sign."""
    merged = I + J
    order = sorted(range(len(merged)), key=lambda i: merged[i])
    sign = 1
    seq = list(order)
    # count inversions of the permutation sorting the concatenation
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return tuple(merged[i] for i in order), sign


class FormValue:
    """Alternating k-tensor at a point of C^n."""

    __slots__ = ("n", "k", "coeffs")

    def __init__(self, n: int, k: int, coeffs: Dict[IndexTuple, complex] = None):
        # degrees above n are allowed but carry no terms (identically zero)
        if k < 0:
            raise DimensionMismatch(f"degree {k} out of range for dimension {n}")
        self.n = n
        self.k = k
        self.coeffs = {}
        for I, c in (coeffs or {}).items():
            I = tuple(I)
            if len(I) != k or any(i >= n or i < 0 for i in I) or list(I) != sorted(set(I)):
                raise DimensionMismatch(f"bad index tuple {I} for degree {k} in C^{n}")
            c = complex(c)
            if c != 0:
                self.coeffs[I] = c

    def get(self, I) -> complex:
        return self.coeffs.get(tuple(I), 0.0 + 0.0j)

    def __add__(self, other: "FormValue") -> "FormValue":
        self._check_like(other)
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out.get(I, 0.0) + c
        return FormValue(self.n, self.k, out)

    def __sub__(self, other: "FormValue") -> "FormValue":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "FormValue":
        return FormValue(self.n, self.k, {I: c * v for I, v in self.coeffs.items()})

    def _check_like(self, other):
        if self.n != other.n or self.k != other.k:
            raise DimensionMismatch("form value shapes differ")

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def apply(self, vectors: Sequence[Sequence[complex]]) -> complex:
        """Evaluate on k tangent vectors."""
        if len(vectors) != self.k:
            raise DimensionMismatch(f"expected {self.k} vectors, got {len(vectors)}")
        if self.k == 0:
            return sum(self.coeffs.values(), 0.0 + 0.0j)
        vs = [as_cvec(v) for v in vectors]
        total = 0.0 + 0.0j
        for I, c in self.coeffs.items():
            if self.k == 1:
                total += c * vs[0][I[0]]
            else:
                M = np.array([[vs[col][row] for col in range(self.k)] for row in I])
                total += c * np.linalg.det(M)
        return total

    def __repr__(self):
        return f"FormValue(n={self.n}, k={self.k}, {self.coeffs})"


def wedge(a: FormValue, b: FormValue) -> FormValue:
    if a.n != b.n:
        raise DimensionMismatch("ambient dimensions differ")
    if a.k + b.k > a.n:
        raise DimensionMismatch("wedge degree exceeds ambient dimension")
    out: Dict[IndexTuple, complex] = {}
    for I, ca in a.coeffs.items():
        for J, cb in b.coeffs.items():
            if set(I) & set(J):
                continue
            K, sign = _merge_sign(I, J)
            out[K] = out.get(K, 0.0) + sign * ca * cb
    return FormValue(a.n, a.k + b.k, out)


def wedge_power(a: FormValue, m: int) -> FormValue:
    if m == 0:
        return FormValue(a.n, 0, {(): 1.0})
    result = a
    for _ in range(m - 1):
        result = wedge(result, a)
    return result


def interior(v: Sequence[complex], a: FormValue) -> FormValue:
    if a.k < 1:
        raise DimensionMismatch("interior product needs degree >= 1")
    v = as_cvec(v)
    if len(v) != a.n:
        raise DimensionMismatch("vector dimension mismatch")
    out: Dict[IndexTuple, complex] = {}
    for I, c in a.coeffs.items():
        for pos, idx in enumerate(I):
            J = I[:pos] + I[pos + 1:]
            out[J] = out.get(J, 0.0) + ((-1) ** pos) * v[idx] * c
    return FormValue(a.n, a.k - 1, out)


class DiffForm:
    """Degree-k holomorphic form on C^n with expression coefficients."""

    __slots__ = ("n", "k", "coeffs")

    def __init__(self, n: int, k: int, coeffs: Dict[IndexTuple, Expr]):
        # degrees above n are allowed but carry no terms (identically zero)
        if k < 0:
            raise DimensionMismatch(f"degree {k} out of range for dimension {n}")
        self.n = n
        self.k = k
        self.coeffs = {}
        for I, e in coeffs.items():
            I = tuple(I)
            if len(I) != k or any(i >= n or i < 0 for i in I) or list(I) != sorted(set(I)):
                raise DimensionMismatch(f"bad index tuple {I} for degree {k} in C^{n}")
            e = e if isinstance(e, Expr) else Const(complex(e))
            if not (isinstance(e, Const) and e.value == 0):
                self.coeffs[I] = e

    def at(self, p) -> FormValue:
        p = as_cvec(p)
        return FormValue(
            self.n, self.k,
            {I: ha.evaluate(e, p) for I, e in self.coeffs.items()},
        )

    def __add__(self, other: "DiffForm") -> "DiffForm":
        if self.n != other.n or self.k != other.k:
            raise DimensionMismatch("form shapes differ")
        out = dict(self.coeffs)
        for I, e in other.coeffs.items():
            out[I] = ha.Add(out[I], e) if I in out else e
        return DiffForm(self.n, self.k, out)

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "DiffForm":
        return DiffForm(
            self.n, self.k,
            {I: ha.Mul(Const(c), e) for I, e in self.coeffs.items()},
        )

    def promote(self, n_new: int) -> "DiffForm":
        """Reinterpret on a larger ambient space (appended coordinates)."""
        if n_new < self.n:
            raise DimensionMismatch("cannot shrink ambient dimension")
        return DiffForm(n_new, self.k, dict(self.coeffs))

    def __repr__(self):
        return f"DiffForm(n={self.n}, k={self.k}, {sorted(self.coeffs)})"


def zero_form(n: int, k: int) -> DiffForm:
    return DiffForm(n, k, {})


def exterior_derivative(a: DiffForm) -> DiffForm:
    out: Dict[IndexTuple, Expr] = {}
    for I, e in a.coeffs.items():
        for j in range(a.n):
            if j in I:
                continue
            de = ha.derive(e, j)
            if isinstance(de, Const) and de.value == 0:
                continue
            J, sign = _merge_sign((j,), I)
            term = de if sign == 1 else ha.Neg(de)
            out[J] = ha.Add(out[J], term) if J in out else term
    return DiffForm(a.n, a.k + 1, out)


def pullback(F: HoloMap, a: DiffForm, p) -> FormValue:
    """Pointwise pullback (F^* a)_p via the Jacobian of F at p."""
    p = as_cvec(p)
    J = ha.jacobian(F, p)
    target = a.at(F(p))
    out: Dict[IndexTuple, complex] = {}
    if a.k == 0:
        return FormValue(F.m, 0, dict(target.coeffs))
    for Jt in combinations(range(F.m), a.k):
        total = 0.0 + 0.0j
        for I, c in target.coeffs.items():
            minor = J[np.ix_(I, Jt)]
            total += c * np.linalg.det(minor)
        if total != 0:
            out[Jt] = total
    return FormValue(F.m, a.k, out)


def _sym_det(entries) -> Expr:
    """Symbolic determinant of a small k x k matrix of expressions."""
    k = len(entries)
    if k == 1:
        return entries[0][0]
    total = None
    for perm in permutations(range(k)):
        sign = 1
        for i in range(k):
            for j in range(i + 1, k):
                if perm[i] > perm[j]:
                    sign = -sign
        term = entries[0][perm[0]]
        for r in range(1, k):
            term = ha._mul(term, entries[r][perm[r]])
        term = term if sign == 1 else ha._neg(term)
        total = term if total is None else ha._add(total, term)
    return total


def pullback_form(F: HoloMap, a: DiffForm) -> DiffForm:
    """Symbolic pullback F^* a as a form on the source of F."""
    if a.n != F.n:
        raise DimensionMismatch("form lives on the wrong target space")
    if a.k == 0:
        return DiffForm(F.m, 0, {
            I: ha.substitute(e, F.components) for I, e in a.coeffs.items()
        })
    partials = [
        [ha.derive(comp, c) for c in range(F.m)] for comp in F.components
    ]
    out: Dict[IndexTuple, Expr] = {}
    for Jt in combinations(range(F.m), a.k):
        total = None
        for I, e in a.coeffs.items():
            minor = [[partials[r][c] for c in Jt] for r in I]
            det = _sym_det(minor)
            if isinstance(det, Const) and det.value == 0:
                continue
            comp = ha.substitute(e, F.components)
            term = ha._mul(comp, det)
            total = term if total is None else ha._add(total, term)
        if total is not None:
            out[Jt] = total
    return DiffForm(F.m, a.k, out)


# ---------------------------------------------------------------------------
# Paths and integration


@dataclass(frozen=True)
class Segment:
    """One smooth piece t in [0,1] -> C^n, components as expressions of Var(0)."""

    components: tuple

    @property
    def n(self) -> int:
        return len(self.components)

    def value(self, t: float) -> tuple:
        return tuple(ha.evaluate(c, (complex(t),)) for c in self.components)

    def velocity(self, t: float) -> tuple:
        return tuple(
            ha.jet_eval(c, (complex(t),), (1.0,), 1).coeffs[1]
            for c in self.components
        )


@dataclass(frozen=True)
class Path:
    """Piecewise path; segment endpoints must match to 1e-12."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise DimensionMismatch("path needs at least one segment")
        for s0, s1 in zip(segs, segs[1:]):
            gap = max(
                abs(a - b) for a, b in zip(s0.value(1.0), s1.value(0.0))
            )
            if gap > 1e-12:
                raise DimensionMismatch(f"segment joint gap {gap:.3e} exceeds 1e-12")

    @property
    def n(self) -> int:
        return self.segments[0].n

    def start(self) -> tuple:
        return self.segments[0].value(0.0)

    def end(self) -> tuple:
        return self.segments[-1].value(1.0)

    def reversed(self) -> "Path":
        rev = []
        one_minus_t = ha.Sub(Const(1.0), Var(0))
        for seg in reversed(self.segments):
            rev.append(Segment(tuple(
                ha.substitute(c, (one_minus_t,)) for c in seg.components
            )))
        return Path(tuple(rev))

    def concat(self, other: "Path") -> "Path":
        return Path(self.segments + other.segments)


def line_segment(a, b) -> Segment:
    """Straight segment from a to b."""
    a = as_cvec(a)
    b = as_cvec(b)
    t = Var(0)
    return Segment(tuple(
        ha._add(Const(ai), ha._mul(Const(bi - ai), t)) for ai, bi in zip(a, b)
    ))


def polyline(points) -> Path:
    pts = [as_cvec(p) for p in points]
    return Path(tuple(line_segment(p, q) for p, q in zip(pts, pts[1:])))


def circle_loop(n: int, coordinate: int, radius: float, center=None,
                base_point=None) -> Path:
    """Counterclockwise loop radius*e^{2*pi*i*t} in one coordinate.

    Other coordinates stay at the given base point (default 0).
    """
    if base_point is None:
        base_point = (0.0,) * n
    base_point = as_cvec(base_point)
    c0 = 0.0 if center is None else complex(center)
    t = Var(0)
    comps = []
    for j in range(n):
        if j == coordinate:
            comps.append(ha._add(
                Const(c0),
                ha._mul(Const(radius), ha.Exp(ha._mul(Const(2j * math.pi), t))),
            ))
        else:
            comps.append(Const(base_point[j]))
    return Path((Segment(tuple(comps)),))


def _integrand(a: DiffForm, seg: Segment):
    def f(t: float) -> complex:
        p = seg.value(t)
        v = seg.velocity(t)
        return a.at(p).apply([v])
    return f


def _gl15(f, t0: float, t1: float) -> complex:
    h = 0.5 * (t1 - t0)
    mid = 0.5 * (t0 + t1)
    total = 0.0 + 0.0j
    for x, w in zip(_GL_NODES, _GL_WEIGHTS):
        total += w * f(mid + h * x)
    return h * total


def adaptive_quadrature(f, t0: float = 0.0, t1: float = 1.0,
                        tol: float = DEFAULT_TOL) -> complex:
    """Adaptive composite Gauss-Legendre with bisection on the error estimate."""
    panels = [(t0, t1, _gl15(f, t0, t1), tol)]
    total = 0.0 + 0.0j
    used = 1
    while panels:
        a, b, whole, budget = panels.pop()
        m = 0.5 * (a + b)
        left = _gl15(f, a, m)
        right = _gl15(f, m, b)
        err = abs(whole - (left + right))
        if err <= budget or (b - a) < 1e-14:
            total += left + right
            continue
        used += 2
        if used > MAX_PANELS:
            raise QuadratureNotConverged(
                f"exceeded {MAX_PANELS} panels", estimate=total, error=err
            )
        panels.append((a, m, left, budget / 2))
        panels.append((m, b, right, budget / 2))
    return total


def path_integral(a: DiffForm, gamma: Path, tol: float = DEFAULT_TOL) -> complex:
    """Integral of a degree-1 form along a path."""
    if a.k != 1:
        raise DimensionMismatch("path integral needs a 1-form")
    if a.n != gamma.n:
        raise DimensionMismatch("form and path dimensions differ")
    per_seg = tol / max(1, len(gamma.segments))
    total = 0.0 + 0.0j
    for seg in gamma.segments:
        total += adaptive_quadrature(_integrand(a, seg), 0.0, 1.0, per_seg)
    return total


def check_closed(a: DiffForm, samples, tol: float) -> float:
    """Max residual of da over the samples; raises NotClosed above tol."""
    da = exterior_derivative(a)
    worst = 0.0
    for p in samples:
        worst = max(worst, da.at(p).max_abs())
    if worst > tol:
        raise NotClosed(f"exterior derivative residual {worst:.3e}", max_residual=worst)
    return worst


def primitive(a: DiffForm, center, p, tol: float = DEFAULT_TOL,
              closed_samples=None, closed_tol: float = 1e-8) -> complex:
    """h(p) with dh = a on a star-shaped domain, h(center) = 0.

    Closedness is checked numerically at the given samples (default: points of
    the integration segment) before integrating along the straight segment.
    """
    center = as_cvec(center)
    p = as_cvec(p)
    if closed_samples is None:
        closed_samples = [
            tuple(ci + s * (pi - ci) for ci, pi in zip(center, p))
            for s in (0.15, 0.5, 0.85)
        ]
    check_closed(a, closed_samples, closed_tol)
    if max(abs(pi - ci) for ci, pi in zip(center, p)) == 0:
        return 0.0 + 0.0j
    gamma = Path((line_segment(center, p),))
    return path_integral(a, gamma, tol)
