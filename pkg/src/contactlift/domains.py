"""Model domains: membership, seeded sampling, exact invariant metrics.

Supported metric models are the disc, punctured disc, ball, polydisc, half
plane, and finite products; distances and infinitesimal metrics use the
normalization kappa_disc(0; 1) = 1, k_disc(0, t) = arctanh t, which pairs
with the chain-length formula (1/2) log((1+t)/(1-t)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from . import holoalg as ha
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    DomainError,
    UnsupportedDomain,
)
from .holoalg import Const, HoloMap, Var, as_cvec

DECK_WINDOW = 16  # deck translates scanned for the punctured disc distance
SAMPLE_MARGIN = 1e-6

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


class Domain:
    """Base class for model domains; n is the ambient complex dimension."""

    n: int

    def contains(self, p, margin: float = 0.0) -> bool:
        raise NotImplementedError

    def check_point(self, p) -> tuple:
        p = as_cvec(p)
        if len(p) != self.n:
            raise DimensionMismatch(
                f"point has {len(p)} coordinates, domain needs {self.n}"
            )
        return p

    def _bounding_box(self):
        """Per real coordinate (lo, hi) used by the Halton sampler."""
        raise NotImplementedError

    def sample(self, seed: int, count: int, margin: float = SAMPLE_MARGIN):
        """Deterministic low-discrepancy interior points with boundary margin."""
        box = self._bounding_box()
        dim = len(box)
        if dim > len(_PRIMES):
            raise UnsupportedDomain("sampling dimension too large")
        out = []
        index = 1 + abs(int(seed)) * 7919
        attempts = 0
        while len(out) < count:
            coords = [
                lo + _halton(index, _PRIMES[d]) * (hi - lo)
                for d, (lo, hi) in enumerate(box)
            ]
            index += 1
            attempts += 1
            if attempts > 100000 * max(1, count):
                raise DomainError("sampler rejection rate too high")
            p = tuple(
                complex(coords[2 * j], coords[2 * j + 1]) for j in range(self.n)
            )
            if self.contains(p, margin):
                out.append(p)
        return out


def _halton(index: int, base: int) -> float:
    f = 1.0
    r = 0.0
    i = index
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


@dataclass
class Disc(Domain):
    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise DomainError("disc radius must be positive")
        self.n = 1

    def contains(self, p, margin=0.0):
        (z,) = self.check_point(p)
        return abs(z) < self.r - margin

    def _bounding_box(self):
        return [(-self.r, self.r)] * 2


@dataclass
class PuncturedDisc(Domain):
    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise DomainError("disc radius must be positive")
        self.n = 1

    def contains(self, p, margin=0.0):
        (z,) = self.check_point(p)
        return margin < abs(z) < self.r - margin

    def _bounding_box(self):
        return [(-self.r, self.r)] * 2


@dataclass
class Ball(Domain):
    dim: int = 2
    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0 or self.dim < 1:
            raise DomainError("bad ball parameters")
        self.n = self.dim

    def contains(self, p, margin=0.0):
        p = self.check_point(p)
        return math.sqrt(sum(abs(z) ** 2 for z in p)) < self.r - margin

    def _bounding_box(self):
        return [(-self.r, self.r)] * (2 * self.n)


@dataclass
class Polydisc(Domain):
    radii: Tuple[float, ...] = (1.0, 1.0)

    def __post_init__(self):
        self.radii = tuple(float(r) for r in self.radii)
        if any(r <= 0 for r in self.radii):
            raise DomainError("polydisc radii must be positive")
        self.n = len(self.radii)

    def contains(self, p, margin=0.0):
        p = self.check_point(p)
        return all(abs(z) < r - margin for z, r in zip(p, self.radii))

    def _bounding_box(self):
        box = []
        for r in self.radii:
            box += [(-r, r)] * 2
        return box


@dataclass
class HalfPlane(Domain):
    """Right half plane Re z > 0."""

    def __post_init__(self):
        self.n = 1

    def contains(self, p, margin=0.0):
        (z,) = self.check_point(p)
        return z.real > margin

    def _bounding_box(self):
        return [(0.0, 2.0), (-2.0, 2.0)]


@dataclass
class Siegel(Domain):
    """Siegel model {Re(z_1) > |z_2|^2 + ... + |z_n|^2}."""

    dim: int = 2

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("Siegel dimension must be >= 1")
        self.n = self.dim

    def contains(self, p, margin=0.0):
        p = self.check_point(p)
        return p[0].real > sum(abs(z) ** 2 for z in p[1:]) + margin

    def _bounding_box(self):
        return [(0.0, 2.0), (-2.0, 2.0)] + [(-0.7, 0.7)] * (2 * (self.n - 1))


@dataclass
class Box(Domain):
    """Per-coordinate box |z_j - center_j| < radius_j."""

    center: Tuple[complex, ...]
    radii: Tuple[float, ...]

    def __post_init__(self):
        self.center = as_cvec(self.center)
        self.radii = tuple(float(r) for r in self.radii)
        if len(self.center) != len(self.radii) or any(r <= 0 for r in self.radii):
            raise DomainError("bad box parameters")
        self.n = len(self.center)

    def contains(self, p, margin=0.0):
        p = self.check_point(p)
        return all(
            abs(z - c) < r - margin
            for z, c, r in zip(p, self.center, self.radii)
        )

    def _bounding_box(self):
        box = []
        for c, r in zip(self.center, self.radii):
            box += [(c.real - r, c.real + r), (c.imag - r, c.imag + r)]
        return box


@dataclass
class Product(Domain):
    factors: Tuple[Domain, ...]

    def __post_init__(self):
        self.factors = tuple(self.factors)
        if not self.factors:
            raise DomainError("empty product")
        self.n = sum(f.n for f in self.factors)

    def split(self, p):
        p = self.check_point(p)
        out = []
        i = 0
        for f in self.factors:
            out.append(p[i:i + f.n])
            i += f.n
        return out

    def contains(self, p, margin=0.0):
        return all(
            f.contains(q, margin) for f, q in zip(self.factors, self.split(p))
        )

    def _bounding_box(self):
        box = []
        for f in self.factors:
            box += f._bounding_box()
        return box


def contains(D: Domain, p) -> bool:
    return D.contains(p)


# ---------------------------------------------------------------------------
# Invariant metric and distance


def model_kappa(D: Domain, p, v) -> float:
    """Infinitesimal invariant metric of a model domain at p on vector v."""
    p = D.check_point(p)
    v = as_cvec(v)
    if len(v) != D.n:
        raise DimensionMismatch("vector dimension mismatch")
    if not D.contains(p):
        raise DomainError("point outside domain", point=p)
    if isinstance(D, Disc):
        z, w = p[0] / D.r, v[0] / D.r
        return abs(w) / (1.0 - abs(z) ** 2)
    if isinstance(D, PuncturedDisc):
        z = p[0]
        return abs(v[0]) / (2.0 * abs(z) * math.log(D.r / abs(z)))
    if isinstance(D, Ball):
        zs = np.array(p) / D.r
        vs = np.array(v) / D.r
        nz2 = float(np.vdot(zs, zs).real)
        inner = complex(np.vdot(zs, vs))  # <v, p> conjugate-linear in p
        num = (1.0 - nz2) * float(np.vdot(vs, vs).real) + abs(inner) ** 2
        return math.sqrt(num) / (1.0 - nz2)
    if isinstance(D, HalfPlane):
        return abs(v[0]) / (2.0 * p[0].real)
    if isinstance(D, Polydisc):
        return max(
            model_kappa(Disc(r), (z,), (u,))
            for z, u, r in zip(p, v, D.radii)
        )
    if isinstance(D, Product):
        parts = D.split(p)
        vparts = D.split(v)
        return max(
            model_kappa(f, q, u)
            for f, q, u in zip(D.factors, parts, vparts)
        )
    raise UnsupportedDomain(f"no model metric for {type(D).__name__}")


def _disc_dist(z: complex, w: complex) -> float:
    t = abs((z - w) / (1.0 - w.conjugate() * z))
    return math.atanh(t)


def _half_plane_dist(u1: complex, u2: complex) -> float:
    t = abs((u1 - u2) / (u1 + u2.conjugate()))
    return math.atanh(min(t, 1.0 - 1e-16))


def model_dist(D: Domain, p, q) -> float:
    """Invariant distance between two points of a model domain."""
    p = D.check_point(p)
    q = D.check_point(q)
    for x in (p, q):
        if not D.contains(x):
            raise DomainError("point outside domain", point=x)
    if isinstance(D, Disc):
        return _disc_dist(p[0] / D.r, q[0] / D.r)
    if isinstance(D, Ball):
        zs = np.array(p) / D.r
        ws = np.array(q) / D.r
        nz2 = float(np.vdot(zs, zs).real)
        nw2 = float(np.vdot(ws, ws).real)
        inner = complex(np.vdot(ws, zs))  # <p, q>
        m2 = 1.0 - (1.0 - nz2) * (1.0 - nw2) / abs(1.0 - inner) ** 2
        m2 = min(max(m2, 0.0), 1.0 - 1e-16)
        return math.atanh(math.sqrt(m2))
    if isinstance(D, PuncturedDisc):
        u1 = -cmath.log(p[0] / D.r)
        u2 = -cmath.log(q[0] / D.r)
        return min(
            _half_plane_dist(u1, u2 + 2j * math.pi * k)
            for k in range(-DECK_WINDOW, DECK_WINDOW + 1)
        )
    if isinstance(D, HalfPlane):
        return _half_plane_dist(p[0], q[0])
    if isinstance(D, Polydisc):
        return max(
            _disc_dist(z / r, w / r) for z, w, r in zip(p, q, D.radii)
        )
    if isinstance(D, Product):
        return max(
            model_dist(f, x, y)
            for f, x, y in zip(D.factors, D.split(p), D.split(q))
        )
    raise UnsupportedDomain(f"no model distance for {type(D).__name__}")


# ---------------------------------------------------------------------------
# Extremal discs and geodesic chains


@dataclass(frozen=True)
class Chain:
    """Finite chain of analytic discs with parameters t_j in (0, 1)."""

    links: tuple  # of (HoloMap with m=1, float)
    start: tuple
    end: tuple

    def __post_init__(self):
        for _, t in self.links:
            if not 0.0 < t < 1.0:
                raise DegenerateInput(f"chain parameter {t} outside (0,1)")

    def length(self) -> float:
        return sum(math.atanh(t) for _, t in self.links)


def _ball_mobius(a: Sequence[complex]) -> HoloMap:
    """The involutive automorphism of the unit ball swapping 0 and a."""
    a = np.array(as_cvec(a))
    n = len(a)
    na2 = float(np.vdot(a, a).real)
    if na2 == 0:
        return HoloMap(n, tuple(ha.Neg(Var(i)) for i in range(n)))
    s = math.sqrt(1.0 - na2)
    # <z, a> as an expression, conjugate constants baked in
    inner = None
    for i in range(n):
        term = ha._mul(Const(complex(a[i]).conjugate()), Var(i))
        inner = term if inner is None else ha._add(inner, term)
    den = ha._sub(Const(1.0), inner)
    comps = []
    for i in range(n):
        # a_i - P_a(z)_i - s Q_a(z)_i
        proj_i = ha._mul(Const(a[i] / na2), inner)
        qz_i = ha._sub(Var(i), ha._mul(Const(a[i] / na2), inner))
        num = ha._sub(ha._sub(Const(a[i]), proj_i), ha._mul(Const(s), qz_i))
        comps.append(ha._div(num, den))
    return HoloMap(n, tuple(comps))


def _scale_map(F: HoloMap, factor: float) -> HoloMap:
    return HoloMap(F.m, tuple(ha._mul(Const(factor), c) for c in F.components))


def _precompose_scalar(F: HoloMap, expr) -> HoloMap:
    """F composed with a scalar reparameterization zeta -> expr(zeta)."""
    return HoloMap(1, tuple(ha.substitute(c, (expr,)) for c in F.components))


def extremal_disc(D: Domain, p, v):
    """Extremal disc phi with phi(0) = p, phi'(0) = lam * v, kappa = 1/|lam|.

    Returns (phi, lam) with phi a one-variable HoloMap into D.
    """
    p = D.check_point(p)
    v = as_cvec(v)
    if all(x == 0 for x in v):
        raise DegenerateInput("zero direction")
    if isinstance(D, Disc):
        z0 = p[0] / D.r
        u0 = v[0] / D.r
        mob = _ball_mobius((z0,))
        J = ha.jacobian(mob, (0.0,))
        e = (J[0, 0].conjugate() / abs(J[0, 0])) * (u0 / abs(u0))
        phi = _scale_map(
            _precompose_scalar(mob, ha._mul(Const(e), Var(0))), D.r
        )
        lam = (J[0, 0] * e * D.r) / v[0]
        return phi, lam
    if isinstance(D, Ball):
        zs = tuple(x / D.r for x in p)
        vs = tuple(x / D.r for x in v)
        mob = _ball_mobius(zs)
        J = ha.jacobian(mob, (0.0,) * D.n)
        pre = np.linalg.solve(J, np.array(vs))
        e = pre / np.linalg.norm(pre)
        lifted = J @ e  # = mu * vs with |e| = 1
        mu = None
        for li, vi in zip(lifted, vs):
            if vi != 0:
                mu = li / vi
                break
        comps = []
        zeta = Var(0)
        for c in mob.components:
            comps.append(ha.substitute(
                c, tuple(ha._mul(Const(complex(e[i])), zeta) for i in range(D.n))
            ))
        phi = _scale_map(HoloMap(1, tuple(comps)), D.r)
        return phi, mu
    if isinstance(D, PuncturedDisc):
        w0 = p[0]
        u0 = -cmath.log(w0 / D.r)  # right half plane
        # inverse Cayley through u0: u(zeta) = (u0 + zeta*e*conj(u0))/(1 - zeta*e)
        d = -v[0] / w0  # direction in u coordinates
        deriv_unit = u0 + u0.conjugate()  # u'(0) for e = 1, real positive
        e = (d / abs(d))
        zeta = Var(0)
        num = ha._add(Const(u0), ha._mul(Const(e * u0.conjugate()), zeta))
        den = ha._sub(Const(1.0), ha._mul(Const(e), zeta))
        u_expr = ha._div(num, den)
        w_expr = ha._mul(Const(D.r), ha.Exp(ha.Neg(u_expr)))
        phi = HoloMap(1, (w_expr,))
        lam = (-w0 * e * deriv_unit) / v[0]
        return phi, lam
    if isinstance(D, HalfPlane):
        u0 = p[0]
        d = v[0]
        e = d / abs(d)
        zeta = Var(0)
        num = ha._add(Const(u0), ha._mul(Const(e * u0.conjugate()), zeta))
        den = ha._sub(Const(1.0), ha._mul(Const(e), zeta))
        phi = HoloMap(1, (ha._div(num, den),))
        lam = (e * (u0 + u0.conjugate())) / v[0]
        return phi, lam
    if isinstance(D, (Polydisc, Product)):
        factors, parts, vparts = _product_parts(D, p, v)
        pieces = []
        lams = []
        for f, q, u in zip(factors, parts, vparts):
            if all(x == 0 for x in u):
                pieces.append(None)
                lams.append(None)
            else:
                phi_f, lam_f = extremal_disc(f, q, u)
                pieces.append(phi_f)
                lams.append(lam_f)
        kappa_star = max(1.0 / abs(l) for l in lams if l is not None)
        lam = 1.0 / kappa_star
        comps = []
        zeta = Var(0)
        for f, q, phi_f, lam_f in zip(factors, parts, pieces, lams):
            if phi_f is None:
                comps.extend(Const(x) for x in q)
            else:
                c = lam / lam_f
                scaled = _precompose_scalar(phi_f, ha._mul(Const(c), zeta))
                comps.extend(scaled.components)
        return HoloMap(1, tuple(comps)), lam
    raise UnsupportedDomain(f"no extremal discs for {type(D).__name__}")


def _product_parts(D: Domain, p, v):
    if isinstance(D, Polydisc):
        factors = tuple(Disc(r) for r in D.radii)
        parts = [(x,) for x in p]
        vparts = [(x,) for x in v]
    else:
        factors = D.factors
        parts = D.split(p)
        vparts = D.split(v)
    return factors, parts, vparts


def _reparam_expr(alpha: float):
    """zeta -> tanh(alpha * arctanh(zeta)), holomorphic on the disc."""
    zeta = Var(0)
    if abs(alpha - 1.0) < 1e-15:
        return zeta
    a = ha.Exp(ha._mul(Const(alpha), ha.Log(ha._add(Const(1.0), zeta))))
    b = ha.Exp(ha._mul(Const(alpha), ha.Log(ha._sub(Const(1.0), zeta))))
    return ha._div(ha._sub(a, b), ha._add(a, b))


def geodesic_chain(D: Domain, p, q) -> Chain:
    """Single-disc chain realizing model_dist(D, p, q)."""
    p = D.check_point(p)
    q = D.check_point(q)
    if p == q:
        raise DegenerateInput("coincident endpoints")
    if isinstance(D, (Disc, Ball, PuncturedDisc, HalfPlane)):
        d = model_dist(D, p, q)
        v = _initial_direction(D, p, q)
        phi, lam = extremal_disc(D, p, v)
        t = math.tanh(d)
        return Chain(((phi, t),), p, q)
    if isinstance(D, (Polydisc, Product)):
        factors, parts, qparts = _product_parts_pq(D, p, q)
        dists = [
            model_dist(f, a, b) if a != b else 0.0
            for f, a, b in zip(factors, parts, qparts)
        ]
        d_max = max(dists)
        if d_max == 0.0:
            raise DegenerateInput("coincident endpoints")
        comps = []
        for f, a, b, dj in zip(factors, parts, qparts, dists):
            if dj == 0.0:
                comps.extend(Const(x) for x in a)
                continue
            sub = geodesic_chain(f, a, b)
            (phi_f, _t_f), = sub.links
            rep = _reparam_expr(dj / d_max)
            comps.extend(_precompose_scalar(phi_f, rep).components)
        phi = HoloMap(1, tuple(comps))
        return Chain(((phi, math.tanh(d_max)),), p, q)
    raise UnsupportedDomain(f"no geodesic chains for {type(D).__name__}")


def _product_parts_pq(D, p, q):
    if isinstance(D, Polydisc):
        factors = tuple(Disc(r) for r in D.radii)
        return factors, [(x,) for x in p], [(x,) for x in q]
    return D.factors, D.split(p), D.split(q)


def _initial_direction(D: Domain, p, q):
    """A tangent vector at p pointing along the geodesic toward q."""
    if isinstance(D, Disc):
        z0, z1 = p[0] / D.r, q[0] / D.r
        b = (z1 - z0) / (1.0 - z0.conjugate() * z1)
        return (b,)
    if isinstance(D, Ball):
        mob = _ball_mobius(tuple(x / D.r for x in p))
        b = np.array(mob(tuple(x / D.r for x in q)))
        J = ha.jacobian(mob, (0.0,) * D.n)
        # push the straight direction at the origin back to p
        return tuple(J @ (b / np.linalg.norm(b)))
    if isinstance(D, PuncturedDisc):
        u0 = -cmath.log(p[0] / D.r)
        u1 = -cmath.log(q[0] / D.r)
        best = min(
            (2j * math.pi * k + u1 for k in range(-DECK_WINDOW, DECK_WINDOW + 1)),
            key=lambda u: _half_plane_dist(u0, u),
        )
        delta = (best - u0) / (best + u0.conjugate())
        # derivative of the inverse Cayley at 0 is e*(u0 + conj(u0)); w = r e^{-u}
        return (-p[0] * delta,)
    if isinstance(D, HalfPlane):
        u0, u1 = p[0], q[0]
        delta = (u1 - u0) / (u1 + u0.conjugate())
        return (delta,)
    raise UnsupportedDomain(type(D).__name__)
