"""Trivialized contact lifts over symplectic bases.

A lift carries a base (S, omega), a potential nu with d(nu) = omega, and a
closed twist form; the total space is S x C with fiber coordinate y appended
last and contact form xi = dy - pi*(nu + twist).  Inequivalent lifts over the
same base differ exactly by the periods of their twist difference, so every
classification question here reduces to loop integrals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import domains as dom
from . import forms as fm
from . import holoalg as ha
from .contact import ContactData, SymplecticData, contact_check
from .domains import (
    Ball,
    Box,
    Disc,
    Domain,
    HalfPlane,
    Polydisc,
    Product,
    PuncturedDisc,
    Siegel,
)
from .errors import (
    BaseMismatch,
    DegeneratePullback,
    DimensionMismatch,
    ImageEscapesDomain,
    NotAPotential,
    NotClosed,
    NotScaleSymplectic,
    PotentialMismatch,
    TwistNotClosed,
)
from .forms import DiffForm, Path, Segment, adaptive_quadrature, path_integral
from .holoalg import Const, Expr, HoloMap, Var, as_cvec

DEFAULT_TOL = 1e-9
STRUCT_TOL = 1e-8  # closedness / potential residual budget at samples


class Lift:
    """xi = dy - pi*(nu + twist) on base x C."""

    def __init__(self, base: SymplecticData, nu: DiffForm, twist: DiffForm):
        if nu.n != base.omega.n or nu.k != 1:
            raise DimensionMismatch("potential must be a 1-form on the base")
        if twist.n != base.omega.n or twist.k != 1:
            raise DimensionMismatch("twist must be a 1-form on the base")
        self.base = base
        self.nu = nu
        self.twist = twist

    @property
    def n_base(self) -> int:
        return self.base.omega.n

    @property
    def n_total(self) -> int:
        return self.n_base + 1

    def potential(self) -> DiffForm:
        """nu + twist, the full connection form on the base."""
        return self.nu + self.twist

    def xi(self) -> DiffForm:
        n = self.n_total
        coeffs: Dict[tuple, Expr] = {(n - 1,): Const(1.0)}
        for (j,), e in self.potential().coeffs.items():
            coeffs[(j,)] = ha._neg(e)
        return DiffForm(n, 1, coeffs)

    def contact_data(self) -> ContactData:
        domain = None
        if self.base.domain is not None:
            domain = Product((self.base.domain, Disc(1.0)))
        return ContactData(self.xi(), self.base.N, domain)

    def reeb(self) -> tuple:
        return (0.0,) * self.n_base + (1.0,)

    def total_samples(self, seed: int = 0, count: int = 100,
                      y_radius: float = 1.0):
        """Seeded samples of base x fiber-disc."""
        if self.base.domain is None:
            raise DimensionMismatch("lift has no declared base domain")
        base_pts = self.base.domain.sample(seed, count)
        y_pts = Disc(y_radius).sample(seed + 1, count)
        return [p + y for p, y in zip(base_pts, y_pts)]


def make_lift(S: SymplecticData, nu: DiffForm, twist: Optional[DiffForm] = None,
              samples=None, seed: int = 0, count: int = 100,
              tol: float = STRUCT_TOL) -> Lift:
    """Build a lift, certifying d(nu) = omega and d(twist) = 0 at samples."""
    if twist is None:
        twist = fm.zero_form(S.omega.n, 1)
    if samples is None:
        if S.domain is None:
            raise DimensionMismatch("need explicit samples or a base domain")
        samples = S.domain.sample(seed, count)
    dnu = fm.exterior_derivative(nu)
    worst = max((dnu.at(p) - S.omega.at(p)).max_abs() for p in samples)
    if worst > tol:
        raise PotentialMismatch(
            f"d(nu) - omega residual {worst:.3e}", max_residual=worst
        )
    dtw = fm.exterior_derivative(twist)
    worst = max(dtw.at(p).max_abs() for p in samples)
    if worst > tol:
        raise TwistNotClosed(f"d(twist) residual {worst:.3e}", max_residual=worst)
    return Lift(S, nu, twist)


def standard_lift(N: int = 1, domain: Optional[Domain] = None) -> Lift:
    """omega = sum dz_j ^ dw_j, nu = sum z_j dw_j, no twist."""
    if domain is None:
        domain = Ball(2 * N, 1.0)
    omega = DiffForm(2 * N, 2, {(j, N + j): Const(1.0) for j in range(N)})
    nu = DiffForm(2 * N, 1, {(N + j,): Var(j) for j in range(N)})
    return Lift(SymplecticData(omega, N, domain), nu, fm.zero_form(2 * N, 1))


def twisted_lift(c: complex, r_z: float = 1.0, r_w: float = 1.0) -> Lift:
    """Lift over disc x punctured disc with twist -(c/w) dw.

    Contact form dy - (z - c/w) dw; the w-circle period of the twist
    distinguishes different values of c.
    """
    base = Product((Disc(r_z), PuncturedDisc(r_w)))
    omega = DiffForm(2, 2, {(0, 1): Const(1.0)})
    nu = DiffForm(2, 1, {(1,): Var(0)})
    twist = DiffForm(2, 1, {(1,): ha._neg(ha._div(Const(complex(c)), Var(1)))})
    return Lift(SymplecticData(omega, 1, base), nu, twist)


def w_circle(radius: float = 0.5, base_point=(0.0, 0.5)) -> Path:
    """Counterclockwise circle in the second base coordinate."""
    return fm.circle_loop(2, 1, radius, base_point=base_point)


@dataclass
class LiftReport:
    curvature_residual: float
    reeb_pairing_residual: float
    reeb_contraction_residual: float
    min_volume: float
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return (
            self.curvature_residual < self.tol
            and self.reeb_pairing_residual < self.tol
            and self.reeb_contraction_residual < self.tol
            and self.min_volume > self.tol
        )


def validate_lift(L: Lift, samples=None, seed: int = 0, count: int = 100,
                  tol: float = DEFAULT_TOL) -> LiftReport:
    """Check d(xi) = -pi*omega, xi(reeb) = 1, reeb-contraction, contact_check."""
    if samples is None:
        samples = L.total_samples(seed, count)
    xi = L.xi()
    dxi = fm.exterior_derivative(xi)
    pi_omega = L.base.omega.promote(L.n_total)
    reeb = L.reeb()
    curv = 0.0
    pair = 0.0
    contract = 0.0
    for p in samples:
        dxi_p = dxi.at(p)
        curv = max(curv, (dxi_p + pi_omega.at(p)).max_abs())
        pair = max(pair, abs(xi.at(p).apply([reeb]) - 1.0))
        contract = max(contract, fm.interior(reeb, dxi_p).max_abs())
    vol = contact_check(ContactData(xi, L.base.N), samples, tol)
    return LiftReport(curv, pair, contract, vol.min_volume, tol)


# ---------------------------------------------------------------------------
# Disc and chain lifting


class LiftedDisc:
    """A Legendrian disc (phi(zeta), y(zeta)) with y given by radial integrals.

    y(zeta) = y0 + integral over [0, zeta] of (nu + twist) pulled back along
    phi; the pullback coefficient is precomputed symbolically, but the
    Legendrian residual is certified against an independent jet quadrature.
    """

    def __init__(self, L: Lift, phi: HoloMap, y0: complex,
                 tol: float = 1e-11):
        if phi.m != 1 or phi.n != L.n_base:
            raise DimensionMismatch("disc must map one variable into the base")
        self.lift = L
        self.phi = phi
        self.y0 = complex(y0)
        self.tol = tol
        pulled = fm.pullback_form(phi, L.potential())
        self._c = pulled.coeffs.get((0,), Const(0.0))

    def y(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if zeta == 0:
            return self.y0
        c = self._c
        integral = adaptive_quadrature(
            lambda t: zeta * ha.evaluate(c, (t * zeta,)), 0.0, 1.0, self.tol
        )
        return self.y0 + integral

    def y_prime(self, zeta: complex) -> complex:
        """d y / d zeta via quadrature of the differentiated radial integral."""
        zeta = complex(zeta)
        c = self._c

        def integrand(t: float) -> complex:
            base = ha.jet_eval(c, (t * zeta,), (t,), 1)
            g = ha.Jet([zeta, 1.0]) * base
            return g.coeffs[1]

        return adaptive_quadrature(integrand, 0.0, 1.0, self.tol)

    def __call__(self, zeta: complex) -> tuple:
        zeta = complex(zeta)
        return self.phi((zeta,)) + (self.y(zeta),)

    def velocity(self, zeta: complex) -> tuple:
        zeta = complex(zeta)
        base_v = self.phi.derivative((zeta,), (1.0,))
        return base_v + (ha.evaluate(self._c, (zeta,)),)

    def legendrian_residual(self, params) -> float:
        """Max |y'(zeta) - (nu+twist)(phi'(zeta))| over the parameters.

        y' comes from quadrature; the right side evaluates the connection
        form pointwise via the Jacobian, an independent code path.
        """
        eta = self.lift.potential()
        worst = 0.0
        for zeta in params:
            zeta = complex(zeta)
            base_v = self.phi.derivative((zeta,), (1.0,))
            target = eta.at(self.phi((zeta,))).apply([base_v])
            worst = max(worst, abs(self.y_prime(zeta) - target))
        return worst


def lift_disc(L: Lift, phi: HoloMap, y0: complex = 0.0,
              tol: float = 1e-11, check_image: bool = True,
              seed: int = 0) -> LiftedDisc:
    """The unique Legendrian lift of a base disc through (phi(0), y0)."""
    if check_image and L.base.domain is not None:
        for (zeta,) in Disc(1.0).sample(seed, 32):
            q = phi((zeta,))
            if not L.base.domain.contains(q):
                raise ImageEscapesDomain(f"disc leaves the base at zeta={zeta}")
    return LiftedDisc(L, phi, y0, tol)


@dataclass
class VChain:
    """A lifted chain: Legendrian discs with matched fiber values."""

    discs: tuple  # of LiftedDisc
    params: tuple  # of float in (0, 1)
    start: tuple
    end: tuple

    def length(self) -> float:
        return sum(math.atanh(t) for t in self.params)

    def legendrian_residual(self, count: int = 16, seed: int = 0) -> float:
        pts = [p[0] for p in Disc(1.0).sample(seed, count)]
        return max(d.legendrian_residual(pts) for d in self.discs)


def lift_chain(L: Lift, C: dom.Chain, start_y: complex = 0.0,
               tol: float = 1e-11) -> VChain:
    """Lift each disc from the fiber value where the previous one ended."""
    y = complex(start_y)
    discs = []
    params = []
    for phi, t in C.links:
        ld = lift_disc(L, phi, y, tol, check_image=False)
        discs.append(ld)
        params.append(t)
        y = ld.y(t)
    end = C.links[-1][0]((params[-1],)) + (y,)
    return VChain(tuple(discs), tuple(params),
                  tuple(C.start) + (complex(start_y),), end)


# ---------------------------------------------------------------------------
# Scale-symplectic maps


def scale_factor(F: HoloMap, S: SymplecticData, samples=None,
                 seed: int = 0, count: int = 100,
                 tol: float = DEFAULT_TOL) -> complex:
    """lambda with F*omega = lambda omega, fitted at the best-conditioned sample."""
    if samples is None:
        if S.domain is None:
            raise DimensionMismatch("need explicit samples or a domain")
        samples = S.domain.sample(seed, count)
    samples = [as_cvec(p) for p in samples]
    # fit lambda where |omega| is largest
    best_p = max(samples, key=lambda p: S.omega.at(p).max_abs())
    ref = S.omega.at(best_p)
    idx = max(ref.coeffs, key=lambda I: abs(ref.coeffs[I]))
    lam = fm.pullback(F, S.omega, best_p).get(idx) / ref.get(idx)
    worst = 0.0
    for p in samples:
        diff = fm.pullback(F, S.omega, p) - S.omega.at(p).scale(lam)
        worst = max(worst, diff.max_abs())
    if worst > tol * (1.0 + abs(lam)):
        raise NotScaleSymplectic(
            f"residual {worst:.3e} against lambda = {lam}", max_residual=worst
        )
    return lam


# ---------------------------------------------------------------------------
# Periods, equivalence, monodromy


@dataclass(frozen=True)
class PeriodVector:
    loops: tuple
    values: tuple

    def max_abs(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)


@dataclass(frozen=True)
class Obstruction:
    periods: PeriodVector


def _base_compatible(L1: Lift, L2: Lift, samples, tol: float = STRUCT_TOL):
    if L1.n_base != L2.n_base:
        raise BaseMismatch("base dimensions differ")
    worst = max(
        (L1.base.omega.at(p) - L2.base.omega.at(p)).max_abs() for p in samples
    )
    if worst > tol:
        raise BaseMismatch(f"base symplectic forms differ by {worst:.3e}")


def _default_base_samples(L: Lift, seed: int = 0, count: int = 40):
    if L.base.domain is None:
        raise DimensionMismatch("lift has no declared base domain")
    return L.base.domain.sample(seed, count)


def theta_class(L1: Lift, L2: Lift, loops: Sequence[Path],
                samples=None, tol: float = DEFAULT_TOL) -> PeriodVector:
    """Periods over the loops of (nu1 + twist1) - (nu2 + twist2)."""
    if samples is None:
        samples = _default_base_samples(L1)
    _base_compatible(L1, L2, samples)
    delta = L1.potential() - L2.potential()
    fm.check_closed(delta, samples, STRUCT_TOL)
    values = tuple(path_integral(delta, loop, tol) for loop in loops)
    return PeriodVector(tuple(loops), values)


def canonical_basepoint(D: Domain) -> tuple:
    """A fixed interior point per domain; products concatenate."""
    if isinstance(D, (Disc, Ball, Polydisc)):
        return (0.0,) * D.n
    if isinstance(D, PuncturedDisc):
        return (D.r / 2.0,)
    if isinstance(D, HalfPlane):
        return (1.0,)
    if isinstance(D, Siegel):
        return (1.0,) + (0.0,) * (D.n - 1)
    if isinstance(D, Box):
        return D.center
    if isinstance(D, Product):
        out = ()
        for f in D.factors:
            out += canonical_basepoint(f)
        return out
    raise DimensionMismatch(f"no basepoint rule for {type(D).__name__}")


def _factor_slices(D: Domain):
    if isinstance(D, Product):
        out = []
        i = 0
        for f in D.factors:
            out.append((f, i, i + f.n))
            i += f.n
        return out
    return [(D, 0, D.n)]


def _factor_segment_exprs(factor: Domain, a, b):
    """Movement a -> b inside one factor as expressions of Var(0)."""
    t = Var(0)
    if isinstance(factor, PuncturedDisc):
        la = cmath.log(complex(a[0]))
        lb = cmath.log(complex(b[0]))
        # zero-winding logarithmic spiral between principal logarithms
        return (ha.Exp(ha._add(Const(la), ha._mul(Const(lb - la), t))),)
    return tuple(
        ha._add(Const(complex(ai)), ha._mul(Const(complex(bi) - complex(ai)), t))
        for ai, bi in zip(a, b)
    )


def canonical_path(D: Domain, start, end) -> Optional[Path]:
    """Factor-by-factor path, radial in star-shaped factors, spiral in
    punctured ones; returns None for coincident endpoints."""
    start = as_cvec(start)
    end = as_cvec(end)
    segments = []
    reached = list(start)
    for factor, lo, hi in _factor_slices(D):
        a, b = tuple(reached[lo:hi]), end[lo:hi]
        if a == b:
            continue
        moving = _factor_segment_exprs(factor, a, b)
        comps = (
            tuple(Const(x) for x in reached[:lo])
            + moving
            + tuple(Const(x) for x in reached[hi:])
        )
        segments.append(Segment(comps))
        reached[lo:hi] = list(b)
    if not segments:
        return None
    return Path(tuple(segments))


def section_value(delta: DiffForm, D: Domain, basepoint, p,
                  tol: float = DEFAULT_TOL) -> complex:
    """h(p) = integral of delta along the canonical path from the basepoint."""
    gamma = canonical_path(D, basepoint, p)
    if gamma is None:
        return 0.0 + 0.0j
    return path_integral(delta, gamma, tol)


class EquivalenceMap:
    """Phi(p, y) = (p, y + h(p)) pulling xi2 back to xi1."""

    def __init__(self, L1: Lift, L2: Lift, tol: float = DEFAULT_TOL):
        self.L1 = L1
        self.L2 = L2
        self.delta = L2.potential() - L1.potential()  # = dh
        self.basepoint = canonical_basepoint(L1.base.domain)
        self.tol = tol

    def h(self, p) -> complex:
        return section_value(
            self.delta, self.L1.base.domain, self.basepoint, p, self.tol
        )

    def apply(self, point) -> tuple:
        point = as_cvec(point)
        return point[:-1] + (point[-1] + self.h(point[:-1]),)

    def residual(self, samples) -> float:
        """Max |Phi* xi2 - xi1| over total-space samples, assembled from the
        numeric differential of Phi."""
        xi1 = self.L1.xi()
        xi2 = self.L2.xi()
        n = self.L1.n_total
        worst = 0.0
        for q in samples:
            q = as_cvec(q)
            base = q[:-1]
            dh = self.delta.at(base)
            target = xi2.at(self.apply(q))
            for j in range(n):
                v = [0.0] * n
                v[j] = 1.0
                if j < n - 1:
                    v[n - 1] = dh.get((j,))
                pulled = target.apply([v])
                direct = xi1.at(q).apply(
                    [[1.0 if i == j else 0.0 for i in range(n)]]
                )
                worst = max(worst, abs(pulled - direct))
        return worst


def are_equivalent(L1: Lift, L2: Lift, loops: Sequence[Path],
                   tol: float = DEFAULT_TOL, samples=None):
    """EquivalenceMap when every theta period vanishes, else the obstruction."""
    pv = theta_class(L1, L2, loops, samples=samples, tol=min(tol, DEFAULT_TOL))
    if pv.max_abs() >= tol:
        return Obstruction(pv)
    return EquivalenceMap(L1, L2, tol)


def monodromy(L: Lift, nu_ref: DiffForm, loop: Path,
              samples=None, tol: float = DEFAULT_TOL) -> complex:
    """Fiber displacement of the parallel lift: loop period of
    (nu + twist) - nu_ref."""
    if samples is None:
        samples = _default_base_samples(L)
    d_ref = fm.exterior_derivative(nu_ref)
    worst = max((d_ref.at(p) - L.base.omega.at(p)).max_abs() for p in samples)
    if worst > STRUCT_TOL:
        raise NotAPotential(
            f"d(nu_ref) - omega residual {worst:.3e}", max_residual=worst
        )
    return path_integral(L.potential() - nu_ref, loop, tol)


@dataclass
class FitResult:
    fit: bool
    periods: PeriodVector
    _lift: Optional[Lift] = field(default=None, repr=False)
    _nu_ref: Optional[DiffForm] = field(default=None, repr=False)

    def section(self, p) -> complex:
        """h with xi = d(y + h) - pi* nu_ref, normalized at the basepoint."""
        if not self.fit:
            raise NotAPotential("monodromy does not vanish; no global section")
        delta = self._nu_ref - self._lift.potential()
        D = self._lift.base.domain
        return section_value(delta, D, canonical_basepoint(D), p)


def is_fit(L: Lift, nu_ref: DiffForm, loops: Sequence[Path],
           tol: float = DEFAULT_TOL, samples=None) -> FitResult:
    values = tuple(monodromy(L, nu_ref, loop, samples, tol) for loop in loops)
    pv = PeriodVector(tuple(loops), values)
    return FitResult(pv.max_abs() < tol, pv, L, nu_ref)


# ---------------------------------------------------------------------------
# Automorphism lifting


class BundleMap:
    """F~(p, y) = (F(p), lambda y + h(p)) covering a scale-symplectic F."""

    def __init__(self, L: Lift, F: HoloMap, lam: complex, rho: DiffForm,
                 tol: float = DEFAULT_TOL):
        self.lift = L
        self.F = F
        self.lam = complex(lam)
        self.rho = rho  # = dh
        self.basepoint = canonical_basepoint(L.base.domain)
        self.tol = tol

    def h(self, p) -> complex:
        return section_value(
            self.rho, self.lift.base.domain, self.basepoint, p, self.tol
        )

    def apply(self, point) -> tuple:
        point = as_cvec(point)
        base = point[:-1]
        return self.F(base) + (self.lam * point[-1] + self.h(base),)

    def differential(self, point) -> np.ndarray:
        point = as_cvec(point)
        n = len(point)
        J = np.zeros((n, n), dtype=complex)
        J[: n - 1, : n - 1] = ha.jacobian(self.F, point[:-1])
        dh = self.rho.at(point[:-1])
        for j in range(n - 1):
            J[n - 1, j] = dh.get((j,))
        J[n - 1, n - 1] = self.lam
        return J

    def residual(self, samples) -> float:
        """Max |F~* xi - lambda xi| at total-space samples."""
        xi = self.lift.xi()
        worst = 0.0
        for q in samples:
            q = as_cvec(q)
            n = len(q)
            J = self.differential(q)
            target = xi.at(self.apply(q))
            source = xi.at(q)
            for j in range(n):
                e = np.zeros(n, dtype=complex)
                e[j] = 1.0
                pulled = target.apply([J @ e])
                worst = max(worst, abs(pulled - self.lam * source.apply([e])))
        return worst


def lift_automorphism(L: Lift, F: HoloMap, loops: Sequence[Path],
                      tol: float = DEFAULT_TOL, samples=None,
                      seed: int = 0):
    """Lift F to the total space when the twisted pullback defect is exact."""
    if samples is None:
        samples = _default_base_samples(L, seed, 60)
    lam = scale_factor(F, L.base, samples, tol=max(tol, 1e-8))
    eta = L.potential()
    rho = fm.pullback_form(F, eta) - eta.scale(lam)
    values = tuple(path_integral(rho, loop, tol) for loop in loops)
    pv = PeriodVector(tuple(loops), values)
    if pv.max_abs() >= tol:
        return Obstruction(pv)
    return BundleMap(L, F, lam, rho, tol)


# ---------------------------------------------------------------------------
# Pullbacks of lifts


def pullback_lift(phi: HoloMap, L2: Lift, domain: Optional[Domain] = None,
                  samples=None, seed: int = 0, count: int = 100,
                  tol: float = DEFAULT_TOL) -> Lift:
    """Transport a lift along phi: S -> S'; fails if phi*omega degenerates."""
    if phi.m % 2 != 0:
        raise DimensionMismatch("source dimension must be even")
    N = phi.m // 2
    omega = fm.pullback_form(phi, L2.base.omega)
    if samples is None:
        if domain is None:
            raise DimensionMismatch("need explicit samples or a source domain")
        samples = domain.sample(seed, count)
    min_top = min(
        fm.wedge_power(omega.at(p), N).max_abs() for p in samples
    )
    if min_top <= tol:
        raise DegeneratePullback(
            f"pulled-back form has top power {min_top:.3e}", min_top=min_top
        )
    S = SymplecticData(omega, N, domain)
    return make_lift(
        S, fm.pullback_form(phi, L2.nu), fm.pullback_form(phi, L2.twist),
        samples=samples,
    )


# ---------------------------------------------------------------------------
# Cech atlases


@dataclass
class CechAtlas:
    """Charts with local potentials, scalar transition functions, samples.

    transitions[(a, b)] holds f_ab; the reversed pair is implied by
    antisymmetry.  Sample sets index pair and triple overlaps.
    """

    charts: tuple  # of (Domain, DiffForm)
    transitions: dict  # (a, b) -> Expr
    pair_samples: dict  # (a, b) -> list of points
    triple_samples: dict = field(default_factory=dict)  # (a, b, c) -> points

    def transition(self, a: int, b: int) -> Expr:
        if a == b:
            return Const(0.0)
        if (a, b) in self.transitions:
            return self.transitions[(a, b)]
        if (b, a) in self.transitions:
            return ha._neg(self.transitions[(b, a)])
        raise DimensionMismatch(f"no transition for chart pair ({a}, {b})")


@dataclass
class AtlasReport:
    cocycle_residual: float
    differential_residual: float
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return (
            self.cocycle_residual < self.tol
            and self.differential_residual < self.tol
        )


def validate_atlas(A: CechAtlas, tol: float = DEFAULT_TOL) -> AtlasReport:
    """Check f_ab + f_bc + f_ca = 0 on triples and df_ab = nu_a - nu_b on pairs."""
    n = A.charts[0][1].n
    cocycle = 0.0
    for (a, b, c), pts in A.triple_samples.items():
        fab, fbc, fca = A.transition(a, b), A.transition(b, c), A.transition(c, a)
        for p in pts:
            p = as_cvec(p)
            total = (
                ha.evaluate(fab, p) + ha.evaluate(fbc, p) + ha.evaluate(fca, p)
            )
            cocycle = max(cocycle, abs(total))
    differential = 0.0
    for (a, b), pts in A.pair_samples.items():
        f = A.transition(a, b)
        grad = DiffForm(n, 1, {(j,): ha.derive(f, j) for j in range(n)})
        delta = A.charts[a][1] - A.charts[b][1]
        for p in pts:
            differential = max(
                differential, (grad.at(p) - delta.at(p)).max_abs()
            )
    return AtlasReport(cocycle, differential, tol)
