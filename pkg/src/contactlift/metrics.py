"""Sub-Finsler metric data on lifts: pointwise values, lengths, bounds.

Over a model base the horizontal metric collapses to the base metric, so the
exact value comes with a lifted extremal disc as witness.  Away from model
bases only conservative disc-radius bounds are certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import domains as dom
from . import forms as fm
from . import holoalg as ha
from .domains import Ball, Chain, Disc, Domain, Product
from .errors import (
    DegenerateDirection,
    DimensionMismatch,
    IntermediatePointEscapes,
    NotInContactHyperplane,
    ParamOutOfRange,
    TangencyViolation,
)
from .forms import Path, Segment, adaptive_quadrature
from .holoalg import Const, Var, as_cvec
from .lifts import Lift, LiftedDisc, VChain, lift_chain, lift_disc

DEFAULT_TOL = 1e-9

_TANGENCY_NODES = 128


@dataclass
class MetricCertificate:
    value: float
    witness: Optional[LiftedDisc]
    witness_scale: Optional[complex] = None  # witness tangent = scale * u

    def witness_tangent(self) -> tuple:
        return self.witness.velocity(0.0)


def kappa_V(L: Lift, p_total, u, tol: float = DEFAULT_TOL) -> MetricCertificate:
    """Exact metric value on a contact vector, with a Legendrian witness disc."""
    p_total = as_cvec(p_total)
    u = as_cvec(u)
    if len(p_total) != L.n_total or len(u) != L.n_total:
        raise DimensionMismatch("point or vector has wrong total dimension")
    pairing = L.xi().at(p_total).apply([u])
    if abs(pairing) >= tol:
        raise NotInContactHyperplane(
            f"xi(u) = {pairing} is not within {tol} of zero"
        )
    base_p = p_total[:-1]
    base_u = u[:-1]
    if all(x == 0 for x in base_u):
        raise DegenerateDirection("zero horizontal component")
    value = dom.model_kappa(L.base.domain, base_p, base_u)
    phi, lam = dom.extremal_disc(L.base.domain, base_p, base_u)
    witness = lift_disc(L, phi, y0=p_total[-1], check_image=False)
    return MetricCertificate(value, witness, lam)


@dataclass(frozen=True)
class PiecewiseCurve:
    """Curve in the total space, possibly empty; segments join to 1e-12."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for s0, s1 in zip(segs, segs[1:]):
            gap = max(abs(a - b) for a, b in zip(s0.value(1.0), s1.value(0.0)))
            if gap > 1e-12:
                raise DimensionMismatch(f"piece joint gap {gap:.3e}")

    def start(self) -> tuple:
        return self.segments[0].value(0.0)

    def end(self) -> tuple:
        return self.segments[-1].value(1.0)

    def reversed(self) -> "PiecewiseCurve":
        if not self.segments:
            return self
        return PiecewiseCurve(Path(self.segments).reversed().segments)


def tangency_residual(L: Lift, gamma: PiecewiseCurve,
                      nodes: int = _TANGENCY_NODES) -> float:
    """Max |xi(gamma')| over per-piece quadrature nodes."""
    xi = L.xi()
    worst = 0.0
    for seg in gamma.segments:
        for k in range(nodes):
            t = (k + 0.5) / nodes
            worst = max(
                worst, abs(xi.at(seg.value(t)).apply([seg.velocity(t)]))
            )
    return worst


def v_length(L: Lift, gamma: PiecewiseCurve, tol: float = 1e-10,
             tangency_tol: float = 1e-8) -> float:
    """Integrated metric length of a curve tangent to the contact planes."""
    res = tangency_residual(L, gamma)
    if res > tangency_tol:
        raise TangencyViolation(
            f"tangency residual {res:.3e}", max_residual=res
        )
    D = L.base.domain
    total = 0.0
    for seg in gamma.segments:
        def integrand(t: float) -> complex:
            p = seg.value(t)
            v = seg.velocity(t)
            return dom.model_kappa(D, p[:-1], v[:-1])

        total += adaptive_quadrature(integrand, 0.0, 1.0, tol).real
    return total


def chain_length(C) -> float:
    """Half log ratios summed over the chain parameters."""
    if isinstance(C, (Chain, VChain)):
        params = [t for *_, t in getattr(C, "links", [])] or list(
            getattr(C, "params", [])
        )
    else:
        params = list(C)
    for t in params:
        if not 0.0 < t < 1.0:
            raise ParamOutOfRange(f"chain parameter {t} outside (0,1)")
    return sum(0.5 * math.log((1.0 + t) / (1.0 - t)) for t in params)


INF = float("inf")


@dataclass
class DistBounds:
    lower: float
    upper: float
    fiber_gap: float
    chain: Optional[VChain]


def dist_bounds(L: Lift, p_total, q_total, tol: float = 1e-8) -> DistBounds:
    """Base distance below, lifted-geodesic chain length above when the
    chain lands on the right fiber point."""
    p_total = as_cvec(p_total)
    q_total = as_cvec(q_total)
    if p_total == q_total:
        return DistBounds(0.0, 0.0, 0.0, None)
    bp, bq = p_total[:-1], q_total[:-1]
    D = L.base.domain
    if bp == bq:
        gap = abs(p_total[-1] - q_total[-1])
        return DistBounds(0.0, 0.0 if gap < tol else INF, gap, None)
    lower = dom.model_dist(D, bp, bq)
    chain = dom.geodesic_chain(D, bp, bq)
    lifted = lift_chain(L, chain, p_total[-1])
    gap = abs(lifted.end[-1] - q_total[-1])
    upper = lifted.length() if gap < tol else INF
    return DistBounds(lower, upper, gap, lifted)


def dist_to_fiber(L: Lift, p_total, q_base, tol: float = 1e-8):
    """Distance from a total point to the fiber over q, with the chain
    realizing it."""
    p_total = as_cvec(p_total)
    q_base = as_cvec(q_base)
    bp = p_total[:-1]
    if bp == q_base:
        return 0.0, None
    value = dom.model_dist(L.base.domain, bp, q_base)
    chain = dom.geodesic_chain(L.base.domain, bp, q_base)
    lifted = lift_chain(L, chain, p_total[-1])
    return value, lifted


# ---------------------------------------------------------------------------
# Local connecting curves in the standard box


def _box_domain(r: float) -> Product:
    # base ball in (z, w) and a fiber disc in y
    return Product((Ball(2, r), Disc(r)))


def _line_piece(a, b) -> Segment:
    t = Var(0)
    return Segment(tuple(
        ha._add(Const(complex(x)), ha._mul(Const(complex(y) - complex(x)), t))
        for x, y in zip(a, b)
    ))


def local_connect(r: float, p) -> PiecewiseCurve:
    """Curve tangent to ker(dy - z dw) from p = (z, w, y) to the origin.

    Pure z and pure w-at-z=0 moves are tangent for free; the y coordinate is
    drained along the one-parameter family (s, s + t, s t) with s = sqrt(y),
    traversed backwards.  Intermediate points must stay inside the box.
    """
    p = as_cvec(p)
    if len(p) != 3:
        raise DimensionMismatch("expected a point of C^3")
    B = _box_domain(r)
    if not B.contains(p):
        raise IntermediatePointEscapes("start point outside the box", point=p)
    z0, w0, y0 = p
    if p == (0.0, 0.0, 0.0):
        return PiecewiseCurve(())
    if y0 == 0:
        waypoints = [p, (0.0, w0, 0.0), (0.0, 0.0, 0.0)]
        waypoints = [q for q, nxt in zip(waypoints, waypoints[1:] + [None])
                     if nxt is None or q != nxt]
        pieces = [
            _line_piece(a, b)
            for a, b in zip(waypoints, waypoints[1:])
        ]
        return PiecewiseCurve(tuple(pieces))
    s = ha.evaluate(ha.Sqrt(Const(y0)), ())
    inner = [
        (0.0, w0, y0),
        (0.0, 2 * s, y0),
        (s, 2 * s, y0),
        (s, s, 0.0),
        (0.0, s, 0.0),
    ]
    for q in inner:
        if not B.contains(q):
            raise IntermediatePointEscapes(
                "construction leaves the box", point=q
            )
    pieces = []
    route = [p] + inner + [(0.0, 0.0, 0.0)]
    for a, b in zip(route, route[1:]):
        if a == b:
            continue
        if a == (s, 2 * s, y0) and b == (s, s, 0.0):
            # (s, s + tau, s tau) traversed from tau = s down to 0
            t = Var(0)
            tau = ha._mul(Const(s), ha._sub(Const(1.0), t))
            pieces.append(Segment((
                Const(s),
                ha._add(Const(s), tau),
                ha._mul(Const(s), tau),
            )))
        else:
            pieces.append(_line_piece(a, b))
    return PiecewiseCurve(tuple(pieces))


def kappa_upper_box(r: float, p, u, tol: float = DEFAULT_TOL) -> float:
    """Certified upper metric bound in the box via a linear Legendrian disc.

    The base disc zeta -> base(p) + rho zeta (a, b) lifts with
    |y - y0| <= rho |b||z0| + rho^2 |ab| / 2; rho is the largest radius
    keeping the base in the ball and the fiber below r.
    """
    p = as_cvec(p)
    u = as_cvec(u)
    if len(p) != 3 or len(u) != 3:
        raise DimensionMismatch("expected point and vector in C^3")
    z0, w0, y0 = p
    pairing = u[2] - z0 * u[1]
    if abs(pairing) >= tol:
        raise NotInContactHyperplane(f"xi(u) = {pairing}")
    norm = math.sqrt(abs(u[0]) ** 2 + abs(u[1]) ** 2)
    if norm == 0:
        raise DegenerateDirection("zero horizontal component")
    a, b = u[0] / norm, u[1] / norm
    rho_base = r - math.sqrt(abs(z0) ** 2 + abs(w0) ** 2)
    if rho_base <= 0:
        raise IntermediatePointEscapes("point outside the base ball", point=p)
    # |y0| + rho |b||z0| + rho^2 |ab|/2 = r
    lin = abs(b) * abs(z0)
    quad = 0.5 * abs(a) * abs(b)
    slack = r - abs(y0)
    if slack <= 0:
        raise IntermediatePointEscapes("fiber coordinate outside the box", point=p)
    if quad > 0:
        rho_fiber = (-lin + math.sqrt(lin * lin + 4 * quad * slack)) / (2 * quad)
    elif lin > 0:
        rho_fiber = slack / lin
    else:
        rho_fiber = INF
    rho = min(rho_base, rho_fiber)
    return norm / rho


def box_bound_length(r: float, gamma: PiecewiseCurve,
                     tol: float = 1e-8) -> float:
    """Integrate kappa_upper_box along a curve: a certified length bound."""
    total = 0.0
    for seg in gamma.segments:
        def integrand(t: float) -> complex:
            return kappa_upper_box(r, seg.value(t), seg.velocity(t))

        total += adaptive_quadrature(integrand, 0.0, 1.0, tol).real
    return total
