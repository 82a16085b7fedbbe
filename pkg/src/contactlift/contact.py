"""Contact forms, symplectic forms, Reeb fields: constructors and checks.

All verification is sample based: "nowhere zero" and "closed" are certified
on an explicit sample set and reported with the worst residual, never proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import forms as fm
from . import holoalg as ha
from .domains import Box, Domain
from .errors import DomainError, SingularSystem
from .forms import DiffForm, FormValue
from .holoalg import Const, HoloMap, Var, as_cvec

DEFAULT_TOL = 1e-9


@dataclass
class ContactData:
    """A candidate contact form xi on ambient dimension 2N+1."""

    xi: DiffForm
    N: int
    domain: Optional[Domain] = None

    def __post_init__(self):
        if self.xi.k != 1 or self.xi.n != 2 * self.N + 1:
            raise DomainError("contact form must be a 1-form on dimension 2N+1")


@dataclass
class SymplecticData:
    """A candidate symplectic form omega on ambient dimension 2N."""

    omega: DiffForm
    N: int
    domain: Optional[Domain] = None

    def __post_init__(self):
        if self.omega.k != 2 or self.omega.n != 2 * self.N:
            raise DomainError("symplectic form must be a 2-form on dimension 2N")


def standard_contact(N: int, domain: Optional[Domain] = None) -> ContactData:
    """xi = dy - z_1 dw_1 - ... - z_N dw_N on coordinates (z, w, y)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    n = 2 * N + 1
    coeffs = {(n - 1,): Const(1.0)}
    for j in range(N):
        coeffs[(N + j,)] = ha.Neg(Var(j))
    if domain is None:
        domain = Box((0.0,) * n, (1.0,) * n)
    return ContactData(DiffForm(n, 1, coeffs), N, domain)


def standard_symplectic(N: int, domain: Optional[Domain] = None) -> SymplecticData:
    """omega = dz_1 ^ dw_1 + ... + dz_N ^ dw_N."""
    coeffs = {(j, N + j): Const(1.0) for j in range(N)}
    return SymplecticData(DiffForm(2 * N, 2, coeffs), N, domain)


@dataclass
class ContactReport:
    min_volume: float
    worst_point: Optional[tuple]
    errors: list = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return not self.errors and self.min_volume > self.tol


def contact_check(C: ContactData, samples: Sequence, tol: float = DEFAULT_TOL) -> ContactReport:
    """Evaluate xi ^ (d xi)^N at each sample; report the minimum top coefficient."""
    dxi = fm.exterior_derivative(C.xi)
    best = math.inf
    worst = None
    errors = []
    for p in samples:
        try:
            vol = fm.wedge(C.xi.at(p), fm.wedge_power(dxi.at(p), C.N))
        except DomainError as exc:
            errors.append((tuple(p), str(exc)))
            continue
        m = vol.max_abs()
        if m < best:
            best = m
            worst = tuple(p)
    if best is math.inf:
        best = 0.0
    return ContactReport(min_volume=best, worst_point=worst, errors=errors, tol=tol)


@dataclass
class SymplecticReport:
    max_dclosed: float
    min_top: float
    worst_point: Optional[tuple]
    errors: list = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return not self.errors and self.max_dclosed < self.tol and self.min_top > self.tol


def symplectic_check(S: SymplecticData, samples: Sequence, tol: float = DEFAULT_TOL) -> SymplecticReport:
    dom = fm.exterior_derivative(S.omega)
    max_d = 0.0
    min_top = math.inf
    worst = None
    errors = []
    for p in samples:
        try:
            max_d = max(max_d, dom.at(p).max_abs())
            top = fm.wedge_power(S.omega.at(p), S.N).max_abs()
        except DomainError as exc:
            errors.append((tuple(p), str(exc)))
            continue
        if top < min_top:
            min_top = top
            worst = tuple(p)
    if min_top is math.inf:
        min_top = 0.0
    return SymplecticReport(max_dclosed=max_d, min_top=min_top,
                            worst_point=worst, errors=errors, tol=tol)


def reeb_solve(C: ContactData, p, pivot_tol: float = 1e-12) -> tuple:
    """The unique v with xi_p(v) = 1 and (iota_v d xi)_p = 0."""
    p = as_cvec(p)
    n = C.xi.n
    xi_p = C.xi.at(p)
    dxi_p = fm.exterior_derivative(C.xi).at(p)
    rows = []
    rhs = []
    # xi(v) = 1
    rows.append([xi_p.get((i,)) for i in range(n)])
    rhs.append(1.0)
    # (iota_v dxi)_j = 0 for every output index j
    M = np.zeros((n, n), dtype=complex)
    for (i, j), c in dxi_p.coeffs.items():
        M[j, i] += c
        M[i, j] -= c
    for j in range(n):
        rows.append(list(M[j, :]))
        rhs.append(0.0)
    A = np.array(rows, dtype=complex)
    b = np.array(rhs, dtype=complex)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] < pivot_tol * sv[0]:
        raise SingularSystem(
            f"contact degeneracy at {p}: singular value ratio {sv[-1] / sv[0]:.3e}"
        )
    v, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ v - b)))
    if residual > 1e-10:
        raise SingularSystem(f"Reeb system inconsistent at {p}: residual {residual:.3e}")
    return tuple(v)


def legendrian_residual(C: ContactData, phi: HoloMap, params: Sequence) -> float:
    """Max over parameter samples of |xi_{phi(zeta)}(phi'(zeta))|."""
    if phi.m != 1:
        raise DomainError("expected a one-variable map")
    worst = 0.0
    for zeta in params:
        zeta = complex(zeta)
        point = phi((zeta,))
        vel = phi.derivative((zeta,), (1.0,))
        worst = max(worst, abs(C.xi.at(point).apply([vel])))
    return worst
