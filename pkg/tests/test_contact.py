"""Contact/symplectic checks and Reeb solves."""

import math

import pytest

from contactlift import forms as fm
from contactlift import holoalg as ha
from contactlift.contact import (
    ContactData,
    SymplecticData,
    contact_check,
    legendrian_residual,
    reeb_solve,
    standard_contact,
    standard_symplectic,
    symplectic_check,
)
from contactlift.domains import Ball, Box, Disc, Product, PuncturedDisc
from contactlift.errors import SingularSystem
from contactlift.forms import DiffForm
from contactlift.holoalg import Const, HoloMap, Sqrt, Var


def box_samples(n, count=100, seed=0):
    return Box((0.0,) * n, (1.0,) * n).sample(seed, count)


def test_standard_contact_coeffs():
    C = standard_contact(1)
    v = C.xi.at((0.3, 0.2, 0.1))
    assert abs(v.get((2,)) - 1.0) < 1e-14
    assert abs(v.get((1,)) + 0.3) < 1e-14
    assert v.get((0,)) == 0


def test_standard_contact_volume_is_one():
    C = standard_contact(1)
    rep = contact_check(C, box_samples(3), 1e-9)
    assert rep.passed
    assert abs(rep.min_volume - 1.0) < 1e-12


def test_standard_contact_two_reeb():
    C = standard_contact(2)
    v = reeb_solve(C, (0.1, 0.2, 0.3, 0.4, 0.5))
    assert max(abs(a - b) for a, b in zip(v, (0, 0, 0, 0, 1))) < 1e-10


def test_twisted_contact_family_volume():
    # dy - (z - c/w) dw on (disc x punctured disc) x C, c = 1
    xi = DiffForm(3, 1, {
        (2,): Const(1.0),
        (1,): -(Var(0) - Const(1.0) / Var(1)),
    })
    D = Product((Disc(1.0), PuncturedDisc(1.0), Disc(1.0)))
    rep = contact_check(ContactData(xi, 1), D.sample(0, 200), 1e-9)
    assert rep.passed
    assert abs(rep.min_volume - 1.0) < 1e-12


def test_degenerate_contact_form_fails():
    xi = DiffForm(3, 1, {(2,): Const(1.0)})
    rep = contact_check(ContactData(xi, 1), box_samples(3), 1e-9)
    assert not rep.passed
    assert rep.min_volume == 0.0


def test_standard_contact_two_volume():
    C = standard_contact(2)
    rep = contact_check(C, box_samples(5, count=100), 1e-9)
    assert rep.passed
    # (d xi)^2 doubles the mixed term: coefficient is 2! / 1 = 2
    assert abs(rep.min_volume - 2.0) < 1e-10


def test_symplectic_flat():
    S = standard_symplectic(1)
    rep = symplectic_check(S, Ball(2, 1.0).sample(0, 100), 1e-9)
    assert rep.passed
    assert rep.max_dclosed == 0.0
    assert abs(rep.min_top - 1.0) < 1e-12


def test_symplectic_shifted_density():
    omega = DiffForm(2, 2, {(0, 1): Const(2.0) / (1 - Var(0)) ** 3})
    rep = symplectic_check(SymplecticData(omega, 1),
                           Ball(2, 0.9).sample(0, 100), 1e-9)
    assert rep.passed
    assert rep.min_top > 0.25


def test_symplectic_degenerate_at_origin():
    omega = DiffForm(2, 2, {(0, 1): Var(0)})
    samples = list(Ball(2, 1.0).sample(0, 50)) + [(0.0, 0.5)]
    rep = symplectic_check(SymplecticData(omega, 1), samples, 1e-9)
    assert not rep.passed
    assert rep.min_top == 0.0


def test_reeb_standard():
    C = standard_contact(1)
    v = reeb_solve(C, (0.3, 0.2j, 0.1))
    assert max(abs(a - b) for a, b in zip(v, (0, 0, 1))) < 1e-10


def test_reeb_twisted_family():
    xi = DiffForm(3, 1, {
        (2,): Const(1.0),
        (1,): -(Var(0) - Const(1j) / Var(1)),
    })
    C = ContactData(xi, 1)
    v = reeb_solve(C, (0.2, 0.5, 0.1))
    assert max(abs(a - b) for a, b in zip(v, (0, 0, 1))) < 1e-10


def test_reeb_of_scaled_form():
    # e^z * xi still has a unique pointwise solution
    xi = DiffForm(3, 1, {
        (2,): ha.Exp(Var(0)),
        (1,): -Var(0) * ha.Exp(Var(0)),
    })
    C = ContactData(xi, 1)
    p = (0.3, 0.1, 0.2)
    v = reeb_solve(C, p)
    assert abs(C.xi.at(p).apply([v]) - 1.0) < 1e-10


def test_reeb_singular_on_degenerate_form():
    xi = DiffForm(3, 1, {(2,): Const(1.0)})
    with pytest.raises(SingularSystem):
        reeb_solve(ContactData(xi, 1), (0.1, 0.2, 0.3))


def test_reeb_residuals_at_many_points():
    C = standard_contact(2)
    dxi = fm.exterior_derivative(C.xi)
    for p in box_samples(5, count=20):
        v = reeb_solve(C, p)
        assert abs(C.xi.at(p).apply([v]) - 1.0) < 1e-10
        assert fm.interior(v, dxi.at(p)).max_abs() < 1e-10


def test_contact_check_order_invariant():
    C = standard_contact(1)
    xi = DiffForm(3, 1, {(2,): Const(1.0), (1,): -Var(0) * Const(2.0)})
    samples = box_samples(3, count=30)
    r1 = contact_check(ContactData(xi, 1), samples, 1e-9)
    r2 = contact_check(ContactData(xi, 1), list(reversed(samples)), 1e-9)
    assert r1.min_volume == r2.min_volume


def test_legendrian_coordinate_line():
    C = standard_contact(1)
    phi = HoloMap(1, (Var(0), Const(0.3), Const(0.2)))
    params = [0.1, 0.5j, -0.3 + 0.2j]
    assert legendrian_residual(C, phi, params) < 1e-14


def test_legendrian_drain_curve():
    # (sqrt(y), sqrt(y) + t, sqrt(y) t) is tangent for every y
    C = standard_contact(1)
    y0 = 0.01
    s = math.sqrt(y0)
    phi = HoloMap(1, (Const(s), Const(s) + Var(0), Const(s) * Var(0)))
    params = [0.0, 0.2, 0.5, 0.9]
    assert legendrian_residual(C, phi, params) < 1e-14


def test_legendrian_violating_curve():
    C = standard_contact(1)
    phi = HoloMap(1, (Var(0), Var(0), Const(0.0)))
    params = [0.5, 0.25]
    got = legendrian_residual(C, phi, params)
    assert abs(got - 0.5) < 1e-14


def test_spanning_fields_and_bracket():
    # the two horizontal fields are tangent; their commutator has a unit
    # vertical component (finite-difference flow composition)
    C = standard_contact(1)
    p = (0.2, 0.3, 0.1)

    def flow_z(q, h):
        return (q[0] + h, q[1], q[2])

    def flow_w(q, h):
        # direction (0, 1, z): y moves with the current z
        return (q[0], q[1] + h, q[2] + q[0] * h)

    for direction in ((1, 0, 0), (0, 1, p[0])):
        assert abs(C.xi.at(p).apply([direction])) < 1e-14
    h = 1e-4
    round_trip = flow_w(flow_z(flow_w(flow_z(p, h), h), -h), -h)
    commutator_y = (round_trip[2] - p[2]) / h ** 2
    assert abs(commutator_y - 1.0) < 1e-8
