"""Expression evaluation, symbolic derivatives, jets, Jacobians."""

import cmath
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactlift import holoalg as ha
from contactlift.errors import DomainError
from contactlift.holoalg import (
    Const,
    Exp,
    HoloMap,
    Jet,
    Log,
    PowInt,
    Sqrt,
    Var,
    derive,
    evaluate,
    identity_map,
    jacobian,
    jet_eval,
)


def test_eval_product():
    assert evaluate(Var(0) * Var(1), (2, 3j)) == 6j


def test_eval_exp_log_roundtrip():
    z = -1 + 0.1j
    got = evaluate(Exp(Log(Var(0), 0)), (z,))
    assert abs(got - z) < 1e-14


def test_eval_cayley_first_component():
    e = (1 + Var(0)) / (1 - Var(0))
    assert abs(evaluate(e, (0.5,)) - 3.0) < 1e-14
    # independent rational evaluation
    assert abs(evaluate(e, (0.5,)) - (1 + 0.5) / (1 - 0.5)) < 1e-14


def test_eval_division_by_zero():
    with pytest.raises(DomainError):
        evaluate(Const(1) / Var(0), (0,))


def test_eval_log_zero():
    with pytest.raises(DomainError):
        evaluate(Log(Var(0), 0), (0,))


def test_log_branch_offset():
    base = evaluate(Log(Var(0), 0), (2,))
    shifted = evaluate(Log(Var(0), 1), (2,))
    assert abs(shifted - base - 2j * cmath.pi) < 1e-14


def test_sqrt_branches():
    plus = evaluate(Sqrt(Var(0), 0), (4,))
    minus = evaluate(Sqrt(Var(0), 1), (4,))
    assert abs(plus - 2) < 1e-14
    assert abs(minus + 2) < 1e-14


def test_derive_square():
    assert evaluate(derive(PowInt(Var(0), 2), 0), (3,)) == 6


def test_derive_shifted_density():
    # d/dz 2(1-z)^{-2} = 4(1-z)^{-3}, value 4 at z = 0
    e = Const(2) / PowInt(1 - Var(0), 2)
    d = derive(e, 0)
    assert abs(evaluate(d, (0,)) - 4.0) < 1e-12
    h = 1e-5
    fd = (evaluate(e, (h,)) - evaluate(e, (-h,))) / (2 * h)
    assert abs(evaluate(d, (0,)) - fd) < 1e-7


def test_derive_constant():
    d = derive(Const(3 + 1j), 0)
    assert evaluate(d, (5,)) == 0


def test_jet_bilinear():
    j = jet_eval(Var(0) * Var(1), (1, 2), (1, 0), 2)
    assert np.allclose(j.coeffs, [2, 2, 0])


def test_jet_exp_series():
    j = jet_eval(Exp(Var(0)), (0,), (1,), 3)
    assert np.allclose(j.coeffs, [1, 1, 0.5, 1 / 6])


def test_jet_zero_direction():
    e = Var(0) ** 3 + 2 * Var(0)
    j = jet_eval(e, (1.5,), (0,), 4)
    assert abs(j.coeffs[0] - evaluate(e, (1.5,))) < 1e-14
    assert all(abs(c) < 1e-14 for c in j.coeffs[1:])


def test_jacobian_parabolic_slide():
    F = HoloMap(2, (Var(0) + 2 * Var(1) + 1, Var(1) + 1))
    J = jacobian(F, (0.3, 0.7j))
    assert np.allclose(J, [[1, 2], [0, 1]])
    assert abs(np.linalg.det(J) - 1) < 1e-14


def test_jacobian_identity():
    J = jacobian(identity_map(3), (1, 2, 3))
    assert np.allclose(J, np.eye(3))


def test_jacobian_winding_map():
    F = HoloMap(2, (Var(0) * PowInt(Var(1), 2), -1 / Var(1)))
    J = jacobian(F, (1, 2))
    assert np.allclose(J, [[4, 4], [0, 0.25]])
    assert abs(np.linalg.det(J) - 1) < 1e-12
    # finite-difference cross-check
    h = 1e-6
    for r in range(2):
        for c in range(2):
            p0 = [1.0, 2.0]
            p0[c] += h
            p1 = [1.0, 2.0]
            p1[c] -= h
            fd = (F(p0)[r] - F(p1)[r]) / (2 * h)
            assert abs(J[r, c] - fd) < 1e-5


def _random_poly(rng, arity, degree=4, terms=5):
    e = Const(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
    for _ in range(terms):
        term = Const(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        for _ in range(rng.randint(0, degree)):
            term = term * Var(rng.randrange(arity))
        e = e + term
    return e


def test_derivative_matches_finite_difference():
    rng = random.Random(7)
    for _ in range(100):
        arity = rng.randint(1, 3)
        f = _random_poly(rng, arity)
        i = rng.randrange(arity)
        p = tuple(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
                  for _ in range(arity))
        h = 1e-6
        pp = list(p)
        pm = list(p)
        pp[i] += h
        pm[i] -= h
        fd = (evaluate(f, pp) - evaluate(f, pm)) / (2 * h)
        sym = evaluate(derive(f, i), p)
        assert abs(sym - fd) < 1e-6 * (1 + abs(evaluate(f, p)))


def test_jet_linear_coefficient_is_directional_derivative():
    rng = random.Random(11)
    for _ in range(50):
        arity = rng.randint(1, 3)
        f = _random_poly(rng, arity)
        p = tuple(rng.uniform(-0.5, 0.5) for _ in range(arity))
        u = tuple(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
                  for _ in range(arity))
        j = jet_eval(f, p, u, 2)
        direct = sum(
            u[i] * evaluate(derive(f, i), p) for i in range(arity)
        )
        assert abs(j.coeffs[1] - direct) <= 1e-10 * (1 + abs(direct))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 3))
def test_product_rule(seed, arity):
    rng = random.Random(seed)
    f = _random_poly(rng, arity)
    g = _random_poly(rng, arity)
    i = rng.randrange(arity)
    p = tuple(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
              for _ in range(arity))
    lhs = evaluate(derive(f * g, i), p)
    rhs = (evaluate(f, p) * evaluate(derive(g, i), p)
           + evaluate(derive(f, i), p) * evaluate(g, p))
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_jet_composition_associativity():
    rng = random.Random(23)
    for _ in range(25):
        K = 5
        f = Jet([rng.uniform(-1, 1) for _ in range(K + 1)])
        g = Jet([rng.uniform(-1, 1) for _ in range(K + 1)])
        h = Jet([rng.uniform(0.5, 1.5) for _ in range(K + 1)])
        left = (f * g) * h
        right = f * (g * h)
        for a, b in zip(left.coeffs, right.coeffs):
            assert abs(a - b) <= 1e-12 * (1 + abs(b))
        left = (f + g) / h
        right = f / h + g / h
        for a, b in zip(left.coeffs, right.coeffs):
            assert abs(a - b) <= 1e-10 * (1 + abs(b))


def test_compose_maps():
    F = HoloMap(2, (Var(0) + Var(1), Var(0) * Var(1)))
    G = HoloMap(2, (PowInt(Var(0), 2), Var(1) - 1))
    FG = F.compose(G)
    p = (1.5, 0.5j)
    direct = F(G(p))
    composed = FG(p)
    assert all(abs(a - b) < 1e-13 for a, b in zip(direct, composed))
