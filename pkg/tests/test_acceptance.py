"""End-to-end acceptance gate: every closed-form quantity and property suite.

Each test prints exactly one pass/fail line for its criterion.
"""

import cmath
import json
import math
import random

from contactlift import domains as dom
from contactlift import forms as fm
from contactlift import holoalg as ha
from contactlift.cli import get_builtin, run_scenario
from contactlift.contact import SymplecticData
from contactlift.domains import Ball, Disc
from contactlift.errors import NotScaleSymplectic
from contactlift.forms import DiffForm, circle_loop, path_integral, pullback
from contactlift.holoalg import Const, HoloMap, Var
from contactlift.lifts import (
    BundleMap,
    EquivalenceMap,
    Obstruction,
    lift_automorphism,
    lift_disc,
    is_fit,
    monodromy,
    scale_factor,
    standard_lift,
    theta_class,
    are_equivalent,
    twisted_lift,
    validate_lift,
    w_circle,
)
from contactlift.metrics import (
    box_bound_length,
    dist_bounds,
    dist_to_fiber,
    kappa_V,
    local_connect,
    tangency_residual,
)

TWO_PI_I = 2j * math.pi


def report(number, label, ok, detail=""):
    tail = f" ({detail})" if detail else ""
    print(f"criterion {number:02d} [{label}]: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"criterion {number} [{label}] failed{tail}"


def cayley_map():
    return HoloMap(2, ((1 + Var(0)) / (1 - Var(0)), Var(1) / (1 - Var(0))))


def cayley_inverse():
    return HoloMap(2, ((Var(0) - 1) / (Var(0) + 1), 2 * Var(1) / (Var(0) + 1)))


def parabolic(s):
    s = complex(s)
    return HoloMap(2, (
        Var(0) + Const(2 * s.conjugate()) * Var(1) + Const(abs(s) ** 2),
        Var(1) + Const(s),
    ))


def shifted_density():
    return DiffForm(2, 2, {(0, 1): Const(2.0) / (1 - Var(0)) ** 3})


def test_criterion_01_cayley_pullback():
    flat = DiffForm(2, 2, {(0, 1): Const(1.0)})
    shifted = shifted_density()
    worst = 0.0
    for p in Ball(2, 1.0).sample(0, 200):
        got = pullback(cayley_map(), flat, p)
        want = shifted.at(p)
        worst = max(worst, (got - want).max_abs() / (1 + want.max_abs()))
    report(1, "cayley-pullback", worst < 1e-10, f"max rel {worst:.2e}")


def test_criterion_02_parabolic_invariance():
    S = SymplecticData(DiffForm(2, 2, {(0, 1): Const(1.0)}), 1, Ball(2, 1.0))
    worst = 0.0
    for s in (1.0, 1j, 0.5 - 0.5j):
        lam = scale_factor(parabolic(s), S)
        worst = max(worst, abs(lam - 1.0))
    report(2, "parabolic-scale-one", worst < 1e-12, f"max dev {worst:.2e}")


def test_criterion_03_fixing_vs_nonfixing():
    S = SymplecticData(shifted_density(), 1, Ball(2, 0.9))
    samples = Ball(2, 0.9).sample(0, 120)
    rng = random.Random(42)
    ok = True
    detail = []
    for _ in range(5):
        th1 = rng.uniform(0.3, 5.9)
        th2 = rng.uniform(0.0, 2 * math.pi)
        F = HoloMap(2, (Const(cmath.exp(1j * th1)) * Var(0),
                        Const(cmath.exp(1j * th2)) * Var(1)))
        try:
            scale_factor(F, S, samples, tol=1e-8)
            ok = False
            detail.append("rotation accepted")
        except NotScaleSymplectic as exc:
            if exc.max_residual <= 1e-3:
                ok = False
                detail.append(f"weak rejection {exc.max_residual:.1e}")
    C = cayley_map()
    Cinv = cayley_inverse()
    for s in (1.0, 1j, 0.5 - 0.5j):
        A = Cinv.compose(parabolic(s).compose(C))
        try:
            lam = scale_factor(A, S, samples, tol=1e-8)
        except NotScaleSymplectic as exc:
            ok = False
            detail.append(f"fixing map rejected {exc.max_residual:.1e}")
            continue
        if abs(lam - 1.0) > 1e-6:
            ok = False
            detail.append(f"lambda {lam}")
    report(3, "ball-automorphisms", ok, "; ".join(detail) or "5 rejected, 3 fitted")


def test_criterion_04_twisted_family():
    cs = (0.0, 1.0, 1j)
    loops = [w_circle()]
    ok = True
    detail = []
    for c in cs:
        rep = validate_lift(twisted_lift(c), count=200, tol=1e-10)
        worst = max(rep.curvature_residual, rep.reeb_pairing_residual,
                    rep.reeb_contraction_residual)
        if worst >= 1e-10 or rep.min_volume <= 1e-10:
            ok = False
            detail.append(f"validate c={c}")
    for c1 in cs:
        for c2 in cs:
            pv = theta_class(twisted_lift(c1), twisted_lift(c2), loops)
            if abs(pv.values[0] - TWO_PI_I * (c2 - c1)) >= 1e-9:
                ok = False
                detail.append(f"theta {c1},{c2}")
            result = are_equivalent(twisted_lift(c1), twisted_lift(c2), loops)
            if c1 == c2:
                if not isinstance(result, EquivalenceMap):
                    ok = False
                    detail.append(f"equiv {c1}")
                else:
                    L1 = twisted_lift(c1)
                    res = result.residual(L1.total_samples(0, 25))
                    if res >= 1e-9:
                        ok = False
                        detail.append(f"pullback {c1}: {res:.1e}")
            elif not isinstance(result, Obstruction):
                ok = False
                detail.append(f"missed obstruction {c1},{c2}")
    report(4, "twisted-lift-family", ok, "; ".join(detail))


def test_criterion_05_monodromy_fitness():
    nu = DiffForm(2, 1, {(1,): Var(0)})
    ok = True
    detail = []
    for c in (0.0, 1.0, 1j):
        got = monodromy(twisted_lift(c), nu, w_circle())
        if abs(got - (-TWO_PI_I * c)) >= 1e-9:
            ok = False
            detail.append(f"monodromy c={c}")
        fit = is_fit(twisted_lift(c), nu, [w_circle()]).fit
        if fit != (c == 0):
            ok = False
            detail.append(f"fitness c={c}")
    report(5, "monodromy-fitness", ok, "; ".join(detail))


def test_criterion_06_automorphism_obstruction():
    F = HoloMap(2, (Var(0) * Var(1) ** 2, -1 / Var(1)))
    ok = True
    detail = []
    result = lift_automorphism(twisted_lift(1.0), F, [w_circle()])
    if not isinstance(result, Obstruction):
        ok = False
        detail.append("no obstruction at c=1")
    else:
        dev = abs(result.periods.values[0] - 2 * TWO_PI_I)
        if dev >= 1e-8:
            ok = False
            detail.append(f"period dev {dev:.1e}")
    L0 = twisted_lift(0.0)
    result = lift_automorphism(L0, F, [w_circle()])
    if not isinstance(result, BundleMap):
        ok = False
        detail.append("lift failed at c=0")
    else:
        res = result.residual(L0.total_samples(0, 50))
        if res >= 1e-8:
            ok = False
            detail.append(f"pullback residual {res:.1e}")
        if abs(result.lam - 1.0) >= 1e-10:
            ok = False
            detail.append(f"lambda {result.lam}")
    report(6, "automorphism-obstruction", ok, "; ".join(detail))


def test_criterion_07_disc_lift_oracle():
    L = standard_lift(1)
    phi = HoloMap(1, (Var(0) / 2, Var(0) / 2))
    ld = lift_disc(L, phi, 0.0)
    worst = max(abs(ld.y(z) - z ** 2 / 8)
                for (z,) in Disc(1.0).sample(0, 64))
    params = [p[0] for p in Disc(1.0).sample(3, 16)]
    res = ld.legendrian_residual(params)
    report(7, "disc-lift-oracle", worst < 1e-10 and res < 1e-11,
           f"value {worst:.2e}, legendrian {res:.2e}")


def test_criterion_08_metric_equality():
    L = standard_lift(1)
    D = L.base.domain
    pts = D.sample(0, 50, margin=0.05)
    dirs = D.sample(7, 50)
    ys = Disc(1.0).sample(13, 50)
    worst_val = 0.0
    certs = []
    for p, d, y in zip(pts, dirs, ys):
        p_total = p + y
        fiber = L.potential().at(p).apply([d])
        u = tuple(d) + (fiber,)
        cert = kappa_V(L, p_total, u, tol=1e-8)
        worst_val = max(worst_val, abs(cert.value - dom.model_kappa(D, p, d)))
        certs.append(cert)
    worst_leg = max(
        cert.witness.legendrian_residual([0.1, -0.4, 0.3j, -0.2j])
        for cert in certs[:8]
    )
    report(8, "metric-equality", worst_val < 1e-10 and worst_leg < 1e-10,
           f"value {worst_val:.2e}, legendrian {worst_leg:.2e}")


def test_criterion_09_distance_sandwich():
    L = standard_lift(1)
    D = L.base.domain
    ps = D.sample(0, 25, margin=0.05)
    qs = D.sample(3, 25, margin=0.05)
    worst_gap = 0.0
    worst_fiber = 0.0
    worst_leg = 0.0
    for i, (p, q) in enumerate(zip(ps, qs)):
        if p == q:
            continue
        value, chain = dist_to_fiber(L, p + (0.0,), q)
        worst_fiber = max(worst_fiber,
                          abs(value - dom.model_dist(D, p, q)))
        if i < 5:
            worst_leg = max(worst_leg, chain.legendrian_residual(4))
        b = dist_bounds(L, p + (0.0,), chain.end)
        worst_gap = max(worst_gap, b.upper - b.lower)
    ok = worst_gap < 1e-6 and worst_fiber < 1e-8 and worst_leg < 1e-9
    report(9, "distance-sandwich", ok,
           f"gap {worst_gap:.2e}, fiber {worst_fiber:.2e}, leg {worst_leg:.2e}")


def test_criterion_10_local_connectivity():
    L = standard_lift(1, Ball(2, 1.0))
    base = (0.2, 0.2, 0.04)
    r = 20.0
    ok = True
    detail = []
    values = []
    for k in range(7):
        p = tuple(x / 2 ** k for x in base)
        gamma = local_connect(r, p)
        res = tangency_residual(L, gamma)
        if res >= 1e-12:
            ok = False
            detail.append(f"tangency k={k}: {res:.1e}")
        if max(abs(a - b) for a, b in zip(gamma.start(), p)) != 0.0:
            ok = False
            detail.append(f"start k={k}")
        if max(abs(x) for x in gamma.end()) != 0.0:
            ok = False
            detail.append(f"end k={k}")
        values.append(box_bound_length(r, gamma))
    if not all(b < a for a, b in zip(values, values[1:])):
        ok = False
        detail.append("not decreasing")
    if not values[6] < 0.01:
        ok = False
        detail.append(f"final {values[6]:.3f}")
    report(10, "local-connectivity", ok,
           "; ".join(detail) or f"lengths {values[0]:.4f}..{values[6]:.5f}")


def test_criterion_11_calculus_suites():
    rng = random.Random(99)
    worst = 0.0
    # d(d(a)) for random polynomial 1-forms
    for _ in range(10):
        coeffs = {
            (j,): sum((Const(rng.uniform(-1, 1)) * Var(rng.randrange(3))
                       * Var(rng.randrange(3)) for _ in range(3)), Const(0.0))
            for j in range(3)
        }
        dd = fm.exterior_derivative(
            fm.exterior_derivative(DiffForm(3, 1, coeffs))
        )
        for _ in range(5):
            p = tuple(rng.uniform(-1, 1) for _ in range(3))
            worst = max(worst, dd.at(p).max_abs())
    # pullback functoriality
    F = HoloMap(2, (Var(0) + Var(1) ** 2, Var(1)))
    G = HoloMap(2, (Var(0) * Var(1), Var(0) + Const(2.0)))
    a = DiffForm(2, 2, {(0, 1): Var(0) + Var(1)})
    for _ in range(10):
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        direct = pullback(G.compose(F), a, p)
        staged = pullback(F, fm.pullback_form(G, a), p)
        worst = max(worst, (direct - staged).max_abs())
    # fundamental theorem on polylines
    for _ in range(5):
        h = (Const(rng.uniform(-1, 1)) * Var(0) ** 2 * Var(1)
             + Const(rng.uniform(-1, 1)) * Var(1))
        dh = DiffForm(2, 1, {(j,): ha.derive(h, j) for j in range(2)})
        pts = [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(4)]
        got = path_integral(dh, fm.polyline(pts), 1e-10)
        want = ha.evaluate(h, pts[-1]) - ha.evaluate(h, pts[0])
        worst = max(worst, abs(got - want))
    # exact-form loop periods
    for _ in range(5):
        h = Var(0) ** 3 + Const(rng.uniform(-1, 1)) * Var(0)
        dh = DiffForm(1, 1, {(0,): ha.derive(h, 0)})
        loop = circle_loop(1, 0, rng.uniform(0.2, 0.8))
        worst = max(worst, abs(path_integral(dh, loop, 1e-10)))
    report(11, "calculus-substrate", worst < 1e-9, f"max residual {worst:.2e}")


def test_criterion_12_determinism():
    ok = True
    detail = []
    for name in ("standard_box", "ball_extremal", "punctured_family",
                 "lift_metric_equality", "pullback_demo"):
        a = run_scenario(get_builtin(name)).to_dict()
        b = run_scenario(get_builtin(name)).to_dict()
        a.pop("timestamp")
        b.pop("timestamp")
        if (json.dumps(a, sort_keys=True, indent=2)
                != json.dumps(b, sort_keys=True, indent=2)):
            ok = False
            detail.append(name)
        if not a["all_passed"]:
            ok = False
            detail.append(f"{name} failed")
    report(12, "report-determinism", ok, "; ".join(detail))
