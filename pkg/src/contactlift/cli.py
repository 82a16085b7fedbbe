"""Scenario runner: TOML scenarios, built-in suites, structured reports.

A scenario declares variables, one domain, named forms/maps/lifts given as
expression text, loops, and a list of checks.  Checks never abort the run;
the report records every outcome and the process exit code summarizes them
(0 all good, 1 a check failed, 2 the scenario itself was invalid).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

from . import domains as dom
from . import forms as fm
from . import holoalg as ha
from . import lifts as lf
from . import metrics as mt
from .contact import (
    ContactData,
    SymplecticData,
    contact_check,
    reeb_solve,
    symplectic_check,
)
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
    ConfigurationError,
    ContactLiftError,
    DegeneratePullback,
    NotScaleSymplectic,
    ParseError,
    UnknownName,
)
from .forms import DiffForm, Path
from .holoalg import Const, HoloMap, Var
from .parser import parse_expression, parse_form_key

DEFAULT_TOL = 1e-9


# ---------------------------------------------------------------------------
# Scenario model


@dataclass
class Scenario:
    name: str
    variables: tuple
    domain: Optional[dict]
    forms: dict  # name -> {key text: expr text}
    maps: dict  # name -> tuple of expr text
    lifts: dict  # name -> {"nu": {...}, "twist": {...}}
    loops: tuple  # of dicts
    samples: dict  # {"count", "seed", "tolerance"}
    checks: tuple  # of dicts
    output: dict  # {"format": ...}


_DOMAIN_KINDS = {
    "disc", "punctured_disc", "ball", "polydisc", "half_plane",
    "siegel", "box", "product",
}

_CHECK_OPS = {
    "contact_check", "symplectic_check", "reeb_check", "validate_lift",
    "pullback_matches", "scale_factor", "theta_class", "monodromy",
    "is_fit", "are_equivalent", "lift_automorphism", "lift_disc_check",
    "metric_equality", "dist_sandwich", "pullback_lift_check",
    "local_connect_check", "kappa_box_check",
}


def _normalize_domain(spec) -> dict:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigurationError("domain needs a 'kind' field")
    kind = spec["kind"]
    if kind not in _DOMAIN_KINDS:
        raise ConfigurationError(f"unknown domain kind {kind!r}")
    out = {"kind": kind}
    for key in ("r", "dim"):
        if key in spec:
            out[key] = float(spec[key]) if key == "r" else int(spec[key])
    if "radii" in spec:
        out["radii"] = [float(x) for x in spec["radii"]]
    if "center" in spec:
        out["center"] = [str(x) for x in spec["center"]]
    if kind == "product":
        out["factors"] = [_normalize_domain(f) for f in spec.get("factors", [])]
    return out


def build_domain(spec: Optional[dict]) -> Optional[Domain]:
    if spec is None:
        return None
    kind = spec["kind"]
    if kind == "disc":
        return Disc(spec.get("r", 1.0))
    if kind == "punctured_disc":
        return PuncturedDisc(spec.get("r", 1.0))
    if kind == "ball":
        return Ball(spec.get("dim", 2), spec.get("r", 1.0))
    if kind == "polydisc":
        return Polydisc(tuple(spec.get("radii", (1.0, 1.0))))
    if kind == "half_plane":
        return HalfPlane()
    if kind == "siegel":
        return Siegel(spec.get("dim", 2))
    if kind == "box":
        center = tuple(complex(ha.evaluate(parse_expression(c, ()), ()))
                       for c in spec.get("center", ()))
        return Box(center, tuple(spec.get("radii", ())))
    if kind == "product":
        return Product(tuple(build_domain(f) for f in spec["factors"]))
    raise ConfigurationError(f"unknown domain kind {kind!r}")


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate scenario text."""
    try:
        raw = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigurationError(f"scenario is not valid TOML: {exc}") from exc
    if "name" not in raw or "variables" not in raw:
        raise ConfigurationError("scenario needs 'name' and 'variables'")
    variables = tuple(str(v) for v in raw["variables"])
    domain = _normalize_domain(raw["domain"]) if "domain" in raw else None
    forms = {}
    for name, table in raw.get("forms", {}).items():
        if not isinstance(table, dict):
            raise ConfigurationError(f"form {name!r} must be a table")
        forms[name] = {str(k): str(v) for k, v in table.items()}
    maps = {
        name: tuple(str(c) for c in table.get("components", ()))
        for name, table in raw.get("maps", {}).items()
    }
    lifts = {}
    for name, table in raw.get("lifts", {}).items():
        lifts[name] = {
            "nu": {str(k): str(v) for k, v in table.get("nu", {}).items()},
            "twist": {str(k): str(v) for k, v in table.get("twist", {}).items()},
        }
    loops = tuple(dict(l) for l in raw.get("loops", ()))
    samples = {
        "count": int(raw.get("samples", {}).get("count", 100)),
        "seed": int(raw.get("samples", {}).get("seed", 0)),
        "tolerance": float(raw.get("samples", {}).get("tolerance", DEFAULT_TOL)),
    }
    checks = tuple(dict(c) for c in raw.get("checks", ()))
    output = {"format": str(raw.get("output", {}).get("format", "text"))}
    s = Scenario(str(raw["name"]), variables, domain, forms, maps, lifts,
                 loops, samples, checks, output)
    _validate_scenario(s)
    return s


def _validate_scenario(s: Scenario) -> None:
    try:
        for name, table in s.forms.items():
            for key, expr in table.items():
                parse_form_key(key, s.variables)
                parse_expression(expr, s.variables)
        for name, comps in s.maps.items():
            if not comps:
                raise ConfigurationError(f"map {name!r} has no components")
            for c in comps:
                parse_expression(c, s.variables)
        for name, table in s.lifts.items():
            for part in ("nu", "twist"):
                for key, expr in table[part].items():
                    parse_form_key(key, s.variables)
                    parse_expression(expr, s.variables)
        for loop in s.loops:
            if loop.get("kind", "circle") != "circle":
                raise ConfigurationError("only circle loops are supported")
            if loop.get("coordinate") not in s.variables:
                raise ConfigurationError(
                    f"loop coordinate {loop.get('coordinate')!r} undeclared"
                )
    except (ParseError, UnknownName) as exc:
        raise ConfigurationError(f"scenario expression error: {exc}") from exc
    seen = set()
    for chk in s.checks:
        cid = chk.get("id")
        if not cid or cid in seen:
            raise ConfigurationError("every check needs a unique 'id'")
        seen.add(cid)
        op = chk.get("op")
        if op not in _CHECK_OPS:
            raise ConfigurationError(f"check {cid!r}: unknown op {op!r}")
        for key in ("form", "expected"):
            pass
        for key in ("lift", "other"):
            if key in chk and chk[key] not in s.lifts:
                raise ConfigurationError(
                    f"check {cid!r}: unknown lift {chk[key]!r}"
                )
        if "map" in chk and chk["map"] not in s.maps:
            raise ConfigurationError(f"check {cid!r}: unknown map {chk['map']!r}")
        if "form" in chk and chk["form"] not in s.forms:
            raise ConfigurationError(f"check {cid!r}: unknown form {chk['form']!r}")
    if s.output["format"] not in ("text", "json", "csv"):
        raise ConfigurationError(f"unknown output format {s.output['format']!r}")


# ---------------------------------------------------------------------------
# Printing scenarios back to TOML


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(
            f"{json.dumps(k)} = {_toml_value(x)}" for k, x in v.items()
        ) + "}"
    raise ConfigurationError(f"cannot serialize {type(v).__name__}")


def print_scenario(s: Scenario) -> str:
    out = [f"name = {json.dumps(s.name)}",
           f"variables = {_toml_value(list(s.variables))}"]
    if s.domain is not None:
        out.append(f"domain = {_toml_value(s.domain)}")
    out.append(f"samples = {_toml_value(s.samples)}")
    out.append(f"output = {_toml_value(s.output)}")
    for name, table in s.forms.items():
        out.append(f"[forms.{name}]")
        for k, v in table.items():
            out.append(f"{json.dumps(k)} = {json.dumps(v)}")
    for name, comps in s.maps.items():
        out.append(f"[maps.{name}]")
        out.append(f"components = {_toml_value(list(comps))}")
    for name, table in s.lifts.items():
        out.append(f"[lifts.{name}]")
        out.append(f"nu = {_toml_value(table['nu'])}")
        out.append(f"twist = {_toml_value(table['twist'])}")
    for loop in s.loops:
        out.append("[[loops]]")
        for k, v in loop.items():
            out.append(f"{k} = {_toml_value(v)}")
    for chk in s.checks:
        out.append("[[checks]]")
        for k, v in chk.items():
            out.append(f"{k} = {_toml_value(v)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Execution context


class _Context:
    def __init__(self, s: Scenario, tol: Optional[float] = None,
                 seed: Optional[int] = None, count: Optional[int] = None):
        self.scenario = s
        self.variables = s.variables
        self.n = len(s.variables)
        self.tol = tol if tol is not None else s.samples["tolerance"]
        self.seed = seed if seed is not None else s.samples["seed"]
        self.count = count if count is not None else s.samples["count"]
        self.domain = build_domain(s.domain)
        self._samples = None
        self.forms = {
            name: self._build_form(table) for name, table in s.forms.items()
        }
        self.maps = {
            name: HoloMap(self.n, tuple(
                parse_expression(c, s.variables) for c in comps
            ))
            for name, comps in s.maps.items()
        }
        self.lifts = {name: self._build_lift(table)
                      for name, table in s.lifts.items()}
        self.loops = [self._build_loop(l) for l in s.loops]

    def _build_form(self, table) -> DiffForm:
        coeffs = {}
        degree = None
        for key, text in table.items():
            idx = parse_form_key(key, self.variables)
            if degree is None:
                degree = len(idx)
            elif len(idx) != degree:
                raise ConfigurationError("mixed degrees in one form")
            coeffs[idx] = parse_expression(text, self.variables)
        return DiffForm(self.n, degree if degree is not None else 1, coeffs)

    def _build_lift(self, table) -> lf.Lift:
        nu = self._build_form(table["nu"]) if table["nu"] else fm.zero_form(self.n, 1)
        twist = (self._build_form(table["twist"]) if table["twist"]
                 else fm.zero_form(self.n, 1))
        omega = fm.exterior_derivative(nu)
        S = SymplecticData(omega, self.n // 2, self.domain)
        return lf.make_lift(S, nu, twist, samples=self.samples())

    def _build_loop(self, spec) -> Path:
        coord = self.variables.index(spec["coordinate"])
        base = None
        if "base" in spec:
            base = tuple(
                complex(ha.evaluate(parse_expression(str(b), ()), ()))
                for b in spec["base"]
            )
        return fm.circle_loop(self.n, coord, float(spec.get("radius", 0.5)),
                              base_point=base)

    def samples(self):
        if self._samples is None:
            if self.domain is None:
                raise ConfigurationError("scenario declares no domain")
            self._samples = self.domain.sample(self.seed, self.count)
        return self._samples

    def constant(self, text) -> complex:
        return complex(ha.evaluate(parse_expression(str(text), ()), ()))

    def check_loops(self, chk) -> list:
        if "loop" in chk:
            return [self.loops[int(chk["loop"])]]
        if "loops" in chk:
            return [self.loops[int(i)] for i in chk["loops"]]
        return list(self.loops)


# ---------------------------------------------------------------------------
# Check handlers


@dataclass
class CheckResult:
    id: str
    op: str
    passed: bool
    expect: str
    residuals: Dict[str, float] = field(default_factory=dict)
    values: Dict[str, list] = field(default_factory=list)
    error: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.values, dict):
            self.values = {}


def _cx(v: complex) -> list:
    v = complex(v)
    return [v.real, v.imag]


def _run_contact_check(ctx: _Context, chk) -> CheckResult:
    xi = ctx.forms[chk["form"]]
    N = (ctx.n - 1) // 2
    rep = contact_check(ContactData(xi, N), ctx.samples(), ctx.tol)
    return CheckResult(chk["id"], chk["op"], rep.min_volume > ctx.tol,
                       chk.get("expect", "pass"),
                       residuals={"min_volume": rep.min_volume})


def _run_symplectic_check(ctx: _Context, chk) -> CheckResult:
    omega = ctx.forms[chk["form"]]
    N = ctx.n // 2
    rep = symplectic_check(SymplecticData(omega, N), ctx.samples(), ctx.tol)
    return CheckResult(chk["id"], chk["op"], rep.passed,
                       chk.get("expect", "pass"),
                       residuals={"max_dclosed": rep.max_dclosed,
                                  "min_top": rep.min_top})


def _run_reeb_check(ctx: _Context, chk) -> CheckResult:
    xi = ctx.forms[chk["form"]]
    N = (ctx.n - 1) // 2
    expected = [ctx.constant(c) for c in chk["expected"]]
    C = ContactData(xi, N)
    worst = 0.0
    for p in ctx.samples()[:5]:
        v = reeb_solve(C, p)
        worst = max(worst, max(abs(a - b) for a, b in zip(v, expected)))
    return CheckResult(chk["id"], chk["op"], worst < 1e-9,
                       chk.get("expect", "pass"),
                       residuals={"deviation": worst})


def _run_validate_lift(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    rep = lf.validate_lift(L, seed=ctx.seed, count=ctx.count, tol=ctx.tol)
    return CheckResult(
        chk["id"], chk["op"], rep.passed, chk.get("expect", "pass"),
        residuals={
            "curvature": rep.curvature_residual,
            "reeb_pairing": rep.reeb_pairing_residual,
            "reeb_contraction": rep.reeb_contraction_residual,
            "min_volume": rep.min_volume,
        },
    )


def _run_pullback_matches(ctx: _Context, chk) -> CheckResult:
    F = ctx.maps[chk["map"]]
    a = ctx.forms[chk["form"]]
    expected = ctx.forms[chk["expected"]]
    pulled = fm.pullback_form(F, a)
    worst = 0.0
    for p in ctx.samples():
        diff = pulled.at(p) - expected.at(p)
        scale = 1.0 + expected.at(p).max_abs()
        worst = max(worst, diff.max_abs() / scale)
    return CheckResult(chk["id"], chk["op"], worst < ctx.tol,
                       chk.get("expect", "pass"),
                       residuals={"relative": worst})


def _run_scale_factor(ctx: _Context, chk) -> CheckResult:
    F = ctx.maps[chk["map"]]
    omega = ctx.forms[chk["form"]]
    S = SymplecticData(omega, ctx.n // 2, ctx.domain)
    expect = chk.get("expect", "pass")
    try:
        lam = lf.scale_factor(F, S, ctx.samples(), tol=max(ctx.tol, 1e-8))
    except NotScaleSymplectic as exc:
        ok = expect == "error"
        return CheckResult(chk["id"], chk["op"], ok, expect,
                           residuals={"residual": exc.max_residual or 0.0},
                           error="NotScaleSymplectic")
    if expect == "error":
        return CheckResult(chk["id"], chk["op"], False, expect,
                           values={"lambda": _cx(lam)})
    dev = abs(lam - ctx.constant(chk["expected_lambda"])) \
        if "expected_lambda" in chk else 0.0
    return CheckResult(chk["id"], chk["op"], dev < max(ctx.tol, 1e-8), expect,
                       residuals={"deviation": dev},
                       values={"lambda": _cx(lam)})


def _run_theta_class(ctx: _Context, chk) -> CheckResult:
    L1 = ctx.lifts[chk["lift"]]
    L2 = ctx.lifts[chk["other"]]
    loops = ctx.check_loops(chk)
    pv = lf.theta_class(L1, L2, loops, samples=ctx.samples(), tol=ctx.tol)
    expected = [ctx.constant(c) for c in chk["expected"]]
    dev = max(abs(v - e) for v, e in zip(pv.values, expected))
    return CheckResult(chk["id"], chk["op"], dev < max(ctx.tol, 1e-9),
                       chk.get("expect", "pass"),
                       residuals={"deviation": dev},
                       values={f"period_{k}": _cx(v)
                               for k, v in enumerate(pv.values)})


def _run_monodromy(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    nu_ref = ctx.forms[chk["potential"]]
    loop = ctx.check_loops(chk)[0]
    value = lf.monodromy(L, nu_ref, loop, samples=ctx.samples(), tol=ctx.tol)
    dev = abs(value - ctx.constant(chk["expected"]))
    return CheckResult(chk["id"], chk["op"], dev < max(ctx.tol, 1e-9),
                       chk.get("expect", "pass"),
                       residuals={"deviation": dev},
                       values={"monodromy": _cx(value)})


def _run_is_fit(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    nu_ref = ctx.forms[chk["potential"]]
    result = lf.is_fit(L, nu_ref, ctx.check_loops(chk),
                       tol=max(ctx.tol, 1e-9), samples=ctx.samples())
    ok = result.fit == bool(chk["expected"])
    return CheckResult(chk["id"], chk["op"], ok, chk.get("expect", "pass"),
                       residuals={"max_period": result.periods.max_abs()})


def _run_are_equivalent(ctx: _Context, chk) -> CheckResult:
    L1 = ctx.lifts[chk["lift"]]
    L2 = ctx.lifts[chk["other"]]
    expect = chk.get("expect", "equivalent")
    result = lf.are_equivalent(L1, L2, ctx.check_loops(chk),
                               tol=max(ctx.tol, 1e-9), samples=ctx.samples())
    if isinstance(result, lf.Obstruction):
        return CheckResult(
            chk["id"], chk["op"], expect == "obstructed", expect,
            residuals={"max_period": result.periods.max_abs()},
        )
    res = result.residual(L1.total_samples(ctx.seed, min(ctx.count, 25)))
    return CheckResult(chk["id"], chk["op"],
                       expect == "equivalent" and res < max(ctx.tol, 1e-9),
                       expect, residuals={"pullback": res})


def _run_lift_automorphism(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    F = ctx.maps[chk["map"]]
    expect = chk.get("expect", "lifted")
    result = lf.lift_automorphism(L, F, ctx.check_loops(chk),
                                  tol=max(ctx.tol, 1e-9),
                                  samples=ctx.samples())
    if isinstance(result, lf.Obstruction):
        ok = expect == "obstructed"
        dev = 0.0
        if "expected_period" in chk:
            dev = abs(result.periods.values[0]
                      - ctx.constant(chk["expected_period"]))
            ok = ok and dev < 1e-8
        return CheckResult(chk["id"], chk["op"], ok, expect,
                           residuals={"period_deviation": dev},
                           values={"period": _cx(result.periods.values[0])})
    res = result.residual(L.total_samples(ctx.seed, min(ctx.count, 25)))
    return CheckResult(chk["id"], chk["op"],
                       expect == "lifted" and res < 1e-8, expect,
                       residuals={"pullback": res},
                       values={"lambda": _cx(result.lam)})


def _run_lift_disc_check(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    phi = HoloMap(1, tuple(
        parse_expression(c, ("t",)) for c in chk["disc"]
    ))
    y0 = ctx.constant(chk.get("y0", "0"))
    ld = lf.lift_disc(L, phi, y0)
    expected = parse_expression(chk["expected_y"], ("t",))
    pts = [p[0] for p in Disc(1.0).sample(ctx.seed, 64)]
    worst = max(abs(ld.y(z) - ha.evaluate(expected, (z,))) for z in pts)
    res = ld.legendrian_residual(pts[:8])
    return CheckResult(chk["id"], chk["op"],
                       worst < 1e-10 and res < 1e-11,
                       chk.get("expect", "pass"),
                       residuals={"value": worst, "legendrian": res})


def _horizontal_vector(L: lf.Lift, p_total, raw) -> tuple:
    """Complete a base direction to a contact-plane vector at p_total."""
    eta = L.potential()
    fiber = eta.at(p_total[:-1]).apply([raw])
    return tuple(raw) + (fiber,)


def _run_metric_equality(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    count = int(chk.get("count", 50))
    pts = L.base.domain.sample(ctx.seed, count, margin=0.05)
    dirs = L.base.domain.sample(ctx.seed + 7, count)
    ys = Disc(1.0).sample(ctx.seed + 13, count)
    worst_val = 0.0
    worst_leg = 0.0
    worst_tan = 0.0
    for p, d, y in zip(pts, dirs, ys):
        p_total = p + y
        u = _horizontal_vector(L, p_total, d)
        cert = mt.kappa_V(L, p_total, u, tol=1e-8)
        base_val = dom.model_kappa(L.base.domain, p, d)
        worst_val = max(worst_val, abs(cert.value - base_val))
        tangent = cert.witness_tangent()
        scaled = tuple(cert.witness_scale * x for x in u)
        worst_tan = max(worst_tan,
                        max(abs(a - b) for a, b in zip(tangent, scaled)))
    for p, d, y in list(zip(pts, dirs, ys))[:5]:
        p_total = p + y
        u = _horizontal_vector(L, p_total, d)
        cert = mt.kappa_V(L, p_total, u, tol=1e-8)
        worst_leg = max(worst_leg,
                        cert.witness.legendrian_residual([0.1, -0.3, 0.2j]))
    ok = worst_val < 1e-10 and worst_leg < 1e-10 and worst_tan < 1e-8
    return CheckResult(chk["id"], chk["op"], ok, chk.get("expect", "pass"),
                       residuals={"value": worst_val, "legendrian": worst_leg,
                                  "tangent": worst_tan})


def _run_dist_sandwich(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    count = int(chk.get("count", 25))
    ps = L.base.domain.sample(ctx.seed, count, margin=0.05)
    qs = L.base.domain.sample(ctx.seed + 3, count, margin=0.05)
    worst_gap = 0.0
    worst_fiber = 0.0
    for p, q in zip(ps, qs):
        if p == q:
            continue
        value, chain = mt.dist_to_fiber(L, p + (0.0,), q)
        worst_fiber = max(worst_fiber,
                          abs(value - dom.model_dist(L.base.domain, p, q)))
        # fiber-matched endpoint: the chain's own landing point
        bounds = mt.dist_bounds(L, p + (0.0,), chain.end)
        worst_gap = max(worst_gap, bounds.upper - bounds.lower)
    ok = worst_gap < 1e-6 and worst_fiber < 1e-8
    return CheckResult(chk["id"], chk["op"], ok, chk.get("expect", "pass"),
                       residuals={"sandwich": worst_gap,
                                  "fiber_dist": worst_fiber})


def _run_pullback_lift_check(ctx: _Context, chk) -> CheckResult:
    L = ctx.lifts[chk["lift"]]
    F = ctx.maps[chk["map"]]
    expect = chk.get("expect", "pass")
    try:
        pulled = lf.pullback_lift(F, L, ctx.domain, samples=ctx.samples())
    except DegeneratePullback as exc:
        return CheckResult(chk["id"], chk["op"], expect == "error", expect,
                           residuals={"min_top": exc.min_top or 0.0},
                           error="DegeneratePullback")
    if expect == "error":
        return CheckResult(chk["id"], chk["op"], False, expect)
    rep = lf.validate_lift(pulled, seed=ctx.seed, count=min(ctx.count, 50),
                           tol=ctx.tol)
    return CheckResult(chk["id"], chk["op"], rep.passed, expect,
                       residuals={"curvature": rep.curvature_residual,
                                  "min_volume": rep.min_volume})


def _run_local_connect_check(ctx: _Context, chk) -> CheckResult:
    r = float(chk.get("r", 1.0))
    p = tuple(ctx.constant(c) for c in chk["point"])
    curve = mt.local_connect(r, p)
    L = lf.standard_lift(1, Ball(2, r))
    res = mt.tangency_residual(L, curve)
    if curve.segments:
        end_gap = max(abs(x) for x in curve.end())
        start_gap = max(abs(a - b) for a, b in zip(curve.start(), p))
    else:
        end_gap = start_gap = max(abs(x) for x in p)
    ok = res < 1e-12 and end_gap == 0.0 and start_gap == 0.0
    return CheckResult(chk["id"], chk["op"], ok, chk.get("expect", "pass"),
                       residuals={"tangency": res, "end_gap": end_gap,
                                  "start_gap": start_gap})


def _run_kappa_box_check(ctx: _Context, chk) -> CheckResult:
    r = float(chk.get("r", 1.0))
    p = tuple(ctx.constant(c) for c in chk["point"])
    u = tuple(ctx.constant(c) for c in chk["direction"])
    bound = mt.kappa_upper_box(r, p, u)
    dev = abs(bound - float(ctx.constant(chk["expected"]).real))
    return CheckResult(chk["id"], chk["op"], dev < 1e-10,
                       chk.get("expect", "pass"),
                       residuals={"deviation": dev},
                       values={"bound": [bound, 0.0]})


_HANDLERS = {
    "contact_check": _run_contact_check,
    "symplectic_check": _run_symplectic_check,
    "reeb_check": _run_reeb_check,
    "validate_lift": _run_validate_lift,
    "pullback_matches": _run_pullback_matches,
    "scale_factor": _run_scale_factor,
    "theta_class": _run_theta_class,
    "monodromy": _run_monodromy,
    "is_fit": _run_is_fit,
    "are_equivalent": _run_are_equivalent,
    "lift_automorphism": _run_lift_automorphism,
    "lift_disc_check": _run_lift_disc_check,
    "metric_equality": _run_metric_equality,
    "dist_sandwich": _run_dist_sandwich,
    "pullback_lift_check": _run_pullback_lift_check,
    "local_connect_check": _run_local_connect_check,
    "kappa_box_check": _run_kappa_box_check,
}


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Report:
    scenario: str
    seed: int
    checks: List[CheckResult]
    wall_time: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "timestamp": self.wall_time,
            "all_passed": bool(self.all_passed),
            "checks": [
                {
                    "id": c.id,
                    "op": c.op,
                    "pass": bool(c.passed),
                    "expect": c.expect,
                    "residuals": {k: float(v) for k, v in c.residuals.items()},
                    "values": {k: [float(x) for x in v]
                               for k, v in c.values.items()},
                    "error": c.error,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["check_id", "pass", "max_residual",
                         "value_re", "value_im"])
        for c in self.checks:
            worst = max(c.residuals.values(), default=0.0)
            value = next(iter(c.values.values()), ["", ""])
            writer.writerow([c.id, c.passed, repr(worst), value[0], value[1]])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario} (seed {self.seed})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            worst = max(c.residuals.values(), default=0.0)
            lines.append(f"  [{status}] {c.id} ({c.op}) residual {worst:.3e}")
        lines.append(f"result: {'PASS' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def run_scenario(s: Scenario, tol: Optional[float] = None,
                 seed: Optional[int] = None,
                 count: Optional[int] = None) -> Report:
    """Run every check, collecting failures instead of aborting."""
    start = time.time()
    ctx = _Context(s, tol, seed, count)
    results = []
    for chk in s.checks:
        handler = _HANDLERS[chk["op"]]
        try:
            result = handler(ctx, chk)
            if chk.get("expect") == "fail" and result.error is None:
                result.passed = not result.passed
            results.append(result)
        except ContactLiftError as exc:
            expect = chk.get("expect", "pass")
            ok = expect == "error" and (
                chk.get("error") in (None, type(exc).__name__)
            )
            results.append(CheckResult(chk["id"], chk["op"], ok, expect,
                                       error=type(exc).__name__))
    return Report(s.name, ctx.seed, results, time.time() - start)


# ---------------------------------------------------------------------------
# Built-in scenarios

from .builtins import BUILTINS  # noqa: E402  (data-only module)


def list_builtins():
    return [(name, desc) for name, (desc, _) in sorted(BUILTINS.items())]


def get_builtin(name: str) -> Scenario:
    if name not in BUILTINS:
        raise ConfigurationError(f"unknown builtin {name!r}")
    return parse_scenario(BUILTINS[name][1])


# ---------------------------------------------------------------------------
# Entry point


def _emit(report: Report, fmt: str, out: Optional[str]) -> None:
    text = {"json": report.to_json, "csv": report.to_csv,
            "text": report.to_text}[fmt]()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="contactlift",
        description="verify contact lift scenarios and built-in suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("verify", "builtin"):
        p = sub.add_parser(cmd)
        p.add_argument("target")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--format", choices=("text", "json", "csv"),
                       default=None)
        p.add_argument("--out", default=None)
    sub.add_parser("list")
    args = parser.parse_args(argv)
    if args.command == "list":
        for name, desc in list_builtins():
            sys.stdout.write(f"{name}: {desc}\n")
        return 0
    try:
        if args.command == "builtin":
            scenario = get_builtin(args.target)
        else:
            with open(args.target) as fh:
                scenario = parse_scenario(fh.read())
        report = run_scenario(scenario, args.tol, args.seed, args.samples)
    except (ConfigurationError, OSError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    fmt = args.format or scenario.output["format"]
    _emit(report, fmt, args.out)
    return 0 if report.all_passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
