"""Executable checks of the structure of submodules of a tilde module.

``divide`` builds, layer by layer, a polynomial ``f`` with ``y f`` agreeing
with a target ``z`` on ever higher levels. ``compressibility_probe`` and
``decompose`` compare that construction with the brute-force spans from
:mod:`atomspec.modact`. Every verdict is relative to a finite window.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput
from .modact import (
    ModuleElem, SpanBasis, act, cyclic_span, in_m_geq, make_basis, membership, min_level,
    project_level,
)
from .quiver import MaterializedQuiver, Tilde, _canonical_key, _window_vertices
from .series import ColorId, Series, addr_str


def _host(Q: MaterializedQuiver) -> Tilde:
    if not isinstance(Q.expr, Tilde):
        raise InvalidInput("this check needs a tilde quiver")
    return Q.expr


def leading_vertex(y: ModuleElem):
    """``(i, u)``: the minimal level of ``y`` and the first inner vertex used there."""
    i = min_level(y)
    lead = min((a for a in y.coeffs if a[0] == i), key=lambda a: _canonical_key(y.host, a))
    return i, lead[1:]


def divide_with_residual(Q: MaterializedQuiver, y: ModuleElem, z: ModuleElem, D: int):
    """Run ``D`` rounds of the division and return ``(f, z - y f)``.

    With ``i = min_level(y)`` and ``u`` its leading inner vertex, round ``d``
    reads the level ``i + d`` part ``sum_v mu_v x_(i+d, v)`` of the current
    remainder and adds ``sum_v mu_v c_uu^(d-1) c_uv``, which clears that
    layer. The returned remainder therefore lies in ``M_{>= i + D + 1}``.
    """
    tilde = _host(Q)
    if y.host is not tilde and y.host != tilde:
        raise InvalidInput("y belongs to a different quiver")
    if y.is_zero():
        raise InvalidInput("cannot divide by zero")
    if D < 0:
        raise InvalidInput("depth must be non-negative")
    i, u = leading_vertex(y)
    if not in_m_geq(z, i + 1):
        raise InvalidInput(f"target must lie at levels >= {i + 1}")
    lam = y.coeffs[(i,) + u]
    y1 = y.scale(1 / lam)
    loop = ColorId.cross(tilde.site, u, u)
    f = Series.zero()
    rest = z
    for d in range(1, D + 1):
        layer = project_level(rest, i + d)
        if layer.is_zero():
            continue
        f_d = Series({(loop,) * (d - 1) + (ColorId.cross(tilde.site, u, a[1:]),): mu
                      for a, mu in layer.coeffs.items()})
        rest = rest - act(Q, y1, f_d)
        f = f + f_d
    return f.scale(1 / lam), rest


def divide(Q: MaterializedQuiver, y: ModuleElem, z: ModuleElem, D: int) -> Series:
    return divide_with_residual(Q, y, z, D)[0]


@dataclass
class Check:
    target: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"target": self.target, "pass": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    claim: str
    window: int
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = {"claim": self.claim, "window": self.window,
               "checks": [c.to_json() for c in self.checks], "pass": self.passed}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _inner_window(tilde: Tilde, window: int) -> list:
    return _window_vertices(tilde.inner, window)


def compressibility_probe(Q: MaterializedQuiver, y: ModuleElem, window: int) -> Report:
    """Certify that each ``x_(j, w)`` with ``min_level(y) < j <= window`` lies in ``yF``.

    Each target is checked twice: the division must leave no remainder at
    levels ``<= window``, and the target must be in the brute-force span of
    ``y`` modulo everything above ``window``.
    """
    tilde = _host(Q)
    if y.is_zero():
        raise InvalidInput("probe needs a nonzero element")
    if window > Q.budget - 1:
        raise InvalidInput(f"window {window} must be at most budget - 1 = {Q.budget - 1}")
    i = min_level(y)
    report = Report("every x_(j,w) with min_level(y) < j <= window lies in yF", window)
    if i >= window:
        report.notes.append(f"nothing to check: min level {i} >= window {window}")
        return report
    D = window - i
    span = cyclic_span(Q, [y], D, quotient_level=window)
    for j in range(i + 1, window + 1):
        for w in _inner_window(tilde, window):
            addr = (j,) + w
            z = ModuleElem.basis(tilde, addr)
            f, rest = divide_with_residual(Q, y, z, D)
            low = [a for a in rest.coeffs if a[0] <= window]
            in_span = membership(z, span) is not None
            ok = not low and in_span
            detail = "" if ok else (f"remainder inside window: {bool(low)}, "
                                    f"oracle membership: {in_span}")
            report.checks.append(Check(addr_str(addr), ok, detail))
    return report


@dataclass
class Decomposition:
    i: int
    layer_basis: SpanBasis
    certified: bool
    window: int
    report: Report


def decompose(Q: MaterializedQuiver, generators: list, L: int) -> Decomposition:
    """Split the submodule generated by ``generators`` as a layer plus everything above it.

    Works modulo the levels above ``W = min(budget, i + L)``. The certificate
    checks that inside this window the span equals the span of its layer-``i``
    part together with every basis vector at levels ``i + 1 .. W``.
    """
    tilde = _host(Q)
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise InvalidInput("generators are all zero")
    i = min(min_level(g) for g in gens)
    W = min(Q.budget, i + L)
    span = cyclic_span(Q, gens, L, quotient_level=W)
    report = Report("L = (L cap M_i) + M_{>= i+1}", W)

    lowest = min((p[0] for p in span.pivots), default=None)
    report.checks.append(Check("minimal level of the span", lowest == i,
                               f"found {lowest}, expected {i}"))
    layer_rows = [project_level(r, i) for r in span.rows]
    layer = make_basis(Q, [r for r in layer_rows if not r.is_zero()], quotient_level=W)
    upper = [ModuleElem.basis(tilde, (j,) + w)
             for j in range(i + 1, W + 1) for w in _inner_window(tilde, Q.budget)]
    whole = make_basis(Q, list(layer.rows) + upper, quotient_level=W)

    missing_upper = [u for u in upper if membership(u, span) is None]
    report.checks.append(Check("levels i+1..W contained in span", not missing_upper,
                               f"{len(missing_upper)} basis vectors missing"))
    missing_layer = [r for r in layer.rows if membership(r, span) is None]
    report.checks.append(Check("layer part contained in span", not missing_layer,
                               f"{len(missing_layer)} layer vectors missing"))
    extra = [r for r in span.rows if membership(r, whole) is None]
    report.checks.append(Check("span contained in layer + upper levels", not extra,
                               f"{len(extra)} rows outside"))
    return Decomposition(i, layer, report.passed, W, report)
