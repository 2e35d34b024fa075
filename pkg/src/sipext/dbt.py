"""Darboux-Backlund transformations seeded by prolonged eigenstates.

A seed level n with E_n < 0 whose eigenfunction keeps one sign on the whole
domain gives a regular extension V^(n) = V + 2 w_n'.  This module builds the
extension, its eigenstates and the associated polynomials exactly, certifies
regularity by Sturm counting, and checks the enlarged shape-invariance
identity for Morse and HDPT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .charts import ChartExpr, Family, chart_for
from .exact import Poly, RationalFunction, sturm_count
from .orthopoly import jacobi, laguerre
from .potentials import (
    EigenstateRep,
    ParameterSet,
    Sector,
    SectorClass,
    bound_indices,
    classify_sector,
    dispersion,
    eigenfunction,
    ground_gauge,
    jacobi_params,
    potential_expr,
    rs_function,
    state_polynomial,
)


class NotInDisconjugacyRegime(ValueError):
    """The seed energy is not negative."""


class UncertifiedSeed(ValueError):
    pass


class UnsupportedFamily(ValueError):
    """No enlarged shape-invariance identity is established for this family."""


@dataclass(frozen=True)
class ExtensionSpec:
    """Family parameters plus the seed level n.

    Construction does not certify; the operations that need a regular seed
    call :func:`require_certified`.
    """

    params: ParameterSet
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("seed level must be >= 0")

    @property
    def family(self) -> Family:
        return self.params.family

    @property
    def sector(self) -> SectorClass:
        return classify_sector(self.params, self.n)

    def as_dict(self) -> dict:
        return {"family": self.family.value, **self.params.as_dict(), "n": self.n}


@dataclass(frozen=True)
class RegularityCertificate:
    spec: ExtensionSpec
    node_count: int
    left_sign: int
    right_sign: int
    sector: Sector
    case: str | None
    energy: Fraction
    verdict: str  # "certified-regular" or "rejected"
    isospectral_kind: str | None  # "strict", "quasi" or None when rejected
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == "certified-regular"


@lru_cache(maxsize=512)
def certify_regularity(spec: ExtensionSpec) -> RegularityCertificate:
    """Sturm-count the seed polynomial on the physical chart interval."""
    energy = dispersion(spec.params, spec.n)
    if energy >= 0:
        raise NotInDisconjugacyRegime(
            f"E_{spec.n} = {energy} >= 0: seed is not in a disconjugacy sector")
    sector = spec.sector
    chart = chart_for(spec.family)
    seed = state_polynomial(spec.params, spec.n)
    nodes = sturm_count(seed, chart.interval)
    signs = sector.signs
    ok = nodes == 0 and signs.agree and sector.admits_extension
    if ok:
        kind = "strict" if sector.kind is Sector.STRICT else "quasi"
        reason = ("1/psi_n is normalizable: it is the ground state of V^(n) at E_n"
                  if kind == "quasi" else "1/psi_n is not normalizable: spectrum unchanged")
    else:
        kind = None
        if nodes:
            reason = f"seed has {nodes} node(s) on the physical interval"
        elif sector.kind is Sector.DEGENERATE:
            reason = "an endpoint limit coefficient vanishes"
        elif not signs.agree:
            reason = "seed has opposite signs at the two ends"
        else:
            reason = f"sector {sector.kind.value} does not admit an extension"
    return RegularityCertificate(spec, nodes, signs.left, signs.right, sector.kind, sector.case,
                                 energy, "certified-regular" if ok else "rejected", kind, reason)


def require_certified(spec: ExtensionSpec, strict: bool = False) -> RegularityCertificate:
    cert = certify_regularity(spec)
    if not cert.certified:
        raise UncertifiedSeed(f"seed n={spec.n} rejected: {cert.reason}")
    if strict and cert.isospectral_kind != "strict":
        raise UncertifiedSeed(f"seed n={spec.n} gives a quasi-isospectral extension")
    return cert


def _rs(params: ParameterSet, n: int) -> ChartExpr:
    return _rs_cached(params, n)


@lru_cache(maxsize=1024)
def _rs_cached(params: ParameterSet, n: int) -> ChartExpr:
    return rs_function(params, n).expr


@dataclass(frozen=True)
class ExtendedPotentialRep:
    spec: ExtensionSpec
    rf: RationalFunction  # full potential, chart variable
    delta: RationalFunction  # rf - V
    isospectral_kind: str


def extension_term(params: ParameterSet, n: int) -> ChartExpr:
    """2 w_n' in the chart variable."""
    return chart_for(params.family).ddx(_rs(params, n)) * 2


def _extend_unchecked(params: ParameterSet, n: int) -> ChartExpr:
    return potential_expr(params) + extension_term(params, n)


def extend_potential(spec: ExtensionSpec) -> ExtendedPotentialRep:
    cert = require_certified(spec)
    delta = extension_term(spec.params, spec.n)
    full = potential_expr(spec.params) + delta
    return ExtendedPotentialRep(spec, full.rf, delta.rf, cert.isospectral_kind)


def transformed_rs(spec: ExtensionSpec, k: int) -> ChartExpr:
    """w_k^(n) = -w_n + (E_k - E_n)/(w_n - w_k)."""
    if k == spec.n:
        raise ValueError("k must differ from the seed level")
    p, n = spec.params, spec.n
    wn, wk = _rs(p, n), _rs(p, k)
    return -wn + (dispersion(p, k) - dispersion(p, n)) / (wn - wk)


# ---------------------------------------------------------------------------
# extended polynomials and eigenstates


def _eckart_term(p: ParameterSet, n: int, k: int) -> Poly:
    y = Poly.x("y")
    an, bn = jacobi_params(p, n)
    pn, pk = state_polynomial(p, n), state_polynomial(p, k)
    qn = jacobi(n - 1, an + 1, bn + 1, "y")
    return ((y + 1) * an + (y - 1) * bn) * pn * pk + (y * y - 1) * (n + an + bn + 1) * pk * qn


def _hrm_term(p: ParameterSet, n: int, k: int) -> Poly:
    y = Poly.x("y")
    ak, bk = jacobi_params(p, k)
    pn, pk = state_polynomial(p, n), state_polynomial(p, k)
    qk = jacobi(k - 1, ak + 1, bk + 1, "y")
    return (1 - y * y) * (k + ak + bk + 1) * pn * qk - ((1 + y) * ak - (1 - y) * bk) * pn * pk


def extended_bracket(params: ParameterSet, n: int, k: int) -> Poly:
    """Numerator polynomial of psi_k^(n), as an algebraic expression in (n, k).

    Swapping n and k negates it for every family.
    """
    f = params.family
    if f is Family.MORSE:
        a = params.a
        L = lambda m, alpha: laguerre(m, alpha, "y").scale_var(2 * params.b)
        an, ak = 2 * (a - n), 2 * (a - k)
        return (2 * a - k) * L(n, an) * L(k - 1, ak) - (2 * a - n) * L(k, ak) * L(n - 1, an)
    if f is Family.HDPT:
        al, be = params.alpha, params.beta
        P = lambda m, x, y_: jacobi(m, x, y_, "z")
        return ((k + al - be + 1) * P(n, al, -be) * P(k - 1, al + 1, 1 - be)
                - (n + al - be + 1) * P(n - 1, al + 1, 1 - be) * P(k, al, -be))
    if f is Family.ECKART:
        return _eckart_term(params, n, k) - _eckart_term(params, k, n)
    return _hrm_term(params, n, k) - _hrm_term(params, k, n)


@dataclass(frozen=True)
class ExtendedOrthoPoly:
    spec: ExtensionSpec
    k: int
    poly: Poly
    expected_degree: int

    @property
    def degenerate(self) -> bool:
        return self.poly.degree != self.expected_degree


def _check_bound(spec: ExtensionSpec, k: int) -> None:
    if k not in bound_indices(spec.params):
        raise ValueError(f"k={k} is not a bound level of {spec.family.value}")


def extended_polynomial(spec: ExtensionSpec, k: int) -> ExtendedOrthoPoly:
    require_certified(spec, strict=True)
    _check_bound(spec, k)
    return ExtendedOrthoPoly(spec, k, extended_bracket(spec.params, spec.n, k), spec.n + k - 1)


# psi_k^(n) = scale * (shifted gauge) * bracket / seed; scale makes it equal (w_n - w_k) psi_k
_SCALE = {Family.MORSE: Fraction(1), Family.HDPT: Fraction(2),
          Family.ECKART: Fraction(1, 2), Family.HRM: Fraction(1, 2)}


def extended_gauge(params: ParameterSet, k: int) -> tuple:
    if params.family is Family.HDPT:
        half = Fraction(1, 2)
        return (("sinh", params.alpha + 1 + half), ("cosh", -(params.beta - 1) + half))
    return ground_gauge(params, k)


def extended_eigenstate(spec: ExtensionSpec, k: int) -> EigenstateRep:
    ep = extended_polynomial(spec, k)
    p = spec.params
    return EigenstateRep(p, k, extended_gauge(p, k), ep.poly, state_polynomial(p, spec.n),
                         _SCALE[p.family], f"psi_{k}^({spec.n})")


def operator_form(spec: ExtensionSpec, k: int) -> ChartExpr:
    """(w_n - w_k) * P_k: the operator image of psi_k with psi_k's gauge stripped."""
    p = spec.params
    chart = chart_for(p.family)
    return (_rs(p, spec.n) - _rs(p, k)) * chart.expr(RationalFunction.coerce(state_polynomial(p, k)))


def closed_form(spec: ExtensionSpec, k: int) -> ChartExpr:
    """psi_k^(n) divided by psi_k's gauge factor, exactly."""
    state = extended_eigenstate(spec, k)
    chart = chart_for(spec.family)
    ratio = chart.expr(1)
    if spec.family is Family.HDPT:
        ratio = chart.expr(Fraction(1, 2), odd=True)  # sinh x cosh x = s/2
    return ratio * state.scale * chart.expr(RationalFunction(state.poly, state.den))


def ground_state_of_quasi(spec: ExtensionSpec) -> EigenstateRep:
    """1/psi_n, the extra ground state of a quasi-isospectral extension."""
    cert = require_certified(spec)
    if cert.isospectral_kind != "quasi":
        raise UncertifiedSeed("1/psi_n is only a bound state for quasi-isospectral seeds")
    return eigenfunction(spec.params, spec.n).reciprocal()


# ---------------------------------------------------------------------------
# superpartner and enlarged shape invariance


def superpartner(spec: ExtensionSpec, route: str = "susy") -> ExtendedPotentialRep:
    """SUSY partner of V^(n) built on its ground level k = 0.

    route="susy": V^(n) + 2 (w_0^(n))';  route="direct": V - 2 (E_n/(w_n - w_0))'.
    """
    require_certified(spec, strict=True)
    p, n = spec.params, spec.n
    if 0 not in bound_indices(p):
        raise ValueError("no bound ground level")
    chart = chart_for(p.family)
    if route == "susy":
        full = _extend_unchecked(p, n) + chart.ddx(transformed_rs(spec, 0)) * 2
    elif route == "direct":
        wn, w0 = _rs(p, n), _rs(p, 0)
        full = potential_expr(p) - chart.ddx(dispersion(p, n) / (wn - w0)) * 2
    else:
        raise ValueError(f"unknown route {route!r}")
    base = potential_expr(p)
    return ExtendedPotentialRep(spec, full.rf, (full - base).rf, "superpartner")


def w_term(spec: ExtensionSpec) -> ChartExpr:
    """W = w_0 + E_n/(w_n - w_0), so that V~^(n) = V(a-1) + E_1 - 2 W'."""
    p, n = spec.params, spec.n
    wn, w0 = _rs(p, n), _rs(p, 0)
    return w0 + dispersion(p, n) / (wn - w0)


@dataclass(frozen=True)
class ShapeInvarianceResult:
    spec: ExtensionSpec
    residual: ChartExpr
    e1: Fraction

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()


def verify_enlarged_shape_invariance(spec: ExtensionSpec) -> ShapeInvarianceResult:
    """Residual V~^(n)(a) - V^(n-1)(a_1) - E_1(a); zero when the identity holds."""
    if spec.family not in (Family.MORSE, Family.HDPT):
        raise UnsupportedFamily(
            f"no enlarged shape-invariance identity is established for {spec.family.value}")
    if spec.n < 1:
        raise ValueError("shape invariance needs a seed level n >= 1")
    p = spec.params
    partner = superpartner(spec)
    shifted = p.shifted()
    target = _extend_unchecked(shifted, spec.n - 1)
    e1 = dispersion(p, 1)
    chart = chart_for(p.family)
    residual = chart.expr(partner.rf) - target - e1
    return ShapeInvarianceResult(spec, residual, e1)
