"""The four shape-invariant potentials with a finite bound-state spectrum.

Every family lives in an algebraic chart (see :mod:`sipext.charts`):

========  ===============  ===================
family    chart variable   physical range
========  ===============  ===================
Morse     y = exp(-x)      y in (0, inf)
HDPT      z = cosh 2x      z in (1, inf), x > 0
Eckart    y = coth x       y in (1, inf), x > 0
HRM       y = tanh x       y in (-1, 1)
========  ===============  ===================

All energies, parameters and threshold comparisons are exact rationals; the
square-root thresholds of the Eckart and HRM bound conditions are compared in
squared form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .charts import Chart, ChartExpr, Family, chart_for, gauge_log_derivative
from .exact import Poly, RationalFunction, as_rational
from .orthopoly import jacobi, jacobi_leading, laguerre, laguerre_leading, pochhammer


class InvalidParameters(ValueError):
    pass


class DispersionPole(ZeroDivisionError):
    """E_n is singular: HRM with n = a."""


class DegeneratePolynomial(ValueError):
    pass


@dataclass(frozen=True)
class ParameterSet:
    """Family plus exact parameters: (a, b) for Morse/Eckart/HRM, (alpha, beta) for HDPT.

    ``checked=False`` skips the family constraints; it is used internally for
    the translated parameters of shape-invariance identities, which are
    purely algebraic.
    """

    family: Family
    a: Fraction | None = None
    b: Fraction | None = None
    alpha: Fraction | None = None
    beta: Fraction | None = None
    checked: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        for name in ("a", "b", "alpha", "beta"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_rational(v))
        if self.family is Family.HDPT:
            if self.alpha is None or self.beta is None or self.a is not None or self.b is not None:
                raise InvalidParameters("hdpt takes alpha and beta only")
        elif self.a is None or self.b is None or self.alpha is not None or self.beta is not None:
            raise InvalidParameters(f"{self.family.value} takes a and b only")
        if self.checked:
            self.validate()

    def validate(self) -> None:
        f = self.family
        if f is Family.MORSE:
            if not (self.a > 0 and self.b > 0):
                raise InvalidParameters("morse requires a > 0 and b > 0")
        elif f is Family.HDPT:
            if not (self.alpha + 1 > Fraction(1, 2)):
                raise InvalidParameters("hdpt requires alpha + 1 > 1/2")
            if not (self.beta > self.alpha + 1):
                raise InvalidParameters("hdpt requires beta > alpha + 1")
        elif f is Family.ECKART:
            if not (self.a > 0 and self.b > 0):
                raise InvalidParameters("eckart requires a > 0 and b > 0")
            if not (self.a * self.a < self.b):
                raise InvalidParameters("eckart requires a² < b")
        else:
            if not (self.a > 0 and self.b > 0):
                raise InvalidParameters("hrm requires a > 0 and b > 0")
            if not (self.a * self.a > self.b):
                raise InvalidParameters("hrm requires a² > b")

    @property
    def level(self) -> Fraction:
        """The parameter a entering the dispersion relation ((beta-alpha-1)/2 for HDPT)."""
        if self.family is Family.HDPT:
            return (self.beta - self.alpha - 1) / 2
        return self.a

    def shifted(self) -> "ParameterSet":
        """Parameters of the shape-invariant partner (a -> a-1, or alpha+1, beta-1)."""
        if self.family is Family.HDPT:
            return ParameterSet(self.family, alpha=self.alpha + 1, beta=self.beta - 1, checked=False)
        if self.family is Family.MORSE:
            return ParameterSet(self.family, a=self.a - 1, b=self.b, checked=False)
        raise NotImplementedError("translation only defined here for morse and hdpt")

    def as_dict(self) -> dict:
        if self.family is Family.HDPT:
            return {"alpha": str(self.alpha), "beta": str(self.beta)}
        return {"a": str(self.a), "b": str(self.b)}


def morse(a, b) -> ParameterSet:
    return ParameterSet(Family.MORSE, a=a, b=b)


def hdpt(alpha, beta) -> ParameterSet:
    return ParameterSet(Family.HDPT, alpha=alpha, beta=beta)


def eckart(a, b) -> ParameterSet:
    return ParameterSet(Family.ECKART, a=a, b=b)


def hrm(a, b) -> ParameterSet:
    return ParameterSet(Family.HRM, a=a, b=b)


def make_params(family, **values) -> ParameterSet:
    return ParameterSet(Family.parse(family), **{k: v for k, v in values.items() if v is not None})


# ---------------------------------------------------------------------------
# potential and dispersion


def potential_rf(params: ParameterSet) -> RationalFunction:
    """V in the chart variable, including the constant that puts E_0 at 0."""
    f = params.family
    if f is Family.MORSE:
        a, b = params.a, params.b
        return RationalFunction.coerce(Poly([a * a, -(2 * a + 1) * b, b * b], "y"))
    if f is Family.HDPT:
        al, be = params.alpha, params.beta
        z = Poly.x("z")
        # 1/sinh^2 x = 2/(z-1), 1/cosh^2 x = 2/(z+1)
        c1 = (al + Fraction(1, 2)) * (al - Fraction(1, 2))
        c2 = (be + Fraction(1, 2)) * (be - Fraction(1, 2))
        v0 = (be - al - 1) ** 2
        return RationalFunction(Poly([2 * c1], "z"), z - 1) - RationalFunction(Poly([2 * c2], "z"), z + 1) + v0
    a, b = params.a, params.b
    if f is Family.ECKART:
        return RationalFunction.coerce(Poly([potential_constant(params), -2 * b, a * (a - 1)], "y"))
    return RationalFunction.coerce(Poly([potential_constant(params), 2 * b, a * (a + 1)], "y"))


def potential_constant(params: ParameterSet) -> Fraction:
    f = params.family
    if f is Family.MORSE:
        return params.a**2
    if f is Family.HDPT:
        return (params.beta - params.alpha - 1) ** 2
    if f is Family.ECKART:
        return params.b**2 / params.a**2 + params.a
    return params.b**2 / params.a**2 - params.a


def shifted_level(params: ParameterSet, n: int) -> Fraction:
    """a_n: a - n (Morse, HRM), a + n (Eckart), a - n for HDPT's a."""
    if params.family is Family.ECKART:
        return params.a + n
    return params.level - n


def dispersion(params: ParameterSet, n: int) -> Fraction:
    """Prolonged energy E_n, exact."""
    f = params.family
    a = params.level
    if f is Family.MORSE:
        return n * (2 * a - n)
    if f is Family.HDPT:
        return 4 * n * (2 * a - n)
    an = shifted_level(params, n)
    if an == 0:
        raise DispersionPole(f"E_n is singular at n = a = {params.a}")
    b = params.b
    return a * a + b * b / (a * a) - an * an - b * b / (an * an)


def bound_indices(params: ParameterSet) -> list[int]:
    """Normalizable levels; strict inequalities, square roots compared squared."""
    f = params.family
    a = params.level
    if f in (Family.MORSE, Family.HDPT):
        return list(range(0, math.ceil(a)))
    b = params.b
    out = []
    n = 0
    if f is Family.ECKART:
        while (a + n) ** 2 < b:
            out.append(n)
            n += 1
        return out
    while n < a and (a - n) ** 2 > b:
        out.append(n)
        n += 1
    return out


def jacobi_params(params: ParameterSet, n: int) -> tuple[Fraction, Fraction]:
    """(alpha_n, beta_n) of the Jacobi polynomial in psi_n."""
    f = params.family
    if f is Family.HDPT:
        return params.alpha, -params.beta
    an = shifted_level(params, n)
    if an == 0:
        raise DispersionPole("alpha_n, beta_n undefined at a_n = 0")
    b = params.b
    if f is Family.ECKART:
        return -an + b / an, -an - b / an
    if f is Family.HRM:
        return an + b / an, an - b / an
    raise ValueError("morse has no Jacobi parameters")


# ---------------------------------------------------------------------------
# eigenfunctions and RS functions


@dataclass(frozen=True)
class EigenstateRep:
    """scale * prod(base_i ** exponent_i) * poly(t) / den(t)."""

    params: ParameterSet
    n: int
    gauge: tuple  # ((base id, Fraction exponent), ...)
    poly: Poly
    den: Poly
    scale: Fraction = Fraction(1)
    label: str = ""

    @property
    def family(self) -> Family:
        return self.params.family

    @property
    def chart(self) -> Chart:
        return chart_for(self.family)

    def reciprocal(self) -> "EigenstateRep":
        return EigenstateRep(self.params, self.n, tuple((b, -e) for b, e in self.gauge),
                             self.den, self.poly, 1 / self.scale, f"1/{self.label}")


def ground_gauge(params: ParameterSet, n: int = 0) -> tuple:
    """Gauge factor of psi_0 with the level-n parameter substitution."""
    f = params.family
    if f is Family.MORSE:
        return (("y", params.a - n), ("exp_y", -params.b))
    if f is Family.HDPT:
        return (("sinh", params.alpha + Fraction(1, 2)), ("cosh", -params.beta + Fraction(1, 2)))
    al, be = jacobi_params(params, n)
    if f is Family.ECKART:
        return (("y-1", al / 2), ("y+1", be / 2))
    return (("1-y", al / 2), ("1+y", be / 2))


def state_polynomial(params: ParameterSet, n: int) -> Poly:
    """Polynomial part of psi_n, written in the chart variable."""
    f = params.family
    if n < 0:
        return Poly((), chart_for(f).var)
    if f is Family.MORSE:
        an = params.a - n
        return laguerre(n, 2 * an, "y").scale_var(2 * params.b)
    if f is Family.HDPT:
        return jacobi(n, params.alpha, -params.beta, "z")
    al, be = jacobi_params(params, n)
    return jacobi(n, al, be, "y")


def eigenfunction(params: ParameterSet, n: int) -> EigenstateRep:
    if n < 0:
        raise ValueError("n must be >= 0")
    var = chart_for(params.family).var
    return EigenstateRep(params, n, ground_gauge(params, n), state_polynomial(params, n),
                         Poly([1], var), Fraction(1), f"psi_{n}")


@dataclass(frozen=True)
class RSFunction:
    """w_n = -psi_n'/psi_n as an exact chart expression."""

    params: ParameterSet
    n: int
    expr: ChartExpr

    @property
    def chart(self) -> Chart:
        return chart_for(self.params.family)


def _ground_rs_expr(params: ParameterSet, n: int) -> ChartExpr:
    """w_0 evaluated at the level-n parameters (the gauge part of w_n)."""
    chart = chart_for(params.family)
    t = Poly.x(chart.var)
    f = params.family
    if f is Family.MORSE:
        return chart.expr(Poly([params.a - n, -params.b], "y"))
    if f is Family.HDPT:
        al, be = params.alpha, params.beta
        # -(alpha+1/2) coth x + (beta-1/2) tanh x, coth = s/(z-1), tanh = s/(z+1)
        rf = RationalFunction(Poly([-(al + Fraction(1, 2))], "z"), t - 1) + \
            RationalFunction(Poly([be - Fraction(1, 2)], "z"), t + 1)
        return chart.expr(rf, odd=True)
    al, be = jacobi_params(params, n)
    if f is Family.ECKART:
        return chart.expr((t + 1) * (al / 2) + (t - 1) * (be / 2))
    return chart.expr((1 + t) * (al / 2) - (1 - t) * (be / 2))


def rs_function(params: ParameterSet, n: int) -> RSFunction:
    """Closed-form RS function of the (possibly prolonged) level n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    chart = chart_for(params.family)
    f = params.family
    t = Poly.x(chart.var)
    p_n = state_polynomial(params, n)
    if p_n.is_zero():
        raise DegeneratePolynomial(f"polynomial part of psi_{n} vanishes identically")
    w = _ground_rs_expr(params, n)
    if n == 0:
        return RSFunction(params, n, w)
    if f is Family.MORSE:
        an, b = params.a - n, params.b
        lag = laguerre(n - 1, 2 * an + 1, "y").scale_var(2 * b)
        w = w - chart.expr(RationalFunction(t * lag * (2 * b), p_n))
    elif f is Family.HDPT:
        al, be = params.alpha, params.beta
        q = jacobi(n - 1, al + 1, 1 - be, "z")
        w = w - chart.expr(RationalFunction(q * (n + al - be + 1), p_n), odd=True)
    else:
        al, be = jacobi_params(params, n)
        q = jacobi(n - 1, al + 1, be + 1, "y")
        frac = RationalFunction(q * (t * t - 1) * ((n + al + be + 1) / 2), p_n)
        w = w + chart.expr(frac)  # (y^2-1) for Eckart, -(1-y^2) for HRM: same sign
    return RSFunction(params, n, w)


def log_derivative_rs(state: EigenstateRep) -> ChartExpr:
    """-d/dx log(state), derived mechanically from the representation.

    Independent of the closed forms in :func:`rs_function`.
    """
    chart = state.chart
    w = chart.expr(0)
    for base, e in state.gauge:
        w = w - gauge_log_derivative(chart, base) * e
    p = chart.expr(RationalFunction.coerce(state.poly))
    d = chart.expr(RationalFunction.coerce(state.den))
    w = w - chart.ddx(p) / p + chart.ddx(d) / d
    return w


def rs_residual(params: ParameterSet, w: ChartExpr, potential: ChartExpr, energy) -> ChartExpr:
    """-w' + w^2 - V + E; the zero expression iff w solves the RS equation."""
    chart = chart_for(params.family)
    return -chart.ddx(w) + w * w - potential + as_rational(energy)


def potential_expr(params: ParameterSet) -> ChartExpr:
    return chart_for(params.family).expr(potential_rf(params))


# ---------------------------------------------------------------------------
# asymptotics and sector classification


class Sector(str, Enum):
    BOUND = "Bound"
    UNPHYSICAL_POSITIVE = "UnphysicalPositive"
    STRICT = "StrictIsospectralSector"
    QUASI = "QuasiIsospectralCandidate"
    NODEFUL = "NodefulRejected"
    DEGENERATE = "DegenerateRejected"


@dataclass(frozen=True)
class EndpointData:
    """psi_n ~ coef * u**exponent at each end of the x-domain.

    ``u`` is the local vanishing variable (x, exp(-x), exp(x), ...);
    exponent math.inf marks the super-exponential Morse decay at x -> -inf.
    """

    left_coef: Fraction
    right_coef: Fraction
    left_exponent: Fraction | float
    right_exponent: Fraction | float


def endpoint_data(params: ParameterSet, n: int) -> EndpointData:
    f = params.family
    if f is Family.MORSE:
        an = params.a - n
        # leading coefficient of L_n(2by) in y, and L_n^{2a_n}(0)
        left = laguerre_leading(n) * (2 * params.b) ** n
        right = pochhammer(2 * an + 1, n) / math.factorial(n)
        return EndpointData(left, right, math.inf, an)
    if f is Family.HDPT:
        al, be = params.alpha, params.beta
        left = pochhammer(al + 1, n) / math.factorial(n)
        right = jacobi_leading(n, al, -be)
        return EndpointData(left, right, al + Fraction(1, 2), 2 * params.level - 2 * n)
    al, be = jacobi_params(params, n)
    if f is Family.ECKART:
        left = jacobi_leading(n, al, be)
        right = pochhammer(al + 1, n) / math.factorial(n)
        return EndpointData(left, right, params.a, al)
    left = (-1) ** n * pochhammer(be + 1, n) / math.factorial(n)
    right = pochhammer(al + 1, n) / math.factorial(n)
    return EndpointData(left, right, be, al)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _limit_label(sign: int, exponent) -> str:
    if sign == 0:
        return "0"
    s = "+" if sign > 0 else "-"
    if exponent > 0:
        return f"0{s}"
    if exponent < 0:
        return f"{s}inf"
    return f"{s}const"


@dataclass(frozen=True)
class AsymptoticSigns:
    left: int
    right: int
    left_limit: str
    right_limit: str

    @property
    def agree(self) -> bool:
        return self.left != 0 and self.left == self.right


def asymptotic_signs(params: ParameterSet, n: int) -> AsymptoticSigns:
    """Signs of psi_n at the two ends of the x-domain (0 for a vanishing limit coefficient)."""
    d = endpoint_data(params, n)
    ls, rs = _sign(d.left_coef), _sign(d.right_coef)
    return AsymptoticSigns(ls, rs, _limit_label(ls, d.left_exponent), _limit_label(rs, d.right_exponent))


def reciprocal_normalizable(params: ParameterSet, n: int) -> bool:
    """True when 1/psi_n vanishes at both ends, judged from the gauge exponents."""
    d = endpoint_data(params, n)
    return d.left_exponent < 0 and d.right_exponent < 0


def hrm_case(params: ParameterSet, n: int) -> str | None:
    """'i', 'ii' or 'iii' for the three negative-energy HRM ranges."""
    if params.family is not Family.HRM:
        return None
    a, b = params.a, params.b
    if a - b / a < n < a:
        return "i"
    if a < n < a + b / a:
        return "ii"
    if n > 2 * a:
        return "iii"
    return None


@dataclass(frozen=True)
class SectorClass:
    kind: Sector
    energy: Fraction
    signs: AsymptoticSigns
    case: str | None = None

    @property
    def admits_extension(self) -> bool:
        return self.kind in (Sector.STRICT, Sector.QUASI)


def classify_sector(params: ParameterSet, n: int) -> SectorClass:
    """Place the prolonged level n in one of the sector classes.

    E_n >= 0 outside the bound range counts as UnphysicalPositive (the
    E_n = 0 thresholds are not disconjugacy points).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    energy = dispersion(params, n)
    signs = asymptotic_signs(params, n)
    case = hrm_case(params, n)
    if n in bound_indices(params):
        return SectorClass(Sector.BOUND, energy, signs, case)
    if energy >= 0:
        return SectorClass(Sector.UNPHYSICAL_POSITIVE, energy, signs, case)
    if signs.left == 0 or signs.right == 0:
        return SectorClass(Sector.DEGENERATE, energy, signs, case)
    if signs.left != signs.right:
        return SectorClass(Sector.NODEFUL, energy, signs, case)
    if reciprocal_normalizable(params, n):
        return SectorClass(Sector.QUASI, energy, signs, case)
    return SectorClass(Sector.STRICT, energy, signs, case)


def sector_table(params: ParameterSet, n_max: int) -> list[tuple[int, Fraction | None, SectorClass | None]]:
    """(n, E_n, sector) for n = 0..n_max; the HRM pole row carries None."""
    rows = []
    for n in range(n_max + 1):
        try:
            rows.append((n, dispersion(params, n), classify_sector(params, n)))
        except DispersionPole:
            rows.append((n, None, None))
    return rows
