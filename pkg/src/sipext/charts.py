"""Algebraic charts x -> t and exact expressions in the chart variable.

Morse, Eckart and Hyperbolic Rosen-Morse quantities are rational functions of
their chart variable.  In the HDPT chart z = cosh 2x, RS functions are odd in
s = sinh 2x; a :class:`ChartExpr` therefore stores ``rf * s**parity`` with
``s**2 = z**2 - 1`` folded back into ``rf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exact import Interval, Poly, RationalFunction


class Family(str, Enum):
    MORSE = "morse"
    HDPT = "hdpt"
    ECKART = "eckart"
    HRM = "hrm"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, Family):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown family {name!r}; choose from morse, hdpt, eckart, hrm") from None


class ChartExpr:
    """``rf(t) * s(x)**odd`` where s**2 = radicand(t)."""

    __slots__ = ("rf", "odd", "radicand")

    def __init__(self, rf, odd: bool = False, radicand: Poly | None = None, var: str = "z"):
        self.rf = RationalFunction.coerce(rf, var)
        self.odd = bool(odd) and not self.rf.is_zero()
        if self.odd and radicand is None:
            raise ValueError("odd chart expression needs a radicand")
        self.radicand = radicand

    @property
    def var(self) -> str:
        return self.rf.var

    def is_zero(self) -> bool:
        return self.rf.is_zero()

    def __repr__(self) -> str:
        return f"ChartExpr({self.rf!r}{' * s' if self.odd else ''})"

    def _wrap(self, other) -> "ChartExpr":
        if isinstance(other, ChartExpr):
            return other
        return ChartExpr(other, False, self.radicand, self.var)

    def _rad(self, other: "ChartExpr") -> Poly | None:
        return self.radicand if self.radicand is not None else other.radicand

    def __eq__(self, other) -> bool:
        o = self._wrap(other)
        if self.is_zero() and o.is_zero():
            return True
        return self.odd == o.odd and self.rf == o.rf

    def __hash__(self):
        return hash((self.rf, self.odd))

    def __add__(self, other):
        o = self._wrap(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.odd != o.odd:
            raise ValueError("cannot add expressions of different s-parity")
        return ChartExpr(self.rf + o.rf, self.odd, self._rad(o), self.var)

    __radd__ = __add__

    def __neg__(self):
        return ChartExpr(-self.rf, self.odd, self.radicand, self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        rad = self._rad(o)
        rf = self.rf * o.rf
        if self.odd and o.odd:
            rf = rf * rad
        return ChartExpr(rf, self.odd != o.odd, rad, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if not o.odd:
            return ChartExpr(self.rf / o.rf, self.odd, self._rad(o), self.var)
        rad = self._rad(o)
        # 1/s = s / radicand
        rf = self.rf / (o.rf * rad)
        if self.odd:
            return ChartExpr(rf * rad, False, rad, self.var)
        return ChartExpr(rf, True, rad, self.var)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, k: int):
        out = ChartExpr(1, False, self.radicand, self.var)
        for _ in range(k):
            out = out * self
        return out


@dataclass(frozen=True)
class Chart:
    """Change of variable t = t(x) with dt/dx expressed back in t."""

    family: Family
    var: str
    interval: Interval  # physical range of t
    x_interval: tuple  # physical range of x, floats
    jacobian: ChartExpr  # dt/dx
    radicand: Poly | None = None
    ds_dx: RationalFunction | None = None

    def expr(self, value, odd: bool = False) -> ChartExpr:
        return ChartExpr(value, odd, self.radicand, self.var)

    @property
    def t(self) -> ChartExpr:
        return self.expr(Poly.x(self.var))

    def ddx(self, e: ChartExpr) -> ChartExpr:
        """d/dx of a chart expression, by the chain rule."""
        out = self.expr(e.rf.derivative()) * self.jacobian
        if e.odd:
            out = out * ChartExpr(1, True, self.radicand, self.var)
            out = out + self.expr(e.rf * self.ds_dx)
        return out

    # floating-point side
    def to_chart(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family is Family.MORSE:
            return np.exp(-x)
        if self.family is Family.HDPT:
            return np.cosh(2 * x)
        if self.family is Family.ECKART:
            return 1.0 / np.tanh(x)
        return np.tanh(x)

    def s_factor(self, x) -> np.ndarray:
        return np.sinh(2 * np.asarray(x, dtype=float))

    def eval_expr(self, e: ChartExpr, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        vals = e.rf.eval_float(self.to_chart(x))
        if e.odd:
            vals = vals * self.s_factor(x)
        return vals


def _interval(lo, hi) -> Interval:
    return Interval(lo, hi, True, True)


def chart_for(family) -> Chart:
    family = Family.parse(family)
    if family is Family.MORSE:
        y = Poly.x("y")
        return Chart(family, "y", _interval(0, math.inf), (-math.inf, math.inf),
                     ChartExpr(-y, var="y"))
    if family is Family.HDPT:
        z = Poly.x("z")
        rad = z * z - 1
        # z = cosh 2x, s = sinh 2x: dz/dx = 2 s, ds/dx = 2 z
        return Chart(family, "z", _interval(1, math.inf), (0.0, math.inf),
                     ChartExpr(2, True, rad, "z"), rad, RationalFunction.coerce(2 * z))
    y = Poly.x("y")
    one_minus_y2 = 1 - y * y
    if family is Family.ECKART:
        return Chart(family, "y", _interval(1, math.inf), (0.0, math.inf), ChartExpr(one_minus_y2, var="y"))
    return Chart(family, "y", _interval(-1, 1), (-math.inf, math.inf), ChartExpr(one_minus_y2, var="y"))


# Gauge bases: d/dx log(base) as exact chart expressions, and log(base) in floats.

def gauge_log_derivative(chart: Chart, base: str) -> ChartExpr:
    t = Poly.x(chart.var)
    if base == "y":
        return chart.expr(-1)
    if base == "exp_y":
        return chart.expr(-t)
    if base == "sinh":
        return chart.expr(RationalFunction(Poly([1], "z"), t - 1), odd=True)
    if base == "cosh":
        return chart.expr(RationalFunction(Poly([1], "z"), t + 1), odd=True)
    if base == "y-1":
        return chart.expr(-(t + 1))
    if base == "y+1":
        return chart.expr(1 - t)
    if base == "1-y":
        return chart.expr(-(1 + t))
    if base == "1+y":
        return chart.expr(1 - t)
    raise KeyError(base)


def gauge_log_base(base: str, x) -> np.ndarray:
    """log(base(x)) evaluated stably."""
    x = np.asarray(x, dtype=float)
    ln2 = math.log(2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        if base == "y":
            return -x
        if base == "exp_y":
            return np.exp(-x)
        if base == "sinh":
            return x + np.log(-np.expm1(-2 * x)) - ln2
        if base == "cosh":
            ax = np.abs(x)
            return ax + np.log1p(np.exp(-2 * ax)) - ln2
        if base == "y-1":
            return ln2 - np.log(np.expm1(2 * x))
        if base == "y+1":
            return ln2 - np.log(-np.expm1(-2 * x))
        if base == "1-y":
            return ln2 - np.logaddexp(0.0, 2 * x)
        if base == "1+y":
            return ln2 - np.logaddexp(0.0, -2 * x)
    raise KeyError(base)


__all__ = [
    "Chart",
    "ChartExpr",
    "Family",
    "chart_for",
    "gauge_log_base",
    "gauge_log_derivative",
]
