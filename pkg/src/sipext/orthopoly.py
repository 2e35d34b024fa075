"""Generalized Laguerre and Jacobi polynomials for arbitrary rational parameters.

Both families are built from their terminating hypergeometric sums written so
that no Pochhammer symbol sits in a denominator; the coefficients are then
polynomials in the parameters and stay valid for negative or integer values
far outside the classical range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact import Poly, as_rational


def pochhammer(x, n: int) -> Fraction:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    x = as_rational(x)
    out = Fraction(1)
    for j in range(n):
        out *= x + j
    return out


def laguerre(n: int, alpha, var: str = "z") -> Poly:
    """L_n^alpha(z) = sum_m (-1)^m (alpha+m+1)_{n-m} / ((n-m)! m!) z^m.

    Returns the zero polynomial for n < 0, which is the convention used by
    the extension formulas.
    """
    if n < 0:
        return Poly((), var)
    alpha = as_rational(alpha)
    coeffs = []
    for m in range(n + 1):
        c = pochhammer(alpha + m + 1, n - m) / (factorial(n - m) * factorial(m))
        coeffs.append(-c if m % 2 else c)
    return Poly(coeffs, var)


def jacobi(n: int, alpha, beta, var: str = "z") -> Poly:
    """P_n^(alpha,beta)(z) from the 2F1 sum in powers of (1-z)/2.

    P_n = sum_m (-n)_m (n+alpha+beta+1)_m (alpha+m+1)_{n-m} / (n! m!) ((1-z)/2)^m.
    Zero polynomial for n < 0.
    """
    if n < 0:
        return Poly((), var)
    alpha, beta = as_rational(alpha), as_rational(beta)
    u = Poly([Fraction(1, 2), Fraction(-1, 2)], var)
    coeffs = []
    for m in range(n + 1):
        coeffs.append(
            pochhammer(-n, m) * pochhammer(n + alpha + beta + 1, m) * pochhammer(alpha + m + 1, n - m)
            / (factorial(n) * factorial(m))
        )
    return Poly(coeffs, var).compose(u)


def jacobi_leading(n: int, alpha, beta) -> Fraction:
    """Nominal z^n coefficient (n+alpha+beta+1)_n / (2^n n!)."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    return pochhammer(n + alpha + beta + 1, n) / (2**n * factorial(n))


def laguerre_leading(n: int) -> Fraction:
    return Fraction((-1) ** n, factorial(n))


@dataclass(frozen=True)
class PolyParams:
    kind: str  # "laguerre" or "jacobi"
    n: int
    alpha: Fraction
    beta: Fraction | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("polynomial degree index must be >= 0")
        if self.kind not in ("laguerre", "jacobi"):
            raise ValueError(f"unknown polynomial kind {self.kind!r}")
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.kind == "jacobi":
            object.__setattr__(self, "beta", as_rational(self.beta))

    def build(self, var: str = "z") -> Poly:
        if self.kind == "laguerre":
            return laguerre(self.n, self.alpha, var)
        return jacobi(self.n, self.alpha, self.beta, var)

    @property
    def nominal_leading(self) -> Fraction:
        if self.kind == "laguerre":
            return laguerre_leading(self.n)
        return jacobi_leading(self.n, self.alpha, self.beta)

    @property
    def degree_deficient(self) -> bool:
        """True when the z^n coefficient vanishes for these parameters."""
        return self.nominal_leading == 0


# Independent constructions, used as cross-checks in the test-suite.

def jacobi_binomial_form(n: int, alpha, beta, var: str = "z") -> Poly:
    """P_n = sum_s C(n+alpha, n-s) C(n+beta, s) ((z-1)/2)^s ((z+1)/2)^(n-s)."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    zm = Poly([Fraction(-1, 2), Fraction(1, 2)], var)
    zp = Poly([Fraction(1, 2), Fraction(1, 2)], var)
    total = Poly((), var)
    for s in range(n + 1):
        c1 = pochhammer(alpha + s + 1, n - s) / factorial(n - s)
        c2 = pochhammer(beta + n - s + 1, s) / factorial(s)
        total = total + (zm**s) * (zp ** (n - s)) * (c1 * c2)
    return total


def jacobi_by_recurrence(n: int, alpha, beta, var: str = "z") -> Poly:
    """Three-term recurrence; only valid when no recurrence denominator vanishes."""
    a, b = as_rational(alpha), as_rational(beta)
    z = Poly.x(var)
    p0 = Poly([1], var)
    if n == 0:
        return p0
    p1 = Poly([a + 1], var) + (z - 1) * ((a + b + 2) / 2)
    for k in range(2, n + 1):
        c = 2 * k + a + b
        d = 2 * k * (k + a + b) * (c - 2)
        if d == 0:
            raise ZeroDivisionError("recurrence breaks down for these parameters")
        p2 = (p1 * ((c - 1) * (c * (c - 2)) ) * z + p1 * ((c - 1) * (a * a - b * b)) - p0 * (2 * (k + a - 1) * (k + b - 1) * c)) / d
        p0, p1 = p1, p2
    return p1


def laguerre_by_recurrence(n: int, alpha, var: str = "z") -> Poly:
    a = as_rational(alpha)
    z = Poly.x(var)
    p0 = Poly([1], var)
    if n == 0:
        return p0
    p1 = Poly([1 + a, -1], var)
    for k in range(1, n):
        p0, p1 = p1, (p1 * (2 * k + 1 + a) - z * p1 - p0 * (k + a)) / (k + 1)
    return p1
