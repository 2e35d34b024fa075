"""Exact rational arithmetic: univariate polynomials, rational functions and
Sturm-sequence root counting.

Scalars are :class:`fractions.Fraction`. Polynomials carry a variable tag so
that expressions written in different chart variables cannot be mixed by
accident.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

BigRational = Fraction
Scalar = Union[int, Fraction]


class VariableMismatch(ValueError):
    pass


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every parameter has to be an exact rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _trim(coeffs: Sequence[Fraction]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Immutable univariate polynomial with Fraction coefficients (ascending)."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        self.coeffs = _trim([as_rational(c) for c in coeffs])
        self.var = var

    # construction helpers
    @classmethod
    def const(cls, c, var: str = "z") -> "Poly":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "z") -> "Poly":
        return cls([0, 1], var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "z", lead=1) -> "Poly":
        p = cls([lead], var)
        for r in roots:
            p = p * cls([-as_rational(r), 1], var)
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"Poly(0, {self.var})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"({c})*{self.var}")
            else:
                terms.append(f"({c})*{self.var}^{i}")
        return "Poly(" + " + ".join(terms) + ")"

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            if self.degree <= 0 and other.degree <= 0:
                return self.coeffs == other.coeffs
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([as_rational(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.var != self.var and other.degree > 0 and self.degree > 0:
                raise VariableMismatch(f"cannot combine polynomials in {self.var!r} and {other.var!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other], self.var)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def _var_with(self, other: "Poly") -> str:
        # constants adopt the tag of the other operand
        return self.var if self.degree > 0 else other.var

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self._var_with(o))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return Poly([c * x for x in self.coeffs], self.var)
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Poly((), self._var_with(o))
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(o.coeffs):
                out[i + j] += x * y
        return Poly(out, self._var_with(o))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([1], self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            if c == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            return Poly([x / c for x in self.coeffs], self.var)
        return RationalFunction(self, other)

    def __rtruediv__(self, other):
        return RationalFunction(other, self)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        var = self._var_with(o)
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly((), var), Poly(rem, var)
        quot = [Fraction(0)] * (dq + 1)
        lc = o.coeffs[-1]
        for k in range(dq, -1, -1):
            q = rem[k + len(o.coeffs) - 1] / lc
            quot[k] = q
            if q:
                for j, c in enumerate(o.coeffs):
                    rem[k + j] -= q * c
        return Poly(quot, var), Poly(rem[: len(o.coeffs) - 1], var)

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lead

    def compose(self, inner: "Poly") -> "Poly":
        """Return ``self(inner(t))``; the result carries ``inner``'s tag."""
        result = Poly((), inner.var)
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def scale_var(self, c) -> "Poly":
        """Return ``p(c*t)``."""
        c = as_rational(c)
        return Poly([x * c**i for i, x in enumerate(self.coeffs)], self.var)

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    def __call__(self, v):
        v = as_rational(v) if not isinstance(v, Fraction) else v
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def sign_at(self, v) -> int:
        """Sign of p at a rational or at +/-inf."""
        if self.is_zero():
            return 0
        if v == math.inf:
            return 1 if self.lead > 0 else -1
        if v == -math.inf:
            s = 1 if self.lead > 0 else -1
            return s if self.degree % 2 == 0 else -s
        val = self(v)
        return (val > 0) - (val < 0)

    def eval_float(self, t) -> np.ndarray:
        """Horner evaluation in floating point, scaled for |t| > 1."""
        t = np.asarray(t, dtype=float)
        mag, sgn = self.log_abs_float(t)
        return sgn * np.exp(mag)

    def log_abs_float(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Return (log|p(t)|, sign p(t)) computed without overflow.

        For |t| > 1 the reversed polynomial in 1/t is evaluated instead.
        """
        t = np.asarray(t, dtype=float)
        if self.is_zero():
            return np.full(t.shape, -np.inf), np.zeros(t.shape)
        c = np.array([float(x) for x in self.coeffs])
        big = np.abs(t) > 1.0
        val = np.empty(t.shape)
        small_t = np.where(big, 0.0, t)
        acc = np.zeros(t.shape)
        for x in c[::-1]:
            acc = acc * small_t + x
        val[~big] = acc[~big]
        inv = np.where(big, 1.0 / np.where(big, t, 1.0), 0.0)
        acc = np.zeros(t.shape)
        for x in c:
            acc = acc * inv + x
        val[big] = acc[big]
        with np.errstate(divide="ignore"):
            logv = np.log(np.abs(val))
        logv = np.where(big, logv + self.degree * np.log(np.abs(np.where(big, t, 1.0))), logv)
        sgn = np.sign(val)
        odd_neg = big & (t < 0) & (self.degree % 2 == 1)
        sgn = np.where(odd_neg, -sgn, sgn)
        return logv, sgn


def _content_primitive(coeffs: Sequence[Fraction]) -> list[int]:
    """Scale rational coefficients to a primitive integer vector (sign kept)."""
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * den) for c in coeffs]
    g = reduce(math.gcd, ints, 0)
    return [i // g for i in ints] if g else ints


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials (ascending coefficients)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j, c in enumerate(b):
            r[shift + j] -= lr * c
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd via the primitive pseudo-remainder sequence over Z."""
    if p.is_zero() and q.is_zero():
        raise ZeroDivisionError("gcd of two zero polynomials")
    var = p._var_with(q) if isinstance(q, Poly) else p.var
    if p.is_zero():
        return q.monic().with_var(var)
    if q.is_zero():
        return p.monic().with_var(var)
    a = _content_primitive(p.coeffs)
    b = _content_primitive(q.coeffs)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prem(a, b)
        a, b = b, (_content_primitive([Fraction(x) for x in r]) if r else [])
    return Poly(a, var).monic()


def square_free(p: Poly) -> Poly:
    """p / gcd(p, p'), normalised monic."""
    if p.degree < 1:
        return p.monic() if p else p
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


class RationalFunction:
    """Immutable num/den pair, reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, var: str | None = None, *, _reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly([num], var or (den.var if isinstance(den, Poly) else "z"))
        if not isinstance(den, Poly):
            den = Poly([den], var or num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.degree > 0 and den.degree > 0 and num.var != den.var:
            raise VariableMismatch(f"numerator in {num.var!r}, denominator in {den.var!r}")
        tag = num.var if num.degree > 0 else den.var if den.degree > 0 else (var or num.var)
        if num.is_zero():
            self.num, self.den = Poly((), tag), Poly([1], tag)
            return
        if not _reduced and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lead
        self.num = (num / lc).with_var(tag)
        self.den = (den / lc).with_var(tag)

    @property
    def var(self) -> str:
        return self.num.var

    @classmethod
    def coerce(cls, value, var: str = "z") -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Poly):
            return cls(value, Poly([1], value.var), _reduced=True)
        return cls(Poly([as_rational(value)], var), Poly([1], var), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r} / {self.den!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, (Poly, int, Fraction)):
            other = RationalFunction.coerce(other, self.var)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def _other(self, other) -> "RationalFunction":
        return RationalFunction.coerce(other, self.var)

    def __add__(self, other):
        o = self._other(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        g = poly_gcd(self.den, o.den)
        d1, d2 = self.den // g, o.den // g
        return RationalFunction(self.num * d2 + o.num * d1, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o.is_polynomial() and o.num.degree <= 0:
            return RationalFunction(self.num * o.num.lead if o.num else Poly((), self.var), self.den, _reduced=True)
        # cross-cancel before multiplying to keep degrees small
        g1 = poly_gcd(self.num, o.den) if self.num else Poly([1], self.var)
        g2 = poly_gcd(o.num, self.den) if o.num else Poly([1], self.var)
        return RationalFunction((self.num // g1) * (o.num // g2), (self.den // g2) * (o.den // g1), _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self * RationalFunction(o.den, o.num, _reduced=True)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den**-k, self.num**-k, _reduced=True)
        return RationalFunction(self.num**k, self.den**k, _reduced=True)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, v) -> Fraction:
        v = as_rational(v)
        dv = self.den(v)
        if dv == 0:
            raise PoleError(f"denominator vanishes at {v}")
        return self.num(v) / dv

    def eval_float(self, t) -> np.ndarray:
        ln, sn = self.num.log_abs_float(t)
        ld, sd = self.den.log_abs_float(t)
        return sn * sd * np.exp(ln - ld)


def eval_exact(obj, v) -> Fraction:
    """Exact value of a Poly or RationalFunction at a rational point."""
    return obj(as_rational(v))


@dataclass(frozen=True)
class Interval:
    """Interval of the real line; endpoints are Fractions or +/-math.inf."""

    lo: Fraction | float = -math.inf
    hi: Fraction | float = math.inf
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        lo = self.lo if self.lo in (-math.inf, math.inf) else as_rational(self.lo)
        hi = self.hi if self.hi in (-math.inf, math.inf) else as_rational(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not lo < hi:
            raise ValueError(f"empty interval: lo={lo} >= hi={hi}")

    def contains(self, v) -> bool:
        left = v > self.lo if self.lo_open else v >= self.lo
        right = v < self.hi if self.hi_open else v <= self.hi
        return left and right


def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm sequence of a square-free polynomial.

    Remainders are rescaled by positive constants only, which leaves every
    sign pattern untouched.
    """
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        scale = abs(Fraction(reduce(math.lcm, (c.denominator for c in r.coeffs), 1)))
        r = r * scale
        chain.append(r)
    return chain


def _variations(chain: list[Poly], v) -> int:
    signs = [s for s in (q.sign_at(v) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, iv: Interval) -> int:
    """Number of distinct real roots of p in ``iv``, honouring open ends."""
    if p.is_zero():
        raise ValueError("sturm_count of the zero polynomial")
    q = square_free(p)
    if q.degree < 1:
        return 0
    extra = 0
    finite_ends = [e for e in (iv.lo, iv.hi) if e not in (-math.inf, math.inf)]
    for e in finite_ends:
        if q(e) == 0:
            # deflate so both Sturm evaluation points are non-roots
            q = q // Poly([-e, 1], q.var)
            closed = (e == iv.lo and not iv.lo_open) or (e == iv.hi and not iv.hi_open)
            extra += int(closed)
    if q.degree < 1:
        return extra
    chain = sturm_chain(q)
    return _variations(chain, iv.lo) - _variations(chain, iv.hi) + extra


def brute_force_sign_changes(p: Poly, points: Sequence[Fraction]) -> int:
    """Count exact sign changes and exact zeros of p over an ordered sample."""
    vals = [p(v) for v in points]
    zeros = sum(1 for v in vals if v == 0)
    nz = [v for v in vals if v != 0]
    return zeros + sum(1 for a, b in zip(nz, nz[1:]) if (a > 0) != (b > 0))
