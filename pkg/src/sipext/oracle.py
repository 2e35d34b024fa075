"""Floating-point cross-checks: finite-difference spectra, Gram matrices, Darboux consistency.

Nothing here reuses the exact construction beyond tabulating the objects under
test; eigenvalues come from a three-point Dirichlet discretization of
-psi'' + V psi = E psi solved by Sturm-count bisection on the tridiagonal
matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np

from .charts import ChartExpr, Family, chart_for, gauge_log_base
from .dbt import (
    ExtendedPotentialRep,
    ExtensionSpec,
    certify_regularity,
    extend_potential,
    extended_eigenstate,
    ground_state_of_quasi,
    require_certified,
)
from .exact import PoleError, Poly, RationalFunction
from .potentials import (
    EigenstateRep,
    ParameterSet,
    bound_indices,
    dispersion,
    eigenfunction,
    potential_expr,
    rs_function,
)

DEFAULT_TOL = 1e-6
ABS_FLOOR = 1e-8
DECAY = 1e-14


class InsufficientGrid(ValueError):
    pass


class NonDecayingState(ValueError):
    pass


class MismatchedGrids(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    def refined(self, times: int = 1) -> "Grid":
        """Same interval with h halved `times` times."""
        n = self.points
        for _ in range(times):
            n = 2 * n - 1
        return Grid(self.x_min, self.x_max, n)


# ---------------------------------------------------------------------------
# tabulation


def _check_denominator(rf: RationalFunction, t: np.ndarray) -> None:
    if rf.den.degree < 1:
        return
    _, sign = rf.den.log_abs_float(t)
    if np.any(sign == 0) or np.any(sign[1:] != sign[:-1]):
        raise PoleError("denominator changes sign or vanishes on the grid")


@lru_cache(maxsize=256)
def _shift_to_u(rf: RationalFunction) -> RationalFunction:
    """rf(z) rewritten in u = z - 1, so that small x avoids cancellation in cosh 2x - 1."""
    z_of_u = Poly([1, 1], rf.var)
    return RationalFunction(rf.num.compose(z_of_u), rf.den.compose(z_of_u))


def _float_args(family: Family, rf: RationalFunction, x: np.ndarray) -> tuple[RationalFunction, np.ndarray]:
    if Family.parse(family) is Family.HDPT:
        return _shift_to_u(rf), 2.0 * np.sinh(x) ** 2
    return rf, chart_for(family).to_chart(x)


def tabulate_expr(family, expr: ChartExpr, x: np.ndarray) -> np.ndarray:
    chart = chart_for(family)
    rf, t = _float_args(family, expr.rf, x)
    _check_denominator(rf, t)
    vals = rf.eval_float(t)
    if expr.odd:
        vals = vals * chart.s_factor(x)
    if not np.all(np.isfinite(vals)):
        raise PoleError("non-finite value while tabulating")
    return vals


def log_abs_state(state: EigenstateRep, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(log|psi|, sign psi) on x, free of overflow."""
    _, t = _float_args(state.family, RationalFunction(1, 1, chart_for(state.family).var), x)
    poly, den = state.poly, state.den
    if state.family is Family.HDPT:
        z_of_u = Poly([1, 1], "z")
        poly, den = poly.compose(z_of_u), den.compose(z_of_u)
    log = np.full(x.shape, math.log(abs(float(state.scale))))
    for base, exponent in state.gauge:
        if exponent:
            log = log + float(exponent) * gauge_log_base(base, x)
    lp, sp = poly.log_abs_float(t)
    ld, sd = den.log_abs_float(t)
    if den.degree >= 1 and (np.any(sd == 0) or np.any(sd[1:] != sd[:-1])):
        raise PoleError("eigenstate denominator vanishes on the grid")
    sign = sp * sd * (1 if state.scale > 0 else -1)
    return log + lp - ld, sign


def tabulate(rep, grid: Grid | np.ndarray, normalize: bool = False) -> np.ndarray:
    """Float samples of a potential, extended potential, eigenstate or chart expression.

    Eigenstates are scaled to unit peak when `normalize` is set; raw values
    may overflow otherwise.
    """
    x = grid.x if isinstance(grid, Grid) else np.asarray(grid, dtype=float)
    if isinstance(rep, EigenstateRep):
        log, sign = log_abs_state(rep, x)
        if normalize:
            log = log - np.max(log)
        with np.errstate(over="ignore"):
            return sign * np.exp(log)
    if isinstance(rep, ParameterSet):
        return tabulate_expr(rep.family, potential_expr(rep), x)
    if isinstance(rep, ExtendedPotentialRep):
        return tabulate_expr(rep.spec.family, chart_for(rep.spec.family).expr(rep.rf), x)
    if isinstance(rep, tuple) and len(rep) == 2:
        family, expr = rep
        return tabulate_expr(family, expr, x)
    raise TypeError(f"cannot tabulate {type(rep).__name__}")


# ---------------------------------------------------------------------------
# eigenvalues


@numba.njit(cache=True)
def _count_below(diag, off2, lam):
    """Number of eigenvalues below lam: negative pivots of the LDL^T factorization."""
    count = 0
    d = diag[0] - lam
    if d < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        if d == 0.0:
            d = 1e-300
        d = diag[i] - lam - off2 / d
        if d < 0.0:
            count += 1
    return count


@numba.njit(cache=True)
def _bisect_lowest(diag, off2, lo, hi, count):
    out = np.empty(count)
    for j in range(count):
        a, b = lo, hi
        for _ in range(200):
            mid = 0.5 * (a + b)
            if _count_below(diag, off2, mid) > j:
                b = mid
            else:
                a = mid
            if b - a <= 1e-15 * max(1.0, abs(mid)):
                break
        out[j] = 0.5 * (a + b)
        lo = a
    return out


def eigen_solve(samples: np.ndarray, h: float, count: int) -> np.ndarray:
    """Lowest `count` Dirichlet eigenvalues of -D2 + V, D2 the three-point Laplacian.

    `samples` holds V on every grid point including the two boundary nodes,
    which carry the Dirichlet condition and are not unknowns.
    """
    v = np.asarray(samples, dtype=float)[1:-1]
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > v.size:
        raise InsufficientGrid(f"{count} levels requested from {v.size} unknowns")
    if not np.all(np.isfinite(v)):
        raise InsufficientGrid("potential samples are not finite")
    inv = 1.0 / (h * h)
    diag = v + 2.0 * inv
    lo = float(v.min())
    hi = float(diag.max() + 2.0 * inv)
    return _bisect_lowest(diag, inv * inv, lo, hi, count)


def richardson(values: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Romberg table for order-2 values on grids h, h/2, h/4, ...

    Returns the best estimate and the change from the previous column, the
    latter serving as the extrapolation error estimate.
    """
    table = [np.asarray(v, dtype=float) for v in values]
    estimates = [table[-1]]
    power = 1
    while len(table) > 1:
        f = 4.0**power
        table = [(f * fine - coarse) / (f - 1) for coarse, fine in zip(table, table[1:])]
        estimates.append(table[-1])
        power += 1
    if len(estimates) == 1:
        return estimates[0], np.full_like(estimates[0], np.inf)
    return estimates[-1], np.abs(estimates[-1] - estimates[-2])


@dataclass
class SpectrumReport:
    family: Family
    params: ParameterSet
    eigenvalues: np.ndarray
    grid: Grid
    levels: int
    raw: list = field(default_factory=list)
    extrapolation_error: np.ndarray | None = None
    spec: ExtensionSpec | None = None
    exact: np.ndarray | None = None

    @property
    def residual_vs_exact(self) -> np.ndarray | None:
        if self.exact is None:
            return None
        m = min(len(self.exact), len(self.eigenvalues))
        return np.abs(self.eigenvalues[:m] - self.exact[:m])


def spectrum(source, grid: Grid, count: int, levels: int = 3) -> SpectrumReport:
    """Extrapolated lowest levels of a base potential (ParameterSet) or an extension."""
    raw = []
    for i in range(levels):
        g = grid.refined(i)
        raw.append(eigen_solve(tabulate(source, g), g.h, count))
    best, err = richardson(raw)
    if np.any(np.diff(best) <= 0):
        raise InsufficientGrid("extrapolated eigenvalues are not strictly increasing")
    if isinstance(source, ParameterSet):
        params, spec = source, None
        exact = np.array([float(dispersion(params, k)) for k in bound_indices(params)])
    else:
        spec = source.spec
        params = spec.params
        levels_exact = [float(dispersion(params, k)) for k in bound_indices(params)]
        if source.isospectral_kind == "quasi":
            levels_exact = [float(dispersion(params, spec.n))] + levels_exact
        exact = np.array(levels_exact)
    return SpectrumReport(params.family, params, best, grid, levels, raw, err, spec, exact)


def within(a, b, tol: float = DEFAULT_TOL, floor: float = ABS_FLOOR) -> np.ndarray:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) <= np.maximum(tol * np.abs(b), floor)


@dataclass(frozen=True)
class SpectrumComparison:
    verdict: str  # "strict", "quasi" or "mismatch"
    residuals: tuple
    relative: tuple
    extra_level: float | None
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def compare_spectra(base: SpectrumReport, ext: SpectrumReport, tol: float = DEFAULT_TOL,
                    seed_energy: float | None = None) -> SpectrumComparison:
    """Align the bound levels of V with the low levels of V^(n).

    `base` must carry exactly the bound levels; `ext` should carry at least
    one more level so an extra state (or its absence) can be seen.
    """
    if base.grid != ext.grid or base.levels != ext.levels:
        raise MismatchedGrids("spectra were computed on different grids")
    m = len(base.eigenvalues)
    b, e = base.eigenvalues, ext.eigenvalues
    top = b[-1]
    margin = max(tol * abs(top), ABS_FLOOR)

    def aligned(shift):
        part = e[shift:shift + m]
        if len(part) < m:
            return None
        res = np.abs(part - b)
        rel = res / np.maximum(np.abs(b), ABS_FLOOR / tol)
        return res, rel, bool(np.all(within(part, b, tol)))

    below = e[e < b[0] - margin]
    if len(below) == 0:
        got = aligned(0)
        if got and got[2] and (len(e) <= m or e[m] > top + margin):
            return SpectrumComparison("strict", tuple(got[0]), tuple(got[1]), None, tol)
    elif len(below) == 1:
        got = aligned(1)
        extra = float(below[0])
        seed_ok = seed_energy is None or bool(within(extra, seed_energy, tol))
        if got and got[2] and seed_ok:
            return SpectrumComparison("quasi", tuple(got[0]), tuple(got[1]), extra, tol)
    got = aligned(len(below)) or aligned(0) or (np.array([np.inf]), np.array([np.inf]), False)
    extra = float(below[0]) if len(below) else None
    return SpectrumComparison("mismatch", tuple(got[0]), tuple(got[1]), extra, tol)


# ---------------------------------------------------------------------------
# grids


def _provisional_range(family: Family) -> tuple[float, float]:
    if family is Family.MORSE:
        return -40.0, 400.0
    if family is Family.HRM:
        return -300.0, 300.0
    return 1e-9, 150.0


def _decay_extent(states: list[EigenstateRep], lo: float, hi: float, decay: float) -> tuple[float, float]:
    x = np.linspace(lo, hi, 200001)
    left, right = hi, lo
    cut = math.log(decay)
    for st in states:
        log, _ = log_abs_state(st, x)
        log = np.where(np.isfinite(log), log, -np.inf)
        keep = np.nonzero(log - np.max(log) >= cut)[0]
        left = min(left, x[keep[0]])
        right = max(right, x[keep[-1]])
    return left, right


def _states_for(params: ParameterSet, spec: ExtensionSpec | None) -> list[EigenstateRep]:
    states = [eigenfunction(params, k) for k in bound_indices(params)]
    if spec is not None and certify_regularity(spec).isospectral_kind == "quasi":
        states.append(ground_state_of_quasi(spec))
    return states


def auto_grid(params: ParameterSet, points: int = 8001, spec: ExtensionSpec | None = None,
              tol: float = DEFAULT_TOL, decay: float = DECAY) -> Grid:
    """Truncated domain for the bound states of V (and of V^(n) when given).

    Infinite ends are cut where every bound state has dropped below `decay`
    of its peak.  For HDPT and Eckart the left end sits at eps > 0, halved
    until the spectrum moves by less than tol/10.
    """
    family = params.family
    lo, hi = _provisional_range(family)
    states = _states_for(params, spec)
    left, right = _decay_extent(states, lo, hi, decay)
    if family in (Family.MORSE, Family.HRM):
        return Grid(float(left), float(right), points)
    # left end of a half line: keep the spacing fixed while moving eps; with
    # psi ~ x near 0 the Dirichlet shift is linear in eps, so eps can get tiny
    m = len(bound_indices(params))
    sources = [(params, m)]
    if spec is not None:
        quasi = certify_regularity(spec).isospectral_kind == "quasi"
        sources.append((extend_potential(spec), m + int(quasi)))
    h = right / (points - 1)
    prev = None
    eps = 0.5
    while eps > 1e-15:
        n = max(3, int(round((right - eps) / h)) + 1)
        g = Grid(eps, right, n)
        vals = np.concatenate([eigen_solve(tabulate(src, g), g.h, count) for src, count in sources])
        if prev is not None and np.all(np.abs(vals - prev) < np.maximum(tol * np.abs(vals), ABS_FLOOR) / 10):
            break
        prev = vals
        eps /= 2
    return Grid(eps, float(right), points)


# ---------------------------------------------------------------------------
# orthogonality and Darboux consistency


def gram_matrix(states: list[np.ndarray], grid: Grid, decay_tol: float = 1e-6) -> np.ndarray:
    """Trapezoidal overlaps of the states after scaling each to unit norm."""
    h = grid.h
    cols = []
    for psi in states:
        psi = np.asarray(psi, dtype=float)
        peak = np.max(np.abs(psi))
        if peak == 0 or max(abs(psi[0]), abs(psi[-1])) > decay_tol * peak:
            raise NonDecayingState("state does not decay at the grid ends")
        cols.append(psi / peak)
    m = np.array(cols)
    weights = np.full(grid.points, h)
    weights[0] = weights[-1] = h / 2
    g = (m * weights) @ m.T
    norms = np.sqrt(np.diag(g))
    g = g / np.outer(norms, norms)
    return (g + g.T) / 2


def extended_states(spec: ExtensionSpec, grid: Grid) -> list[np.ndarray]:
    return [tabulate(extended_eigenstate(spec, k), grid, normalize=True) for k in bound_indices(spec.params)]


def darboux_consistency(spec: ExtensionSpec, k: int, grid: Grid) -> float:
    """Max deviation of (d/dx + w_n) psi_k, by central differences, from the closed form.

    Both are matched at the peak of the closed form; the deviation is taken
    relative to that peak over interior nodes.
    """
    require_certified(spec, strict=True)
    if k not in bound_indices(spec.params):
        raise ValueError(f"k={k} is not a bound level")
    x = grid.x
    params = spec.params
    log, sign = log_abs_state(eigenfunction(params, k), x)
    psi = sign * np.exp(log - np.max(log))
    w_n = tabulate_expr(params.family, rs_function(params, spec.n).expr, x)
    dpsi = (psi[2:] - psi[:-2]) / (2 * grid.h)
    lhs = dpsi + w_n[1:-1] * psi[1:-1]
    target = tabulate(extended_eigenstate(spec, k), x, normalize=True)[1:-1]
    peaks = np.argsort(-np.abs(target))
    for i in peaks[:10]:
        if abs(lhs[i]) > 1e-3 * abs(target[i]):
            scale = lhs[i] / target[i]
            break
    else:
        raise ValueError("no usable normalization point")
    rhs = scale * target
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


def convergence_slope(spec: ExtensionSpec, k: int, grid: Grid, refinements: int = 3) -> tuple[float, list]:
    """Fitted order of darboux_consistency under repeated halving of h."""
    hs, errs = [], []
    for i in range(refinements + 1):
        g = grid.refined(i)
        hs.append(g.h)
        errs.append(darboux_consistency(spec, k, g))
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    return slope, list(zip(hs, errs))
