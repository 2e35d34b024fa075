import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sipext.charts import Family, chart_for
from sipext.exact import Poly, RationalFunction, sturm_count
from sipext.orthopoly import pochhammer
from sipext.potentials import (
    DispersionPole,
    InvalidParameters,
    Sector,
    asymptotic_signs,
    bound_indices,
    classify_sector,
    dispersion,
    eckart,
    eigenfunction,
    endpoint_data,
    hdpt,
    hrm,
    jacobi_params,
    log_derivative_rs,
    make_params,
    morse,
    potential_constant,
    potential_expr,
    potential_rf,
    reciprocal_normalizable,
    rs_function,
    rs_residual,
    sector_table,
    state_polynomial,
)

from strategies import any_params

F = Fraction
y = Poly.x("y")


def test_potential_examples():
    assert potential_rf(morse(F(5, 2), 1)) == RationalFunction.coerce(y * y - 6 * y + F(25, 4))
    assert potential_constant(eckart(1, 4)) == 17
    assert potential_constant(hrm(F(7, 2), 2)) == F(-311, 98)


def test_dispersion_examples():
    assert dispersion(morse(F(5, 2), 1), 6) == -6
    assert dispersion(hdpt(F(1, 2), F(11, 2)), 5) == -20
    assert dispersion(hrm(F(7, 2), 2), 3) == F(-180, 49)
    assert dispersion(eckart(1, 4), 4) == F(-216, 25)


def test_hrm_pole_at_n_equal_a():
    with pytest.raises(DispersionPole):
        dispersion(hrm(3, 2), 3)


def test_bound_indices_examples():
    assert bound_indices(morse(F(5, 2), 1)) == [0, 1, 2]
    assert bound_indices(eckart(1, 4)) == [0]
    assert bound_indices(hrm(F(7, 2), 2)) == [0, 1, 2]
    # integer a: threshold n = a is excluded
    assert bound_indices(morse(3, 1)) == [0, 1, 2]


def test_invalid_parameters_name_the_constraint():
    with pytest.raises(InvalidParameters, match="a² < b"):
        eckart(2, 1)
    with pytest.raises(InvalidParameters, match="beta > alpha"):
        hdpt(1, 2)
    with pytest.raises(InvalidParameters, match="a² > b"):
        hrm(1, 2)
    with pytest.raises(InvalidParameters):
        make_params("morse", alpha=1, beta=3)
    with pytest.raises(TypeError):
        morse(2.5, 1)


def test_rs_examples():
    p = morse(F(5, 2), 1)
    assert rs_function(p, 0).expr == chart_for(Family.MORSE).expr(F(5, 2) - y)
    w1 = F(3, 2) - y - RationalFunction(2 * y, 4 - 2 * y)
    assert rs_function(p, 1).expr == chart_for(Family.MORSE).expr(w1)
    # HDPT ground: -(alpha+1/2) coth x + (beta-1/2) tanh x with coth = s/(z-1), tanh = s/(z+1)
    al, be = F(1, 2), F(11, 2)
    z = Poly.x("z")
    w0 = RationalFunction(Poly([-(al + F(1, 2))], "z"), z - 1) + RationalFunction(Poly([be - F(1, 2)], "z"), z + 1)
    assert rs_function(hdpt(al, be), 0).expr == chart_for(Family.HDPT).expr(w0, odd=True)


def test_eigenfunction_examples():
    st0 = eigenfunction(morse(F(5, 2), 1), 0)
    assert dict(st0.gauge) == {"y": F(5, 2), "exp_y": -1} and st0.poly == Poly([1], "y")
    assert jacobi_params(hrm(F(7, 2), 2), 0) == (F(57, 14), F(41, 14))
    assert jacobi_params(eckart(1, 4), 0) == (3, -5)
    assert jacobi_params(hrm(F(7, 2), 2), 3) == (F(9, 2), F(-7, 2))


def test_eckart_ground_state_float():
    # psi_0 = exp(-4x) sinh x for a=1, b=4
    from sipext.oracle import tabulate
    import numpy as np

    x = np.linspace(0.1, 5, 50)
    psi = tabulate(eigenfunction(eckart(1, 4), 0), x)
    ratio = psi / (np.exp(-4 * x) * np.sinh(x))
    assert np.allclose(ratio, ratio[0], rtol=1e-12)


def test_sector_examples():
    c = classify_sector(morse(F(5, 2), 1), 6)
    assert c.kind is Sector.STRICT and (c.signs.left, c.signs.right) == (1, 1)
    c = classify_sector(hrm(F(7, 2), 2), 3)
    assert c.kind is Sector.STRICT and c.case == "i" and c.signs.agree
    p = hrm(F(7, 2), 2)
    al, be = jacobi_params(p, 8)
    assert (al, be) == (F(-9, 2) - F(4, 9), F(-9, 2) + F(4, 9))
    left = pochhammer(be + 1, 8) / math.factorial(8)
    right = pochhammer(al + 1, 8) / math.factorial(8)
    expected = Sector.QUASI if (left > 0) == (right > 0) else Sector.NODEFUL
    assert classify_sector(p, 8).kind is expected is Sector.QUASI
    assert asymptotic_signs(eckart(1, 4), 4).agree
    assert (asymptotic_signs(eckart(1, 4), 4).left, asymptotic_signs(eckart(1, 4), 4).right) == (1, 1)


def test_spectrum_tables():
    kinds = {n: s.kind for n, _, s in sector_table(morse(F(5, 2), 1), 8)}
    assert [n for n, k in kinds.items() if k is Sector.STRICT] == [6, 7, 8]
    rows = sector_table(hrm(F(7, 2), 2), 12)
    cases = {n: s.case for n, _, s in rows if s and s.kind not in (Sector.BOUND, Sector.UNPHYSICAL_POSITIVE)}
    assert cases[3] == "i" and cases[4] == "ii"
    assert min(n for n, c in cases.items() if c == "iii") == 8


@settings(max_examples=30, deadline=None)
@given(any_params, st.integers(0, 8))
def test_rs_identity(params, n):
    if params.family is Family.HRM and params.a == n:
        return
    w = rs_function(params, n).expr
    assert rs_residual(params, w, potential_expr(params), dispersion(params, n)).is_zero()
    assert w == log_derivative_rs(eigenfunction(params, n))


@settings(max_examples=30, deadline=None)
@given(any_params)
def test_ground_energy_zero_and_monotone(params):
    assert dispersion(params, 0) == 0
    energies = [dispersion(params, k) for k in bound_indices(params)]
    assert all(a < b for a, b in zip(energies, energies[1:]))


@settings(max_examples=30, deadline=None)
@given(any_params, st.integers(0, 14))
def test_classification_is_total_and_consistent(params, n):
    try:
        c = classify_sector(params, n)
    except DispersionPole:
        assert params.family is Family.HRM and params.a == n
        return
    if c.kind is Sector.BOUND:
        assert c.energy >= 0
    if c.kind in (Sector.STRICT, Sector.QUASI, Sector.NODEFUL, Sector.DEGENERATE):
        assert c.energy < 0


@settings(max_examples=40, deadline=None)
@given(any_params, st.integers(1, 14))
def test_strict_sector_seeds_are_nodeless(params, n):
    try:
        c = classify_sector(params, n)
    except DispersionPole:
        return
    if c.kind is Sector.STRICT:
        assert sturm_count(state_polynomial(params, n), chart_for(params.family).interval) == 0


@settings(max_examples=40, deadline=None)
@given(any_params, st.integers(1, 14))
def test_strict_marker_reciprocal_not_normalizable(params, n):
    try:
        c = classify_sector(params, n)
    except DispersionPole:
        return
    if c.kind is Sector.STRICT:
        d = endpoint_data(params, n)
        assert d.left_exponent >= 0 or d.right_exponent >= 0
        assert not reciprocal_normalizable(params, n)
