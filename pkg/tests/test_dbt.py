from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sipext.charts import Family, chart_for
from sipext.dbt import (
    ExtensionSpec,
    NotInDisconjugacyRegime,
    UncertifiedSeed,
    UnsupportedFamily,
    certify_regularity,
    closed_form,
    extend_potential,
    extended_bracket,
    extended_eigenstate,
    extended_polynomial,
    extension_term,
    operator_form,
    superpartner,
    transformed_rs,
    verify_enlarged_shape_invariance,
    w_term,
)
from sipext.exact import Poly, square_free, sturm_count
from sipext.orthopoly import jacobi, laguerre
from sipext.potentials import (
    Sector,
    bound_indices,
    classify_sector,
    dispersion,
    eckart,
    hdpt,
    hrm,
    morse,
    potential_expr,
    rs_function,
    rs_residual,
)

from strategies import any_params

F = Fraction
y = Poly.x("y")


def strict_specs():
    """A fixed spread of certified strict specs across the four families."""
    out = []
    for a, b in [(F(5, 2), 1), (F(7, 2), 1), (F(3, 2), F(1, 2)), (2, 3)]:
        p = morse(a, b)
        out += [ExtensionSpec(p, n) for n in range(int(2 * a) + 1, int(2 * a) + 3)]
    for al, be in [(F(1, 2), F(13, 2)), (F(3, 2), F(15, 2)), (0, 4)]:
        p = hdpt(al, be)
        out += [ExtensionSpec(p, n) for n in range(int(2 * p.level) + 1, int(2 * p.level) + 3)]
    for a, b in [(1, 4), (2, 16), (F(1, 2), 3)]:
        p = eckart(a, b)
        start = int(b / a - a) + 1
        out += [ExtensionSpec(p, n) for n in (start, start + 1)]
    out += [ExtensionSpec(hrm(F(7, 2), 2), 3), ExtensionSpec(hrm(F(7, 2), 2), 4),
            ExtensionSpec(hrm(F(9, 2), 3), 4), ExtensionSpec(hrm(F(9, 2), 3), 5)]
    return out


SPECS = strict_specs()


def test_certificate_examples():
    cert = certify_regularity(ExtensionSpec(morse(F(5, 2), 1), 6))
    assert (cert.node_count, cert.verdict, cert.isospectral_kind) == (0, "certified-regular", "strict")
    with pytest.raises(NotInDisconjugacyRegime):
        certify_regularity(ExtensionSpec(morse(F(5, 2), 1), 4))
    cert = certify_regularity(ExtensionSpec(hrm(F(7, 2), 2), 4))
    assert cert.certified and cert.case == "ii" and cert.isospectral_kind == "strict"
    assert certify_regularity(ExtensionSpec(hrm(F(7, 2), 2), 3)).case == "i"


def test_nodeful_case_iii_is_rejected():
    spec = ExtensionSpec(hrm(F(7, 2), 2), 9)
    cert = certify_regularity(spec)
    assert cert.sector is Sector.NODEFUL and cert.node_count >= 1 and not cert.certified
    with pytest.raises(UncertifiedSeed):
        extend_potential(spec)


def test_quasi_spec_has_no_extended_eigenstates():
    spec = ExtensionSpec(hrm(F(7, 2), 2), 8)
    assert certify_regularity(spec).isospectral_kind == "quasi"
    assert extend_potential(spec).isospectral_kind == "quasi"
    with pytest.raises(UncertifiedSeed):
        extended_eigenstate(spec, 0)


def test_bound_level_k_required():
    spec = ExtensionSpec(morse(F(5, 2), 1), 6)
    with pytest.raises(ValueError):
        extended_polynomial(spec, 3)
    with pytest.raises(ValueError):
        transformed_rs(spec, 6)


def test_morse_extension_denominator():
    ext = extend_potential(ExtensionSpec(morse(F(5, 2), 1), 6))
    seed = laguerre(6, -7, "y").scale_var(2)
    assert ext.rf.den == (seed * seed).monic()
    # V^(6) - V vanishes as x -> +inf (y -> 0); as x -> -inf it grows like 2by, below V's b^2 y^2
    assert ext.delta(F(0)) == 0
    assert ext.delta.num.degree - ext.delta.den.degree == 1
    assert ext.delta.num.lead / ext.delta.den.lead == 2 * ext.spec.params.b


def test_hrm_extension_denominator():
    ext = extend_potential(ExtensionSpec(hrm(F(7, 2), 2), 3))
    seed = jacobi(3, F(9, 2), F(-7, 2), "y")
    assert ext.rf.den == (seed * seed).monic()


def test_seed_zero_gives_usual_partner():
    p = morse(F(5, 2), 1)
    partner = potential_expr(p) + extension_term(p, 0)
    assert partner == potential_expr(p.shifted()) + dispersion(p, 1)


def test_morse_k0_single_term_formula():
    p, n = morse(F(5, 2), 1), 6
    a = p.a
    poly = extended_polynomial(ExtensionSpec(p, n), 0).poly
    expected = laguerre(n - 1, 2 * (a - n), "y").scale_var(2) * (-(2 * a - n))
    assert poly == expected and poly.degree == n - 1


def test_naive_k0_bracket_is_not_the_limit():
    p, n = morse(F(5, 2), 1), 6
    a = p.a
    L = lambda m: laguerre(m, 2 * (a - n), "y").scale_var(2)
    naive = L(n) * (2 * a) - L(n - 1) * (2 * a - n)
    assert naive.degree == n  # would violate the degree law
    assert naive != extended_polynomial(ExtensionSpec(p, n), 0).poly


def test_degree_examples():
    assert extended_polynomial(ExtensionSpec(morse(F(5, 2), 1), 6), 2).poly.degree == 7
    spec = ExtensionSpec(hdpt(F(1, 2), F(13, 2)), 6)
    st_ = extended_eigenstate(spec, 1)
    assert st_.den == jacobi(6, F(1, 2), F(-13, 2), "z") and st_.poly.degree == 6


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family.value}-n{s.n}")
def test_closed_form_equals_operator_form(spec):
    for k in bound_indices(spec.params):
        assert closed_form(spec, k) == operator_form(spec, k)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family.value}-n{s.n}")
def test_transformed_rs_identity(spec):
    ext = chart_for(spec.family).expr(extend_potential(spec).rf)
    for k in bound_indices(spec.params):
        w = transformed_rs(spec, k)
        assert rs_residual(spec.params, w, ext, dispersion(spec.params, k)).is_zero()


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family.value}-n{s.n}")
def test_extension_denominator_nodeless(spec):
    den = square_free(extend_potential(spec).rf.den)
    assert sturm_count(den, chart_for(spec.family).interval) == 0


def test_degree_law_sweep():
    pairs = [(s, k) for s in SPECS for k in bound_indices(s.params)]
    assert len(pairs) >= 30
    for spec, k in pairs:
        ep = extended_polynomial(spec, k)
        assert not ep.degenerate
        assert ep.poly.degree == spec.n + k - 1


@pytest.mark.parametrize("spec", [s for s in SPECS if s.family in (Family.ECKART, Family.HRM)],
                         ids=lambda s: f"{s.family.value}-n{s.n}")
def test_bracket_antisymmetry(spec):
    for k in bound_indices(spec.params):
        assert extended_bracket(spec.params, k, spec.n) == -extended_bracket(spec.params, spec.n, k)


def test_superpartner_routes_agree():
    for spec in SPECS:
        if 0 in bound_indices(spec.params):
            assert superpartner(spec, "susy").rf == superpartner(spec, "direct").rf


def test_shape_invariance_examples():
    r = verify_enlarged_shape_invariance(ExtensionSpec(morse(F(5, 2), 1), 6))
    assert r.holds and r.e1 == 4
    r = verify_enlarged_shape_invariance(ExtensionSpec(morse(F(7, 2), 1), 8))
    assert r.holds and r.e1 == 6
    r = verify_enlarged_shape_invariance(ExtensionSpec(hdpt(F(1, 2), F(13, 2)), 6))
    assert r.holds and r.e1 == 16


def test_w_term_is_shifted_rs_function():
    spec = ExtensionSpec(morse(F(5, 2), 1), 6)
    assert w_term(spec) == -rs_function(spec.params.shifted(), 5).expr
    spec = ExtensionSpec(hdpt(F(1, 2), F(13, 2)), 6)
    assert w_term(spec) == -rs_function(spec.params.shifted(), 5).expr


def test_shape_invariance_unsupported_families():
    for spec in (ExtensionSpec(eckart(1, 4), 4), ExtensionSpec(hrm(F(7, 2), 2), 3)):
        with pytest.raises(UnsupportedFamily):
            verify_enlarged_shape_invariance(spec)


def test_broken_extension_factor_fails_rs_identity():
    # V + w_n' (factor one) does not carry the transformed RS functions
    spec = ExtensionSpec(hdpt(F(1, 2), F(13, 2)), 6)
    p = spec.params
    half = potential_expr(p) + extension_term(p, 6) * F(1, 2)
    w = transformed_rs(spec, 1)
    assert not rs_residual(p, w, half, dispersion(p, 1)).is_zero()


@settings(max_examples=25, deadline=None)
@given(any_params, st.integers(1, 12))
def test_certified_specs_carry_exact_identities(params, n):
    try:
        c = classify_sector(params, n)
    except ZeroDivisionError:
        return
    assume(c.kind is Sector.STRICT)
    spec = ExtensionSpec(params, n)
    cert = certify_regularity(spec)
    assert cert.node_count == 0 and cert.certified
    for k in bound_indices(params):
        assert closed_form(spec, k) == operator_form(spec, k)
        assert extended_polynomial(spec, k).poly.degree == n + k - 1
