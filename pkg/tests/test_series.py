from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discval.errors import (NonPositiveOrderImage, PrecisionExhausted,
                            VariableMismatch, ZeroInput)
from discval.exactnum import U, UElem, UPoly
from discval.series import EXACT, MultiSeries, TSeries, compose
from discval.valuation import PhiSpec, build_phi, puiseux_image
from oracles import puiseux_power_brute


def X(n, i):
    return MultiSeries.X(n, i)


def t(m, i, c=1):
    return TSeries.t(m, i, c)


def root(p, k=1):
    return UElem(UPoly.from_exponents({F(1, p ** k): 1}))


def coeff_dict(c):
    """UElem with polynomial form -> {exponent: coefficient}."""
    assert c.is_poly()
    return dict(c.num.items())


# -- arithmetic ---------------------------------------------------------------

def test_difference_of_squares():
    x1, x2 = X(2, 1), X(2, 2)
    assert (x1 + x2) * (x1 - x2) == x1 * x1 - x2 * x2
    assert str((x1 + x2) * (x1 - x2)) == "X1^2 - X2^2"


def test_sum_keeps_horizon():
    a = (t(1, 1) + t(1, 1) ** 2).truncated(6)
    s = a + (-t(1, 1))
    assert s.terms == {(2,): UElem(1)}
    assert s.known_up_to == 6


def test_coefficient_product():
    s = t(2, 1, U) * t(2, 2, root(3))
    assert s.terms == {(1, 1): UElem(UPoly.from_exponents({F(4, 3): 1}))}


def test_mul_precision_rule():
    a = (t(1, 1) + t(1, 1) ** 3).truncated(5)        # known to 5, ord 1
    b = (t(1, 1) ** 2).truncated(4)                   # known to 4, ord 2
    p = a * b
    assert p.known_up_to == min(5 + 2, 4 + 1, 9)
    # an unknown factor of order 0 is taken conservatively
    z = TSeries.zero(1, 3)
    assert (z * a).known_up_to == min(3 + 1, 5 + 0, 8)


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        X(2, 1) + X(3, 1)
    with pytest.raises(VariableMismatch):
        compose(X(2, 1), [t(1, 1)])


# -- ord ----------------------------------------------------------------------

def test_ord_examples():
    assert (t(1, 1) + t(1, 1, U) ** 2).ord() == 1
    assert t(2, 1, U).mul(t(2, 2)).ord() == 2


def test_ord_exhausted():
    with pytest.raises(PrecisionExhausted):
        TSeries.zero(1, 8).ord()
    with pytest.raises(ZeroInput):
        TSeries.zero(1).ord()


# -- leading form -------------------------------------------------------------

def test_leading_form_examples():
    tt = t(1, 1)
    assert (tt + tt * tt.scale(U)).leading_form() == tt
    s = t(2, 1, U) + t(2, 2) + t(2, 1).mul(t(2, 2))
    assert s.leading_form() == t(2, 1, U) + t(2, 2)


def test_leading_form_cubic():
    phi = build_phi(PhiSpec(3, 1, (3,), 8))
    f = X(3, 3) ** 3 - X(3, 2) * X(3, 1) ** 2
    lf = compose(f, phi.images).leading_form()
    assert lf.terms == {(4,): UElem(UPoly.from_exponents({F(7, 9): 3}))}
    assert str(lf) == "3*u^(7/9)*t^4"


@pytest.mark.parametrize("T", [4, 6, 8])
def test_cubic_against_brute_force(T):
    phi = build_phi(PhiSpec(3, 1, (3,), T))
    f = X(3, 3) ** 3 - X(3, 2) * X(3, 1) ** 2
    s = compose(f, phi.images)
    expected = puiseux_power_brute(3, T, 3)
    expected[3][F(1)] = expected[3].get(F(1), 0) - 1
    for d in range(T + 1):
        row = {e: c for e, c in expected.get(d, {}).items() if c}
        got = s.terms.get((d,))
        assert (coeff_dict(got) if got is not None else {}) == row, d


# -- compose ------------------------------------------------------------------

def test_compose_product():
    images = [t(1, 1), t(1, 1, U), puiseux_image(3, 1, 4)]
    s = compose(X(3, 1) * X(3, 2), images)
    assert s.agrees_with(t(1, 1, U).mul(t(1, 1)), 4)
    assert s.terms == {(2,): UElem(U)}


def test_compose_puiseux_image():
    phi = build_phi(PhiSpec(3, 1, (3,), 3))
    s = compose(X(3, 3), phi.images)
    assert s.known_up_to == 3
    assert s.terms == {(1,): root(3), (2,): root(3, 2), (3,): root(3, 3)}
    assert str(s) == "u^(1/3)*t + u^(1/9)*t^2 + u^(1/27)*t^3"


@pytest.mark.parametrize("a", [F(0), F(1), F(-2), F(5, 3)])
def test_compose_linear_form(a):
    phi = build_phi(PhiSpec(3, 1, (3,), 8))
    s = compose(X(3, 2) - X(3, 1) * a, phi.images)
    assert s.terms == {(1,): UElem(U - UPoly.const(a))}


def test_compose_rejects_constant_image():
    images = [t(1, 1) + 1, t(1, 1)]
    with pytest.raises(NonPositiveOrderImage):
        compose(X(2, 1), images)


# -- properties -----------------------------------------------------------

def sparse_polys(n, max_deg=4, max_terms=4):
    def mono(d):
        return st.lists(st.integers(0, n - 1), min_size=d, max_size=d).map(
            lambda idx: tuple(idx.count(i) for i in range(n)))
    term = st.tuples(st.integers(0, max_deg).flatmap(mono),
                     st.fractions(-5, 5, max_denominator=3).filter(bool))
    return st.lists(term, min_size=1, max_size=max_terms).map(
        lambda ts: MultiSeries(n, dict(ts)))


PHIS = {
    (2, 1): build_phi(PhiSpec(2, 1, (), 12)),
    (3, 1): build_phi(PhiSpec(3, 1, (3,), 12)),
    (4, 1): build_phi(PhiSpec(4, 1, (3, 5), 12)),
    (4, 2): build_phi(PhiSpec(4, 2, (5,), 12)),
}

pairs = st.sampled_from(sorted(PHIS)).flatmap(
    lambda key: st.tuples(st.just(key), sparse_polys(key[0]), sparse_polys(key[0])))


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_compose_is_homomorphism(data):
    key, f, g = data
    images = PHIS[key].images
    cf, cg = compose(f, images), compose(g, images)
    prod = compose(f * g, images)
    expect = cf * cg
    G = min(prod.known_up_to, expect.known_up_to)
    assert prod.agrees_with(expect, G)
    assert compose(f + g, images).agrees_with(cf + cg, 12)


def tseries(m=2, horizon=6):
    mono = st.tuples(*[st.integers(0, 3)] * m).filter(lambda e: 0 < sum(e) <= horizon)
    coeff = st.sampled_from([UElem(1), UElem(-2), UElem(U), UElem(U - 1), root(3),
                             UElem(F(1, 2)) + root(2)])
    return st.dictionaries(mono, coeff, min_size=1, max_size=4).map(
        lambda d: TSeries(m, d, horizon))


@settings(max_examples=200, deadline=None)
@given(tseries(), tseries())
def test_ord_additive(a, b):
    p = a * b
    if a.ord() + b.ord() <= p.known_up_to:
        assert p.ord() == a.ord() + b.ord()


@settings(max_examples=200, deadline=None)
@given(tseries(), tseries())
def test_ord_ultrametric(a, b):
    s = a + b
    if s.terms:
        assert s.ord() >= min(a.ord(), b.ord())
    if a.ord() != b.ord():
        assert s.ord() == min(a.ord(), b.ord())


@settings(max_examples=100, deadline=None)
@given(sparse_polys(3), st.integers(1, 6), st.integers(1, 6))
def test_truncation_consistency(f, T1, dT):
    low = compose(f, build_phi(PhiSpec(3, 1, (3,), T1)).images)
    high = compose(f, build_phi(PhiSpec(3, 1, (3,), T1 + dT)).images)
    assert low.known_up_to == T1
    assert high.agrees_with(low, T1)


def test_exact_series_marker():
    s = X(2, 1) * X(2, 2)
    assert s.known_up_to == EXACT
    assert s.is_exact()
