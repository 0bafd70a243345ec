from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discval.errors import DivisionByZero
from discval.exactnum import (U, UElem, UPoly, annihilating_polynomial, arith,
                              is_constant, to_root_form)
from oracles import eval_annihilator, eval_mpoly_w, eval_uelem, eval_upoly


def P(mapping):
    return UPoly.from_exponents(mapping)


cbrt = P({F(1, 3): 1})
sqrt = P({F(1, 2): 1})


# -- arith ---------------------------------------------------------------

def test_cube_roots_multiply():
    assert arith(UElem(cbrt), UElem(cbrt), "mul") == UElem(P({F(2, 3): 1}))
    assert str(UElem(cbrt) * UElem(cbrt)) == "u^(2/3)"


def test_difference_of_squares_quotient():
    x = UElem(U - 1, sqrt - 1)
    y = arith(x, UElem(sqrt + 1), "div")
    assert y == 1
    # oracle: evaluate at u = w^2
    for w in (F(2), F(3, 7), F(-5, 2)):
        assert eval_uelem(y, w, 2) == 1


def test_additive_identity():
    assert arith(UElem(U), UElem(0), "add") == UElem(U)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        arith(UElem(U), UElem(0), "div")
    with pytest.raises(ZeroDivisionError):
        UElem(U, UPoly())


def test_unknown_op():
    with pytest.raises(ValueError):
        arith(UElem(U), UElem(U), "pow")


def test_canonical_denominator():
    x = UElem(U * 6, P({1: 3, 2: 9}))
    # monomial u cancelled, lowest coefficient of den is 1
    assert x.den.items()[0] == (0, 1)
    assert x == UElem(UPoly.const(2), P({0: 1, 1: 3}))


def test_reduced_and_hash():
    x = UElem(U - 1, sqrt - 1)
    r = x.reduced()
    assert r.is_poly()
    assert r.num == sqrt + 1
    assert hash(x) == hash(UElem(sqrt + 1))


# -- is_constant ------------------------------------------------------------

def test_is_constant_examples():
    assert is_constant(U) is None
    assert is_constant(UElem(F(7, 2))) == F(7, 2)
    assert is_constant(UElem(U * U - 1, U * U - 1)) == 1


# -- to_root_form -----------------------------------------------------------

def test_root_form_examples():
    A, B, N = to_root_form(cbrt)
    assert (A.terms, B.terms, N) == ({(1,): 1}, {(0,): 1}, 3)
    A, B, N = to_root_form(U)
    assert (A.terms, B.terms, N) == ({(1,): 1}, {(0,): 1}, 1)
    A, B, N = to_root_form(sqrt + cbrt)
    assert (A.terms, B.terms, N) == ({(3,): 1, (2,): 1}, {(0,): 1}, 6)
    # re-substitution u = w^6
    for w in (F(2), F(3, 5)):
        assert eval_mpoly_w(A, w) == eval_upoly(sqrt + cbrt, w, 6)


# -- annihilating polynomial ------------------------------------------------

def test_annihilator_cube_root():
    ann = annihilating_polynomial(cbrt)
    assert str(ann) == "Z^3 - u"
    assert ann.evaluate(cbrt).is_zero()


def test_annihilator_of_u():
    ann = annihilating_polynomial(U)
    assert str(ann) == "Z - u"


def test_annihilator_sqrt_plus_one():
    ann = annihilating_polynomial(sqrt + 1)
    assert str(ann) == "Z^2 - 2*Z + 1 - u"
    # substitution oracle: (Z-1)^2 = u at Z = w + 1, u = w^2
    for w in (F(2), F(-3, 4), F(11)):
        assert eval_annihilator(ann, w * w, w + 1) == 0


def test_annihilator_of_zero_and_constant():
    assert str(annihilating_polynomial(UElem(0))) == "Z"
    assert str(annihilating_polynomial(UElem(F(3, 2)))) == "2*Z - 3"


def test_annihilator_of_quotient():
    h = UElem(cbrt + 1, P({F(2, 3): 1, 0: -2}))
    ann = annihilating_polynomial(h)
    assert ann.degree == 3
    assert ann.evaluate(h).is_zero()
    for w in (F(2), F(1, 3)):
        assert eval_annihilator(ann, w ** 3, eval_uelem(h, w, 3)) == 0


# -- properties ---------------------------------------------------------------

def upolys(max_den=27, max_terms=3):
    term = st.tuples(st.integers(1, max_den).flatmap(
        lambda d: st.integers(0, 2 * d).map(lambda a: F(a, d))),
        st.integers(-4, 4).filter(bool))
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda ts: UPoly.from_exponents(dict(ts)))


def uelems(max_den=27):
    return st.tuples(upolys(max_den), upolys(max_den).filter(bool)).map(lambda p: UElem(*p))


@settings(max_examples=200, deadline=None)
@given(uelems(), uelems(), uelems())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


SMALL_DENS = (1, 2, 3, 6, 9, 18, 27)


def small_upolys(dens=SMALL_DENS):
    term = st.tuples(st.sampled_from(dens).flatmap(
        lambda d: st.integers(0, 2 * d).map(lambda a: F(a, d))),
        st.integers(-4, 4).filter(bool))
    return st.lists(term, max_size=3).map(lambda ts: UPoly.from_exponents(dict(ts)))


@settings(max_examples=200, deadline=None)
@given(small_upolys(), small_upolys().filter(bool), small_upolys(), small_upolys().filter(bool))
def test_arith_matches_evaluation(p, q, r, s):
    a, b = UElem(p, q), UElem(r, s)
    for w in (F(2), F(3, 2)):
        ea, eb = eval_uelem(a, w, 54), eval_uelem(b, w, 54)
        assert eval_uelem(a + b, w, 54) == ea + eb
        assert eval_uelem(a * b, w, 54) == ea * eb
        assert eval_uelem(a - b, w, 54) == ea - eb
        if b:
            assert eval_uelem(a / b, w, 54) == ea / eb


@settings(max_examples=200, deadline=None)
@given(uelems())
def test_root_form_round_trip(a):
    A, B, N = to_root_form(a)
    back = UElem(UPoly({e[0]: c for e, c in A.terms.items()}, N),
                 UPoly({e[0]: c for e, c in B.terms.items()}, N))
    assert back == a
    assert N == a.root_denominator


@settings(max_examples=60, deadline=None)
@given(st.tuples(small_upolys((1, 2, 3, 6)), small_upolys((1, 3)).filter(bool)).map(lambda p: UElem(*p)))
def test_annihilator_vanishes(h):
    ann = annihilating_polynomial(h)
    assert ann.evaluate(h).is_zero()
    assert 1 <= ann.degree <= h.root_denominator


@settings(max_examples=200, deadline=None)
@given(uelems())
def test_is_constant_consistency(a):
    c = is_constant(a)
    if c is not None:
        assert arith(a, UElem(c), "sub").is_zero()
    else:
        # spot check against the value at u = 1
        num = sum((co for _, co in a.num.items()), 0)
        den = sum((co for _, co in a.den.items()), 0)
        if den:
            assert not arith(a, UElem(F(num, den)), "sub").is_zero()
