import random
from fractions import Fraction as F

import pytest

from discval.errors import InvalidSpec, NonUnitInput, PrecisionExhausted, ZeroInput
from discval.exactnum import U, UElem, UPoly, is_constant
from discval.series import MultiSeries, TSeries
from discval.valuation import (PhiSpec, Residue, build_phi, custom_phi,
                               probe_injectivity, random_polynomial, residue,
                               value, value_quot, value_with_escalation)


def X(n, i):
    return MultiSeries.X(n, i)


def root(p, k=1):
    return UElem(UPoly.from_exponents({F(1, p ** k): 1}))


PHI3 = build_phi(PhiSpec(3, 1, (3,), 8))


# -- build_phi ----------------------------------------------------------------

def test_build_phi_m1():
    phi = build_phi(PhiSpec(3, 1, (3,), 2))
    assert phi.describe() == {"X1": "t", "X2": "u*t", "X3": "u^(1/3)*t + u^(1/9)*t^2"}
    assert all(img.known_up_to == 2 for img in phi.images)


def test_build_phi_m2():
    phi = build_phi(PhiSpec(4, 2, (5,), 2))
    assert phi.describe() == {"X1": "t1", "X2": "u*t1", "X3": "t2",
                              "X4": "u^(1/5)*t1 + u^(1/25)*t1^2"}


@pytest.mark.parametrize("args", [
    (3, 3, (), 4),          # m > n - 1
    (3, 0, (3, 5), 4),      # m < 1
    (4, 1, (3,), 4),        # wrong prime count
    (4, 1, (5, 3), 4),      # not increasing
    (3, 1, (2,), 4),        # prime must exceed 2
    (3, 1, (9,), 4),        # not prime
    (4, 1, (3, 3), 4),      # repeated
    (3, 1, (3,), 0),        # precision
])
def test_invalid_specs(args):
    with pytest.raises(InvalidSpec):
        build_phi(PhiSpec(*args))


def test_mismatched_custom_map():
    with pytest.raises(InvalidSpec):
        custom_phi(lambda T: [TSeries.t(1, 1) + 1, TSeries.t(1, 1)], 2, 1)


# -- value ----------------------------------------------------------------------

def test_value_examples():
    assert value(X(3, 1), PHI3) == 1
    for a in (F(0), F(1), F(-3, 2), F(7)):
        assert value(X(3, 2) - X(3, 1) * a, PHI3) == 1
    assert value(X(3, 3) ** 3 - X(3, 2) * X(3, 1) ** 2, PHI3) == 4


def test_value_zero_input():
    with pytest.raises(ZeroInput):
        value(MultiSeries.zero(3), PHI3)


def test_value_beyond_horizon():
    # X1 - X1 + X1^5 has value 5, invisible at T = 4
    f = X(3, 1) ** 5
    phi = build_phi(PhiSpec(3, 1, (3,), 4))
    with pytest.raises(PrecisionExhausted):
        value(f, phi)
    res = value_with_escalation(f, phi, attempts=2)
    assert (res.value, res.horizons) == (5, [4, 8])
    res = value_with_escalation(X(3, 1) ** 9, phi, attempts=2)
    assert res.exhausted and res.horizons == [4, 8]


def test_value_quot_examples():
    assert value_quot(X(3, 2), X(3, 1), PHI3) == 0
    assert value_quot(X(3, 1) ** 2, X(3, 1), PHI3) == 1
    # twisted map with v(X1) = 2, v(X2) = 3
    phi = custom_phi(lambda T: [TSeries.t(1, 1) ** 2,
                                (TSeries.t(1, 1) ** 3 + TSeries.t(1, 1, U) ** 4).truncated(T)],
                     2, 1, 8)
    n1, n2 = value(X(2, 1), phi), value(X(2, 2), phi)
    assert (n1, n2) == (2, 3)
    assert value_quot(X(2, 2) ** n1, X(2, 1) ** n2, phi) == 0


def test_value_of_variables_is_one():
    for spec in [PhiSpec(2, 1, (), 6), PhiSpec(3, 1, (5,), 6), PhiSpec(4, 1, (3, 5), 6),
                 PhiSpec(4, 2, (7,), 6), PhiSpec(5, 2, (3, 11), 6), PhiSpec(4, 3, (), 6)]:
        phi = build_phi(spec)
        assert [value(X(spec.n, i), phi) for i in range(1, spec.n + 1)] == [1] * spec.n


# -- residue ----------------------------------------------------------------------

def test_residue_examples():
    r = residue(X(3, 2), X(3, 1), PHI3)
    assert r == UElem(U) and str(r) == "u"
    assert is_constant(r.as_uelem()) is None
    assert residue(X(3, 1), X(3, 1), PHI3) == 1
    assert residue(X(3, 3), X(3, 1), PHI3) == root(3)


def test_residue_non_unit():
    with pytest.raises(NonUnitInput):
        residue(X(3, 1) ** 2, X(3, 1), PHI3)


def test_residue_m2():
    phi = build_phi(PhiSpec(4, 2, (5,), 8))
    r = residue(X(4, 3), X(4, 1), phi)
    t1, t2 = TSeries.t(2, 1), TSeries.t(2, 2)
    assert r == Residue(t2, t1)
    assert str(r) == "t2/t1"
    assert r.is_constant() is None
    assert residue(X(4, 2), X(4, 1), phi) == Residue(t1.scale(U), t1)
    assert str(residue(X(4, 2), X(4, 1), phi)) == "u"


def test_residue_well_defined():
    rng = random.Random(11)
    for n, phi in [(3, PHI3), (4, build_phi(PhiSpec(4, 2, (5,), 10)))]:
        checked = 0
        while checked < 30:
            f = random_polynomial(rng, n, 3)
            g = random_polynomial(rng, n, 3)
            h = random_polynomial(rng, n, 2)
            try:
                if value(f, phi) != value(g, phi):
                    continue
                r1 = residue(f, g, phi)
                r2 = residue(f * h, g * h, phi)
            except PrecisionExhausted:
                continue
            assert r1 == r2
            checked += 1


# -- axioms ---------------------------------------------------------------------

def test_valuation_axioms():
    rng = random.Random(2024)
    phis = [build_phi(PhiSpec(2, 1, (), 12)), build_phi(PhiSpec(3, 1, (3,), 12)),
            build_phi(PhiSpec(4, 1, (3, 5), 12)), build_phi(PhiSpec(4, 2, (5,), 12))]
    exhausted = 0
    for k in range(200):
        phi = phis[k % len(phis)]
        f = random_polynomial(rng, phi.n, 4, min_degree=0)
        g = random_polynomial(rng, phi.n, 4, min_degree=0)
        try:
            vf, vg, vfg = value(f, phi), value(g, phi), value(f * g, phi)
        except PrecisionExhausted:
            exhausted += 1
            continue
        assert vfg == vf + vg
        s = f + g
        if s.is_zero():
            continue
        try:
            vs = value(s, phi)
        except PrecisionExhausted:
            exhausted += 1
            continue
        assert vs >= min(vf, vg)
        if vf != vg:
            assert vs == min(vf, vg)
    assert exhausted < 10


# -- probe ------------------------------------------------------------------

def test_probe_small():
    phi = build_phi(PhiSpec(4, 1, (3, 5), 8))
    report = probe_injectivity(phi, 3, 60, seed=5)
    assert report.trials == 60
    assert report.finite + len(report.failures) == 60
    assert report.finite_rate >= 0.99
    assert all(v is None or v >= 1 for v in report.values)
    again = probe_injectivity(phi, 3, 60, seed=5)
    assert again.to_record() == report.to_record()


def test_probe_reports_failures():
    # X1 - X2 maps to 0; truncated images leave that undecided at every horizon
    phi = custom_phi(lambda T: [TSeries.t(1, 1).truncated(T), TSeries.t(1, 1).truncated(T)],
                     2, 1, 4)
    report = probe_injectivity(phi, 1, 40, seed=1)
    assert report.failures
    assert all(f["kind"] == "PrecisionExhausted" and f["horizons"] == [4, 8, 16]
               for f in report.failures)
    assert report.finite + len(report.failures) == 40


def test_probe_exact_images_zero():
    phi = custom_phi(lambda T: [TSeries.t(1, 1), TSeries.t(1, 1)], 2, 1, 4)
    report = probe_injectivity(phi, 1, 40, seed=1)
    assert report.failures
    assert {f["kind"] for f in report.failures} == {"ZeroImage"}
    assert report.finite + len(report.failures) == 40
