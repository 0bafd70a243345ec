"""Substitution maps and the valuations they induce.

A map ``phi`` sends X_1..X_n to series in t_1..t_m with no constant term;
the valuation of ``f`` is the order of ``phi(f)`` and the residue of a unit
``f/g`` is the quotient of the leading forms of ``phi(f)`` and ``phi(g)``.

:func:`build_phi` realizes the dimension-m family::

    X_1 -> t_1
    X_2 -> u t_1
    X_i -> t_{i-1}                         for 3 <= i <= m+1
    X_i -> sum_{j=1..T} u^(1/p_i^j) t_1^j    for i > m+1
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .errors import (InvalidSpec, NonUnitInput, PrecisionExhausted, ZeroImage,
                     ZeroInput)
from .exactnum import UElem, UPoly, format_uelem
from .series import EXACT, MultiSeries, TSeries, compose


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def default_primes(count: int) -> Tuple[int, ...]:
    """The first ``count`` primes greater than 2."""
    out = []
    p = 3
    while len(out) < count:
        if is_prime(p):
            out.append(p)
        p += 2
    return tuple(out)


@dataclass(frozen=True)
class PhiSpec:
    n: int
    m: int
    primes: Tuple[int, ...] = ()
    precision: int = 8

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        self.validate()

    def validate(self):
        if self.n < 2:
            raise InvalidSpec(f"n must be >= 2, got {self.n}")
        if not 1 <= self.m <= self.n - 1:
            raise InvalidSpec(f"m must satisfy 1 <= m <= n-1, got m={self.m}, n={self.n}")
        want = self.n - self.m - 1
        if len(self.primes) != want:
            raise InvalidSpec(f"need {want} primes for n={self.n}, m={self.m}, got {len(self.primes)}")
        for p in self.primes:
            if not is_prime(p) or p <= 2:
                raise InvalidSpec(f"{p} is not an odd prime")
        if any(a >= b for a, b in zip(self.primes, self.primes[1:])):
            raise InvalidSpec("primes must be strictly increasing")
        if self.precision < 1:
            raise InvalidSpec("precision must be >= 1")

    @classmethod
    def with_default_primes(cls, n: int, m: int, precision: int = 8) -> "PhiSpec":
        return cls(n, m, default_primes(max(n - m - 1, 0)), precision)


def puiseux_image(p: int, m: int, T: int) -> TSeries:
    """``sum_{j=1..T} u^(1/p^j) t_1^j``, exact on degrees <= T."""
    terms = {}
    for j in range(1, T + 1):
        e = [0] * m
        e[0] = j
        terms[tuple(e)] = UElem(UPoly.monomial(1, Fraction(1, p ** j)))
    return TSeries(m, terms, T)


class Phi:
    """A realized substitution map at a given precision.

    ``builder(T)`` returns the n images at precision ``T``; it lets callers
    rebuild the same map at a higher precision with :meth:`at_precision`.
    """

    def __init__(self, n: int, m: int, precision: int,
                 builder: Callable[[int], List[TSeries]],
                 spec: Optional[PhiSpec] = None, label: str = ""):
        self.n = n
        self.m = m
        self.precision = precision
        self.spec = spec
        self.label = label
        self._builder = builder
        self.images: Tuple[TSeries, ...] = tuple(builder(precision))
        if len(self.images) != n:
            raise InvalidSpec(f"map defines {len(self.images)} images for n = {n}")
        for i, img in enumerate(self.images):
            if img.m != m:
                raise InvalidSpec(f"image of X{i + 1} is not a series in {m} variables")
            if img.has_constant_term():
                raise InvalidSpec(f"image of X{i + 1} has a nonzero constant term")

    def at_precision(self, T: int) -> "Phi":
        if T == self.precision:
            return self
        spec = self.spec
        if spec is not None:
            spec = PhiSpec(spec.n, spec.m, spec.primes, T)
        return Phi(self.n, self.m, T, self._builder, spec, self.label)

    @property
    def built_by_spec(self) -> bool:
        return self.spec is not None

    def describe(self) -> Dict[str, str]:
        return {f"X{i + 1}": str(img) for i, img in enumerate(self.images)}

    def __repr__(self):
        return f"Phi(n={self.n}, m={self.m}, T={self.precision}, {self.describe()})"


def build_phi(spec: PhiSpec) -> Phi:
    spec.validate()
    n, m = spec.n, spec.m

    def builder(T: int) -> List[TSeries]:
        images = [TSeries.t(m, 1), TSeries.t(m, 1, UPoly.monomial(1, 1))]
        for i in range(3, n + 1):
            if i <= m + 1:
                images.append(TSeries.t(m, i - 1))
            else:
                images.append(puiseux_image(spec.primes[i - m - 2], m, T))
        return [img.truncated(T) for img in images]

    return Phi(n, m, spec.precision, builder, spec)


def custom_phi(images: Callable[[int], List[TSeries]], n: int, m: int,
               precision: int = 8, label: str = "") -> Phi:
    return Phi(n, m, precision, images, None, label)


# ---------------------------------------------------------------------------
# value and residue
# ---------------------------------------------------------------------------

def composed_to_order(f: MultiSeries, phi: Phi) -> TSeries:
    """``phi(f)`` computed just far enough to contain its leading form.

    Truncating the images is exact below the cut, so the horizon is doubled
    until a nonzero term shows up.
    """
    if f.is_zero() and f.is_exact():
        raise ZeroInput("v(0) is undefined")
    G = min([f.known_up_to] + [img.known_up_to for img in phi.images])
    if G == EXACT:
        bound = max(f.total_degree(), 0) * max([img.total_degree() for img in phi.images] + [1])
    else:
        bound = G
    h = 1
    while True:
        cap = h if h < bound else G
        s = compose(f, phi.images, cap=cap)
        if s.terms:
            return s
        if cap == G:
            if G == EXACT:
                raise ZeroImage(f"{f} maps to 0: the map is not injective on it")
            raise PrecisionExhausted(
                f"no nonzero term of phi(f) up to degree {G}", horizons=[G])
        h *= 2


def value(f: MultiSeries, phi: Phi) -> int:
    """v(f) = ord(phi(f)); raises PrecisionExhausted past the horizon."""
    return composed_to_order(f, phi).ord()


def value_quot(f: MultiSeries, g: MultiSeries, phi: Phi) -> int:
    return value(f, phi) - value(g, phi)


@dataclass
class ValueResult:
    value: Optional[int]
    horizons: List[int] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.value is None

    def to_record(self) -> dict:
        if self.value is None:
            return {"value": "PrecisionExhausted", "horizons": self.horizons}
        return {"value": self.value, "horizons": self.horizons}


def value_with_escalation(f: MultiSeries, phi: Phi, attempts: int = 1) -> ValueResult:
    """Try precisions T, 2T, 4T, ... (``attempts`` horizons in total)."""
    horizons = []
    T = phi.precision
    for k in range(max(attempts, 1)):
        p = phi.at_precision(T * 2 ** k)
        horizons.append(p.precision)
        try:
            return ValueResult(value(f, p), horizons)
        except PrecisionExhausted:
            continue
    return ValueResult(None, horizons)


class Residue:
    """Residue class of a unit, as a quotient of equal-degree forms."""

    def __init__(self, num: TSeries, den: TSeries):
        if den.is_zero():
            raise ZeroInput("residue with zero denominator")
        if num.m != den.m:
            raise ValueError("forms in different rings")
        if not (num.is_homogeneous() and den.is_homogeneous()):
            raise ValueError("residue forms must be homogeneous")
        if num.terms and num.total_degree() != den.total_degree():
            raise NonUnitInput("residue forms of different degrees")
        self.num = TSeries._make(num.m, num.terms, EXACT)
        self.den = TSeries._make(den.m, den.terms, EXACT)

    @classmethod
    def of(cls, x, m: int = 1) -> "Residue":
        """Residue of a constant field element (degree-0 forms)."""
        return cls(TSeries.const(m, x), TSeries.const(m, 1))

    @property
    def m(self) -> int:
        return self.num.m

    def __eq__(self, other):
        if not isinstance(other, Residue):
            if self.m == 1:
                try:
                    return self.as_uelem() == UElem.coerce(other)
                except TypeError:
                    return NotImplemented
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    __hash__ = None

    def as_uelem(self) -> UElem:
        """The field element for m = 1 (coefficient ratio)."""
        if self.m != 1:
            raise ValueError("a residue collapses to a single element only for m = 1")
        (_, a), = self.num.terms.items() if self.num.terms else [((0,), UElem(0))]
        (_, b), = self.den.terms.items()
        return a / b

    def is_constant(self) -> Optional[Fraction]:
        """c if the residue equals the constant c, else None."""
        if not self.num.terms:
            return Fraction(0)
        e, d = next(iter(self.den.terms.items()))
        c = self.num.terms.get(e, UElem(0)) / d
        if self.den.scale(c) != self.num:
            return None
        return c.is_constant()

    def dehomogenized(self) -> Tuple[Dict[Tuple[int, ...], UElem], Dict[Tuple[int, ...], UElem]]:
        """Forms with t_1 = 1, as maps ``s-exponents -> coefficient``.

        ``s_i = t_i / t_1`` for i = 2..m.  Coefficient denominators are
        cleared by scaling both forms, so every coefficient is a polynomial.
        """
        num, den = self.num, self.den
        for s in (num, den):
            for c in s.terms.values():
                if not c.is_poly():
                    num, den = num.scale(UElem(c.den)), den.scale(UElem(c.den))
        if any(not c.is_poly() for s in (num, den) for c in s.terms.values()):
            return Residue(num, den).dehomogenized()
        a = {e[1:]: c for e, c in num.terms.items()}
        b = {e[1:]: c for e, c in den.terms.items()}
        return a, b

    def simplified(self) -> "Residue":
        """Same residue with the common t-monomial of both forms cancelled."""
        if not self.num.terms:
            return self
        m = self.m
        common = [min(min(e[i] for e in s.terms) for s in (self.num, self.den)) for i in range(m)]
        if not any(common):
            return self

        def shift(s):
            return TSeries(m, {tuple(x - c for x, c in zip(e, common)): v for e, v in s.terms.items()})

        return Residue(shift(self.num), shift(self.den))

    def __str__(self):
        if self.m == 1:
            return format_uelem(self.as_uelem().reduced())
        r = self.simplified()
        if len(r.den.terms) == 1 and r.den.total_degree() == 0:
            (_, d), = r.den.terms.items()
            if len(r.num.terms) == 1 and r.num.total_degree() == 0:
                (_, a), = r.num.terms.items()
                return format_uelem((a / d).reduced())
            return str(r.num.scale(d.inverse()))
        num, den = str(r.num), str(r.den)
        if len(r.num.terms) > 1:
            num = f"({num})"
        if len(r.den.terms) > 1 or "+" in den or " - " in den:
            den = f"({den})"
        if den == "1":
            return num
        return f"{num}/{den}"

    def __repr__(self):
        return f"Residue({self})"

    def to_record(self):
        rec = {"residue": str(self)}
        if self.m == 1:
            c = self.is_constant()
            rec["constant"] = None if c is None else str(c)
        else:
            rec["num"] = str(self.num)
            rec["den"] = str(self.den)
        return rec


def residue(f: MultiSeries, g: MultiSeries, phi: Phi) -> Residue:
    """Residue of the unit f/g: quotient of the leading forms of phi(f), phi(g)."""
    sf = composed_to_order(f, phi)
    sg = composed_to_order(g, phi)
    vf, vg = sf.ord(), sg.ord()
    if vf != vg:
        raise NonUnitInput(f"v(f) - v(g) = {vf - vg}, not a unit")
    return Residue(sf.leading_form(), sg.leading_form())


# ---------------------------------------------------------------------------
# random polynomials and the injectivity probe
# ---------------------------------------------------------------------------

def random_polynomial(rng: random.Random, n: int, degree: int, max_terms: int = 4,
                      min_degree: int = 1, coeff_range: int = 5) -> MultiSeries:
    """Random nonzero sparse polynomial with terms of degree in [min_degree, degree]."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(min_degree, degree)
            e = [0] * n
            for _ in range(d):
                e[rng.randrange(n)] += 1
            c = 0
            while c == 0:
                c = rng.randint(-coeff_range, coeff_range)
            if rng.random() < 0.2:
                c = Fraction(c, rng.randint(2, 4))
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        f = MultiSeries(n, terms)
        if not f.is_zero():
            return f


@dataclass
class ProbeReport:
    trials: int
    finite: int
    escalations: Dict[int, int]
    failures: List[dict]
    values: List[Optional[int]]

    @property
    def finite_rate(self) -> float:
        return self.finite / self.trials if self.trials else 1.0

    def to_record(self) -> dict:
        return {
            "trials": self.trials,
            "finite": self.finite,
            "finite_rate": self.finite_rate,
            "escalations": {str(k): v for k, v in sorted(self.escalations.items())},
            "failures": self.failures,
        }


def probe_injectivity(phi: Phi, degree: int, trials: int, seed: int,
                      attempts: int = 3, max_terms: int = 4) -> ProbeReport:
    """Random nonzero f in the maximal ideal; count finite values.

    Each trial tries horizons T, 2T, 4T (``attempts`` of them).  Failures are
    recorded with their horizons, never dropped.  With exact images a
    polynomial sent to 0 is recorded as a ZeroImage failure.
    """
    rng = random.Random(seed)
    finite = 0
    esc: Dict[int, int] = {}
    failures = []
    values: List[Optional[int]] = []
    for trial in range(trials):
        f = random_polynomial(rng, phi.n, degree, max_terms=max_terms)
        try:
            res = value_with_escalation(f, phi, attempts)
        except ZeroImage:
            # exact images and phi(f) == 0: a proof of non-injectivity, not a horizon issue
            values.append(None)
            failures.append({"trial": trial, "f": str(f), "kind": "ZeroImage", "horizons": []})
            continue
        values.append(res.value)
        if res.value is None:
            failures.append({"trial": trial, "f": str(f), "kind": "PrecisionExhausted",
                             "horizons": res.horizons})
        else:
            finite += 1
            k = len(res.horizons) - 1
            esc[k] = esc.get(k, 0) + 1
    return ProbeReport(trials, finite, esc, failures, values)
