"""Exact coefficient arithmetic.

The coefficient field of every target series is Q(u^(1/N)) for some N.
Elements are stored as quotients of :class:`UPoly`, sparse polynomials in
``u`` with nonnegative rational exponents.  Exponents are kept as integer
numerators over a per-polynomial denominator, reduced after every
operation, which makes the common case (exponent addition) plain integer
arithmetic.

Annihilating polynomials are computed with a resultant against
``w^N - u`` in the root variable ``w = u^(1/N)``; see
:func:`annihilating_polynomial`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DivisionByZero, InternalInconsistency

QRat = Fraction


def qrat(x) -> Fraction:
    """Coerce an int, Fraction or string like ``"3/4"`` into a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a, b)


def _norm_coeff(c):
    # keep integral coefficients as plain ints, it is noticeably faster
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def format_rational(c) -> str:
    c = qrat(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# UPoly
# ---------------------------------------------------------------------------

class UPoly:
    """Sparse polynomial in ``u`` with nonnegative rational exponents.

    ``terms`` maps an integer ``k`` to a nonzero coefficient, representing
    ``coeff * u^(k/denom)``.  The denominator is always reduced, so
    ``denom`` is the root denominator (lcm of the exponent denominators).
    """

    __slots__ = ("terms", "denom", "_hash")

    def __init__(self, terms: Optional[Dict[int, object]] = None, denom: int = 1):
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    if k < 0:
                        raise ValueError("negative exponent in UPoly")
                    clean[k] = _norm_coeff(c)
        if denom <= 0:
            raise ValueError("exponent denominator must be positive")
        if clean and denom != 1:
            g = math.gcd(denom, *clean)
            if g != 1:
                denom //= g
                clean = {k // g: c for k, c in clean.items()}
        elif not clean:
            denom = 1
        self.terms = clean
        self.denom = denom
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "UPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, exponent) -> "UPoly":
        e = qrat(exponent)
        return cls({e.numerator: c}, e.denominator)

    @classmethod
    def from_exponents(cls, mapping: Dict[object, object]) -> "UPoly":
        """Build from ``{exponent (Fraction-like): coefficient}``."""
        den = 1
        exps = {}
        for e, c in mapping.items():
            e = qrat(e)
            exps[e] = exps.get(e, 0) + c
            den = den * e.denominator // math.gcd(den, e.denominator)
        return cls({int(e * den): c for e, c in exps.items()}, den)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def root_denominator(self) -> int:
        return self.denom

    def items(self) -> List[Tuple[Fraction, object]]:
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        return [(Fraction(k, self.denom), self.terms[k]) for k in sorted(self.terms)]

    def coefficient(self, exponent) -> object:
        e = qrat(exponent) * self.denom
        if e.denominator != 1:
            return 0
        return self.terms.get(e.numerator, 0)

    def min_exponent(self) -> Fraction:
        return Fraction(min(self.terms), self.denom)

    def max_exponent(self) -> Fraction:
        return Fraction(max(self.terms), self.denom)

    def constant_value(self):
        """The rational value if this is a constant polynomial, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        return None

    def rescaled(self, denom: int) -> Dict[int, object]:
        """Terms over a multiple ``denom`` of the own denominator."""
        f = denom // self.denom
        if f == 1:
            return self.terms
        return {k * f: c for k, c in self.terms.items()}

    # -- arithmetic -------------------------------------------------------
    def _aligned(self, other: "UPoly"):
        if self.denom == other.denom:
            return self.terms, other.terms, self.denom
        d = self.denom * other.denom // math.gcd(self.denom, other.denom)
        return self.rescaled(d), other.rescaled(d), d

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.const(other)
        a, b, d = self._aligned(other)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        return UPoly(out, d)

    __radd__ = __add__

    def __neg__(self):
        p = UPoly.__new__(UPoly)
        p.terms = {k: -c for k, c in self.terms.items()}
        p.denom = self.denom
        p._hash = None
        return p

    def __sub__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return UPoly()
        a, b, d = self._aligned(other)
        if len(a) < len(b):
            a, b = b, a
        out: Dict[int, object] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return UPoly(out, d)

    __rmul__ = __mul__

    def scale(self, c) -> "UPoly":
        if not c:
            return UPoly()
        return UPoly({k: v * c for k, v in self.terms.items()}, self.denom)

    def shift(self, exponent) -> "UPoly":
        """Multiply by ``u^exponent`` (exponent may be negative if the result stays >= 0)."""
        e = qrat(exponent)
        d = self.denom * e.denominator // math.gcd(self.denom, e.denominator)
        s = int(e * d)
        return UPoly({k + s: c for k, c in self.rescaled(d).items()}, d)

    def __pow__(self, k: int) -> "UPoly":
        if k < 0:
            raise ValueError("negative power of UPoly")
        result = UPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            if isinstance(other, (int, Fraction)):
                return self.constant_value() == other and (other != 0 or not self.terms)
            return NotImplemented
        return self.denom == other.denom and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.denom, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"UPoly({format_upoly(self)!r})"

    def __str__(self):
        return format_upoly(self)


def format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def format_upoly(p: UPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.items():
        c = qrat(c)
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = format_rational(a)
        else:
            mono = "u" if e == 1 else f"u^{format_exponent(e)}"
            body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


UZERO = UPoly()
UONE = UPoly.const(1)
U = UPoly.monomial(1, 1)


# ---------------------------------------------------------------------------
# UElem
# ---------------------------------------------------------------------------

class UElem:
    """Element ``num/den`` of Q(u^(1/N)).

    Canonical form: the lowest-exponent coefficient of ``den`` is 1 and the
    common monomial factor of ``num`` and ``den`` is cancelled.  Equality
    is decided by cross multiplication; no gcd reduction is performed by
    arithmetic (see :meth:`reduced`).
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        if not isinstance(num, UPoly):
            num = UPoly.const(num)
        if den is None:
            self.num, self.den = num, UONE
            return
        if not isinstance(den, UPoly):
            den = UPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("division by the zero element")
        if num.is_zero():
            self.num, self.den = UZERO, UONE
            return
        if den is UONE or den == UONE:
            self.num, self.den = num, UONE
            return
        self.num, self.den = _canonical_pair(num, den)

    @classmethod
    def _raw(cls, num: UPoly, den: UPoly) -> "UElem":
        e = cls.__new__(cls)
        e.num, e.den = num, den
        return e

    @classmethod
    def coerce(cls, x) -> "UElem":
        if isinstance(x, UElem):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den is UONE or self.den == UONE

    @property
    def root_denominator(self) -> int:
        d1, d2 = self.num.denom, self.den.denom
        return d1 * d2 // math.gcd(d1, d2)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = UElem.coerce(other)
        if self.is_poly() and other.is_poly():
            return UElem._raw(self.num + other.num, UONE)
        if self.den == other.den:
            return UElem(self.num + other.num, self.den)
        return UElem(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return UElem._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-UElem.coerce(other))

    def __rsub__(self, other):
        return UElem.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return UElem._raw(UZERO, UONE)
            return UElem._raw(self.num.scale(other), self.den)
        other = UElem.coerce(other)
        if self.is_poly() and other.is_poly():
            return UElem._raw(self.num * other.num, UONE)
        return UElem(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "UElem":
        if self.is_zero():
            raise DivisionByZero("division by the zero element")
        return UElem(self.den, self.num)

    def __truediv__(self, other):
        other = UElem.coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero element")
        return UElem(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return UElem.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_poly():
            return UElem._raw(self.num ** k, UONE)
        return UElem(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UPoly)):
            other = UElem(other)
        if not isinstance(other, UElem):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    # -- queries ----------------------------------------------------------
    def is_constant(self) -> Optional[Fraction]:
        """Return c if this element equals the rational constant c, else None."""
        if self.num.is_zero():
            return Fraction(0)
        kn, kd = max(self.num.terms), max(self.den.terms)
        cand = Fraction(self.num.terms[kn]) / self.den.terms[kd]
        if self.den.scale(cand) == self.num:
            return cand
        return None

    def reduced(self) -> "UElem":
        """Gcd-reduced representative (num and den coprime in Q[w])."""
        if self.is_poly():
            return self
        A, B, N = to_root_form(self)
        g = _upoly_gcd(_univ(A), _univ(B))
        if len(g) == 1:
            return self
        a = _univ_divexact(_univ(A), g)
        b = _univ_divexact(_univ(B), g)
        return UElem(_from_univ(a, N), _from_univ(b, N))

    def __repr__(self):
        return f"UElem({format_uelem(self)!r})"

    def __str__(self):
        return format_uelem(self)


def _canonical_pair(num: UPoly, den: UPoly) -> Tuple[UPoly, UPoly]:
    n_terms, d_terms, d = num._aligned(den)
    lo = min(min(n_terms), min(d_terms))
    kd = min(d_terms)
    c = d_terms[kd]
    if lo:
        n_terms = {k - lo: v for k, v in n_terms.items()}
        d_terms = {k - lo: v for k, v in d_terms.items()}
    if c != 1:
        inv = Fraction(1) / c
        n_terms = {k: v * inv for k, v in n_terms.items()}
        d_terms = {k: v * inv for k, v in d_terms.items()}
    num, den = UPoly(n_terms, d), UPoly(d_terms, d)
    if den == UONE:
        den = UONE
    return num, den


def format_uelem(a: UElem) -> str:
    if a.is_poly():
        return format_upoly(a.num)
    num = format_upoly(a.num)
    den = format_upoly(a.den)
    if len(a.num.terms) > 1:
        num = f"({num})"
    if len(a.den.terms) > 1 or a.den.constant_value() is None:
        den = f"({den})"
    return f"{num}/{den}"


def arith(a, b, op: str) -> UElem:
    """Field operation ``op`` in {'add', 'sub', 'mul', 'div'}."""
    a, b = UElem.coerce(a), UElem.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def is_constant(a) -> Optional[Fraction]:
    return UElem.coerce(a).is_constant()


# ---------------------------------------------------------------------------
# univariate helpers over Q (lists of coefficients, index = w-degree)
# ---------------------------------------------------------------------------

def _univ(p: "MPoly") -> List[Fraction]:
    if p.is_zero():
        return []
    deg = max(e[0] for e in p.terms)
    out = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        out[e[0]] = Fraction(c)
    return out


def _from_univ(coeffs: Sequence[Fraction], N: int) -> UPoly:
    return UPoly({k: c for k, c in enumerate(coeffs) if c}, N)


def _univ_divmod(a: List[Fraction], b: List[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lb = b[-1]
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = a[-1] / lb
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _upoly_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    while b:
        _, r = _univ_divmod(a, b)
        a, b = b, r
    lc = a[-1]
    return [c / lc for c in a]


def _univ_divexact(a, b):
    q, r = _univ_divmod(a, b)
    if r:
        raise InternalInconsistency("inexact univariate division")
    while q and q[-1] == 0:
        q.pop()
    return q


# ---------------------------------------------------------------------------
# MPoly: sparse multivariate polynomials over Q with integer exponents
# ---------------------------------------------------------------------------

class MPoly:
    """Sparse polynomial over Q in ``nvars`` variables (integer exponents)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Tuple[int, ...], object]] = None):
        self.nvars = nvars
        self.terms = {e: _norm_coeff(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "MPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if not other:
                return MPoly(self.nvars)
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: Dict[Tuple[int, ...], object] = {}
        get = out.get
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def degree(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficients_in(self, i: int) -> List["MPoly"]:
        """Coefficients w.r.t. variable ``i``, index = power; other variables kept."""
        deg = self.degree(i)
        out = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + (0,) + e[i + 1:]] = c
        return [MPoly(self.nvars, d) for d in out]

    def exquo(self, d: "MPoly") -> "MPoly":
        """Exact quotient; raises InternalInconsistency if ``d`` does not divide."""
        if d.is_zero():
            raise DivisionByZero("MPoly division by zero")
        if len(d.terms) == 1:
            (ed, cd), = d.terms.items()
            out = {}
            for e, c in self.terms.items():
                q = tuple(x - y for x, y in zip(e, ed))
                if min(q, default=0) < 0:
                    raise InternalInconsistency("inexact multivariate division")
                out[q] = _exact_div(c, cd)
            return MPoly(self.nvars, out)
        lm_d = max(d.terms)
        lc_d = d.terms[lm_d]
        dterms = list(d.terms.items())
        r = dict(self.terms)
        q = {}
        while r:
            lm = max(r)
            mono = tuple(x - y for x, y in zip(lm, lm_d))
            if min(mono) < 0:
                raise InternalInconsistency("inexact multivariate division")
            c = _exact_div(r[lm], lc_d)
            q[mono] = c
            for e, dc in dterms:
                key = tuple(x + y for x, y in zip(e, mono))
                v = r.get(key, 0) - c * dc
                if v:
                    r[key] = v
                else:
                    r.pop(key, None)
        return MPoly(self.nvars, q)

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators / lcm of denominators)."""
        if not self.terms:
            return Fraction(0)
        cs = [qrat(c) for c in self.terms.values()]
        g = math.gcd(*(c.numerator for c in cs))
        lden = 1
        for c in cs:
            lden = lden * c.denominator // math.gcd(lden, c.denominator)
        return Fraction(g, lden)

    def monomial_content(self) -> Tuple[int, ...]:
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def substitute_monomial_shift(self, shift: Sequence[int]) -> "MPoly":
        """Divide by the monomial with exponents ``shift``."""
        return MPoly(self.nvars, {tuple(x - s for x, s in zip(e, shift)): c
                                  for e, c in self.terms.items()})

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.terms!r})"


def det_bareiss(matrix: List[List[MPoly]]) -> MPoly:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nv = matrix[0][0].nvars
    M = [list(row) for row in matrix]
    sign = 1
    prev = MPoly.const(nv, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return MPoly(nv)
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * pivot - M[i][k] * M[k][j]
                M[i][j] = num.exquo(prev) if not prev == 1 else num
            M[i][k] = MPoly(nv)
        prev = pivot
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


# ---------------------------------------------------------------------------
# root form and annihilating polynomials
# ---------------------------------------------------------------------------

def to_root_form(a) -> Tuple[MPoly, MPoly, int]:
    """Write ``a = A(w)/B(w)`` with ``w^N = u`` and integer w-exponents.

    ``N`` is the lcm of all exponent denominators occurring in ``a``.
    """
    a = UElem.coerce(a)
    N = a.root_denominator
    A = MPoly(1, {(k,): c for k, c in a.num.rescaled(N).items()})
    B = MPoly(1, {(k,): c for k, c in a.den.rescaled(N).items()})
    return A, B, N


class AnnPoly:
    """Nonzero polynomial ``P(Z)`` over Q[u, s_2, ..., s_m].

    ``poly`` is an :class:`MPoly` in the variables ``(Z, u, s_2, ..., s_m)``.
    """

    def __init__(self, poly: MPoly, names: Sequence[str] = ("Z", "u")):
        if poly.is_zero() or poly.degree(0) < 1:
            raise InternalInconsistency("annihilating polynomial must have Z-degree >= 1")
        self.poly = poly
        self.names = tuple(names)

    @property
    def degree(self) -> int:
        return self.poly.degree(0)

    @property
    def coeffs(self) -> List[MPoly]:
        """``[c_0, ..., c_m]`` with ``c_0`` the leading (Z^m) coefficient."""
        return list(reversed(self.poly.coefficients_in(0)))

    def evaluate(self, h) -> UElem:
        """P(u, h) in UElem arithmetic (only without s-variables)."""
        if self.poly.nvars != 2:
            raise ValueError("UElem evaluation needs a polynomial in (Z, u) only")
        h = UElem.coerce(h)
        acc = UElem(0)
        for c in self.coeffs:
            cu = UPoly({e[1]: v for e, v in c.terms.items()})
            acc = acc * h + UElem(cu)
        return acc

    def __eq__(self, other):
        return isinstance(other, AnnPoly) and self.poly == other.poly

    def __repr__(self):
        return f"AnnPoly({format_mpoly(self.poly, self.names)!r})"

    def __str__(self):
        return format_mpoly(self.poly, self.names)


def format_mpoly(p: MPoly, names: Sequence[str]) -> str:
    """Render with terms in decreasing graded-lex order of the first variable."""
    if p.is_zero():
        return "0"
    # decreasing Z power, then increasing degree in the remaining variables
    keys = sorted(p.terms, key=lambda e: (-e[0], sum(e[1:]), tuple(-x for x in e[1:])))
    out = []
    for e in keys:
        c = qrat(p.terms[e])
        neg = c < 0
        a = -c if neg else c
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def _normalize_annihilator(P: MPoly) -> MPoly:
    P = P.substitute_monomial_shift(P.monomial_content())
    c = P.content()
    P = P * (1 / c)
    lead = max(P.terms)
    if P.terms[lead] < 0:
        P = -P
    return P


def resultant_against_radical(A: MPoly, B: MPoly, N: int) -> MPoly:
    """``Res_w(B*Z - A, w^N - u)`` up to sign.

    ``A`` and ``B`` are polynomials in ``(w, s_2, ..., s_m)``.  The result is
    a polynomial in ``(Z, u, s_2, ..., s_m)``, computed as the determinant of
    multiplication by ``B*Z - A`` on Q(u, s)[w]/(w^N - u), which is the norm
    and coincides with the resultant up to sign.
    """
    k = A.nvars - 1
    nv = k + 2
    M = [[MPoly(nv) for _ in range(N)] for _ in range(N)]
    cells = [[dict() for _ in range(N)] for _ in range(N)]

    def put(poly: MPoly, z: int, sign):
        for e, c in poly.terms.items():
            w, rest = e[0], e[1:]
            for j in range(N):
                tot = w + j
                q, r = divmod(tot, N)
                key = (z, q) + rest
                cell = cells[r][j]
                cell[key] = cell.get(key, 0) + sign * c

    put(B, 1, 1)
    put(A, 0, -1)
    for r in range(N):
        for j in range(N):
            M[r][j] = MPoly(nv, cells[r][j])
    return det_bareiss(M)


def annihilator_from_root_form(A: MPoly, B: MPoly, N: int,
                               names: Sequence[str] = ("Z", "u")) -> AnnPoly:
    if B.is_zero():
        raise DivisionByZero("zero denominator")
    if A.is_zero():
        return AnnPoly(MPoly.var(A.nvars + 1, 0), names)
    P = resultant_against_radical(A, B, N)
    if P.is_zero():
        raise InternalInconsistency("resultant vanished identically")
    P = _normalize_annihilator(P)
    if not check_annihilator(P, A, B, N):
        raise InternalInconsistency("annihilating polynomial does not vanish at its root")
    return AnnPoly(P, names)


def check_annihilator(P: MPoly, A: MPoly, B: MPoly, N: int) -> bool:
    """Exact check ``B^D * P(w^N, A/B) == 0`` in Q[w, s]."""
    D = P.degree(0)
    nv = A.nvars
    coeffs = P.coefficients_in(0)
    total = MPoly(nv)
    Apow = [MPoly.const(nv, 1)]
    Bpow = [MPoly.const(nv, 1)]
    for _ in range(D):
        Apow.append(Apow[-1] * A)
        Bpow.append(Bpow[-1] * B)
    for z, c in enumerate(coeffs):
        if c.is_zero():
            continue
        # c is a polynomial in (Z=0, u, s...): map u -> w^N
        cw = MPoly(nv, {(e[1] * N,) + e[2:]: v for e, v in c.terms.items()})
        total = total + cw * Apow[z] * Bpow[D - z]
    return total.is_zero()


def annihilating_polynomial(h) -> AnnPoly:
    """Nonzero ``P in Q[u][Z]`` with ``P(u, h) = 0``.

    Built as ``Res_w(B(w) Z - A(w), w^N - u)`` from the root form of ``h``,
    made primitive and freed of monomial content.  The Z-degree equals N.
    """
    h = UElem.coerce(h).reduced()
    A, B, N = to_root_form(h)
    ann = annihilator_from_root_form(A, B, N)
    if not ann.evaluate(h).is_zero():
        raise InternalInconsistency("P(u, h) != 0")
    return ann


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
