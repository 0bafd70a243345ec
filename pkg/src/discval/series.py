"""Truncated multivariate power series.

Two rings share one sparse representation (exponent tuple -> coefficient):

* :class:`MultiSeries` -- Q[[X_1..X_n]], rational coefficients;
* :class:`TSeries` -- Q(u^(1/N))[[t_1..t_m]], :class:`UElem` coefficients.

``known_up_to`` is a total degree: terms above it are unspecified.  Exact
polynomials use ``EXACT`` (``math.inf``).  Propagation rules:

* add/sub: ``min(a.k, b.k)``
* mul: ``min(a.k + ord b, b.k + ord a, a.k + b.k)``, ord taken 0 when no
  nonzero term is known.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (NonPositiveOrderImage, PrecisionExhausted, VariableMismatch,
                     ZeroInput)
from .exactnum import UElem, UPoly, format_rational, format_uelem, qrat

EXACT = math.inf

Exp = Tuple[int, ...]


def _deg(e: Exp) -> int:
    return sum(e)


class _Sparse:
    nvars: int
    terms: Dict[Exp, object]
    known_up_to: float

    __slots__ = ("nvars", "terms", "known_up_to")

    def __init__(self, nvars: int, terms=None, known_up_to=EXACT):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise VariableMismatch(f"exponent {e} has wrong length for {nvars} variables")
                if _deg(e) > known_up_to:
                    continue
                c = self._coerce(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self.known_up_to = known_up_to

    @staticmethod
    def _coerce(c):
        return c

    @classmethod
    def _make(cls, nvars, terms, known_up_to):
        # trusted constructor: terms already clean
        s = cls.__new__(cls)
        s.nvars, s.terms, s.known_up_to = nvars, terms, known_up_to
        return s

    @classmethod
    def zero(cls, nvars: int, known_up_to=EXACT):
        return cls._make(nvars, {}, known_up_to)

    @classmethod
    def const(cls, nvars: int, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1):
        """The variable with 0-based index ``i``."""
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff})

    def _check(self, other):
        if not isinstance(other, type(self)):
            other = type(self).const(self.nvars, other)
        if other.nvars != self.nvars:
            raise VariableMismatch(f"{self.nvars} vs {other.nvars} variables")
        return other

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        """True if no nonzero term is known (the series may be nonzero beyond the horizon)."""
        return not self.terms

    def is_exact(self) -> bool:
        return self.known_up_to == EXACT

    def total_degree(self) -> int:
        return max((_deg(e) for e in self.terms), default=-1)

    def ord(self) -> int:
        """Least total degree of a nonzero term."""
        if not self.terms:
            if self.known_up_to == EXACT:
                raise ZeroInput("order of the zero series is undefined")
            raise PrecisionExhausted(
                f"no nonzero term up to degree {self.known_up_to}",
                horizons=[self.known_up_to])
        return min(_deg(e) for e in self.terms)

    def _ord_or_zero(self) -> int:
        return min((_deg(e) for e in self.terms), default=0)

    def homogeneous_part(self, d: int):
        return self._make(self.nvars, {e: c for e, c in self.terms.items() if _deg(e) == d}, EXACT)

    def leading_form(self):
        """Homogeneous component at degree ``ord``."""
        return self.homogeneous_part(self.ord())

    def is_homogeneous(self) -> bool:
        return len({_deg(e) for e in self.terms}) <= 1

    def truncated(self, degree):
        """Drop terms above ``degree`` and lower the horizon accordingly."""
        if degree >= self.known_up_to:
            return self
        return self._make(self.nvars, {e: c for e, c in self.terms.items() if _deg(e) <= degree},
                          degree)

    def with_known_up_to(self, k):
        """Same terms, horizon lowered to ``k`` (never raised)."""
        return self.truncated(k)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        k = min(self.known_up_to, other.known_up_to)
        out = {e: c for e, c in self.terms.items() if _deg(e) <= k}
        for e, c in other.terms.items():
            if _deg(e) > k:
                continue
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._make(self.nvars, out, k)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.nvars, {e: -c for e, c in self.terms.items()}, self.known_up_to)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self._coerce(c)
        if not c:
            return self._make(self.nvars, {}, self.known_up_to)
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                out[e] = w
        return self._make(self.nvars, out, self.known_up_to)

    def mul(self, other, cap=EXACT):
        """Product, additionally truncated at total degree ``cap``."""
        other = self._check(other)
        k = min(self.known_up_to + other._ord_or_zero(),
                other.known_up_to + self._ord_or_zero(),
                self.known_up_to + other.known_up_to,
                cap)
        return self._make(self.nvars, _mul_terms(self.terms, other.terms, k), k)

    def __mul__(self, other):
        if not isinstance(other, _Sparse):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, k: int, cap=EXACT):
        if k < 0:
            raise ValueError("negative power")
        result = type(self).const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, cap)
            k >>= 1
            if k:
                base = base.mul(base, cap)
        return result

    def __pow__(self, k: int):
        return self.pow(k)

    def structurally_equal(self, other) -> bool:
        return (type(self) is type(other) and self.nvars == other.nvars
                and self.known_up_to == other.known_up_to and self.terms == other.terms)

    def agrees_with(self, other, degree=None) -> bool:
        """Coefficients agree on every degree up to ``degree`` (default: both horizons)."""
        other = self._check(other)
        if degree is None:
            degree = min(self.known_up_to, other.known_up_to)
        keys = {e for e in self.terms if _deg(e) <= degree} | {e for e in other.terms if _deg(e) <= degree}
        zero = self._coerce(0)
        return all(self.terms.get(e, zero) == other.terms.get(e, zero) for e in keys)

    def __eq__(self, other):
        if not isinstance(other, _Sparse):
            try:
                other = self._check(other)
            except Exception:
                return NotImplemented
        return self.nvars == other.nvars and self.known_up_to == other.known_up_to \
            and self.agrees_with(other, self.known_up_to)

    __hash__ = None

    def sorted_terms(self) -> List[Tuple[Exp, object]]:
        """Graded-lex order: by total degree, then earlier variables first."""
        return sorted(self.terms.items(), key=lambda kv: (_deg(kv[0]), tuple(-x for x in kv[0])))


def _mul_terms(a: Dict[Exp, object], b: Dict[Exp, object], cap) -> Dict[Exp, object]:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    bl = sorted(((e, _deg(e), c) for e, c in b.items()), key=lambda x: x[1])
    out: Dict[Exp, object] = {}
    for ea, ca in a.items():
        da = _deg(ea)
        for eb, db, cb in bl:
            if da + db > cap:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            p = ca * cb
            v = out.get(e)
            out[e] = p if v is None else v + p
    return {e: c for e, c in out.items() if c}


class MultiSeries(_Sparse):
    """Element of Q[[X_1..X_n]] known up to a total degree."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, int):
            return c
        c = qrat(c)
        return c.numerator if c.denominator == 1 else c

    @property
    def n(self) -> int:
        return self.nvars

    @classmethod
    def X(cls, n: int, i: int) -> "MultiSeries":
        """The variable X_i, 1-based."""
        if not 1 <= i <= n:
            raise VariableMismatch(f"X{i} out of range for n = {n}")
        return cls.var(n, i - 1)

    def __str__(self):
        return format_series(self, [f"X{i + 1}" for i in range(self.nvars)])

    def __repr__(self):
        return f"MultiSeries({self})"


class TSeries(_Sparse):
    """Element of Q(u^(1/N))[[t_1..t_m]] known up to a total degree."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        return UElem.coerce(c)

    @property
    def m(self) -> int:
        return self.nvars

    @classmethod
    def t(cls, m: int, i: int, coeff=1) -> "TSeries":
        """``coeff * t_i``, 1-based."""
        if not 1 <= i <= m:
            raise VariableMismatch(f"t{i} out of range for m = {m}")
        return cls.var(m, i - 1, coeff)

    def has_constant_term(self) -> bool:
        return (0,) * self.nvars in self.terms

    def names(self) -> List[str]:
        if self.nvars == 1:
            return ["t"]
        return [f"t{i + 1}" for i in range(self.nvars)]

    def __str__(self):
        return format_series(self, self.names())

    def __repr__(self):
        return f"TSeries({self})"


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def compose(f: MultiSeries, images: Sequence[TSeries], cap=EXACT) -> TSeries:
    """Substitute ``X_i -> images[i]`` into ``f``.

    Every image must have no constant term.  The result is exact on all
    degrees up to ``min(f.known_up_to, image horizons, cap)``, which becomes
    its ``known_up_to``.
    """
    if len(images) != f.nvars:
        raise VariableMismatch(f"{len(images)} images for {f.nvars} variables")
    if not images:
        raise VariableMismatch("no images")
    m = images[0].nvars
    for i, img in enumerate(images):
        if img.nvars != m:
            raise VariableMismatch("images live in different rings")
        if img.has_constant_term():
            raise NonPositiveOrderImage(f"image of X{i + 1} has a nonzero constant term")
    G = min([f.known_up_to, cap] + [img.known_up_to for img in images])
    if G == EXACT:
        # exact inputs: bound the work by the true degree of the result
        G_eff = max(f.total_degree(), 0) * max([img.total_degree() for img in images] + [1])
    else:
        G_eff = G
    imgs = [TSeries._make(m, img.terms, EXACT).truncated(G_eff) for img in images]
    powers: List[List[TSeries]] = [[TSeries.const(m, 1)] for _ in images]

    def power(i: int, k: int) -> TSeries:
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1].mul(imgs[i], G_eff))
        return cache[k]

    acc: Dict[Exp, UElem] = {}
    for e, c in f.terms.items():
        if _deg(e) > G_eff:
            continue
        prod: Optional[TSeries] = None
        for i, k in enumerate(e):
            if not k:
                continue
            p = power(i, k)
            prod = p if prod is None else prod.mul(p, G_eff)
        if prod is None:
            prod = TSeries.const(m, 1)
        for te, tc in prod.terms.items():
            v = acc.get(te)
            w = tc * c
            acc[te] = w if v is None else v + w
    out = {e: c for e, c in acc.items() if c}
    return TSeries._make(m, out, G)


def ord_series(s: _Sparse) -> int:
    return s.ord()


def leading_form(s: _Sparse):
    return s.leading_form()


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _mono(names: Sequence[str], e: Exp) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _coeff_str(c) -> Tuple[bool, str, bool]:
    """(negative, body, is_atomic) for a coefficient."""
    if isinstance(c, UElem):
        k = c.num.constant_value() if c.is_poly() else None
        if k is not None:
            k = qrat(k)
            return k < 0, format_rational(abs(k)), True
        if c.is_poly() and len(c.num.terms) == 1:
            (kk, v), = c.num.terms.items()
            neg = v < 0
            body = format_uelem(UElem(UPoly({kk: -v if neg else v}, c.num.denom)))
            return neg, body, True
        return False, format_uelem(c), False
    c = qrat(c)
    return c < 0, format_rational(abs(c)), True


def format_series(s: _Sparse, names: Sequence[str]) -> str:
    if not s.terms:
        return "0"
    out = []
    for e, c in s.sorted_terms():
        neg, body, atomic = _coeff_str(c)
        mono = _mono(names, e)
        if mono:
            if body == "1":
                body = mono
            else:
                body = f"{body if atomic else '(' + body + ')'}*{mono}"
        elif not atomic and out:
            body = f"({body})"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)
