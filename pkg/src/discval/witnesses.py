"""Algebraicity certificates for residues.

For a unit ``f/g`` with residue ``h0`` we find a nonzero ``P`` over
Q[u, s_2..s_m] with ``P(h0) = 0`` and form::

    beta = P(X_2/X_1, X_3/X_1, ..., X_{m+1}/X_1; f/g)

cleared of denominators.  ``v(beta) > 0`` (or ``beta == 0``) certifies that
the residue of ``f/g`` is algebraic over the residues of the generator
ratios, whose residues are ``u, t_2/t_1, ..., t_m/t_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import (InvalidSpec, PrecisionExhausted, VariableMismatch,
                     WitnessCheckFailed)
from .exactnum import (U, AnnPoly, MPoly, UElem, annihilating_polynomial,
                       annihilator_from_root_form, lcm_all)
from .series import MultiSeries, TSeries, compose
from .valuation import Phi, Residue, composed_to_order, residue, value

INFINITE = math.inf


@dataclass
class GeneratorSet:
    ratios: List[Tuple[MultiSeries, MultiSeries]]
    residues: List[Residue]

    def labels(self) -> List[str]:
        return [f"{num}/{den}" for num, den in self.ratios]

    def to_record(self) -> dict:
        return {"generators": [{"ratio": lab, "residue": str(r)}
                               for lab, r in zip(self.labels(), self.residues)]}


def _expected_generator_residues(m: int) -> List[Residue]:
    t1 = TSeries.t(m, 1)
    out = [Residue(TSeries.t(m, 1, U), t1)]
    out += [Residue(TSeries.t(m, i), t1) for i in range(2, m + 1)]
    return out


def residue_generators(phi: Phi) -> GeneratorSet:
    """The ratios X_i/X_1 (i = 2..m+1) and their residues."""
    X1 = MultiSeries.X(phi.n, 1)
    ratios = [(MultiSeries.X(phi.n, i), X1) for i in range(2, phi.m + 2)]
    return GeneratorSet(ratios, [residue(a, b, phi) for a, b in ratios])


def generators_are_standard(gens: GeneratorSet, m: int) -> bool:
    """Residues are exactly u, t_2/t_1, ..., t_m/t_1."""
    return all(r == e for r, e in zip(gens.residues, _expected_generator_residues(m)))


@dataclass
class Witness:
    h0: Residue
    P: AnnPoly
    beta_num: MultiSeries
    beta_den: MultiSeries
    beta_value: float
    root_denominator: int

    @property
    def beta_is_zero(self) -> bool:
        return self.beta_value == INFINITE

    def to_record(self) -> dict:
        return {
            "h0": str(self.h0),
            "P": str(self.P),
            "N": self.root_denominator,
            "beta_num": str(self.beta_num),
            "beta_den": str(self.beta_den),
            "beta_value": "Infinite" if self.beta_is_zero else int(self.beta_value),
        }


def residue_root_form(h0: Residue) -> Tuple[MPoly, MPoly, int]:
    """``h0 = A(w, s)/B(w, s)`` with ``w^N = u`` and ``s_i = t_i/t_1``.

    The common monomial factor of A and B is removed.
    """
    a, b = h0.dehomogenized()
    N = lcm_all(c.root_denominator for c in list(a.values()) + list(b.values()))
    nv = h0.m     # w, s_2..s_m

    def tow(d: Dict[Tuple[int, ...], UElem]) -> Dict[Tuple[int, ...], object]:
        out: Dict[Tuple[int, ...], object] = {}
        for e, c in d.items():
            for k, v in c.num.rescaled(N).items():
                out[(k,) + e] = v
        return out

    A, B = MPoly(nv, tow(a)), MPoly(nv, tow(b))
    if not A.is_zero():
        common = tuple(min(x, y) for x, y in zip(A.monomial_content(), B.monomial_content()))
        if any(common):
            A = A.substitute_monomial_shift(common)
            B = B.substitute_monomial_shift(common)
    return A, B, N


def annihilator_of_residue(h0: Residue) -> Tuple[AnnPoly, int]:
    """Annihilating polynomial of ``h0`` and the root denominator used."""
    if h0.m == 1:
        h = h0.as_uelem().reduced()
        return annihilating_polynomial(h), h.root_denominator
    names = ["Z", "u"] + [f"s{i}" for i in range(2, h0.m + 1)]
    A, B, N = residue_root_form(h0)
    return annihilator_from_root_form(A, B, N, names), N


def _beta_polynomials(P: AnnPoly, f: MultiSeries, g: MultiSeries, n: int, m: int):
    """Numerator and denominator of beta, cleared of denominators.

    Each term ``c Z^z u^a s^b`` becomes ``c X_2^a prod X_{i+1}^{b_i}
    X_1^(E-a-|b|) f^z g^(D-z)`` over ``g^D X_1^E``.
    """
    D = P.degree
    E = max(sum(e[1:]) for e in P.poly.terms)
    X = [MultiSeries.X(n, i) for i in range(1, n + 1)]
    fp = [MultiSeries.const(n, 1)]
    gp = [MultiSeries.const(n, 1)]
    for _ in range(D):
        fp.append(fp[-1] * f)
        gp.append(gp[-1] * g)
    num = MultiSeries.zero(n)
    for e, c in P.poly.terms.items():
        z, a, svec = e[0], e[1], e[2:]
        mono = X[1] ** a * X[0] ** (E - a - sum(svec))
        for i, b in enumerate(svec):
            mono = mono * X[i + 2] ** b
        num = num + (mono * fp[z] * gp[D - z]).scale(c)
    den = gp[D] * X[0] ** E
    return num, den, D, E


def _strip_common_monomial(num: MultiSeries, den: MultiSeries):
    if num.is_zero():
        return num, den
    n = num.nvars
    common = [min(min(e[i] for e in num.terms), min(e[i] for e in den.terms)) for i in range(n)]
    if not any(common):
        return num, den

    def shift(s):
        return MultiSeries(n, {tuple(x - c for x, c in zip(e, common)): v for e, v in s.terms.items()})

    return shift(num), shift(den)


def _beta_value_homomorphic(P: AnnPoly, f, g, phi: Phi, vf: int, vg: int,
                            max_relative: int) -> int:
    """v(beta) read from phi applied term by term.

    Every summand of phi(beta_num) has order exactly ``v(beta_den)``, so the
    factors are only needed to relative precision ``r`` above their orders.
    """
    D = P.degree
    E = max(sum(e[1:]) for e in P.poly.terms)
    vden = D * vg + E * value(MultiSeries.X(phi.n, 1), phi)
    r = 1
    while True:
        ph = phi.at_precision(max(phi.precision, max(vf, vg) + r, 1 + r))
        top = vden + r
        Sf = compose(f, ph.images, cap=vf + r)
        Sg = compose(g, ph.images, cap=vg + r)
        imgs = [img.truncated(1 + r) for img in ph.images]
        fp, gp = [TSeries.const(phi.m, 1)], [TSeries.const(phi.m, 1)]
        for _ in range(D):
            fp.append(fp[-1].mul(Sf, top))
            gp.append(gp[-1].mul(Sg, top))
        total = TSeries.zero(phi.m, top)
        for e, c in P.poly.terms.items():
            z, a, svec = e[0], e[1], e[2:]
            term = imgs[1].pow(a, top).mul(imgs[0].pow(E - a - sum(svec), top), top)
            for i, b in enumerate(svec):
                term = term.mul(imgs[i + 2].pow(b, top), top)
            term = term.mul(fp[z], top).mul(gp[D - z], top)
            total = total + term.scale(c)
        total = total.truncated(top)
        low = [e for e in total.terms if sum(e) <= vden]
        if low:
            raise WitnessCheckFailed(
                f"phi(beta) has a nonzero term at degree {min(sum(e) for e in low)} <= v(den) = {vden}")
        if total.terms:
            return total.ord() - vden
        if r >= max_relative:
            raise PrecisionExhausted(
                f"beta vanishes to relative precision {r} but is not literally zero",
                horizons=[top])
        r *= 2


def make_witness(f: MultiSeries, g: MultiSeries, phi: Phi,
                 max_relative: int = 64) -> Witness:
    """Certificate that the residue of f/g is algebraic over the generators.

    The check on ``v(beta)`` needs precision beyond ``phi.precision`` when
    ``v(beta_den)`` is large; the map is rebuilt at the required horizon,
    up to ``max_relative`` degrees above ``v(beta_den)``.
    """
    if f.nvars != phi.n or g.nvars != phi.n:
        raise VariableMismatch("f, g must be series in X_1..X_n")
    gens = residue_generators(phi)
    if not generators_are_standard(gens, phi.m):
        raise InvalidSpec("witnesses need a map whose generator residues are u, t_2/t_1, ..., t_m/t_1")
    h0 = residue(f, g, phi)
    P, N = annihilator_of_residue(h0)
    num, den, D, E = _beta_polynomials(P, f, g, phi.n, phi.m)
    num, den = _strip_common_monomial(num, den)
    if num.is_zero():
        bv = INFINITE
    else:
        vf = composed_to_order(f, phi).ord()
        vg = composed_to_order(g, phi).ord()
        bv = _beta_value_homomorphic(P, f, g, phi, vf, vg, max_relative)
        if bv <= 0:
            raise WitnessCheckFailed(f"v(beta) = {bv} <= 0")
    return Witness(h0, P, num, den, bv, N)
