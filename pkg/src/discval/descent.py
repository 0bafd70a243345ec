"""Search for a residue outside the constants.

Starting from ``X_2^(n1) / X_1^(n2)`` (both of value n1*n2), every constant
residue ``a`` is absorbed: ``E - a*D`` has strictly larger value ``m``,
and the next candidate is ``(E - a*D)^(n1) / X_1^m``.  The loop stops at the
first non-constant residue, or when the iteration budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .errors import IterationBudgetExceeded, NotAUnit
from .series import MultiSeries
from .valuation import Phi, Residue, residue, value


@dataclass
class DescentStep:
    element_num: MultiSeries
    element_den: MultiSeries
    residue: Residue
    constant: Optional[Fraction]

    def to_record(self) -> dict:
        return {
            "num": str(self.element_num),
            "den": str(self.element_den),
            "residue": str(self.residue),
            "constant": None if self.constant is None else str(self.constant),
        }


@dataclass
class DescentCertificate:
    element_num: MultiSeries
    element_den: MultiSeries
    residue: Residue
    iterations: int
    constants: List[Fraction]
    values: List[int]
    n1: int
    transcript: List[DescentStep] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "element_num": str(self.element_num),
            "element_den": str(self.element_den),
            "residue": str(self.residue),
            "iterations": self.iterations,
            "constants": [str(c) for c in self.constants],
            "values": self.values,
            "transcript": [s.to_record() for s in self.transcript],
        }


def descend(phi: Phi, max_iterations: int = 16, T: Optional[int] = None) -> DescentCertificate:
    """Run the absorption loop on ``phi`` (rebuilt at precision ``T`` if given).

    Raises IterationBudgetExceeded (carrying the transcript so far) when
    ``max_iterations`` residues were all constant, and lets
    PrecisionExhausted through when a value is beyond the horizon.
    """
    if T is not None:
        phi = phi.at_precision(T)
    transcript: List[DescentStep] = []
    if max_iterations < 1:
        raise IterationBudgetExceeded("iteration budget is zero", transcript=[])
    n = phi.n
    X1, X2 = MultiSeries.X(n, 1), MultiSeries.X(n, 2)
    n1, n2 = value(X1, phi), value(X2, phi)
    base, mk = X2, n2
    values = [n2]
    constants: List[Fraction] = []
    iterations = 0
    while True:
        E = base ** n1
        D = X1 ** mk
        vE = value(E, phi)
        if vE != n1 * mk:
            raise NotAUnit(f"v(E) = {vE}, expected {n1 * mk}")
        iterations += 1
        r = residue(E, D, phi)
        c = r.is_constant()
        transcript.append(DescentStep(E, D, r, c))
        if c is None:
            return DescentCertificate(E, D, r, iterations, constants, values, n1, transcript)
        if iterations >= max_iterations:
            raise IterationBudgetExceeded(
                f"{iterations} constant residues, budget exhausted",
                transcript=[s.to_record() for s in transcript])
        constants.append(c)
        base = E - D.scale(c)
        m_next = value(base, phi)
        if m_next <= n1 * mk:
            raise NotAUnit(f"absorbing constant {c} did not raise the value ({m_next} <= {n1 * mk})")
        values.append(m_next)
        mk = m_next


def replay(cert: DescentCertificate, phi: Phi) -> bool:
    """Recompute every recorded residue and compare constants."""
    for step in cert.transcript:
        r = residue(step.element_num, step.element_den, phi)
        if r != step.residue or r.is_constant() != step.constant:
            return False
    return True
