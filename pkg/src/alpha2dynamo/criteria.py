"""Sufficient conditions for stability and for local non-oscillation.

Every check returns a :class:`CriterionReport` comparing a left-hand side
with a right-hand side; a violated check carries no claim in the other
direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .besselspec import diagonal_spectrum
from .enclosure import ProblemConstants
from .errors import DomainError, InsufficientSpectrumError


@dataclass(frozen=True)
class CriterionReport:
    name: str
    satisfied: bool
    lhs: float
    rhs: float
    margin: float

    @classmethod
    def compare(cls, name: str, lhs: float, rhs: float) -> CriterionReport:
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        return cls(name, margin > 0.0, lhs, rhs, margin)


def anti_dynamo(c: ProblemConstants) -> CriterionReport:
    """No spectrum in the closed right half-plane when ``A^2 + A P / sqrt(L) < Li``."""
    A, P = c.alpha_norm, c.alpha_prime_norm
    lhs = A * A + A * P / math.sqrt(c.lam1_theta)
    return CriterionReport.compare("anti-dynamo", lhs, c.lam1_inf)


def stable2(c: ProblemConstants) -> CriterionReport:
    """Strip-bound stability: ``A < sqrt(Li)`` and ``P < -s_theta``.

    The reported lhs/rhs belong to whichever inequality has the smaller
    margin, so ``margin > 0`` exactly when both hold.
    """
    A, P = c.alpha_norm, c.alpha_prime_norm
    L, Li = c.lam1_theta, c.lam1_inf
    first = CriterionReport.compare("stable2", A, math.sqrt(Li))
    rhs2 = (Li + L) / 2 - math.sqrt(((Li - L) / 2) ** 2 + L * A * A)
    second = CriterionReport.compare("stable2", P, rhs2)
    return first if first.margin <= second.margin else second


def nearest_gap(lam0: float, points: Sequence[float]) -> float:
    """Half the distance from ``lam0`` to the nearest other point of ``points``."""
    others = sorted({p for p in points if p != lam0})
    if lam0 not in set(points):
        raise DomainError(f"{lam0} is not one of the supplied spectral points")
    if not others:
        raise InsufficientSpectrumError("no other spectral point to measure a gap")
    return min(abs(p - lam0) for p in others) / 2


def local_nonoscillation(lam0: float, c: ProblemConstants,
                         spectrum_diag: Sequence[float] | None = None) -> CriterionReport:
    """Isolation of the real eigenvalue near ``lam0`` of the uncoupled diagonal."""
    if spectrum_diag is None:
        spectrum_diag = diagonal_spectrum(c.l, c.theta, 4 * lam0 if lam0 < 0 else -1.0)
    pts = sorted(set(spectrum_diag))
    delta = nearest_gap(lam0, pts)
    if pts[0] > lam0 - 2 * delta:
        raise InsufficientSpectrumError("diagonal window does not reach the nearest neighbour below lam0")
    A, P = c.alpha_norm, c.alpha_prime_norm
    denom = abs(lam0) + 2 * delta
    lhs = A * A + A * P / math.sqrt(denom)
    return CriterionReport.compare("local", lhs, delta * delta / denom)


def meet(c: ProblemConstants) -> CriterionReport:
    """Local check at ``-lambda_1(theta)`` with the gap to ``-lambda_1(inf)``."""
    L, Li = c.lam1_theta, c.lam1_inf
    if math.isinf(c.theta):
        raise DomainError("the two leading diagonal points coincide for theta = inf")
    A, P = c.alpha_norm, c.alpha_prime_norm
    delta = (Li - L) / 2
    denom = L + 2 * delta
    lhs = A * A + A * P / math.sqrt(denom)
    return CriterionReport.compare("meet", lhs, delta * delta / denom)


def question_nonsplit(lam0: float, multiplicity: int, s_spectrum: Sequence[float],
                      alpha_prime_norm: float) -> CriterionReport:
    """Isolation of a point of the companion spectrum under the residual block.

    ``multiplicity`` is the number of copies of ``lam0`` expected in
    ``s_spectrum``; extra copies mean a zero gap.
    """
    if multiplicity < 1:
        raise DomainError("multiplicity must be positive")
    copies = sum(1 for x in s_spectrum if x == lam0)
    if copies == 0:
        raise DomainError(f"{lam0} is not in the supplied spectrum")
    if copies > multiplicity:
        delta = 0.0
    else:
        delta = nearest_gap(lam0, s_spectrum)
    return CriterionReport.compare("question", alpha_prime_norm, delta)
