"""Closed-form spectral enclosures for the alpha^2-dynamo operator.

Two enclosures are provided.  The first is the set ``Sigma`` built from
the functions ``f_1 .. f_6`` on the regions ``Z0 .. Z6``; its right
extremity is ``a_theta``.  The second is the strip/disc set around the
spectrum of the self-adjoint companion, with right extremity
``b_theta = s_theta + ||alpha'||``.

Notation used throughout: ``L = lambda_1(theta)``, ``Li = lambda_1(inf)``,
``A = ||alpha||``, ``P = ||alpha'||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .besselspec import check_mode, check_theta, operator_eigenvalue
from .errors import DomainError
from .profiles import AlphaProfile, norms
from .specfun import RootBracket, find_root


@dataclass(frozen=True)
class ProblemConstants:
    l: int
    theta: float
    lam1_theta: float
    lam1_inf: float
    alpha_norm: float
    alpha_prime_norm: float

    def __post_init__(self) -> None:
        check_mode(self.l)
        check_theta(self.theta)
        if not 0.0 < self.lam1_theta <= self.lam1_inf:
            raise DomainError("need 0 < lambda_1(theta) <= lambda_1(inf)")
        if self.lam1_theta == self.lam1_inf and not math.isinf(self.theta):
            raise DomainError("lambda_1(theta) = lambda_1(inf) only for theta = inf")
        if self.alpha_norm < 0.0 or self.alpha_prime_norm < 0.0:
            raise DomainError("norms must be non-negative")

    @classmethod
    def from_norms(cls, l: int, theta: float, alpha_norm: float, alpha_prime_norm: float) -> ProblemConstants:
        return cls(
            l,
            theta,
            operator_eigenvalue(l, theta, 1),
            operator_eigenvalue(l, math.inf, 1),
            float(alpha_norm),
            float(alpha_prime_norm),
        )

    @classmethod
    def from_profile(cls, l: int, theta: float, profile: AlphaProfile) -> ProblemConstants:
        n = norms(profile)
        return cls.from_norms(l, theta, n.alpha_norm, n.alpha_prime_norm)

    def with_norms(self, alpha_norm: float, alpha_prime_norm: float) -> ProblemConstants:
        return ProblemConstants(
            self.l, self.theta, self.lam1_theta, self.lam1_inf, float(alpha_norm), float(alpha_prime_norm)
        )


class RegionTag(Enum):
    Z0 = 0
    Z1 = 1
    Z2 = 2
    Z3 = 3
    Z4 = 4
    Z5 = 5
    Z6 = 6


@dataclass(frozen=True)
class RightBoundCase:
    case: str
    a_theta: float
    s_theta: float
    b_theta: float


def classify_region(lam: complex, c: ProblemConstants) -> RegionTag:
    L, Li = c.lam1_theta, c.lam1_inf
    xi, eta = lam.real, lam.imag
    if xi > 0.0:
        return RegionTag.Z5 if abs(lam) <= L else RegionTag.Z6
    if xi <= -L and eta == 0.0:
        return RegionTag.Z0
    if xi <= -Li:
        return RegionTag.Z1
    if xi > -L and abs(lam + L / 2) <= L / 2:
        return RegionTag.Z4
    if xi > -L and abs(lam) <= L:
        return RegionTag.Z3
    return RegionTag.Z2


def _resolvent_terms(lam: complex, c: ProblemConstants, region: RegionTag) -> float:
    A, P = c.alpha_norm, c.alpha_prime_norm
    L, Li = c.lam1_theta, c.lam1_inf
    mod = abs(lam)
    eta = abs(lam.imag)
    if region is RegionTag.Z1:
        return (A * A * mod / eta + A * P * math.sqrt(mod) / abs(lam + mod)) / eta
    if region is RegionTag.Z2:
        first = A * A * mod / eta
        second = A * P * math.sqrt(mod) / abs(lam + mod)
    elif region is RegionTag.Z3:
        first = A * A * mod / eta
        second = A * P * math.sqrt(L) / abs(lam + L)
    elif region is RegionTag.Z4:
        first = A * A * L / abs(lam + L)
        second = A * P * math.sqrt(L) / abs(lam + L)
    elif region is RegionTag.Z5:
        first = A * A
        second = A * P * math.sqrt(L) / abs(lam + L)
    else:
        first = A * A
        second = A * P * math.sqrt(mod) / abs(lam + mod)
    return (first + second) / abs(lam + Li)


def f_value(lam: complex, c: ProblemConstants, region: RegionTag | None = None) -> float:
    """Bound on the norm of the perturbation's resolvent product at ``lam``.

    ``region`` forces a particular branch; by default the branch of the
    region containing ``lam`` is used.  ``Sigma`` is where this is >= 1.
    """
    lam = complex(lam)
    actual = classify_region(lam, c)
    if actual is RegionTag.Z0:
        raise DomainError("f is not defined on the ray (-inf, -lambda_1(theta)]")
    if c.alpha_norm == 0.0:
        return 0.0
    return _resolvent_terms(lam, c, actual if region is None else region)


def in_sigma(lam: complex, c: ProblemConstants) -> bool:
    lam = complex(lam)
    if classify_region(lam, c) is RegionTag.Z0:
        return True
    return f_value(lam, c) >= 1.0


def _f6_real(x: float, c: ProblemConstants) -> float:
    A, P = c.alpha_norm, c.alpha_prime_norm
    return (A * A + A * P / (2.0 * math.sqrt(x))) / (x + c.lam1_inf)


def s_bound(c: ProblemConstants) -> float:
    """Upper bound of the spectrum of the self-adjoint companion."""
    L, Li, A = c.lam1_theta, c.lam1_inf, c.alpha_norm
    if A * A <= Li:
        return -(Li + L) / 2 + math.sqrt(((Li - L) / 2) ** 2 + L * (A * A))
    return -Li + A * A


def right_bound_a(c: ProblemConstants) -> RightBoundCase:
    """Right extremity ``a_theta`` of ``Sigma`` together with ``s_theta`` and ``b_theta``."""
    L, Li = c.lam1_theta, c.lam1_inf
    A, P = c.alpha_norm, c.alpha_prime_norm
    s = s_bound(c)
    b = s + P
    q = A * A + A * P / math.sqrt(L)
    if q <= Li:
        a = -(Li + L) / 2 + math.sqrt(((Li - L) / 2) ** 2 + L * q)
        return RightBoundCase("i", a, s, b)
    if A * A + A * P / (2 * math.sqrt(L)) <= Li + L:
        a = -(Li + L - A * A) / 2 + math.sqrt(((Li - L - A * A) / 2) ** 2 + A * P * math.sqrt(L))
        return RightBoundCase("ii", a, s, b)
    g = lambda x: _f6_real(x, c) - 1.0
    hi = 2.0 * L
    while g(hi) > 0.0:
        hi *= 2.0
    lo = L
    if g(lo) <= 0.0:
        # boundary of the case split; the root sits at L up to rounding
        return RightBoundCase("iii", L, s, b)
    a = find_root(g, RootBracket(lo, hi, g(lo), g(hi)), 1e-13 * hi)
    return RightBoundCase("iii", a, s, b)


def boundary_h(xi: float, c: ProblemConstants, a_theta: float | None = None) -> float:
    """Height ``eta >= 0`` of the boundary of ``Sigma`` above ``xi <= a_theta``."""
    if a_theta is None:
        a_theta = right_bound_a(c).a_theta
    if xi > a_theta:
        raise DomainError(f"xi = {xi} lies right of a_theta = {a_theta}")
    if c.alpha_norm == 0.0:
        return 0.0
    f = lambda eta: f_value(complex(xi, eta), c)
    if xi > -c.lam1_theta and f(0.0) <= 1.0:
        return 0.0
    hi = max(1.0, abs(xi))
    while f(hi) >= 1.0:
        hi *= 2.0
    lo = 0.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if mid == 0.0 or f(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def strip_membership(lam: complex, c: ProblemConstants, s_theta: float | None = None) -> bool:
    """Membership in ``{Re <= s, |Im| <= P} U {|lam - s| <= P}``."""
    lam = complex(lam)
    s = s_bound(c) if s_theta is None else s_theta
    P = c.alpha_prime_norm
    if lam.real <= s and abs(lam.imag) <= P:
        return True
    return abs(lam - s) <= P


def boundary_polyline(c: ProblemConstants, xi_min: float, n_points: int) -> list[tuple[float, float]]:
    """Samples ``(xi, h(xi))`` on ``[xi_min, a_theta]``, ending at ``(a_theta, 0)``."""
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    a = right_bound_a(c).a_theta
    if not xi_min < a:
        raise DomainError(f"xi_min = {xi_min} must lie left of a_theta = {a}")
    pts = []
    for i in range(n_points):
        xi = a if i == n_points - 1 else xi_min + (a - xi_min) * i / (n_points - 1)
        pts.append((xi, boundary_h(xi, c, a)))
    return pts


def strip_outline(c: ProblemConstants, xi_min: float, n_arc: int = 64) -> list[tuple[float, float]]:
    """Upper half of the strip/disc boundary, from ``(xi_min, P)`` to ``(b, 0)``."""
    s = s_bound(c)
    P = c.alpha_prime_norm
    pts = [(min(xi_min, s), P), (s, P)]
    for k in range(1, n_arc + 1):
        phi = math.pi / 2 * (1 - k / n_arc)
        pts.append((s + P * math.cos(phi), P * math.sin(phi)))
    return pts
