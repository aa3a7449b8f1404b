"""Spherical Bessel functions of real argument and bracketed root finding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from scipy.optimize import brentq

from .errors import DomainError, NoSignChangeError

_MILLER_EXTRA = 40
_RESCALE = 1e250


def _check_order(n: int) -> None:
    if n < 0 or int(n) != n:
        raise DomainError(f"spherical Bessel order must be a non-negative integer, got {n}")


def _series(n: int, x: float) -> float:
    # x^n/(2n+1)!! * sum_k (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
    lead = 1.0
    for i in range(1, n + 1):
        lead *= x / (2 * i + 1)
    q = -0.5 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (2 * n + 2 * k + 1))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return lead * total


def _miller(n: int, x: float) -> float:
    # downward recurrence from a start index well above n, then normalize
    m = n + _MILLER_EXTRA + int(x)
    upper, cur = 0.0, 1e-300
    at_n = 0.0
    for k in range(m, 0, -1):
        lower = (2 * k + 1) / x * cur - upper
        upper, cur = cur, lower
        if k - 1 == n:
            at_n = cur
        if abs(cur) > _RESCALE:
            upper /= _RESCALE
            cur /= _RESCALE
            at_n /= _RESCALE
    # now cur ~ j_0, upper ~ j_1 (same unknown scale)
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(j0) >= abs(j1):
        return at_n * (j0 / cur)
    return at_n * (j1 / upper)


def spherical_bessel(n: int, x: float) -> float:
    """Spherical Bessel function of the first kind ``j_n(x)`` for real ``x``."""
    _check_order(n)
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x}")
    if x < 0.0:
        return -spherical_bessel(n, -x) if n % 2 else spherical_bessel(n, -x)
    if x < 1.0:
        return _series(n, x)
    s, c = math.sin(x), math.cos(x)
    if n == 0:
        return s / x
    if n == 1:
        return s / (x * x) - c / x
    if n == 2:
        return (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x)
    if x >= n:
        prev, cur = s / x, s / (x * x) - c / x
        for k in range(1, n):
            prev, cur = cur, (2 * k + 1) / x * cur - prev
        return cur
    return _miller(n, x)


def spherical_bessel_derivative(n: int, x: float) -> float:
    """Derivative ``j_n'(x)``; undefined at ``x = 0``."""
    _check_order(n)
    if x == 0.0:
        raise DomainError("derivative formula is singular at x = 0")
    if n == 0:
        return -spherical_bessel(1, x)
    return spherical_bessel(n - 1, x) - (n + 1) / x * spherical_bessel(n, x)


def riccati_bessel(l: int, r: float, lam: float) -> float:
    """Regular solution ``r*sqrt(lam)*j_l(r*sqrt(lam))`` of the radial Bessel equation."""
    if lam <= 0.0:
        raise DomainError(f"lam must be positive, got {lam}")
    if not 0.0 < r <= 1.0:
        raise DomainError(f"r must lie in (0, 1], got {r}")
    x = r * math.sqrt(lam)
    return x * spherical_bessel(l, x)


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise NoSignChangeError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise NoSignChangeError(
                f"no sign change on [{self.lo}, {self.hi}]: f = {self.f_lo}, {self.f_hi}"
            )

    @classmethod
    def around(cls, f: Callable[[float], float], lo: float, hi: float) -> RootBracket:
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float) -> float:
    """Root of ``f`` inside a sign-changing bracket, to absolute width ``tol``."""
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    return brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=8.9e-16, maxiter=500)


@lru_cache(maxsize=256)
def _zeros(n: int, count: int) -> tuple[float, ...]:
    step = math.pi / 8
    x = max(float(n), step)
    fx = spherical_bessel(n, x)
    found: list[float] = []
    while len(found) < count:
        nxt = x + step
        fn = spherical_bessel(n, nxt)
        if fn == 0.0:
            found.append(nxt)
            nxt += step * 1e-3
            fn = spherical_bessel(n, nxt)
        elif fx * fn < 0.0:
            found.append(find_root(lambda t: spherical_bessel(n, t), RootBracket(x, nxt, fx, fn), 1e-12))
        x, fx = nxt, fn
    return tuple(found)


def bessel_zeros(n: int, count: int) -> tuple[float, ...]:
    """The first ``count`` positive zeros of ``j_n``."""
    _check_order(n)
    if count < 1:
        raise DomainError("count must be at least 1")
    return _zeros(n, count)


def bessel_zero(n: int, k: int) -> float:
    """The ``k``-th positive zero of ``j_n``."""
    if k < 1:
        raise DomainError(f"zero index must be >= 1, got {k}")
    return bessel_zeros(n, k)[k - 1]
