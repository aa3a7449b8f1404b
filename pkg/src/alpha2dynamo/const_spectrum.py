"""Spectra for a constant profile alpha = alpha0."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .besselspec import check_mode, diagonal_spectrum, operator_eigenvalue
from .errors import DomainError, WindowTooSmallError
from .specfun import RootBracket, find_root, spherical_bessel


@dataclass(frozen=True)
class KPair:
    k_plus: float
    k_minus: float


def idealized_spectrum(l: int, alpha0: float, n_max: int) -> list[float]:
    """Eigenvalues ``-lambda_n(inf) +- alpha0*sqrt(lambda_n(inf))``, n <= n_max, descending."""
    check_mode(l)
    if n_max < 1:
        raise DomainError("n_max must be positive")
    out = []
    for n in range(1, n_max + 1):
        lam = operator_eigenvalue(l, math.inf, n)
        root = math.sqrt(lam)
        out += [-lam + alpha0 * root, -lam - alpha0 * root]
    return sorted(out, reverse=True)


def kpair(alpha0: float, lam: float) -> KPair:
    """Roots ``k`` of ``k^2 - alpha0*k + lam = 0``."""
    disc = alpha0 * alpha0 / 4 - lam
    if disc < 0.0:
        raise DomainError(f"lam = {lam} exceeds alpha0^2/4 = {alpha0 * alpha0 / 4}")
    root = math.sqrt(disc)
    half = alpha0 / 2
    # avoid cancellation in the smaller root, then use the product k+ k- = lam
    if half >= 0.0:
        k_plus = half + root
        k_minus = lam / k_plus if k_plus != 0.0 else half - root
    else:
        k_minus = half - root
        k_plus = lam / k_minus if k_minus != 0.0 else half + root
    return KPair(k_plus, k_minus)


def physical_determinant(l: int, alpha0: float, lam: float) -> float:
    """``j_{l-1}(k+) j_l(k-) - j_l(k+) j_{l-1}(k-)``; its nonzero roots are the eigenvalues."""
    check_mode(l)
    k = kpair(alpha0, lam)
    return (spherical_bessel(l - 1, k.k_plus) * spherical_bessel(l, k.k_minus)
            - spherical_bessel(l, k.k_plus) * spherical_bessel(l - 1, k.k_minus))


def reduced_determinant(l: int, alpha0: float, lam: float) -> float:
    """``D(lam) / lam^(l-1)``: same nonzero roots, no spurious root at ``lam = 0``.

    For ``l >= 2`` both ``j_{l-1}(k-)`` and ``j_l(k-)`` vanish as ``k- -> 0``,
    which gives ``D`` a factor ``lam^(l-1)`` unrelated to any eigenvalue.
    """
    if lam == 0.0 and alpha0 != 0.0:
        dfact = math.prod(range(1, 2 * l, 2))
        return -spherical_bessel(l, alpha0) / alpha0 ** (l - 1) / dfact
    return physical_determinant(l, alpha0, lam) / lam ** (l - 1)


def _scan_step(l: int, lam_min: float) -> float:
    pts = sorted(set(diagonal_spectrum(l, float(l), min(lam_min, -1.0))))
    pts = [p for p in pts if p >= lam_min] or pts[-1:]
    gaps = np.diff(pts)
    gap = float(gaps.min()) if gaps.size else abs(pts[0])
    return gap / 8


def physical_spectrum(l: int, alpha0: float, count: int, lam_min: float) -> list[float]:
    """The ``count`` largest roots of the determinant in ``[lam_min, alpha0^2/4)``, descending."""
    check_mode(l)
    top = alpha0 * alpha0 / 4
    if not lam_min < top:
        raise DomainError("lam_min must lie below alpha0^2/4")
    if count < 1:
        raise DomainError("count must be positive")
    # the determinant vanishes identically in the limit lam -> alpha0^2/4
    end = top - 1e-9 * max(1.0, top)
    step = _scan_step(l, lam_min)
    n = max(2, int(math.ceil((end - lam_min) / step)) + 1)
    grid = np.linspace(lam_min, end, n)
    D = lambda x: reduced_determinant(l, alpha0, x)
    vals = [D(x) for x in grid]
    roots: list[float] = []
    for x0, x1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            roots.append(float(x0))
        elif v0 * v1 < 0.0:
            roots.append(find_root(D, RootBracket(x0, x1, v0, v1), 1e-12 * max(1.0, abs(x0))))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    if len(roots) < count:
        raise WindowTooSmallError(f"found {len(roots)} roots in [{lam_min}, {top}), need {count}")
    return sorted(roots, reverse=True)[:count]
