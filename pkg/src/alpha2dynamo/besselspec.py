"""Eigenvalues of the radial Bessel operators with Robin or Dirichlet data at r = 1.

The boundary parameter ``theta`` is a float; ``math.inf`` selects the
Dirichlet condition ``x(1) = 0`` and a finite ``theta >= 0`` the Robin
condition ``x'(1) + theta*x(1) = 0``.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DomainError, PoleError
from .specfun import RootBracket, bessel_zero, find_root, spherical_bessel, spherical_bessel_derivative

INF = math.inf


def check_mode(l: int) -> None:
    if int(l) != l or l < 1:
        raise DomainError(f"mode index l must be an integer >= 1, got {l}")


def check_theta(theta: float) -> None:
    if math.isnan(theta) or theta < 0.0:
        raise DomainError(f"boundary parameter must be >= 0 or inf, got {theta}")


def parse_theta(text: str, l: int) -> float:
    """Parse ``"l"``, ``"inf"`` or a number into a boundary parameter."""
    key = text.strip().lower()
    if key == "l":
        return float(l)
    if key in ("inf", "infinity", "dirichlet"):
        return INF
    try:
        theta = float(key)
    except ValueError:
        raise DomainError(f"cannot parse boundary parameter {text!r}") from None
    check_theta(theta)
    return theta


def weyl_m(l: int, lam: float) -> float:
    """Weyl function ``-sqrt(lam) j_l'(sqrt(lam)) / j_l(sqrt(lam)) - 1``."""
    check_mode(l)
    if lam <= 0.0:
        raise DomainError(f"lam must be positive, got {lam}")
    x = math.sqrt(lam)
    j = spherical_bessel(l, x)
    dj = spherical_bessel_derivative(l, x)
    if j == 0.0 or abs(j) < 1e-14 * abs(x * dj):
        raise PoleError(f"lam = {lam} is numerically a pole of the Weyl function")
    return -x * dj / j - 1.0


def dirichlet_eigenvalue(l: int, k: int) -> float:
    return bessel_zero(l, k) ** 2


@lru_cache(maxsize=4096)
def weyl_eigenvalue(l: int, theta: float, k: int) -> float:
    """``k``-th eigenvalue for finite ``theta``, solved from ``m(lam) = theta``."""
    check_mode(l)
    check_theta(theta)
    if math.isinf(theta):
        raise DomainError("the Weyl-function route needs a finite boundary parameter")
    if k < 1:
        raise DomainError(f"eigenvalue index must be >= 1, got {k}")
    right = dirichlet_eigenvalue(l, k)
    left = dirichlet_eigenvalue(l, k - 1) if k > 1 else 0.0
    eps = 1e-9 * right
    g = lambda lam: weyl_m(l, lam) - theta
    return find_root(g, RootBracket.around(g, left + eps, right - eps), 1e-11 * right)


def operator_eigenvalue(l: int, theta: float, k: int) -> float:
    """``k``-th eigenvalue ``lambda_k(theta)`` of the Bessel operator."""
    check_mode(l)
    check_theta(theta)
    if k < 1:
        raise DomainError(f"eigenvalue index must be >= 1, got {k}")
    if math.isinf(theta):
        return dirichlet_eigenvalue(l, k)
    if theta == l:
        return bessel_zero(l - 1, k) ** 2
    return weyl_eigenvalue(l, theta, k)


def eigenvalues_below(l: int, theta: float, bound: float) -> list[float]:
    """All eigenvalues ``lambda_k(theta) <= bound`` in increasing order."""
    out: list[float] = []
    k = 1
    while True:
        lam = operator_eigenvalue(l, theta, k)
        if lam > bound:
            return out
        out.append(lam)
        k += 1


def diagonal_spectrum(l: int, theta: float, lam_min: float) -> list[float]:
    """Merged spectra of ``-A_theta`` and ``-A_inf`` in ``[lam_min, 0)``, sorted."""
    bound = -lam_min
    values = [-v for v in eigenvalues_below(l, theta, bound)]
    values += [-v for v in eigenvalues_below(l, INF, bound)]
    return sorted(values)
