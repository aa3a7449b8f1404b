"""Comparison of the two right bounds ``a_theta`` and ``b_theta`` in the norm plane.

Points of the plane are pairs ``(t, s) = (||alpha||, ||alpha'||)``.  The
strip bound ``b_theta`` beats ``a_theta`` only on a small bounded set
whose boundary is made of the graphs of ``k4^-``, ``k4^+`` and ``k5``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .enclosure import ProblemConstants, right_bound_a
from .errors import DomainError
from .specfun import RootBracket, find_root

COLLAR = 1e-3


class Relation(Enum):
    A_SMALLER = "A_SMALLER"
    EQUAL = "EQUAL"
    B_SMALLER = "B_SMALLER"


class Region(Enum):
    OUTSIDE = "OUTSIDE"
    ON_GAMMA_EX = "ON_GAMMA_EX"
    IN_DELTA_EX = "IN_DELTA_EX"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class NormPair:
    t: float
    s: float

    def __post_init__(self) -> None:
        if self.t < 0.0 or self.s < 0.0:
            raise DomainError("norms must be non-negative")


@dataclass(frozen=True)
class ComparisonVerdict:
    a_theta: float
    b_theta: float
    relation: Relation
    subcritical_split: bool
    subcritical_split_analytic: bool
    region: Region


def _root_term(t: float, L: float, Li: float) -> float:
    return math.sqrt(((Li - L) / 2) ** 2 + L * t * t)


def k4_radicand(t: float, L: float, Li: float) -> float:
    R = _root_term(t, L, Li)
    return ((Li - L - t * t) / 2) ** 2 + t * t * L / 4 - t * math.sqrt(L) * (R - t * t / 2)


def c3_abscissa(L: float, Li: float) -> float:
    return math.sqrt(L) / 2 + math.sqrt(Li - 3 * L / 4)


def delta_ex_height(L: float, Li: float) -> float:
    return math.sqrt(Li * L) - L


def mu_lower_bound(L: float, Li: float) -> float:
    """Closed-form lower bound for the left end of the ``k4`` domain."""
    half = (math.sqrt(Li) + math.sqrt(L)) / 2
    return -half + math.sqrt(half * half + Li)


def k2_height_point(L: float, Li: float) -> float:
    """Abscissa where ``k2`` equals the height ``sqrt(Li*L) - L``."""
    half = (math.sqrt(Li) - math.sqrt(L)) / 2
    return -half + math.sqrt(half * half + Li)


@lru_cache(maxsize=64)
def k4_domain_start(L: float, Li: float) -> float:
    """Left end ``mu`` of the interval ``[mu, sqrt(Li)]`` carrying ``k4^-`` and ``k4^+``.

    Found as the largest zero of the radicand below ``sqrt(Li)``.
    """
    top = math.sqrt(Li)
    if k4_radicand(top, L, Li) <= 0.0:
        return top
    g = lambda t: k4_radicand(t, L, Li)
    step = top / 4000
    hi = top
    while hi - step > 0.0:
        lo = hi - step
        if g(lo) < 0.0:
            return find_root(g, RootBracket(lo, hi, g(lo), g(hi)), 1e-14 * top)
        hi = lo
    return 0.0


def _check_interval(name: str, t: float, lo: float, hi: float, open_left: bool = False) -> None:
    slack = 1e-12 * max(1.0, hi)
    bad = t < lo - slack or t > hi + slack or (open_left and t <= lo)
    if bad:
        raise DomainError(f"{name} is defined on [{lo:.12g}, {hi:.12g}], got t = {t:.12g}")


def k_curve(which: str, t: float, L: float, Li: float) -> float:
    """Evaluate one of the curves ``"1", "2", "3", "4minus", "4plus", "5"``."""
    which = str(which)
    if which == "1":
        _check_interval("k1", t, 0.0, math.sqrt(Li))
        return (Li + L) / 2 - _root_term(t, L, Li)
    if which == "2":
        _check_interval("k2", t, 0.0, math.sqrt(Li + L), open_left=True)
        return max((Li - t * t) * math.sqrt(L) / t, 0.0) if t * t <= Li else 0.0
    if which == "3":
        _check_interval("k3", t, 0.0, math.sqrt(Li + L), open_left=True)
        return (Li - t * t + L) * 2 * math.sqrt(L) / t
    if which == "5":
        _check_interval("k5", t, math.sqrt(Li), c3_abscissa(L, Li))
        return Li - L + t * math.sqrt(L) - t * t
    if which in ("4minus", "4plus"):
        mu = k4_domain_start(L, Li)
        _check_interval("k4", t, mu, math.sqrt(Li))
        rad = k4_radicand(min(max(t, mu), math.sqrt(Li)), L, Li)
        if rad < 0.0:
            if rad > -1e-12 * Li * Li:
                rad = 0.0
            else:
                raise DomainError(f"k4 radicand is negative at t = {t:.12g}")
        base = t * t / 2 + t / 2 * math.sqrt(L) - _root_term(t, L, Li)
        root = math.sqrt(rad)
        return base + root if which == "4plus" else base - root
    raise DomainError(f"unknown curve {which!r}")


def gamma_ex_polyline(L: float, Li: float, n: int = 2000) -> np.ndarray:
    """Points along the exceptional curve from ``C1`` via ``C2`` to ``C3`` (read-only)."""
    return _gamma_ex_polyline(L, Li, n)


@lru_cache(maxsize=16)
def _gamma_ex_polyline(L: float, Li: float, n: int) -> np.ndarray:
    top = math.sqrt(Li)
    if L >= Li:
        poly = np.array([[top, 0.0]])
        poly.flags.writeable = False
        return poly
    mu = k4_domain_start(L, Li)
    u = np.linspace(0.0, 1.0, n)
    ts = mu + (top - mu) * u * u
    lower = [(t, k_curve("4minus", t, L, Li)) for t in ts[::-1]]
    upper = [(t, k_curve("4plus", t, L, Li)) for t in ts[1:]]
    right = [(t, k_curve("5", t, L, Li)) for t in np.linspace(top, c3_abscissa(L, Li), n)[1:]]
    poly = np.array(lower + upper + right)
    poly.flags.writeable = False
    return poly


def _distance_to_polyline(p: tuple[float, float], poly: np.ndarray) -> float:
    if len(poly) == 1:
        return float(np.hypot(*(poly[0] - p)))
    a, b = poly[:-1], poly[1:]
    d = b - a
    w = np.asarray(p) - a
    denom = np.einsum("ij,ij->i", d, d)
    lam = np.clip(np.einsum("ij,ij->i", w, d) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    proj = a + lam[:, None] * d
    return float(np.min(np.hypot(*(proj - p).T)))


def in_delta_ex(t: float, s: float, L: float, Li: float) -> bool:
    """Analytic membership in the open exceptional set."""
    if L >= Li or s <= 0.0:
        return False
    top = math.sqrt(Li)
    if t > top:
        return t < c3_abscissa(L, Li) and s < k_curve("5", t, L, Li)
    mu = k4_domain_start(L, Li)
    if t <= mu:
        return False
    return k_curve("4minus", t, L, Li) < s < k_curve("4plus", t, L, Li)


def relation_of(a: float, b: float) -> Relation:
    tol = 1e-9 * max(1.0, abs(a), abs(b))
    if abs(a - b) <= tol:
        return Relation.EQUAL
    return Relation.A_SMALLER if a < b else Relation.B_SMALLER


def subcritical_band(t: float, s: float, L: float, Li: float) -> bool:
    """``k1(t) < s < k2(t)`` with ``t^2 < Li``."""
    if not (0.0 < t and t * t < Li):
        return False
    return k_curve("1", t, L, Li) < s < k_curve("2", t, L, Li)


def classify_pair(p: NormPair, c: ProblemConstants, collar: float = COLLAR,
                  polyline: np.ndarray | None = None) -> ComparisonVerdict:
    cc = c.with_norms(p.t, p.s)
    bounds = right_bound_a(cc)
    a, b = bounds.a_theta, bounds.b_theta
    L, Li = c.lam1_theta, c.lam1_inf
    direct = a < 0.0 < b
    analytic = subcritical_band(p.t, p.s, L, Li)
    if p.t == 0.0 or p.s == 0.0:
        region = Region.DEGENERATE
    else:
        poly = gamma_ex_polyline(L, Li) if polyline is None else polyline
        if _distance_to_polyline((p.t, p.s), poly) < collar:
            region = Region.ON_GAMMA_EX
        elif in_delta_ex(p.t, p.s, L, Li):
            region = Region.IN_DELTA_EX
        else:
            region = Region.OUTSIDE
    return ComparisonVerdict(a, b, relation_of(a, b), direct, analytic, region)


def comparison_grid(c: ProblemConstants, nt: int = 60, ns: int = 60) -> list[tuple[float, float, ComparisonVerdict]]:
    """Classify the ``nt x ns`` grid covering the plotting window of the norm plane."""
    L, Li = c.lam1_theta, c.lam1_inf
    t_max = 1.2 * math.sqrt(Li + L)
    s_max = 1.2 * delta_ex_height(L, Li) if Li > L else 1.2 * math.sqrt(Li)
    poly = gamma_ex_polyline(L, Li)
    out = []
    for i in range(1, nt + 1):
        t = t_max * i / nt
        for j in range(1, ns + 1):
            s = s_max * j / ns
            out.append((t, s, classify_pair(NormPair(t, s), c, polyline=poly)))
    return out
