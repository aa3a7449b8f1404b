"""Polynomial helical-turbulence profiles alpha(r) on [0, 1] and their sup-norms."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError

STEFANI_BASE = (-21.46, 0.0, 426.41, -806.73, 392.28)
MAX_DEGREE = 32
_SAMPLES = 20001


@dataclass(frozen=True)
class Constant:
    a0: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a0", float(self.a0))

    @property
    def coeffs(self) -> tuple[float, ...]:
        return (float(self.a0),)

    def label(self) -> str:
        return f"const:{self.a0:.12g}"


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise DomainError("a polynomial profile needs at least one coefficient")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise DomainError(f"polynomial degree {len(coeffs) - 1} exceeds {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", coeffs)

    def label(self) -> str:
        return "poly:" + ",".join(f"{c:.12g}" for c in self.coeffs)


@dataclass(frozen=True)
class Stefani:
    C: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "C", float(self.C))
        if self.C < 0.0:
            raise DomainError(f"Stefani amplitude must be >= 0, got {self.C}")

    @property
    def coeffs(self) -> tuple[float, ...]:
        return tuple(self.C * c for c in STEFANI_BASE)

    def label(self) -> str:
        return f"stefani:{self.C:.12g}"


AlphaProfile = Union[Constant, Polynomial, Stefani]


@dataclass(frozen=True)
class ProfileNorms:
    alpha_norm: float
    alpha_prime_norm: float


def _horner(coeffs: Sequence[float], r):
    acc = 0.0 * r
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def _derivative_coeffs(coeffs: Sequence[float]) -> tuple[float, ...]:
    if len(coeffs) == 1:
        return (0.0,)
    return tuple(k * c for k, c in enumerate(coeffs) if k > 0)


def _check_r(r) -> None:
    arr = np.asarray(r)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise DomainError("profile argument must lie in [0, 1]")


def evaluate(p: AlphaProfile, r):
    """alpha(r); accepts scalars or arrays."""
    _check_r(r)
    return _horner(p.coeffs, r)


def evaluate_derivative(p: AlphaProfile, r):
    """alpha'(r), from the differentiated coefficients."""
    _check_r(r)
    return _horner(_derivative_coeffs(p.coeffs), r)


def scale(p: AlphaProfile, c: float) -> AlphaProfile:
    if isinstance(p, Constant):
        return Constant(c * p.a0)
    if isinstance(p, Stefani) and c >= 0.0:
        return Stefani(c * p.C)
    return Polynomial(tuple(c * x for x in p.coeffs))


def _sup_abs(coeffs: Sequence[float]) -> float:
    if all(c == 0.0 for c in coeffs):
        return 0.0
    if len(coeffs) == 1:
        return abs(float(coeffs[0]))
    grid = np.linspace(0.0, 1.0, _SAMPLES)
    vals = np.abs(_horner(coeffs, grid))
    best = float(vals.max())
    g = lambda r: -abs(_horner(coeffs, r))
    inner = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    for i in inner:
        lo, mid, hi = grid[i - 1], grid[i], grid[i + 1]
        try:
            res = minimize_scalar(g, bracket=(lo, mid, hi), method="golden", options={"xtol": 1e-12})
        except ValueError:
            # flat top: the sample value is already exact to rounding
            continue
        if lo <= res.x <= hi:
            best = max(best, float(-res.fun))
    return best


def norms(p: AlphaProfile) -> ProfileNorms:
    """Maximum norms of alpha and alpha' over [0, 1]."""
    if isinstance(p, Constant):
        return ProfileNorms(abs(float(p.a0)), 0.0)
    if isinstance(p, Stefani):
        base = _norms_of(STEFANI_BASE)
        return ProfileNorms(p.C * base.alpha_norm, p.C * base.alpha_prime_norm)
    return _norms_of(p.coeffs)


def _norms_of(coeffs: Sequence[float]) -> ProfileNorms:
    return ProfileNorms(_sup_abs(coeffs), _sup_abs(_derivative_coeffs(coeffs)))


def parse_profile(text: str) -> AlphaProfile:
    """Parse ``const:V``, ``poly:c0,c1,...``, ``stefani:C`` or ``@file``."""
    text = text.strip()
    if text.startswith("@"):
        return load_profile(Path(text[1:]))
    kind, sep, payload = text.partition(":")
    if not sep:
        raise DomainError(f"profile spec {text!r} lacks a ':' separator")
    try:
        if kind == "const":
            return Constant(float(payload))
        if kind == "poly":
            return Polynomial(tuple(float(c) for c in payload.split(",")))
        if kind == "stefani":
            return Stefani(float(payload))
    except ValueError as exc:
        raise DomainError(f"bad profile payload in {text!r}: {exc}") from None
    raise DomainError(f"unknown profile kind {kind!r}")


def profile_from_dict(doc: dict) -> AlphaProfile:
    kind = doc.get("kind")
    try:
        if kind == "const":
            return Constant(float(doc["value"]))
        if kind == "poly":
            return Polynomial(tuple(float(c) for c in doc["coeffs"]))
        if kind == "stefani":
            return Stefani(float(doc["C"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed profile document: {exc}") from None
    raise DomainError(f"unknown profile kind {kind!r}")


def profile_to_dict(p: AlphaProfile) -> dict:
    if isinstance(p, Constant):
        return {"kind": "const", "value": p.a0}
    if isinstance(p, Stefani):
        return {"kind": "stefani", "C": p.C}
    return {"kind": "poly", "coeffs": list(p.coeffs)}


def load_profile(path: Path) -> AlphaProfile:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read profile file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise DomainError("profile file must hold a JSON object")
    return profile_from_dict(doc)
