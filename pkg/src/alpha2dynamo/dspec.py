"""Finite-difference discretization of the dynamo operator and its spectra.

Grid: ``r_i = i*h``, ``i = 1..N``, ``h = 1/N``, with ``y_0 = 0``.  The Robin
condition at ``r = 1`` is folded in by a ghost node; the boundary row then
carries half weight, and the Bessel block is symmetrized in the frame
``z = M^(1/2) y`` with ``M = diag(1, .., 1, 1/2)``.  All matrices below live
in that frame, so the dynamo matrix is similar to the one acting on nodal
values.  For ``theta = inf`` node ``N`` is dropped and ``M = I``.

Block layout of the dynamo matrix (first component of size ``n1``, second
of size ``N-1``)::

    [[ -A_theta,                        E diag(alpha)  ],
     [ diag(alpha) R A_theta - diag(alpha') R D M^-1/2, -A_inf ]]

where ``E`` injects interior nodes into the first component and ``R = E^T``
restricts to them.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .besselspec import check_mode, check_theta
from .enclosure import ProblemConstants, in_sigma, right_bound_a
from .errors import ConvergenceError, DomainError, MatchingError
from .profiles import AlphaProfile, Stefani, evaluate, evaluate_derivative

DEFAULT_TOL = 1e-3
RESIDUAL_CHECKS = 10
GAP_RATIO = 2.0


@dataclass(frozen=True)
class Grid:
    N: int

    def __post_init__(self) -> None:
        if self.N < 2:
            raise DomainError("grid needs N >= 2")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.N + 1) / self.N


def _check_size(N: int, least: int) -> None:
    if int(N) != N or N < least:
        raise DomainError(f"grid size must be an integer >= {least}, got {N}")


def _mass_sqrt_inv(N: int, theta: float) -> np.ndarray:
    if math.isinf(theta):
        return np.ones(N - 1)
    m = np.ones(N)
    m[-1] = np.sqrt(2.0)
    return m


def discretize_bessel(l: int, theta: float, N: int) -> np.ndarray:
    """Symmetric matrix of ``-d^2/dr^2 + l(l+1)/r^2`` with the boundary condition at 1."""
    check_mode(l)
    check_theta(theta)
    _check_size(N, 16)
    g = Grid(N)
    h = g.h
    pot = l * (l + 1) / g.nodes ** 2
    inner = 1.0 / (h * h)
    K = np.diag(2.0 * inner + pot) - inner * (np.eye(N, k=1) + np.eye(N, k=-1))
    if math.isinf(theta):
        return K[:-1, :-1]
    # ghost y_{N+1} = y_{N-1} - 2 h theta y_N, then halve the boundary row
    K[-1, -1] = (1.0 + h * theta) * inner + pot[-1] / 2
    s = _mass_sqrt_inv(N, theta)
    return s[:, None] * K * s[None, :]


def difference_matrix(N: int, theta: float) -> np.ndarray:
    """First derivative on nodal values: central inside, one-sided second order at ``r = 1``."""
    n = N - 1 if math.isinf(theta) else N
    h = 1.0 / N
    D = (np.eye(n, k=1) - np.eye(n, k=-1)) / (2 * h)
    if not math.isinf(theta):
        D[-1, :] = 0.0
        D[-1, -1], D[-1, -2], D[-1, -3] = 3 / (2 * h), -4 / (2 * h), 1 / (2 * h)
    return D


@dataclass(frozen=True)
class DynamoMatrix:
    matrix: np.ndarray
    grid: Grid
    constants: ProblemConstants
    n1: int


@dataclass(frozen=True)
class SelfAdjointMatrix:
    matrix: np.ndarray
    grid: Grid
    constants: ProblemConstants
    n1: int
    perturbation: np.ndarray


def _interior_profile(profile: AlphaProfile, N: int) -> tuple[np.ndarray, np.ndarray]:
    r = Grid(N).nodes[:-1]
    return np.asarray(evaluate(profile, r), float), np.asarray(evaluate_derivative(profile, r), float)


def assemble_dynamo(l: int, theta: float, profile: AlphaProfile, N: int,
                    constants: ProblemConstants | None = None) -> DynamoMatrix:
    A_t = discretize_bessel(l, theta, N)
    A_i = discretize_bessel(l, math.inf, N)
    n1 = A_t.shape[0]
    a, da = _interior_profile(profile, N)
    Dm = difference_matrix(N, theta) * _mass_sqrt_inv(N, theta)[None, :]
    top = np.zeros((n1, N - 1))
    top[: N - 1, :] = np.diag(a)
    bottom = a[:, None] * A_t[: N - 1, :] - da[:, None] * Dm[: N - 1, :]
    M = np.block([[-A_t, top], [bottom, -A_i]])
    c = constants or ProblemConstants.from_profile(l, theta, profile)
    return DynamoMatrix(M, Grid(N), c, n1)


def _sym_powers(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, U = np.linalg.eigh(A)
    if w.min() <= 0.0:
        raise ConvergenceError("discretized Bessel block is not positive definite")
    return (U * np.sqrt(w)) @ U.T, (U / np.sqrt(w)) @ U.T


def assemble_selfadjoint(l: int, theta: float, profile: AlphaProfile, N: int,
                         constants: ProblemConstants | None = None) -> SelfAdjointMatrix:
    """Self-adjoint companion ``S`` and the residual block ``T`` with ``S + T`` similar to the dynamo matrix."""
    A_t = discretize_bessel(l, theta, N)
    A_i = discretize_bessel(l, math.inf, N)
    n1 = A_t.shape[0]
    a, da = _interior_profile(profile, N)
    half, inv_half = _sym_powers(A_t)
    coupling = half[:, : N - 1] * a[None, :]
    S = np.block([[-A_t, coupling], [coupling.T, -A_i]])
    S = 0.5 * (S + S.T)
    Dm = difference_matrix(N, theta) * _mass_sqrt_inv(N, theta)[None, :]
    T = np.zeros_like(S)
    T[n1:, :n1] = -da[:, None] * (Dm[: N - 1, :] @ inv_half)
    c = constants or ProblemConstants.from_profile(l, theta, profile)
    return SelfAdjointMatrix(S, Grid(N), c, n1, T)


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    N: int | None
    convergence_err: np.ndarray
    converged: np.ndarray
    coarse_N: int | None = None
    tol: float = DEFAULT_TOL
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


def sort_spectrum(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, complex)
    order = np.lexsort((-values.imag, -values.real))
    return values[order]


def _inverse_iteration_residual(M: np.ndarray, lam: complex) -> float:
    n = M.shape[0]
    scale = max(1.0, abs(lam))
    shift = lam + 1e-10 * scale * (1 + 1j)
    A = scipy.sparse.csc_matrix(M.astype(complex)) - shift * scipy.sparse.identity(n, dtype=complex, format="csc")
    lu = scipy.sparse.linalg.splu(A)
    v = np.ones(n, complex) / math.sqrt(n)
    for _ in range(3):
        v = lu.solve(v)
        v /= np.linalg.norm(v)
    return float(np.linalg.norm(M @ v - lam * v))


def eig_general(m: DynamoMatrix | np.ndarray, checks: int = RESIDUAL_CHECKS) -> SpectrumResult:
    """All eigenvalues of a real square matrix, sorted by descending real part."""
    M = m.matrix if isinstance(m, DynamoMatrix) else np.asarray(m, float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("eig_general needs a square matrix")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    try:
        values = scipy.linalg.eigvals(M, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from None
    values = sort_spectrum(values)
    norm = max(np.abs(M).sum(axis=1).max(), np.finfo(float).tiny)
    res = np.array([_inverse_iteration_residual(M, lam) for lam in values[:checks]])
    if np.any(res >= 1e-8 * norm):
        raise ConvergenceError(f"backward-error check failed: residual {res.max():.3g} vs norm {norm:.3g}")
    n = values.size
    grid_n = m.grid.N if isinstance(m, DynamoMatrix) else None
    return SpectrumResult(values, grid_n, np.full(n, np.nan), np.zeros(n, bool), residuals=res)


def eig_symmetric(m: SelfAdjointMatrix | np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix."""
    S = m.matrix if isinstance(m, SelfAdjointMatrix) else np.asarray(m, float)
    try:
        w, U = np.linalg.eigh(S)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigenvalue iteration failed: {exc}") from None
    if np.abs(U.T @ U - np.eye(U.shape[1])).max() >= 1e-10:
        raise ConvergenceError("eigenvector matrix lost orthogonality")
    return w


def match_spectra(fine: np.ndarray, coarse: np.ndarray, count: int,
                  strict: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Pair the leading ``count`` fine eigenvalues with coarse ones by nearest neighbour.

    Returns the fine values and ``|fine - coarse|``.  A pairing is ambiguous
    when the second-nearest distinct coarse value is less than twice as far
    as the nearest; ``strict`` raises then, otherwise the error is ``inf``.
    """
    fine = sort_spectrum(fine)[:count]
    coarse = np.asarray(coarse, complex)
    used = np.zeros(coarse.size, bool)
    errs = np.empty(fine.size)
    for i, lam in enumerate(fine):
        d = np.abs(coarse - lam)
        avail = np.where(used, np.inf, d)
        j = int(np.argmin(avail))
        if not np.isfinite(avail[j]):
            raise MatchingError("ran out of coarse eigenvalues")
        used[j] = True
        same = np.abs(coarse - coarse[j]) <= 1e-9 * max(1.0, abs(coarse[j]))
        others = d[~same]
        second = others.min() if others.size else np.inf
        if second < GAP_RATIO * d[j]:
            if strict:
                raise MatchingError(f"ambiguous pairing near {lam:.6g}: distances {d[j]:.3g}, {second:.3g}")
            errs[i] = np.inf
        else:
            errs[i] = d[j]
    return fine, errs


def spectrum(l: int, theta: float, profile: AlphaProfile, N: int, top_count: int = 12,
             tol: float = DEFAULT_TOL, strict: bool = True) -> SpectrumResult:
    """Leading eigenvalues on grid ``2N`` with error estimates from grid ``N``."""
    _check_size(N, 32)
    c = ProblemConstants.from_profile(l, theta, profile)
    coarse = eig_general(assemble_dynamo(l, theta, profile, N, c))
    fine = eig_general(assemble_dynamo(l, theta, profile, 2 * N, c))
    values, errs = match_spectra(fine.eigenvalues, coarse.eigenvalues, top_count, strict)
    ok = errs < tol * np.maximum(1.0, np.abs(values))
    return SpectrumResult(values, 2 * N, errs, ok, N, tol, fine.residuals)


def leading_eigenvalue(l: int, theta: float, profile: AlphaProfile, N: int) -> complex:
    """Rightmost eigenvalue on a single grid (upper member of a conjugate pair)."""
    M = assemble_dynamo(l, theta, profile, N).matrix
    try:
        values = scipy.linalg.eigvals(M, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from None
    return complex(sort_spectrum(values)[0])


@dataclass(frozen=True)
class SweepEvent:
    kind: str
    C: float
    value: complex


@dataclass
class SweepResult:
    C_values: list[float]
    results: list[SpectrumResult]
    events: list[SweepEvent]


def _is_complex(lam: complex) -> bool:
    return abs(lam.imag) > 1e-4 * max(1.0, abs(lam))


def _sweep_point(args: tuple) -> SpectrumResult:
    l, theta, C, N, top_count = args
    return spectrum(l, theta, Stefani(C), N // 2, top_count, strict=False)


def _bisect(pred, lo: float, hi: float, tol: float) -> float:
    # pred(lo) is False, pred(hi) is True
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def sweep_stefani(l: int, theta: float, C_values: Sequence[float], N: int, top_count: int = 6,
                  workers: int | None = None, refine_tol: float = 1e-4) -> SweepResult:
    """Leading-eigenvalue trajectory of the Stefani family with merge/crossing events.

    Each point reports grid-``N`` eigenvalues checked against grid ``N/2``.
    Events are refined by bisection in ``C`` on grid ``N``.
    """
    C_values = [float(x) for x in C_values]
    if any(b <= a for a, b in zip(C_values, C_values[1:])):
        raise DomainError("C values must be strictly increasing")
    if N % 2 or N < 64:
        raise DomainError("sweep grid must be even and >= 64")
    tasks = [(l, theta, C, N, top_count) for C in C_values]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    lead = lambda C: leading_eigenvalue(l, theta, Stefani(C), N)
    events: list[SweepEvent] = []
    leads = [complex(r.eigenvalues[0]) for r in results]
    merged = False
    for i in range(1, len(C_values)):
        c0, c1 = C_values[i - 1], C_values[i]
        z0, z1 = leads[i - 1], leads[i]
        if not merged and not _is_complex(z0) and _is_complex(z1):
            C = _bisect(lambda x: _is_complex(lead(x)), c0, c1, refine_tol)
            events.append(SweepEvent("MERGE", C, lead(C)))
            merged = True
        if merged and _is_complex(z0) and _is_complex(z1) and (z0.real > 0) != (z1.real > 0):
            up = z1.real > 0
            C = _bisect(lambda x: (lead(x).real > 0) == up, c0, c1, refine_tol)
            events.append(SweepEvent("CROSS", C, lead(C)))
        if merged and _is_complex(z0) and not _is_complex(z1):
            C = _bisect(lambda x: not _is_complex(lead(x)), c0, c1, refine_tol)
            events.append(SweepEvent("REALIZE", C, lead(C)))
            merged = False
    return SweepResult(C_values, results, events)


def _interior_alpha_sq(profile: AlphaProfile, N: int) -> np.ndarray:
    a, _ = _interior_profile(profile, N)
    return a * a


def shifted_dirichlet(l: int, profile: AlphaProfile, N: int, sign: float = 1.0) -> np.ndarray:
    """``-A_inf + sign * diag(alpha^2)`` on the interior nodes."""
    return -discretize_bessel(l, math.inf, N) + sign * np.diag(_interior_alpha_sq(profile, N))


def positive_count(l: int, profile: AlphaProfile, N: int) -> int:
    """Number of positive eigenvalues of ``-A_inf + alpha^2``."""
    _check_size(N, 32)
    return int(np.sum(np.linalg.eigvalsh(shifted_dirichlet(l, profile, N)) > 0.0))


@dataclass(frozen=True)
class EnclosureCheck:
    value: complex
    tau: float
    in_sigma: bool
    strip: bool
    disc: bool
    combined: bool

    @property
    def passed(self) -> bool:
        return self.in_sigma and self.strip and self.disc and self.combined


@dataclass
class EnclosureReport:
    checks: list[EnclosureCheck]
    skipped: int
    a_theta: float
    s_theta: float
    b_theta: float

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def failures(self) -> list[EnclosureCheck]:
        return [ch for ch in self.checks if not ch.passed]


def check_point(lam: complex, tau: float, c: ProblemConstants, s_spectrum: np.ndarray,
                a: float, b: float) -> EnclosureCheck:
    P = c.alpha_prime_norm
    xi, eta = lam.real, abs(lam.imag)
    relaxed = complex(xi - tau, max(eta - tau, 0.0))
    sig = in_sigma(relaxed, c)
    strip = eta <= P + tau and xi <= b + tau
    if s_spectrum.size:
        disc = float(np.min(np.abs(s_spectrum - lam))) <= P + tau
    else:
        disc = False
    combined = xi <= min(a, b) + tau and eta <= P + tau
    return EnclosureCheck(lam, tau, sig, strip, disc, combined)


def verify_enclosure(result: SpectrumResult, c: ProblemConstants, s_spectrum: Sequence[float],
                     tau_floor: float = 1e-6) -> EnclosureReport:
    """Check every converged eigenvalue against both enclosures.

    The tolerance ``tau = max(err, tau_floor)`` absorbs discretization error;
    for ``Sigma`` the eigenvalue is moved by ``tau`` towards the real axis and
    to the left before testing, which only enlarges the accepted set.
    """
    bounds = right_bound_a(c)
    s_arr = np.asarray(s_spectrum, float)
    checks = []
    skipped = 0
    for lam, err, ok in zip(result.eigenvalues, result.convergence_err, result.converged):
        if not ok:
            skipped += 1
            continue
        tau = max(float(err), tau_floor)
        checks.append(check_point(complex(lam), tau, c, s_arr, bounds.a_theta, bounds.b_theta))
    return EnclosureReport(checks, skipped, bounds.a_theta, bounds.s_theta, bounds.b_theta)
