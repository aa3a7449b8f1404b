"""Exception hierarchy.

Domain problems (bad input, empty brackets, windows that are too small)
derive from :class:`DomainError`; numerical breakdowns derive from
:class:`ConvergenceError`.  The CLI maps the two families to exit codes
1 and 2.
"""


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class NoSignChangeError(DomainError):
    """A root bracket whose endpoint values do not change sign."""


class PoleError(DomainError):
    """Evaluation at (or numerically at) a pole."""


class InsufficientSpectrumError(DomainError):
    """A finite spectral window cannot certify the requested quantity."""


class WindowTooSmallError(DomainError):
    """A search window holds fewer roots than requested."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge."""


class MatchingError(ConvergenceError):
    """Eigenvalues of two grids cannot be paired unambiguously."""
