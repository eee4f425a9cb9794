"""Exception hierarchy for the semiconj library.

Every failure mode that callers are expected to handle gets its own class;
the CLI maps these onto exit codes (usage errors -> 2, numerical errors -> 3,
check failures -> 1).
"""

from __future__ import annotations


class SemiconjError(Exception):
    """Base class for all library errors."""


class InvalidMapError(SemiconjError):
    """Moebius coefficients are degenerate (determinant below threshold)."""


class DomainError(SemiconjError):
    """A point lies outside the domain required by the operation."""

    def __init__(self, message: str, witness: complex | None = None):
        super().__init__(message)
        self.witness = witness


class AmbiguousWindingError(SemiconjError):
    """Target point lies on (or too close to) the integration path."""


class ParseError(SemiconjError):
    """Syntax error in a map expression, with source position."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected: " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class NotASelfMapError(SemiconjError):
    """The expression leaves its declared domain; carries a witness point."""

    def __init__(self, message: str, witness: complex):
        super().__init__(message)
        self.witness = witness


class AutomorphismError(SemiconjError):
    """The map looks like an automorphism, which the engines exclude."""


class InconsistentSeedsError(SemiconjError):
    """Different seeds produced incompatible classifications."""


class InconclusiveError(SemiconjError):
    """Iteration budget exhausted before any classification criterion held."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class OrbitPrecisionError(SemiconjError):
    """Orbit left the domain or the magnitude guard tripped; prefix is valid."""

    def __init__(self, message: str, last_valid_index: int):
        super().__init__(f"{message} (last valid index {last_valid_index})")
        self.last_valid_index = last_valid_index


class UnstableLimitError(SemiconjError):
    """A sampled limit did not stabilise within the requested spread."""

    def __init__(self, message: str, spread: float):
        super().__init__(f"{message} (spread {spread:.3e})")
        self.spread = spread


class ModelMismatchError(SemiconjError):
    """The map's type does not match the requested renormalization model."""


class NonConvergenceError(SemiconjError):
    """Renormalized iterates failed the Cauchy criterion within the cap."""

    def __init__(self, message: str, gap_trace: tuple[float, ...] = ()):
        super().__init__(message)
        self.gap_trace = gap_trace


class PrecisionError(SemiconjError):
    """Double precision exhausted before the requested tolerance was met."""


class ResidualError(SemiconjError):
    """A functional-equation residual exceeded its configured tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class CannotStandardizeError(SemiconjError):
    """Degenerate model coefficients (A=1 and b=0) admit no standard form."""


class EmptyFamilyError(SemiconjError):
    """The requested intertwiner family is provably empty."""


class UnsupportedFamilyError(SemiconjError):
    """The family is non-empty but no closed-form constructor is provided."""


class GridMismatchError(SemiconjError):
    """Two sampled results do not share a usable common grid."""


class UsageError(SemiconjError):
    """Bad CLI arguments or configuration."""
