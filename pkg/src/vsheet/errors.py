"""Exception hierarchy shared by all modules.

Every error raised on purpose by the toolkit derives from ``VSheetError`` so
callers (notably the CLI) can map families of failures onto exit codes.
"""

from __future__ import annotations


class VSheetError(Exception):
    """Base class for toolkit errors."""


class DomainError(VSheetError, ValueError):
    """An input lies outside the domain of an operation."""


class ConstraintViolation(VSheetError):
    """A background state breaks a structural constraint."""


class NondegeneracyError(ConstraintViolation, ValueError):
    """The front map has |d2Phi| below the nondegeneracy threshold."""


class AdmissibilityViolation(ConstraintViolation):
    """Two frequency-curve families that must stay apart collide."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


class UnsupportedRegime(ConstraintViolation):
    """The background lies in the band where no stability claim is made."""


class NumericalCheckFailure(VSheetError):
    """A numerical verification did not meet its tolerance."""


class PoleSingularity(NumericalCheckFailure, ZeroDivisionError):
    """A frequency sits on a pole where the reduced symbol is undefined."""

    def __init__(self, factor: str, side: str, value: complex):
        super().__init__(
            f"{factor} pole factor vanishes on side {side} (|value| = {abs(value):.3e})"
        )
        self.factor = factor
        self.side = side


class GlancingDegeneracy(NumericalCheckFailure):
    """Both eigenvector families vanish; only possible where omega = 0."""


class NearGlancing(NumericalCheckFailure):
    """det Q0 is too small to build the left transformation."""


class ConstructionFailure(NumericalCheckFailure):
    """A hard-coded construction failed its defining residual check."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class StructureMismatch(NumericalCheckFailure):
    """A triangularized symbol violates its expected pattern."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ResolutionError(VSheetError, ValueError):
    """A sampling grid is too coarse for the requested estimate."""


class OracleAbstention(NumericalCheckFailure):
    """The oracle declines to answer because the spectral gap is too small."""
