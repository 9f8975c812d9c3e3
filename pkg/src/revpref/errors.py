"""Exception hierarchy shared by every module."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .acyclicity import ViolationWitness


class RevPrefError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(RevPrefError, ValueError):
    """Vectors or matrices whose sizes do not line up."""


class InvalidDataError(RevPrefError, ValueError):
    """A value violates a documented invariant (sign, normalisation, ...)."""


class MalformedRelationError(RevPrefError, ValueError):
    """A weak/strict relation pair where strict is not contained in weak."""


class AxiomViolationError(RevPrefError):
    """A construction was asked for data that fails its acyclicity axiom.

    The offending cycle is kept on ``witness`` so callers can report it.
    """

    def __init__(self, axiom: str, witness: ViolationWitness | None):
        self.axiom = axiom
        self.witness = witness
        detail = f": cycle {list(witness.cycle)}" if witness is not None else ""
        super().__init__(f"data violates {axiom}{detail}")


class VerificationError(RevPrefError, RuntimeError):
    """A constructed certificate failed its exhaustive re-check.

    This signals an internal defect, never bad input.
    """


class InputError(RevPrefError, ValueError):
    """A file could not be ingested; ``location`` names the line or JSON path."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
