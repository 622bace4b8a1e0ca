"""Exception hierarchy.

Every error raised by the library derives from :class:`QcpsError`. The two
intermediate classes decide the CLI exit code: :class:`InputError` maps to 2,
:class:`SemanticError` to 3 and :class:`InvariantViolation` to 4.
"""

from __future__ import annotations


class QcpsError(Exception):
    """Base class. ``workload_index`` is filled in by the simulation engine."""

    workload_index: int | None = None

    def __str__(self) -> str:
        msg = super().__str__()
        if self.workload_index is not None:
            return f"workload item {self.workload_index}: {msg}"
        return msg


class InputError(QcpsError):
    pass


class ScenarioFormatError(InputError):
    pass


class SemanticError(QcpsError):
    pass


class DuplicateNodeId(SemanticError):
    pass


class MissingPosition(SemanticError):
    pass


class NoCoordinator(SemanticError):
    pass


class NotCoordinator(SemanticError):
    pass


class UnknownNode(SemanticError):
    pass


class UnknownGrid(SemanticError):
    pass


class ConflictingRegistration(SemanticError):
    pass


class AccessDenied(SemanticError):
    pass


class UnknownOrigin(SemanticError):
    pass


class UnknownType(SemanticError):
    pass


class ScenarioMismatch(SemanticError):
    pass


class InvariantViolation(QcpsError):
    pass
