"""
Error types shared by every foldlab module.

Each error carries a short machine-readable code plus optional context and
renders itself as the JSON error object printed by the command line.
"""

from typing import Any, Dict


class FoldlabError(Exception):
    """Base class for all foldlab failures"""

    code = "foldlab_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        payload = {"error": self.code, "detail": self.message}
        payload.update(self.context)
        return payload


class InvalidInputError(FoldlabError, ValueError):
    """Input violates a precondition (bad type/rank, non-dominant weight, ...)"""

    code = "invalid_input"


class ComputationError(FoldlabError, RuntimeError):
    """An exact check that should hold did not"""

    code = "computation_failed"


class InconclusiveError(FoldlabError):
    """The computation could not certify its answer either way"""

    code = "inconclusive"


__all__ = [
    "FoldlabError",
    "InvalidInputError",
    "ComputationError",
    "InconclusiveError",
]
