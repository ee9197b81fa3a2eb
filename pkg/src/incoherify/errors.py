"""
Exception hierarchy shared across the package. Every error incoherify raises on purpose derives
from `IncoherifyError`; the ones that describe bad input data also derive from `ValueError` so
they surface naturally through pydantic validators (a `ValueError` raised inside a validator
becomes a `ValidationError` entry carrying its location).
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from incoherify.amr.graph import ValidationReport

__all__ = [
    "AmrSyntaxError",
    "ConfigError",
    "CorpusError",
    "CycleError",
    "DuplicateVariableError",
    "EditError",
    "IncoherifyError",
    "InvalidGraphError",
    "LexiconFormatError",
    "ModelFormatError",
    "NotApplicableError",
    "ScoreTableError",
    "SingleClassError",
    "UndeclaredVariableError",
]


class IncoherifyError(Exception):
    """Base class for every error raised by incoherify."""


class AmrSyntaxError(IncoherifyError, ValueError):
    """Malformed PENMAN text: unbalanced parentheses, missing concept, stray tokens."""


class DuplicateVariableError(AmrSyntaxError):
    """A variable is declared (`(v / concept)`) more than once."""


class UndeclaredVariableError(IncoherifyError, ValueError):
    """A bare variable reference, or an edit target, names a variable that is not declared."""


class CycleError(IncoherifyError, ValueError):
    """The edge relation of a parsed graph contains a cycle."""


class InvalidGraphError(IncoherifyError, ValueError):
    """An operation that requires a valid graph was handed one that fails `validate`."""

    def __init__(self, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.report = report


class CorpusError(IncoherifyError, ValueError):
    """A corpus line could not be read. Carries enough context to find the bad record."""

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        conversation_id: str | None = None,
        utterance_index: int | None = None,
    ):
        self.line = line
        self.conversation_id = conversation_id
        self.utterance_index = utterance_index
        where = []
        if line is not None:
            where.append(f"line {line}")
        if conversation_id is not None:
            where.append(f"conversation {conversation_id!r}")
        if utterance_index is not None:
            where.append(f"utterance {utterance_index}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class LexiconFormatError(IncoherifyError, ValueError):
    """A lexicon row does not have exactly three tab-separated columns."""

    def __init__(self, message: str, *, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EditError(IncoherifyError, ValueError):
    """An edit precondition fails, e.g. removing the root of a graph."""


class NotApplicableError(IncoherifyError):
    """A manipulation found no eligible target in a conversation. Callers resample."""


class SingleClassError(IncoherifyError, ValueError):
    """Training or evaluation data holds only one label."""


class ScoreTableError(IncoherifyError, ValueError):
    """A score or annotation table has a missing column, a bad number or an out-of-range score."""


class ModelFormatError(IncoherifyError, ValueError):
    """A persisted proxy model file is truncated or does not start with the expected magic."""


class ConfigError(IncoherifyError, ValueError):
    """A configuration file is unreadable or violates a config invariant."""
