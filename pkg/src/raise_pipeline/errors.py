"""Exception hierarchy.

Everything raised on purpose derives from :class:`RaiseError` so the CLI can
map families of errors onto exit codes.
"""

from __future__ import annotations


class RaiseError(Exception):
    """Base class for all pipeline errors."""


# dataset
class DatasetError(RaiseError):
    pass


class ProfileFileNotFound(DatasetError, FileNotFoundError):
    pass


class MalformedHeader(DatasetError):
    def __init__(self, column: str):
        super().__init__(f"header is missing required column {column!r}")
        self.column = column


class EmptyDataset(DatasetError):
    pass


class InsufficientClassCount(DatasetError):
    def __init__(self, label: str, requested: int, available: int):
        super().__init__(
            f"class {label}: requested {requested}, available {available} "
            f"(short by {requested - available})"
        )
        self.label = label
        self.shortfall = requested - available


# gateway
class GatewayError(RaiseError):
    pass


class AuthError(GatewayError):
    pass


class TransportError(GatewayError):
    pass


class ScriptExhausted(GatewayError):
    pass


class EmptyReply(RaiseError):
    pass


# rules
class RuleParseError(RaiseError):
    """Rule text could not be parsed; ``span`` is the offending (start, end)."""

    def __init__(self, message: str, span: tuple[int, int], text: str = ""):
        start, end = span
        excerpt = text[start:end] if text else ""
        super().__init__(f"{message} at {start}:{end} {excerpt!r}" if text else message)
        self.span = span


class MissingIf(RuleParseError):
    pass


class MissingThen(RuleParseError):
    pass


class MissingOutcome(RuleParseError):
    pass


class EmptyConditions(RuleParseError):
    pass


class ConflictingOutcomes(RuleParseError):
    pass


# scoring / evaluation
class UnparsableScore(RaiseError):
    pass


class DomainError(RaiseError, ValueError):
    pass


class EmptyInput(RaiseError, ValueError):
    pass


# prediction
class UnparsablePrediction(RaiseError):
    pass


class PredictionFailed(RaiseError):
    pass


# pipeline
class ConfigError(RaiseError):
    pass


class StageFatal(RaiseError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage


class ConfigMismatch(RaiseError):
    pass


class ManifestError(RaiseError):
    pass
