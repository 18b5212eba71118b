"""Exception hierarchy shared across the package.

Every error raised by zsp derives from ZspError so callers (and the CLI)
can catch one base class. Loader errors carry a ``row`` attribute when the
offending table or dataset line is known.
"""


class ZspError(Exception):
    """Base class for all zsp errors."""


# --- ontology ---------------------------------------------------------------

class UnknownLabel(ZspError):
    """A label name is neither a canonical root code nor a registered alias."""


class MalformedCode(ZspError):
    """A CAMEO action code is non-numeric or has the wrong length."""


class UnknownRoot(ZspError):
    """A CAMEO action code's leading pair is outside the known 01-20 range."""


# --- hypothesis table -------------------------------------------------------

class TableError(ZspError):
    """Base for hypothesis-table loading errors; ``row`` is the 1-based data row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class MissingPlaceholder(TableError):
    """A template does not contain <S> and <T> exactly once each."""


class LabelMismatch(TableError):
    """A row's declared quad class disagrees with its root's base quad."""


class DanglingOverridePair(TableError):
    """A general-entry override tag points at a missing or untagged entry."""


class NoFutureForm(ZspError):
    """Future instantiation requested for an entry without a future template."""


class EmptyMention(ZspError):
    """Source or target mention is empty."""


# --- scorer -----------------------------------------------------------------

class BackendUnavailable(ZspError):
    """The scoring backend could not be reached after retries."""


class MalformedResponse(ZspError):
    """The scoring backend answered with an unusable payload or status."""


class ScoreOutOfRange(ZspError):
    """A backend returned an entailment score outside [0, 1]."""


# --- engine -----------------------------------------------------------------

class EmptyTable(ZspError):
    """Classification was attempted against a table with no entries."""


class EmptyInput(ZspError):
    """A cascade stage received an empty candidate list."""


# --- datasets / evaluation --------------------------------------------------

class DatasetError(ZspError):
    """Base for dataset loading errors; ``row`` is the 1-based file line."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"line {row}: {message}")
        self.row = row


class MissingField(DatasetError):
    """A dataset record lacks a required field."""


class DuplicateId(DatasetError):
    """Two dataset records share an instance id."""


class IdMismatch(ZspError):
    """Predictions and dataset instances do not cover the same ids."""
