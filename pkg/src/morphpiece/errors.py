"""Exception types shared across the package.

Every error raised on a data or artifact problem derives from MorphPieceError
so the command line layer can map them to a single exit code.
"""

from __future__ import annotations


class MorphPieceError(Exception):
    """Base class for data, artifact and lookup failures."""


class ZeroValidRecordsError(MorphPieceError):
    """Morphology source yielded no usable entries."""


class EmptyCorpusError(MorphPieceError):
    """Corpus contained no non-empty documents."""


class EmptyEffectiveCorpusError(EmptyCorpusError):
    """Every training pretoken was removed by the exclusion set."""


class ParseError(MorphPieceError):
    """Malformed artifact file.

    The message always starts with ``path:line:`` so callers (including the
    bindings) can locate the offending line.
    """

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no
        self.reason = message


class ArtifactMissingError(MorphPieceError):
    """A required artifact file does not exist."""

    def __init__(self, path: str):
        super().__init__(f"missing artifact file: {path}")
        self.path = str(path)


class DuplicateTokenError(MorphPieceError):
    """The same token string appeared twice while building a vocabulary."""


class UnknownTokenError(MorphPieceError):
    """Token (or id) is not present in the vocabulary."""


class AlphabetError(MorphPieceError):
    """Token contains characters outside the remapped byte alphabet."""
