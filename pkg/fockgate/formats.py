import os.path
from typing import Dict, Optional, Type

from .formatbase import FormatBase
from .csvformat import CSVFormat
from .jsonformat import JSONFormat
from .exceptions import FormatAutodetectionError, UnknownFileExtensionError, UnknownFormatIdentifierError

#: Dict mapping file extensions to report format identifiers.
FILE_EXTENSION_TO_FORMAT_IDENTIFIER: Dict[str, str] = {
    ".csv": "csv",
    ".json": "json",
}

#: Dict mapping report format identifiers to implementations (FormatBase subclasses).
FORMAT_IDENTIFIER_TO_FORMAT_CLASS: Dict[str, Type[FormatBase]] = {
    "csv": CSVFormat,
    "json": JSONFormat,
}

FORMAT_IDENTIFIERS = list(FORMAT_IDENTIFIER_TO_FORMAT_CLASS.keys())


def get_format_class(format_: str) -> Type[FormatBase]:
    """Report format identifier -> implementation class"""
    if format_ not in FORMAT_IDENTIFIER_TO_FORMAT_CLASS:
        raise UnknownFormatIdentifierError(format_)
    return FORMAT_IDENTIFIER_TO_FORMAT_CLASS[format_]


def format_for_path(path: str, format_: Optional[str] = None) -> str:
    """
    Format identifier to use for ``path``: the explicit ``format_`` when given, else the one
    registered for the (case-insensitive) file extension.
    """
    if format_ is not None:
        get_format_class(format_)
        return format_
    ext = os.path.splitext(path)[1].lower()
    if ext not in FILE_EXTENSION_TO_FORMAT_IDENTIFIER:
        raise UnknownFileExtensionError(ext)
    return FILE_EXTENSION_TO_FORMAT_IDENTIFIER[ext]


def autodetect_format(content: str) -> str:
    """Identifier of the single format that recognises ``content``; FormatAutodetectionError otherwise."""
    guesses = {impl.guess_format(content) for impl in FORMAT_IDENTIFIER_TO_FORMAT_CLASS.values()}
    guesses.discard(None)
    if not guesses:
        raise FormatAutodetectionError("No suitable formats")
    if len(guesses) > 1:
        raise FormatAutodetectionError(f"Multiple suitable formats ({sorted(guesses)!r})")
    return str(guesses.pop())
