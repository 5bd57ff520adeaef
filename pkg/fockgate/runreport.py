import contextlib
import datetime
import io
import os
import tempfile
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .common import VERSION
from .config import RunConfig
from .exceptions import UnknownFileExtensionError
from .formats import autodetect_format, format_for_path, get_format_class


class RunReport:
    """
    Result of one ``fockgate`` command: a table of rows plus a summary and run metadata.

    Rows are dicts keyed by :attr:`columns`; values are plain Python scalars (enums and numpy
    scalars are converted on construction). The report is written as CSV (rows only) or JSON
    (everything)::

        report = RunReport("sweep", config, ["beta_eta_abs", "p_fn", "p_fp", "method"], rows)
        report.save("curve.csv")
        again = RunReport.load("curve.csv")

    """

    def __init__(self, command: Optional[str] = None, config: Optional[RunConfig] = None,
                 columns: Sequence[str] = (), rows: Iterable[Dict[str, Any]] = (),
                 summary: Optional[Dict[str, Any]] = None, metadata: Optional[Dict[str, Any]] = None):
        self.command = command  #: Command that produced the report, eg. ``"sweep"``.
        self.config = config  #: :class:`RunConfig` of the run, if known.
        self.columns: List[str] = list(columns)  #: Column names, in output order.
        self.rows: List[Dict[str, Any]] = [{k: plain_value(v) for k, v in row.items()} for row in rows]
        self.summary: Dict[str, Any] = {k: plain_value(v) for k, v in (summary or {}).items()}
        self.metadata: Dict[str, Any] = metadata if metadata is not None else make_metadata(config)

    # ------------------------------------------------------------------------
    # I/O methods
    # ------------------------------------------------------------------------

    @classmethod
    def load(cls, path: str, format_: Optional[str] = None) -> "RunReport":
        """
        Load a report from ``path``; the format comes from ``format_``, the file extension or,
        failing both, the content.

        Raises:
            OSError
            fockgate.exceptions.FormatAutodetectionError

        """
        with open(path, encoding="utf-8", newline="") as fp:
            text = fp.read()
        if format_ is None and os.path.splitext(path)[1]:
            with contextlib.suppress(UnknownFileExtensionError):
                format_ = format_for_path(path)
        return cls.from_string(text, format_)

    @classmethod
    def from_string(cls, text: str, format_: Optional[str] = None) -> "RunReport":
        if format_ is None:
            format_ = autodetect_format(text)
        return cls.from_file(io.StringIO(text, newline=""), format_)

    @classmethod
    def from_file(cls, fp: TextIO, format_: str) -> "RunReport":
        return get_format_class(format_).from_file(cls, fp, format_)

    def save(self, path: str, format_: Optional[str] = None):
        """
        Write the report to ``path`` atomically (temporary file in the same directory, then rename).

        Raises:
            OSError: the directory is not writable.
            fockgate.exceptions.UnknownFileExtensionError: no ``format_`` and an unknown extension.

        """
        format_ = format_for_path(path, format_)
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".fockgate-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fp:
                self.to_file(fp, format_)
            os.replace(tmp_path, path)
        except BaseException:
            with contextlib.suppress(OSError):
                os.remove(tmp_path)
            raise

    def to_string(self, format_: str) -> str:
        fp = io.StringIO(newline="")
        self.to_file(fp, format_)
        return fp.getvalue()

    def to_file(self, fp: TextIO, format_: str):
        get_format_class(format_).to_file(self, fp, format_)

    def as_dict(self) -> Dict[str, Any]:
        return {"command": self.command, "metadata": self.metadata, "columns": self.columns,
                "rows": self.rows, "summary": self.summary}

    def equals(self, other: "RunReport") -> bool:
        """Same content, ignoring the timestamp."""
        strip = lambda report: {**report.as_dict(), "metadata": {k: v for k, v in report.metadata.items()  # noqa: E731
                                                                if k != "timestamp"}}
        return strip(self) == strip(other)

    def __repr__(self):
        return f"<RunReport command={self.command!r} rows={len(self.rows)}>"


def make_metadata(config: Optional[RunConfig]) -> Dict[str, Any]:
    return {
        "version": VERSION,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "parameters": config.as_dict() if config is not None else None,
    }


def plain_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    elif isinstance(value, np.generic):
        return value.item()
    elif isinstance(value, tuple):
        return list(value)
    return value
