import csv
from enum import Enum
from typing import Any, List

from .formatbase import FormatBase

#: Significant digits of floating-point cells.
FLOAT_DIGITS = 12


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    elif isinstance(value, bool):
        return "true" if value else "false"
    elif isinstance(value, Enum):
        return str(value.value)
    elif isinstance(value, float):
        return f"{value:.{FLOAT_DIGITS}g}"
    return str(value)


def parse_cell(text: str) -> Any:
    if text == "":
        return None
    elif text in ("true", "false"):
        return text == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


class CSVFormat(FormatBase):
    """
    Plot-ready table: a header line with the column names, then one line per row.

    Floats are written with 12 significant digits and ``.`` as decimal separator; every line,
    the last one included, ends with ``\\n``. Only the rows survive a round trip; summary and
    metadata belong to the JSON format.
    """
    @classmethod
    def guess_format(cls, text):
        """See :meth:`fockgate.formatbase.FormatBase.guess_format()`"""
        first_line = text.lstrip().split("\n", 1)[0]
        if first_line and not first_line.startswith("{") and "," in first_line:
            return "csv"
        return None

    @classmethod
    def from_file(cls, report_cls, fp, format_):
        """See :meth:`fockgate.formatbase.FormatBase.from_file()`"""
        reader = csv.reader(fp)
        columns: List[str] = next(reader, [])
        rows = [{name: parse_cell(cell) for name, cell in zip(columns, line)} for line in reader if line]
        return report_cls(columns=columns, rows=rows)

    @classmethod
    def to_file(cls, report, fp, format_):
        """See :meth:`fockgate.formatbase.FormatBase.to_file()`"""
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([format_cell(row.get(name)) for name in report.columns])
