import dataclasses
import json
from enum import Enum

import numpy as np

from .config import RunConfig
from .formatbase import FormatBase


class EnhancedJSONEncoder(json.JSONEncoder):
    """Serialises dataclasses, enums and numpy scalars/arrays alongside the builtin types."""
    def default(self, o):
        if dataclasses.is_dataclass(o) and not isinstance(o, type):
            return dataclasses.asdict(o)
        elif isinstance(o, Enum):
            return o.value
        elif isinstance(o, np.generic):
            return o.item()
        elif isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


class JSONFormat(FormatBase):
    """
    Complete run report: command, metadata (tool version, timestamp, parameters), columns,
    rows and summary. Parses back into the same :class:`RunReport` with its :class:`RunConfig`.
    """
    @classmethod
    def guess_format(cls, text):
        """See :meth:`fockgate.formatbase.FormatBase.guess_format()`"""
        if text.lstrip().startswith("{"):
            return "json"
        return None

    @classmethod
    def from_file(cls, report_cls, fp, format_):
        """See :meth:`fockgate.formatbase.FormatBase.from_file()`"""
        data = json.load(fp)
        metadata = data.get("metadata", {})
        parameters = metadata.get("parameters")
        return report_cls(command=data.get("command"),
                          config=RunConfig.from_dict(parameters) if parameters else None,
                          columns=data.get("columns", []),
                          rows=data.get("rows", []),
                          summary=data.get("summary", {}),
                          metadata=metadata)

    @classmethod
    def to_file(cls, report, fp, format_):
        """See :meth:`fockgate.formatbase.FormatBase.to_file()`"""
        json.dump(report.as_dict(), fp, cls=EnhancedJSONEncoder, indent=2)
        fp.write("\n")
