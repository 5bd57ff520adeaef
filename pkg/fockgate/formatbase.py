from typing import Optional, TextIO, Type
import fockgate


class FormatBase:
    """
    Base class for report format implementations.

    How to implement a new report format:

    1. Create a subclass of FormatBase and override the methods you want to support.
    2. Decide on a format identifier, like the ``"csv"`` or ``"json"`` already used in the library.
    3. Add your identifier and class to :data:`fockgate.formats.FORMAT_IDENTIFIER_TO_FORMAT_CLASS`.
    4. (optional) Add your file extension and class to :data:`fockgate.formats.FILE_EXTENSION_TO_FORMAT_IDENTIFIER`.

    After finishing these steps, :meth:`RunReport.load()` and :meth:`RunReport.save()` work with your
    format, including autodetection from content and file extension (if you provided these).

    """
    @classmethod
    def from_file(cls, report_cls: Type["fockgate.RunReport"], fp: TextIO, format_: str) -> "fockgate.RunReport":
        """
        Parse a report.

        Arguments:
            report_cls: :class:`RunReport` or a subclass, used to build the result.
            fp (file object): Text file object, the report file.
            format_ (str): Format identifier.

        Returns:
            RunReport

        """
        raise NotImplementedError("Parsing is not supported for this format")

    @classmethod
    def to_file(cls, report: "fockgate.RunReport", fp: TextIO, format_: str):
        """
        Write a report into a text file object.

        Arguments:
            report (RunReport): Report to write.
            fp (file object): Text file object used as output.
            format_ (str): Format identifier of desired output format.

        """
        raise NotImplementedError("Writing is not supported for this format")

    @classmethod
    def guess_format(cls, text: str) -> Optional[str]:
        """
        Return format identifier of recognized format, or None.

        Arguments:
            text (str): Content of the report file (or its first few thousand characters).

        """
        return None
