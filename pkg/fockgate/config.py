"""
Run configuration shared by the command line and the report files.

A configuration file is a flat list of ``key = value`` lines (``#`` or ``;`` start a comment)::

    # reproduce the lossy curve
    n = 1
    eta = 0.95
    beta-max = 3

Keys are option names, with ``-`` or ``_``. Values from the file become parser defaults, so
explicit command-line flags always win.

"""

import configparser
import dataclasses
import math
from typing import Any, Dict, Optional, Union, get_args, get_origin

from .analytic import SignalParams
from .common import MAX_CUTOFF, MAX_SQUEEZE
from .exceptions import InvalidParameterError
from .interferometer import InterferometerConfig
from .verify import SUITE_NAMES

COMMANDS = ["sweep", "optimize", "montecarlo", "verify"]

_SECTION = "fockgate"


@dataclasses.dataclass
class RunConfig:
    """Every parameter of one ``fockgate`` invocation."""
    command: str = "sweep"
    n: int = 1
    eta: float = 1.0
    r: float = 0.0
    alpha: float = 1e4
    beta_min: float = 0.0
    beta_max: float = 3.0
    steps: int = 301
    vacuum: bool = False
    beta_eta: Optional[float] = None
    trials: int = 100_000
    seed: int = 0
    cutoff: Optional[int] = None
    suite: str = "all"
    output: Optional[str] = None
    format: Optional[str] = None
    trials_csv: Optional[str] = None

    def validate(self) -> "RunConfig":
        """
        Check every field against the module invariants; returns ``self``.

        Raises:
            InvalidParameterError: first violated constraint.

        """
        if self.command not in COMMANDS:
            raise InvalidParameterError(f"unknown command {self.command!r}")
        if int(self.n) != self.n or self.n < 0:
            raise InvalidParameterError(f"n must be a non-negative integer, got {self.n!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise InvalidParameterError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not abs(self.r) <= MAX_SQUEEZE:
            raise InvalidParameterError(f"|r| must not exceed {MAX_SQUEEZE}, got {self.r!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidParameterError(f"alpha must be positive, got {self.alpha!r}")
        if self.steps < 1:
            raise InvalidParameterError(f"steps must be at least 1, got {self.steps!r}")
        if not 0.0 <= self.beta_min <= self.beta_max or not math.isfinite(self.beta_max):
            raise InvalidParameterError(f"need 0 <= beta-min <= beta-max, got {self.beta_min!r}, {self.beta_max!r}")
        if self.steps == 1 and self.beta_min != self.beta_max:
            raise InvalidParameterError("a single step needs beta-min == beta-max")
        if self.beta_eta is not None and not self.beta_eta >= 0:
            raise InvalidParameterError(f"beta-eta must be non-negative, got {self.beta_eta!r}")
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be at least 1, got {self.trials!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.cutoff is not None and not 1 <= self.cutoff <= MAX_CUTOFF:
            raise InvalidParameterError(f"cutoff must lie in [1, {MAX_CUTOFF}], got {self.cutoff!r}")
        if self.suite not in SUITE_NAMES:
            raise InvalidParameterError(f"unknown suite {self.suite!r}")
        from .formats import FORMAT_IDENTIFIERS
        if self.format is not None and self.format not in FORMAT_IDENTIFIERS:
            raise InvalidParameterError(f"unknown report format {self.format!r}, expected one of {FORMAT_IDENTIFIERS}")
        if self.command in ("optimize", "montecarlo") and self.eta == 0:
            raise InvalidParameterError("eta = 0: no signal reaches the detector")
        if self.command == "optimize" and self.n < 1:
            raise InvalidParameterError("optimize needs n >= 1")
        return self

    def signal_params(self, beta_eta: float) -> SignalParams:
        return SignalParams.from_beta_eta(beta_eta, self.eta, self.r, self.n, self.alpha)

    def interferometer_config(self, beta_eta: float) -> InterferometerConfig:
        return InterferometerConfig(self.signal_params(beta_eta), cutoff_dark=self.cutoff)

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """
        Inverse of :meth:`as_dict`.

        Raises:
            InvalidParameterError: unknown key.

        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidParameterError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)


def convert_value(name: str, text: str) -> Any:
    """Parse the text of configuration key ``name`` into the type of the matching :class:`RunConfig` field."""
    types = {f.name: f.type for f in dataclasses.fields(RunConfig)}
    if name not in types:
        raise InvalidParameterError(f"unknown configuration key {name!r}")
    kind = types[name]
    if get_origin(kind) is Union:
        if text.strip().lower() in ("", "none"):
            return None
        kind = next(t for t in get_args(kind) if t is not type(None))
    try:
        if kind is bool:
            return configparser.ConfigParser.BOOLEAN_STATES[text.strip().lower()]
        elif kind is int:
            return int(text)
        elif kind is float:
            return float(text)
        return text.strip()
    except (KeyError, ValueError):
        raise InvalidParameterError(f"bad value for {name!r}: {text!r}")


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a flat ``key = value`` file into typed :class:`RunConfig` values.

    Raises:
        OSError: file cannot be read.
        InvalidParameterError: syntax error, unknown key or unparsable value.

    """
    with open(path, encoding="utf-8") as fp:
        text = fp.read()
    return parse_config(text)


def parse_config(text: str) -> Dict[str, Any]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as e:
        raise InvalidParameterError(f"malformed configuration file: {e}".splitlines()[0])
    values = {}
    for key, text_value in parser.items(_SECTION):
        name = key.replace("-", "_")
        if name == "command":
            raise InvalidParameterError("the command cannot be set from a configuration file")
        values[name] = convert_value(name, text_value)
    return values
