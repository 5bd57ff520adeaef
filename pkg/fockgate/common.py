from enum import Enum, IntEnum
from typing import Union

import numpy as np


class Method(str, Enum):
    """
    Provenance of an error probability.

    The string values are used verbatim in CSV and JSON reports.
    """
    ANALYTIC = "analytic"
    NUMERIC = "numeric"
    EMPIRICAL = "empirical"


class Hypothesis(str, Enum):
    """Binary detection hypothesis (and decision) for a single trial."""
    SIGNAL = "signal"
    NO_SIGNAL = "no_signal"


class Mode(IntEnum):
    """
    Subsystem index of a two-mode state.

    In the interferometer the first mode is the bright port and the second one the dark port;
    in the detector model the first mode is the measured field and the second one the environment.
    """
    FIRST = 0
    SECOND = 1

    @classmethod
    def from_name(cls, name: str) -> "Mode":
        """Accept ``"first"``/``"second"`` and the interferometer aliases ``"bright"``/``"dark"``."""
        aliases = {"first": cls.FIRST, "bright": cls.FIRST, "signal": cls.FIRST,
                   "second": cls.SECOND, "dark": cls.SECOND, "environment": cls.SECOND}
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"Unknown mode {name!r}")


#: Version of the fockgate library.
VERSION = "1.0.0"

#: Hard cap on a single-mode Fock cutoff.
MAX_CUTOFF = 512

#: Largest accepted truncation leakage of a prepared state.
LEAKAGE_TOL = 1e-10

#: Elementwise Hermiticity tolerance of density matrices.
HERMITIAN_TOL = 1e-10

#: Most negative eigenvalue still accepted as positive semidefinite.
POSITIVITY_TOL = 1e-9

#: Interior-block unitarity tolerance of truncated operators.
UNITARITY_TOL = 1e-8

#: Squeeze factors beyond this are rejected (desk-scale guard).
MAX_SQUEEZE = 2.0

#: Bright-port amplitudes beyond this are rejected by the exact interferometer model.
MAX_EXACT_ALPHA = 8.0


ComplexLike = Union[complex, float, int]
ArrayLike = Union[np.ndarray, float, int]
