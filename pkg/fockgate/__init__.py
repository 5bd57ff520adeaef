from .analytic import (SignalParams, Displacement, ErrorReport, SensitivityBounds, laguerre, laguerre_roots,
                       displaced_fock_overlap, p_fn_fock, p_fn_vacuum, p_fn_lossy, p_fp_lossy, poisson_count_prob,
                       analytic_error_report, optimal_operating_point, single_photon_lobe, detection_gain,
                       sensitivity_bounds)
from .fock import (FockVector, DensityOperator, OperatorMatrix, TwoModeState, fock_state, coherent_state,
                   displacement_operator, squeeze_operator, recommended_cutoff, fidelity, trace_distance)
from .channels import LossChannel, loss_channel, apply_loss_kraus, apply_loss_dilation, lossy_mixture_analytic
from .interferometer import (InterferometerConfig, dark_port_state_asymptotic, dark_port_state_exact,
                             asymptotic_convergence_check)
from .experiment import (DecisionRule, TrialRecord, SweepRow, decide, error_probabilities_numeric, monte_carlo,
                         sweep, optimize_operating_point, robustness_band)
from .config import RunConfig
from .runreport import RunReport
from . import formats, cli, verify
from .exceptions import *
from .common import Method, Hypothesis, Mode, VERSION

#: Alias for :meth:`RunReport.load()`.
load = RunReport.load

#: Alias for `fockgate.common.VERSION`.
__version__ = VERSION
