import argparse
import dataclasses
import logging
import sys
from textwrap import dedent
from typing import Any, Dict, List, Optional, Sequence

from .analytic import analytic_error_report
from .common import VERSION
from .config import RunConfig, load_config_file
from .exceptions import FockgateError, InvalidParameterError, VerificationError
from .experiment import (beta_grid, error_probabilities_numeric, monte_carlo, optimize_operating_point,
                         simulate_trials, sweep)
from .formats import FORMAT_IDENTIFIERS
from .runreport import RunReport
from .verify import SUITE_NAMES, run_suites

#: Exit status of the ``fockgate`` command.
EXIT_OK, EXIT_BAD_INPUT, EXIT_IO, EXIT_VERIFICATION_FAILED = 0, 1, 2, 3

SWEEP_COLUMNS = ["beta_eta_abs", "p_fn", "p_fp", "method"]
OPTIMIZE_COLUMNS = ["beta_eta", "beta", "phi", "p_fn", "p_fp", "method"]
MONTECARLO_COLUMNS = ["quantity", "empirical", "std_err", "reference"]
TRIAL_COLUMNS = ["trial", "true_hypothesis", "count", "decision", "seed"]
CHECK_COLUMNS = ["suite", "name", "deviation", "tolerance", "passed"]


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises :exc:`InvalidParameterError` instead of exiting on bad arguments."""
    def error(self, message):
        raise InvalidParameterError(message)


class FockgateCLI:
    def __init__(self):
        self.parser = self.build_parser()

    @staticmethod
    def build_parser(file_defaults: Optional[Dict[str, Any]] = None) -> ArgumentParser:
        defaults = RunConfig()
        parser = ArgumentParser(formatter_class=argparse.RawDescriptionHelpFormatter,
                                prog="fockgate",
                                description=dedent("""
                                Error probabilities of phase-shift detection with a Fock state
                                at the dark port of a Mach-Zehnder interferometer.
                                """),
                                epilog=dedent("""
                                usage examples:
                                  fockgate sweep --n 1 --eta 0.95 --beta-min 0 --beta-max 3 --steps 301 -o curve.csv
                                  fockgate sweep --vacuum --eta 1.0 -o vacuum.csv
                                  fockgate optimize --n 1 --eta 0.95 --alpha 1e4
                                  fockgate montecarlo --n 1 --eta 0.95 --beta-eta 1 --trials 100000 --seed 42
                                  fockgate verify --suite all"""))
        parser.add_argument("-v", "--version", action="version", version=f"fockgate {VERSION}")

        common = ArgumentParser(add_help=False)
        common.add_argument("--config", metavar="FILE",
                            help="Flat 'key = value' file with default option values; "
                                 "options given on the command line take precedence.")
        common.add_argument("--cutoff", metavar="D", type=int, default=defaults.cutoff,
                            help="Fock basis size of the dark-port mode. By default it is chosen from the "
                                 "displacement and squeeze factor and grown automatically when too small.")
        common.add_argument("-o", "--output", metavar="FILE", default=defaults.output,
                            help="Write the report to this file (atomically). By default it goes to standard output.")
        common.add_argument("--format", choices=FORMAT_IDENTIFIERS, default=defaults.format,
                            help="Report format. By default it follows the output file extension, or the "
                                 "command's natural format when writing to standard output.")
        common.add_argument("--verbose", action="store_true",
                            help="Print misc logging")

        physics = ArgumentParser(add_help=False)
        physics.add_argument("--n", type=int, default=defaults.n,
                             help="Photon number of the dark-port input Fock state (0 is the vacuum reference).")
        physics.add_argument("--eta", type=float, default=defaults.eta,
                             help="Detector quantum efficiency in [0, 1].")
        physics.add_argument("--r", type=float, default=defaults.r,
                             help="Squeeze factor of the amplifier pair around the interferometer.")
        physics.add_argument("--alpha", type=float, default=defaults.alpha,
                             help="Coherent amplitude of the bright-port pump.")

        commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

        p = commands.add_parser("sweep", parents=[common, physics],
                                help="Error probabilities along a grid of effective displacements.")
        p.add_argument("--beta-min", type=float, default=defaults.beta_min)
        p.add_argument("--beta-max", type=float, default=defaults.beta_max)
        p.add_argument("--steps", type=int, default=defaults.steps,
                       help="Number of grid points, end points included.")
        p.add_argument("--vacuum", action="store_true", default=defaults.vacuum,
                       help="Compute the vacuum-input (coherent output) reference curve instead.")

        p = commands.add_parser("optimize", parents=[common, physics],
                                help="Operating point minimising the false-negative probability.")

        p = commands.add_parser("montecarlo", parents=[common, physics],
                                help="Sample detection trials and compare with the exact probabilities.")
        p.add_argument("--beta-eta", type=float, default=defaults.beta_eta,
                       help="Effective displacement at the detector (default: 1, the single-photon optimum).")
        p.add_argument("--trials", type=int, default=defaults.trials)
        p.add_argument("--seed", type=int, default=defaults.seed)
        p.add_argument("--trials-csv", metavar="FILE", default=defaults.trials_csv,
                       help="Also write every sampled trial to this CSV file.")

        p = commands.add_parser("verify", parents=[common],
                                help="Run the oracle-equivalence suites.")
        p.add_argument("--suite", choices=SUITE_NAMES, default=defaults.suite)

        if file_defaults:
            for subparser in commands.choices.values():
                subparser.set_defaults(**file_defaults)
        return parser

    def __call__(self, argv: Sequence[str]) -> int:
        try:
            return self.main(argv)
        except KeyboardInterrupt:
            print("\nAborted by user.", file=sys.stderr)
            return 130
        except SystemExit as e:
            # --help and --version
            return e.code if isinstance(e.code, int) else EXIT_OK

    def main(self, argv: Sequence[str]) -> int:
        try:
            config = self.parse_config(argv)
            logging.debug("run configuration: %r", config)
            return self.run(config)
        except VerificationError as e:
            self.diagnostic(e)
            return EXIT_VERIFICATION_FAILED
        except (FockgateError, ValueError) as e:
            self.diagnostic(e)
            return EXIT_BAD_INPUT
        except OSError as e:
            self.diagnostic(e)
            return EXIT_IO

    @staticmethod
    def diagnostic(e: Exception):
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"fockgate: error: {message}", file=sys.stderr)

    def parse_config(self, argv: Sequence[str]) -> RunConfig:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        pre.add_argument("--verbose", action="store_true")
        known, _ = pre.parse_known_args(argv)
        if known.verbose:
            logging.basicConfig(level=logging.DEBUG)

        parser = self.parser
        if known.config:
            parser = self.build_parser(load_config_file(known.config))
        args = parser.parse_args(argv)

        names = {f.name for f in dataclasses.fields(RunConfig)}
        return RunConfig(**{k: v for k, v in vars(args).items() if k in names}).validate()

    def run(self, config: RunConfig) -> int:
        handler = getattr(self, f"cmd_{config.command}")
        return handler(config)

    # ------------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------------

    def cmd_sweep(self, config: RunConfig) -> int:
        grid = beta_grid(config.beta_min, config.beta_max, config.steps)
        rows = sweep(grid, config.n, config.eta, config.r, config.vacuum, config.cutoff, config.alpha)
        best = min(rows, key=lambda row: row.p_fn)
        summary = {"rows": len(rows), "min_p_fn": best.p_fn, "argmin_beta_eta_abs": best.beta_eta_abs}
        report = RunReport("sweep", config, SWEEP_COLUMNS, [row.as_dict() for row in rows], summary)
        self.emit(report, config, "csv")
        return EXIT_OK

    def cmd_optimize(self, config: RunConfig) -> int:
        point = optimize_operating_point(config.n, config.eta, config.r, config.alpha, config.cutoff)
        row = {"beta_eta": point.beta_eta, "beta": point.beta, "phi": point.phi,
               "p_fn": point.report.p_false_negative, "p_fp": point.report.p_false_positive,
               "method": point.report.method}
        report = RunReport("optimize", config, OPTIMIZE_COLUMNS, [row], row)
        self.emit(report, config, "json")
        return EXIT_OK

    def cmd_montecarlo(self, config: RunConfig) -> int:
        beta_eta = 1.0 if config.beta_eta is None else config.beta_eta
        setup = config.interferometer_config(beta_eta)
        empirical = monte_carlo(setup, config.trials, config.seed)
        if config.n <= 1:
            reference = analytic_error_report(config.n, beta_eta, config.eta)
        else:
            reference = error_probabilities_numeric(setup)
        std_fn, std_fp = empirical.std_err or (0.0, 0.0)
        rows = [
            {"quantity": "p_fn", "empirical": empirical.p_false_negative, "std_err": std_fn,
             "reference": reference.p_false_negative},
            {"quantity": "p_fp", "empirical": empirical.p_false_positive, "std_err": std_fp,
             "reference": reference.p_false_positive},
        ]
        summary = {
            "seed": config.seed, "trials": config.trials, "beta_eta": beta_eta,
            "p_fn": empirical.p_false_negative, "p_fp": empirical.p_false_positive,
            "std_err": [std_fn, std_fp], "reference_method": reference.method,
            "reference_p_fn": reference.p_false_negative, "reference_p_fp": reference.p_false_positive,
            "within_4_sigma": all(abs(row["empirical"] - row["reference"]) <= 4 * row["std_err"] + 1e-12
                                  for row in rows),
        }
        self.emit(RunReport("montecarlo", config, MONTECARLO_COLUMNS, rows, summary), config, "json")

        if config.trials_csv:
            records = simulate_trials(setup, config.trials, config.seed)
            trial_rows = [{"trial": i // 2, **dataclasses.asdict(record)} for i, record in enumerate(records)]
            RunReport("montecarlo", config, TRIAL_COLUMNS, trial_rows).save(config.trials_csv, "csv")
        return EXIT_OK

    def cmd_verify(self, config: RunConfig) -> int:
        checks = run_suites([config.suite])
        failed = [c for c in checks if not c.passed]
        summary = {"suite": config.suite, "checks": len(checks), "failed": len(failed), "passed": not failed}
        self.emit(RunReport("verify", config, CHECK_COLUMNS, [c.as_dict() for c in checks], summary), config, "json")
        for check in failed:
            print(f"FAILED {check.suite}: {check.name} (deviation {check.deviation:.3e} > {check.tolerance:.1e})",
                  file=sys.stderr)
        return EXIT_VERIFICATION_FAILED if failed else EXIT_OK

    @staticmethod
    def emit(report: RunReport, config: RunConfig, default_format: str):
        if config.output:
            report.save(config.output, config.format)
        else:
            sys.stdout.write(report.to_string(config.format or default_format))


def __main__():
    cli = FockgateCLI()
    rv = cli(sys.argv[1:])
    sys.exit(rv)


if __name__ == "__main__":
    __main__()
