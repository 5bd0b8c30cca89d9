# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
import argparse
import math

# Third party imports (anything installed into the local Python environment)
# (none yet)

# Local application imports (anything from oblique-beam)
# (none yet)

CMD_SOLVE = 'solve'
CMD_SWEEP = 'sweep'
CMD_TRACE = 'trace'


def positive_int(value):
    """argparse type for integers >= 1"""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{value}'")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {number}")
    return number


def non_negative_int(value):
    """argparse type for integers >= 0"""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{value}'")
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {number}")
    return number


def finite_float(value):
    """argparse type for finite floats"""
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{value}'")
    if not math.isfinite(number):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {value}")
    return number


def positive_float(value):
    """argparse type for finite floats > 0"""
    number = finite_float(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return number


def parse_common_args(args=None):
    """
    Parse common arguments that are shared by all subcommands

    Args:
        args (list): arguments to be parsed (each being of type string)

    Returns:
        tuple of parsed arguments (populated Namespace) and unknown arguments
            (list of strings)
    """
    parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)

    parser.add_argument(
        "-d", "--debug",
        help="log debug information (one line per inner solve)",
        action="store_true",
    )

    parser.add_argument(
        "-c", "--config", default="app.cfg",
        help="configuration file (default app.cfg)",
    )

    parsed_args, unknown = parser.parse_known_args(args=args)

    return parsed_args, unknown


def add_solver_args(parser):
    """
    Adds the solver overrides (take precedence over the 'solver' section of
    the configuration)
    """
    group = parser.add_argument_group("solver overrides")
    group.add_argument("--mu0", type=positive_float, help="initial smoothing parameter")
    group.add_argument("--mu-eps", type=positive_float, dest="mu_eps",
                       help="stop once the smoothing parameter drops below this value")
    group.add_argument("--max-outer", type=positive_int, dest="max_outer", help="outer iteration cap")
    group.add_argument("--max-inner", type=positive_int, dest="max_inner",
                       help="conjugate gradient iteration cap per outer iteration")
    group.add_argument("--grad-tol", type=positive_float, dest="grad_tol",
                       help="absolute stopping gradient norm (default relative 1e-6 (1 + |F|))")


def add_scenario_args(parser, with_trials):
    """
    Adds the scenario flags (take precedence over the 'scenario' section of
    the configuration)
    """
    group = parser.add_argument_group("scenario")
    group.add_argument("--cells", type=positive_int, help="number of cells L (default 3)")
    group.add_argument("--users", type=positive_int, help="users per cell K (default 10)")
    group.add_argument("--antennas", type=positive_int, help="antennas per BS M (default 8)")
    group.add_argument("--eps", type=positive_float, help="intercell channel variance (default 0.25)")
    group.add_argument("--gamma", type=positive_float, help="common SINR target (default 1)")
    if with_trials:
        group.add_argument("--trials", type=positive_int, help="realizations per power point (default 500)")
    group.add_argument("--seed", type=non_negative_int, help="base seed (default 0)")


def oblique_beam_parse(args=None):
    """
    Parses arguments of the oblique_beam command line tool

    Args:
        args (list): arguments to be parsed (each being of type string)

    Returns:
        parsed arguments (Namespace), attribute 'command' holds the subcommand
    """
    parsed_args, unknown_args = parse_common_args(args=args)
    parser = argparse.ArgumentParser(
        prog="oblique_beam",
        description="max-min-fair multicell multicast beamforming",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser(CMD_SOLVE, help="solve an instance given as JSON file")
    solve.add_argument("instance_file", help="JSON instance file")
    solve.add_argument("--seed", type=non_negative_int, default=0, help="seed of the initial point (default 0)")
    solve.add_argument("-o", "--output", help="write the JSON result to this file instead of stdout")
    solve.add_argument("--trace-file", dest="trace_file", help="also write the convergence trace CSV")
    add_solver_args(solve)

    sweep = subparsers.add_parser(CMD_SWEEP, help="Monte-Carlo sweep over the per-BS power")
    add_scenario_args(sweep, with_trials=True)
    sweep.add_argument("--pmin-db", type=finite_float, default=0.0, dest="pmin_db",
                       help="smallest power P in dB (default 0)")
    sweep.add_argument("--pmax-db", type=finite_float, default=12.0, dest="pmax_db",
                       help="largest power P in dB (default 12)")
    sweep.add_argument("--pstep-db", type=finite_float, default=3.0, dest="pstep_db",
                       help="power step in dB (default 3)")
    sweep.add_argument("-o", "--output", help="write the summary CSV to this file instead of stdout")
    sweep.add_argument("--records", help="also write the per-trial records CSV")
    add_solver_args(sweep)

    trace = subparsers.add_parser(CMD_TRACE, help="convergence trace of a single solve")
    trace.add_argument("instance_file", nargs="?",
                       help="JSON instance file (a scenario draw is used if omitted)")
    add_scenario_args(trace, with_trials=False)
    trace.add_argument("--power-db", type=finite_float, dest="power_db",
                       help="power P in dB of the scenario draw (default 0)")
    trace.add_argument("--trial", type=non_negative_int,
                       help="trial index of the scenario draw (default 0)")
    trace.add_argument("-o", "--output", help="write the trace CSV to this file instead of stdout")
    add_solver_args(trace)

    return parser.parse_args(args=unknown_args, namespace=parsed_args)
