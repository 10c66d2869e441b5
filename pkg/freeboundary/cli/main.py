import argparse
import logging
import sys
from ..core.errors import FreeBoundaryError, ConfigError, ConvergenceError, PreconditionViolated, EmptyGrid
from .config import COMMAND_DEFAULTS, resolve_config
from .commands import COMMANDS

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CONFIG = 2
EXIT_CHECK = 3
EXIT_CONVERGENCE = 4

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def float_list(text):
    """
    "0.1,0.2" -> [0.1, 0.2]; the empty string is the empty list.
    """
    return [float(t) for t in text.split(",") if t.strip()]


def param_override(text):
    (name, sep, value) = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return (name.strip(), float(value))


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON config file (overridden by flags)")
    common.add_argument("--out", default=None, help="output directory (default: .)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--preset", default=None, help="fluid parameter preset: rt, stable or unit")
    common.add_argument("--param", type=param_override, action="append", default=None,
        help="override one fluid parameter, e.g. --param mu1=0.5 (repeatable)")
    common.add_argument("--log-level", default="WARNING")
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="freeboundary",
        description="Boundary symbol, dispersion and function-space checks for two-phase free-boundary flow.")
    sub = parser.add_subparsers(dest="command", required=True)

    k_profile = sub.add_parser("k-profile", parents=[common], help="k(z) and z k(z) along sector rays")
    k_profile.add_argument("--rays", type=int, default=None)
    k_profile.add_argument("--theta", type=float, default=None)
    k_profile.add_argument("--per-decade", dest="per_decade", type=int, default=None)

    dispersion = sub.add_parser("dispersion", parents=[common], help="growth rates and zero counts over tau")
    dispersion.add_argument("--tau-grid", dest="tau_grid", type=float_list, default=None)
    dispersion.add_argument("--n-tau", dest="n_tau", type=int, default=None)
    dispersion.add_argument("--no-count", dest="count_zeros", action="store_const", const=False, default=None)

    bounds = sub.add_parser("verify-bounds", parents=[common], help="sandwich estimate sweep for the extended symbol")
    bounds.add_argument("--lambda0", type=float, default=None)
    bounds.add_argument("--eta", type=float, default=None)
    bounds.add_argument("--per-decade", dest="per_decade", type=int, default=None)
    bounds.add_argument("--points", action="store_const", const=True, default=None, help="also write every sample")

    mode = sub.add_parser("mode-response", parents=[common], help="inverse Laplace transform of one Fourier mode")
    mode.add_argument("--tau", type=float, default=None)
    mode.add_argument("--times", type=float_list, default=None)
    mode.add_argument("--nodes", type=int, default=None)

    kernels = sub.add_parser("kernel-check", parents=[common], help="curvature identity and Frechet derivative checks")
    kernels.add_argument("--m", type=int, default=None)
    kernels.add_argument("--n", type=int, default=None)
    kernels.add_argument("--kernels", type=lambda t: [k for k in t.split(",") if k], default=None)
    kernels.add_argument("--no-jvp", dest="jvp", action="store_const", const=False, default=None)

    norms = sub.add_parser("norms", parents=[common], help="fractional seminorms, extension and partition of unity")
    norms.add_argument("--m", type=int, default=None)
    norms.add_argument("--s", type=float, default=None)
    norms.add_argument("--p", type=float, default=None)
    return parser


def parse_args(argv=None):
    return build_parser().parse_args(argv)


def _flag_options(args):
    return {key: getattr(args, key) for key in COMMAND_DEFAULTS[args.command]
        if getattr(args, key, None) is not None}


def run(args):
    """
    Resolve the config and dispatch; returns the process exit code.
    """
    try:
        config = resolve_config(
            args.command, config_path=args.config, preset=args.preset,
            params=dict(args.param) if args.param else None,
            seed=args.seed, threads=args.threads, out=args.out, options=_flag_options(args))
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    try:
        passed = COMMANDS[config.command](config)
    except (ConfigError, PreconditionViolated, EmptyGrid) as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except ConvergenceError as e:
        logger.error(str(e))
        return EXIT_CONVERGENCE
    except FreeBoundaryError as e:
        logger.error(str(e))
        return EXIT_CHECK
    logger.info(f"{config.command}: pass={passed}")
    return EXIT_PASS if passed else EXIT_CHECK


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING), format=LOG_FORMAT, stream=sys.stderr)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
