"""Command line surface: JSON in, JSON out, stable exit codes.

Exit codes: 0 success (freeness verified, property suite clean), 1 usage,
2 typed domain error or failed verification, 3 a relation found by the
word oracle.  All randomness is derived from --seed through per-command
Philox streams, so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .certifier import (
    ORACLE_BUDGET,
    certify_free,
    oracle_free_up_to,
    verify_certificate,
)
from .constants import PipelineConstants
from .errors import DomainError, OracleRefuted
from .isometry import Isometry
from .propcheck import list_suites, rng_for, run_suite
from .tubes import make_tube

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_REFUTED = 3

_CONSTANT_KEYS = ("n", "kappa", "eps", "tol_point", "tol_angle", "tol_classify")


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_isometry(path: str) -> Isometry:
    return Isometry.from_json(_load_json(path))


def _emit(payload, out_path: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fill_from_config(args, config: dict, keys):
    """config supplies values for flags the command line left unset."""
    for key in keys:
        if getattr(args, key, None) is None and key in config:
            setattr(args, key, config[key])


def _constants_of(args, config: dict) -> PipelineConstants:
    kwargs = dict(config.get("constants", {}))
    for key in _CONSTANT_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            kwargs[key] = v
    return PipelineConstants(**kwargs)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write the JSON result here instead of stdout")
    common.add_argument("--config", default=None, metavar="PATH",
                        help="JSON file with default parameter values")

    consts = argparse.ArgumentParser(add_help=False)
    consts.add_argument("--n", type=int, default=None,
                        help="space dimension (default 2)")
    consts.add_argument("--kappa", type=float, default=None,
                        help="curvature pinching bound (default 1)")
    consts.add_argument("--eps", type=float, default=None,
                        help="Margulis lower bound (default 0.1)")
    consts.add_argument("--tol-point", dest="tol_point", type=float, default=None)
    consts.add_argument("--tol-angle", dest="tol_angle", type=float, default=None)
    consts.add_argument("--tol-classify", dest="tol_classify", type=float, default=None)

    parser = _Parser(
        prog="hypfree",
        description="Freeness certificates for two-generator isometry groups "
                    "of hyperbolic space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="classify one isometry (kind, translation length)")
    p.add_argument("--in", dest="infile", required=True, metavar="PATH",
                   help="isometry JSON: {\"model\": ..., \"matrix\": ...}")

    sub.add_parser("constants", parents=[common, consts],
                   help="print the derived constants for a configuration")

    p = sub.add_parser("tube", parents=[common, consts],
                       help="displacement tube of a nonelliptic isometry")
    p.add_argument("--in", dest="infile", required=True, metavar="PATH")

    p = sub.add_parser("certify", parents=[common, consts],
                       help="produce a freeness certificate for a pair")
    p.add_argument("--f", dest="f_file", required=True, metavar="PATH")
    p.add_argument("--g", dest="g_file", required=True, metavar="PATH")
    p.add_argument("--depth", type=int, default=None,
                   help="oracle depth override (default 12 exact, 8 float)")
    p.add_argument("--samples", type=int, default=None,
                   help="half-space sample count (default 10000)")
    p.add_argument("--search-budget", dest="search_budget", type=int, default=None,
                   help="conjugate-scan budget (default 1000000)")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")

    p = sub.add_parser("oracle", parents=[common],
                       help="search for relations among two matrices")
    p.add_argument("--f", dest="f_file", required=True, metavar="PATH")
    p.add_argument("--g", dest="g_file", required=True, metavar="PATH")
    p.add_argument("--depth", type=int, default=None, help="word length bound (default 8)")
    p.add_argument("--budget", type=int, default=None,
                   help=f"word count ceiling (default {ORACLE_BUDGET})")
    p.add_argument("--identity-tol", dest="identity_tol", type=float, default=None,
                   help="identity threshold for floating matrices (default 1e-6)")

    p = sub.add_parser("verify-cert", parents=[common],
                       help="recheck a stored certificate against its pair")
    p.add_argument("--f", dest="f_file", required=True, metavar="PATH")
    p.add_argument("--g", dest="g_file", required=True, metavar="PATH")
    p.add_argument("--cert", dest="cert_file", required=True, metavar="PATH")
    p.add_argument("--samples", type=int, default=None,
                   help="margin recheck sample count (default 2000)")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")

    p = sub.add_parser("propcheck", parents=[common, consts],
                       help="run one sampled-inequality suite")
    p.add_argument("--suite", required=True, choices=list_suites())
    p.add_argument("--samples", type=int, default=None,
                   help="number of sampled configurations (default 1000)")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")

    return parser


def _cmd_classify(args, config):
    g = _load_isometry(args.infile)
    return g.classify().to_json(), EXIT_OK


def _cmd_constants(args, config):
    return _constants_of(args, config).to_json(), EXIT_OK


def _cmd_tube(args, config):
    g = _load_isometry(args.infile)
    tube = make_tube(g, _constants_of(args, config))
    return tube.to_json(), EXIT_OK


def _cmd_certify(args, config):
    _fill_from_config(args, config, ("depth", "samples", "search_budget", "seed"))
    f = _load_isometry(args.f_file)
    g = _load_isometry(args.g_file)
    seed = 0 if args.seed is None else int(args.seed)
    cert = certify_free(
        f,
        g,
        _constants_of(args, config),
        oracle_depth=args.depth,
        search_budget=1_000_000 if args.search_budget is None else args.search_budget,
        samples=10_000 if args.samples is None else args.samples,
        rng=rng_for(seed, "certify"),
    )
    return cert.to_json(), EXIT_OK


def _cmd_oracle(args, config):
    _fill_from_config(args, config, ("depth", "budget", "identity_tol"))
    f = _load_isometry(args.f_file)
    g = _load_isometry(args.g_file)
    result = oracle_free_up_to(
        f,
        g,
        8 if args.depth is None else args.depth,
        budget=ORACLE_BUDGET if args.budget is None else args.budget,
        identity_tol=1e-6 if args.identity_tol is None else args.identity_tol,
    )
    code = EXIT_REFUTED if result.relation is not None else EXIT_OK
    return result.to_json(), code


def _cmd_verify_cert(args, config):
    _fill_from_config(args, config, ("samples", "seed"))
    f = _load_isometry(args.f_file)
    g = _load_isometry(args.g_file)
    cert = _load_json(args.cert_file)
    seed = 0 if args.seed is None else int(args.seed)
    report = verify_certificate(
        f,
        g,
        cert,
        rng=rng_for(seed, "verify-cert"),
        samples=2_000 if args.samples is None else args.samples,
    )
    return report, EXIT_OK if report["ok"] else EXIT_DOMAIN


def _cmd_propcheck(args, config):
    _fill_from_config(args, config, ("samples", "seed"))
    samples = 1_000 if args.samples is None else int(args.samples)
    seed = 0 if args.seed is None else int(args.seed)
    report = run_suite(args.suite, samples, seed=seed,
                       consts=_constants_of(args, config))
    return report.to_json(), EXIT_OK if report.passed else EXIT_DOMAIN


_COMMANDS = {
    "classify": _cmd_classify,
    "constants": _cmd_constants,
    "tube": _cmd_tube,
    "certify": _cmd_certify,
    "oracle": _cmd_oracle,
    "verify-cert": _cmd_verify_cert,
    "propcheck": _cmd_propcheck,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = {}
    if getattr(args, "config", None):
        try:
            config = _load_json(args.config)
        except (OSError, ValueError) as exc:
            sys.stderr.write(f"hypfree: cannot read config: {exc}\n")
            return EXIT_USAGE
    try:
        payload, code = _COMMANDS[args.command](args, config)
    except OracleRefuted as exc:
        payload = {
            "error": "OracleRefuted",
            "message": str(exc),
            "relation": exc.relation,
        }
        code = EXIT_REFUTED
    except DomainError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        code = EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"hypfree: {exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        # malformed JSON or a JSON object missing required fields
        sys.stderr.write(f"hypfree: bad input: {exc!r}\n")
        return EXIT_USAGE
    _emit(payload, getattr(args, "out", None))
    return code


def main(argv=None) -> int:
    return run(argv)


def entry() -> int:
    """Console-script hook."""
    return run()
