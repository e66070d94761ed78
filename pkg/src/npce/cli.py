"""Command-line front end.

Exit codes: 0 success, 1 certificate check failed, 2 bad flags or files,
3 generation failure, 4 iteration cap hit, 5 inadmissible step,
6 PGP requested with delta = 0, 7 instance too large for the oracle.
"""

import argparse
import json
import logging
import os
import sys

from . import reference
from .errors import BadModuli, NPCEError, StepInadmissible, TooLarge, ZeroDelta
from .experiments import rates_table, write_rates_csv, write_run_log
from .instance import (Instance, InstanceFormatError, instance_to_dict, load_instance,
                       point_from_dict, save_instance)
from .operators import modulus_bundle
from .oracle import TOL_ORACLE, enumerate_equilibria
from .probgen import GenSpec, planted_instance, shaped_instance
from .solvers import SolverConfig, reference_step, solve
from .vi import budget_terms, certify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_GENERATION = 3
EXIT_MAX_ITERS = 4
EXIT_STEP = 5
EXIT_ZERO_DELTA = 6
EXIT_TOO_LARGE = 7

log = logging.getLogger("npce")


def _emit(doc, path=None):
    text = json.dumps(doc, indent=1)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(path) -> Instance:
    try:
        return load_instance(path)
    except OSError as exc:
        raise InstanceFormatError(str(exc)) from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _step(text):
    if text == "auto":
        return text
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("step must be 'auto' or a positive number")
    if not t > 0:
        raise argparse.ArgumentTypeError("step must be positive")
    return t


def cmd_generate(args):
    try:
        if args.preset:
            inst = reference.PRESETS[args.preset]()
        elif args.kappa is not None:
            inst = shaped_instance(args.n, args.m, args.seed, args.kappa,
                                   spread=args.spread, density=args.density)
        else:
            spec = GenSpec(args.n, args.m, args.seed, args.density,
                           (args.alpha, args.beta, args.gamma), args.plant,
                           boundary_fraction=args.boundary_fraction, spread=args.spread)
            inst = planted_instance(spec)
        bundle = modulus_bundle(inst.eco, inst.ops)
    except (BadModuli, NPCEError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    save_instance(inst, args.out)
    _emit(bundle.as_dict())
    return EXIT_OK


def result_to_dict(res):
    return {
        "final": res.final.as_dict(),
        "iterations": res.iterations,
        "converged": res.converged,
        "step_used": res.step_used,
        "certificate": res.certificate.as_dict(),
        "theoretical_q": res.theoretical_ratio,
    }


def cmd_solve(args):
    inst = _load(args.instance)
    config = SolverConfig(args.method, step=args.step, tol=args.tol,
                          max_iters=args.max_iters, log_every=args.log_every)
    try:
        res = solve(inst.eco, inst.ops, config, reference=inst.planted)
    except ZeroDelta as exc:
        print(f"ZeroDelta: {exc}", file=sys.stderr)
        return EXIT_ZERO_DELTA
    except StepInadmissible as exc:
        print(f"StepInadmissible: {exc}", file=sys.stderr)
        return EXIT_STEP
    if args.log:
        with open(args.log, "w", newline="") as fh:
            write_run_log(res, fh)
    _emit(result_to_dict(res), args.out)
    return EXIT_OK if res.converged else EXIT_MAX_ITERS


def cmd_verify(args):
    inst = _load(args.instance)
    try:
        with open(args.point) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"{args.point}: {exc}") from None
    point = point_from_dict(doc.get("final", doc))
    moduli = modulus_bundle(inst.eco, inst.ops)
    cert = certify(inst.eco, inst.ops, point, reference_step(moduli))
    consumption, production, factors = budget_terms(inst.eco, inst.ops, point)
    out = cert.as_dict()
    out["budget"] = {"consumption": consumption, "production_cost": production,
                     "factor_cost": factors,
                     "residual": consumption - production - factors}
    out["ok"] = cert.max_gap() <= args.tol
    _emit(out)
    return EXIT_OK if out["ok"] else EXIT_CHECK_FAILED


def cmd_oracle(args):
    inst = _load(args.instance)
    try:
        sol = enumerate_equilibria(inst.eco, inst.ops, args.tol)
    except TooLarge as exc:
        print(f"TooLarge: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    _emit({
        "points": [p.as_dict() for p in sol.points],
        "active_sets": [list(s) for s in sol.active_sets],
        "residuals": sol.residuals,
    })
    return EXIT_OK


def cmd_rates(args):
    try:
        rows = rates_table(args.kappas, args.n, args.m, args.seed, args.tol,
                           spread=args.spread, max_iters=args.max_iters,
                           step_scales=args.step_scales)
    except BadModuli as exc:
        print(f"BadModuli: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_rates_csv(rows, fh)
    else:
        write_rates_csv(rows, sys.stdout)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="npce", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated or reference instance")
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--beta", type=float, default=1.0)
    g.add_argument("--gamma", type=float, default=1.0)
    g.add_argument("--plant", choices=("interior", "boundary", "none"), default="interior")
    g.add_argument("--boundary-fraction", type=float, default=0.25)
    g.add_argument("--spread", type=float, default=None,
                   help="eigenvalue spread relative to the modulus (default 3, or 0.25 with --kappa)")
    g.add_argument("--kappa", type=float, default=None,
                   help="shape the moduli so that delta/L equals this value")
    g.add_argument("--preset", choices=sorted(reference.PRESETS))
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run PGP or EPG on an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--method", choices=("pgp", "epg"), required=True)
    s.add_argument("--step", type=_step, default="auto")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iters", type=int, default=200_000)
    s.add_argument("--log-every", type=int, default=1)
    s.add_argument("--log")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="certify a candidate equilibrium")
    v.add_argument("--instance", required=True)
    v.add_argument("--point", required=True)
    v.add_argument("--tol", type=float, default=1e-8)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="enumerate equilibria of a tiny instance")
    o.add_argument("--instance", required=True)
    o.add_argument("--tol", type=float, default=TOL_ORACLE)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("rates", help="iteration counts against kappa")
    r.add_argument("--kappas", type=_float_list, required=True)
    r.add_argument("--n", type=int, default=3)
    r.add_argument("--m", type=int, default=2)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tol", type=float, default=1e-10)
    r.add_argument("--spread", type=float, default=0.25)
    r.add_argument("--max-iters", type=int, default=1_000_000)
    r.add_argument("--step-scales", type=_float_list, default=[1.0],
                   help="multiples of the default step; inadmissible ones are dropped")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rates)
    return parser


def main(argv=None):
    logging.basicConfig(level=os.environ.get("NPCE_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "generate":
        if args.spread is None:
            args.spread = 0.25 if args.kappa is not None else 3.0
        if not args.preset and (args.n is None or args.m is None):
            parser.error("generate needs --n and --m unless --preset is given")
    try:
        return args.func(args)
    except (InstanceFormatError, NPCEError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
