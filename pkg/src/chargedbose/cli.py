"""Command-line interface.

    chargedbose <constants|minimize|two-component|one-component|verify>
                [--config PATH] [--out PATH] [--format json|csv] [--seed INT]
                [--n FLOAT] [--rho FLOAT] [--eps FLOAT] [--suite NAME ...]

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
3 numerical failure.  PROG_THREADS caps the BLAS/OpenMP thread pools.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")

log = logging.getLogger("chargedbose")


def _apply_thread_cap() -> None:
    """Honour PROG_THREADS; only effective before numpy is first imported."""
    raw = os.environ.get("PROG_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"PROG_THREADS must be a positive integer, got {raw!r}")
    for var in _THREAD_VARS:
        os.environ[var] = str(n)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration (all keys required)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="report format")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--n", type=float, help="two-component particle scale n")
    common.add_argument("--rho", type=float, help="one-component background density")
    common.add_argument("--eps", type=float, help="momentum cutoff")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="chargedbose", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="I0 by three methods and the constant A")
    sub.add_parser("minimize", parents=[common], help="radial minimizer: profile and A")
    sub.add_parser("two-component", parents=[common], help="itemized two-component bound")
    sub.add_parser("one-component", parents=[common], help="itemized one-component bound")
    v = sub.add_parser("verify", parents=[common], help="oracle and inequality suites")
    v.add_argument("--suite", action="append", help="suite name (repeatable); default all")
    sub.add_parser("dump-config", parents=[common], help="print the default configuration")
    return p


def _config(args):
    from .config import ConfigError, RunConfig, load_config

    cfg = load_config(args.config) if args.config else RunConfig()
    if args.format:
        cfg.format = args.format
    if args.seed is not None:
        cfg.seed = args.seed
    if args.n is not None:
        cfg.two_component.n = args.n
    if args.rho is not None:
        cfg.one_component.rho = args.rho
    if args.eps is not None:
        cfg.two_component.eps = args.eps
        cfg.one_component.eps = args.eps
    if getattr(args, "suite", None):
        cfg.suites = list(args.suite)
    try:
        return cfg.validate()
    except ConfigError:
        raise
    except Exception as exc:  # type errors from command-line overrides
        raise ConfigError(str(exc)) from exc


def _minimize(cfg):
    from . import dyson, kernels

    I0 = kernels.compute_I0(cfg.grid.tail_start).quadrature
    return dyson.minimize_variational(
        R=cfg.grid.R, K=cfg.grid.K, I0=I0, tol=cfg.tolerances.minimizer,
        boundary_tol=cfg.tolerances.boundary,
    )


def cmd_constants(cfg):
    from . import kernels

    I0 = kernels.compute_I0(cfg.grid.tail_start)
    res = _minimize(cfg)
    gap = abs(I0.quadrature - I0.gamma_form) / I0.gamma_form
    checks = {
        "I0_quadrature_vs_gamma_form": gap <= cfg.tolerances.I0_agreement,
        "virial": res.virial_residual <= cfg.tolerances.virial,
        "energy_identity": res.energy_identity_residual <= cfg.tolerances.virial,
    }
    results = {
        "I0": {
            "quadrature": I0.quadrature,
            "quadrature_abserr": I0.abserr,
            "gamma_form": I0.gamma_form,
            "closed_form": I0.closed_form,
            "closed_form_over_quadrature": I0.closed_form / I0.quadrature,
        },
        "A": res.A,
        "virial_residual": res.virial_residual,
        "energy_identity_residual": res.energy_identity_residual,
        "checks": checks,
    }
    return results, all(checks.values())


def cmd_minimize(cfg):
    res = _minimize(cfg)
    prof = res.profile
    ok = max(res.virial_residual, res.energy_identity_residual) <= cfg.tolerances.virial
    results = {
        "A": res.A,
        "T": res.T,
        "P": res.P,
        "iterations": res.iterations,
        "virial_residual": res.virial_residual,
        "energy_identity_residual": res.energy_identity_residual,
        "R": prof.R,
        "K": prof.K,
        "profile": {"r": prof.r, "phi": prof.values},
    }
    return results, ok


def _nonneg_errors(report) -> bool:
    return all(t.value >= 0 for t in report.terms if t.name != "main")


def cmd_two_component(cfg):
    from . import dyson

    tc = cfg.two_component
    res = _minimize(cfg)
    params = dyson.TrialParameters(tc.n, eps=tc.eps, constants=cfg.constants)
    report = dyson.assemble_bound(res.profile, params, res.I0)
    results = report.to_dict()
    ok = _nonneg_errors(report)
    if tc.eps > 0:
        fixed = dyson.fixed_N_bound(tc.n, tc.eps, res.profile, cfg.constants, res.I0)
        results["extras"]["fixed_N"] = fixed.to_dict()
        ok = ok and _nonneg_errors(fixed)
    results["extras"]["A"] = res.A
    return results, ok


def cmd_one_component(cfg):
    from . import jellium

    oc = cfg.one_component
    unit = oc.rho ** (-1 / 3)
    prof = jellium.build_eta(oc.L * unit, oc.r * unit, oc.rho)
    params = jellium.JelliumParams(oc.rho, oc.eps, {"C": cfg.constants["C"]})
    report = jellium.assemble_bound(prof, params)
    results = report.to_dict()
    ok = _nonneg_errors(report) and report.extras["neutrality_residual"] <= 1e-12 * oc.rho
    return results, ok


def cmd_verify(cfg):
    from . import verify

    out = verify.run_all(cfg.seed, cfg.suites)
    return out, out["ok"]


COMMANDS = {
    "constants": (cmd_constants, "energies: hbar = m = charge = 1; dimensionless constants"),
    "minimize": (cmd_minimize, "lengths in n^{-1/5} units; Phi normalized to unit L2 mass"),
    "two-component": (cmd_two_component, "energies: hbar = m = charge = 1; exponents refer to n (or N)"),
    "one-component": (cmd_one_component, "energy per unit volume; L, r in rho^{-1/3} units; exponents refer to rho"),
    "verify": (cmd_verify, "residuals are dimensionless unless a check name says otherwise"),
}


def _failed(results: dict) -> list[str]:
    names = [k for k, v in results.get("checks", {}).items() if v is False]
    for suite, out in results.get("suites", {}).items():
        names += [f"{suite}.{k}" for k, c in out["checks"].items() if not c["ok"]]
    return names


def run_command(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        _apply_thread_cap()
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    from . import __version__
    from dataclasses import asdict

    from .config import ConfigError, dump_config, write_report
    from .dyson import ConvergenceError, GridTooSmallError
    from .jellium import FeasibilityError

    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "dump-config":
        text = dump_config(cfg)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    func, units = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        results, ok = func(cfg)
    except FeasibilityError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, GridTooSmallError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    # wall time goes to the log only, so reports stay byte-identical across runs
    log.info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    report = {
        "command": args.command,
        "version": __version__,
        "units": units,
        "config": asdict(cfg),
        "results": results,
    }
    text = write_report(report, args.out, cfg.format)
    if not args.out:
        sys.stdout.write(text)
    if not ok:
        failed = ", ".join(_failed(results)) or "nonnegative error terms"
        print(f"{args.command}: check failed: {failed}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
