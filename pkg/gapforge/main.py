#!/usr/bin/env python3
"""
GAPFORGE - Reed-Solomon proximity-gap counterexamples

Main entry point: derive parameters, forge and verify counterexample files,
and run the number-theoretic audits. JSON goes to stdout, rich summaries and
logs to stderr.

Exit codes: 0 pass, 1 other error, 2 parameter error, 3 search failure,
4 format error, 5 verification failure.
"""

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Any, List, Optional

from pydantic import ValidationError
from rich.console import Console

from . import __version__
from .analytic import (
    audit_bad_primes,
    audit_counting_margin,
    audit_resultant_bound,
    audit_T_lower_bound,
    chebyshev_psi,
    chebyshev_theta,
)
from .config import CONFIG_PATH, Settings, load_settings, save_settings
from .cxfile import dump_report, read, save, to_jsonable
from .errors import FormatError, GapforgeError, ParameterError, VerificationFailure
from .forge import ForgePolicy, audit_subset_sums, build_counterexample, verify_counterexample
from .logs import setup_logging
from .modmath import PrimeFieldCtx
from .params import ParamSet, Profile, RateSpec, derive_params
from .ui import GapforgeInterface


logger = logging.getLogger("gapforge")


# =============================================================================
# Argument Parser
# =============================================================================

def _add_param_flags(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument("--C", dest="C", required=required, help="sum-count exponent (rational, e.g. 1 or 3/2)")
    parser.add_argument("--u", type=int, required=required, help="rate numerator: rho = u/2^v")
    parser.add_argument("--v", type=int, required=required, help="rate exponent: rho = u/2^v")
    parser.add_argument("--alpha", type=int, required=required, help="s = 2^alpha")
    parser.add_argument("--profile", choices=[p.value for p in Profile], default=Profile.STRICT.value)
    parser.add_argument("--m", type=int, default=None, help="coset size (desk profile only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapforge",
        description="Construct and verify Reed-Solomon proximity-gap counterexamples.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"gapforge {__version__}")

    glob = parser.add_argument_group("global options (before the command)")
    glob.add_argument("--threads", type=int, default=None, help="worker threads, 0 = one per CPU (default 0)")
    glob.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default), ERROR")
    glob.add_argument("--quiet", action="store_true", help="no rich output on stderr")
    glob.add_argument("--mr-rounds", type=int, default=None, help="Miller-Rabin rounds above 3.3e24 (default 64)")
    glob.add_argument("--strategy", choices=["random", "sequential"], default=None, help="prime candidate order")

    budget = parser.add_argument_group("budgets")
    budget.add_argument("--max-candidates", type=int, default=None, help="prime candidates tried (default 20000)")
    budget.add_argument("--witness-budget", type=int, default=None, help="witnesses kept in strict profile (default 4096)")
    budget.add_argument("--audit-budget", type=int, default=None, help="exhaustive sum audit up to this many subsets (default 1e6)")
    budget.add_argument("--audit-samples", type=int, default=None, help="sampled subset pairs otherwise (default 1e6)")
    budget.add_argument("--oracle-budget", type=int, default=None, help="max p^(k+1) for brute-force oracles (default 1e7)")
    budget.add_argument("--sieve-limit", type=int, default=None, help="largest sieved integer (default 1e8)")
    budget.add_argument("--factor-bits", type=int, default=None, help="largest resultant factored, in bits (default 256)")

    commands = parser.add_subparsers(dest="command", required=True)

    derive = commands.add_parser("derive-params", help="derive and check the parameter tower")
    _add_param_flags(derive)

    forge = commands.add_parser("forge", help="build a counterexample file")
    forge.add_argument("--params-file", type=Path, default=None, help="JSON with C, u, v, alpha, profile[, m]")
    _add_param_flags(forge, required=False)
    forge.add_argument("--seed", type=int, default=0)
    forge.add_argument("--out", type=Path, default=Path("counterexample.json"))
    forge.add_argument("--no-compress", action="store_true", help="store agreement sets as plain index lists")

    verify = commands.add_parser("verify", help="re-check a counterexample file")
    verify.add_argument("file", type=Path)
    verify.add_argument("--level", choices=["witness", "exhaustive", "oracle"], default="witness")

    audit = commands.add_parser("audit", help="number-theoretic audits")
    audits = audit.add_subparsers(dest="audit", required=True)

    sums = audits.add_parser("sums", help="distinct r-subset sums of the half system mod p")
    sums.add_argument("--s", type=int, required=True)
    sums.add_argument("--r", type=int, required=True)
    sums.add_argument("--p", type=int, required=True, help="prime with p = 1 (mod s*m)")
    sums.add_argument("--m", type=int, default=1)
    sums.add_argument("--seed", type=int, default=0)

    res = audits.add_parser("resultant", help="|Res(Phi_s, Q)| <= (2r)^(s/2)")
    res.add_argument("--s", type=int, required=True)
    res.add_argument("--r", type=int, required=True)
    res.add_argument("--samples", type=int, default=None, help="random pairs instead of all pairs")
    res.add_argument("--seed", type=int, default=0)
    res.add_argument("--no-crt", action="store_true", help="skip the modular cross-check")

    bad = audits.add_parser("bad-primes", help="prime factors of resultants in [4^s, 8^s]")
    bad.add_argument("--s", type=int, required=True)
    bad.add_argument("--r", type=int, required=True)
    bad.add_argument("--samples", type=int, default=None)
    bad.add_argument("--seed", type=int, default=0)

    theta = audits.add_parser("theta", help="theta(x; n, a) and psi(x; n, a)")
    theta.add_argument("--x", type=int, required=True)
    theta.add_argument("--n", type=int, default=1)
    theta.add_argument("--a", type=int, default=0)

    tbound = audits.add_parser("T-bound", help="primes p = 1 (mod n) in [4^s, 8^s] against the lower bound")
    tbound.add_argument("--s", type=int, required=True)
    tbound.add_argument("--n", type=int, required=True)

    margin = audits.add_parser("margin", help="bad-triple count against T, in log space")
    _add_param_flags(margin)

    config = commands.add_parser("config", help="show effective settings")
    config.add_argument("--save", action="store_true", help=f"write them to {CONFIG_PATH}")

    return parser


# =============================================================================
# Application Class
# =============================================================================

class GapforgeApp:
    """Main GAPFORGE application class."""

    def __init__(self, args: argparse.Namespace, console: Optional[Console] = None):
        self.args = args
        self.settings: Settings = load_settings(
            threads=args.threads,
            log_level="ERROR" if args.quiet and args.log_level is None else args.log_level,
            mr_rounds=args.mr_rounds,
            prime_strategy=args.strategy,
            max_candidates=args.max_candidates,
            witness_budget=args.witness_budget,
            audit_exhaustive_budget=args.audit_budget,
            audit_samples=args.audit_samples,
            oracle_budget=args.oracle_budget,
            sieve_limit=args.sieve_limit,
            factor_bits_budget=args.factor_bits,
        )
        self.ui = GapforgeInterface(console, quiet=args.quiet)
        self.policy = ForgePolicy.from_settings(self.settings)
        setup_logging(self.settings.log_level, self.ui.console)

    def emit(self, payload: Any):
        """Write a JSON document to stdout."""
        sys.stdout.write(dump_report(payload) + "\n")

    def run(self) -> int:
        handler = {
            "derive-params": self.cmd_derive_params,
            "forge": self.cmd_forge,
            "verify": self.cmd_verify,
            "audit": self.cmd_audit,
            "config": self.cmd_config,
        }[self.args.command]
        try:
            return handler()
        except ParameterError as e:
            for violation in e.violations:
                self.ui.console.print(f"constraint violated: {violation}", markup=False, highlight=False, soft_wrap=True)
            return e.exit_code
        except GapforgeError as e:
            logger.debug("command %s failed", self.args.command, exc_info=True)
            self.ui.print_error(str(e), title=type(e).__name__)
            return e.exit_code

    # -------------------------------------------------------------------------
    # Commands
    # -------------------------------------------------------------------------

    def _derive(self, C, u, v, alpha, profile, m) -> ParamSet:
        return derive_params(C, RateSpec(u, v), alpha, profile, m)

    def _params_from_args(self) -> ParamSet:
        args = self.args
        if getattr(args, "params_file", None) is not None:
            try:
                data = json.loads(args.params_file.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as e:
                raise FormatError(f"cannot read params file: {e}") from e
            try:
                profile = Profile(data.get("profile", Profile.STRICT.value))
                m = data.get("m") if profile is Profile.DESK else None
                return self._derive(str(data["C"]), int(data["u"]), int(data["v"]), int(data["alpha"]), profile, m)
            except (KeyError, ValueError) as e:
                raise FormatError(f"params file needs C, u, v, alpha: {e}") from e

        missing = [flag for flag in ("C", "u", "v", "alpha") if getattr(args, flag) is None]
        if missing:
            raise ParameterError([f"missing --{flag}" for flag in missing])
        return self._derive(args.C, args.u, args.v, args.alpha, args.profile, args.m)

    def cmd_derive_params(self) -> int:
        ps = self._params_from_args()
        self.ui.print_params(ps)
        self.emit(ps)
        return 0 if ps.identities.ok else 5

    def cmd_forge(self) -> int:
        ps = self._params_from_args()
        self.ui.print_params(ps)
        with self.ui.spinner(f"searching a good prime in [4^{ps.s}, 8^{ps.s}]"):
            cx = build_counterexample(ps, seed=self.args.seed, policy=self.policy)
        path = save(cx, self.args.out, compress=not self.args.no_compress)
        self.ui.print_counterexample(cx, str(path))
        self.emit({"out": str(path), "p": cx.p, "z_count": cx.z_count, "seed": cx.seed,
                   "candidates_tried": cx.prime_search_log.candidates_tried})
        return 0

    def cmd_verify(self) -> int:
        cx = read(self.args.file)
        report = verify_counterexample(cx, self.args.level, self.policy)
        self.ui.print_report(report)
        self.emit(report)
        if not report.ok:
            failing = [c.name for c in report.failures()]
            raise VerificationFailure(f"{len(failing)} failing check(s): {', '.join(failing[:5])}")
        return 0

    def cmd_audit(self) -> int:
        args = self.args
        sieve_limit = self.settings.sieve_limit
        threads = self.settings.worker_count

        if args.audit == "sums":
            ctx = PrimeFieldCtx.build(args.p, args.s * args.m, args.m, random.Random(args.seed), self.settings.mr_rounds)
            audit = audit_subset_sums(ctx, args.r, self.settings.audit_exhaustive_budget,
                                      self.settings.audit_samples, random.Random(args.seed))
            self.ui.print_sum_audit(audit)
            self.emit(audit)
            return 0 if audit.collisions_found == 0 else 5

        if args.audit == "resultant":
            report = audit_resultant_bound(args.s, args.r, args.samples, rng=random.Random(args.seed),
                                           cross_check=not args.no_crt, threads=threads,
                                           exhaustive_budget=self.settings.audit_exhaustive_budget)
            self.ui.print_audit("resultant", {
                "mode": report.mode,
                "pairs": report.pairs_examined,
                "bound (2r)^(s/2)": report.bound,
                "max |Res| / bound": f"{float(report.max_ratio):.6g}",
                "CRT mismatches": report.crt_mismatches,
            }, ok=report.ok)
            self.emit(report)
            return 0 if report.ok else 5

        if args.audit == "bad-primes":
            report = audit_bad_primes(args.s, args.r, sample_count=args.samples, rng=random.Random(args.seed),
                                      factor_bits_budget=self.settings.factor_bits_budget, threads=threads,
                                      exhaustive_budget=self.settings.audit_exhaustive_budget)
            self.ui.print_audit("bad primes", {
                "pairs": report.pairs_examined,
                "max B": report.max_B,
                "log_4 s": f"{report.B_bound:.4g}",
                "degenerate": report.degenerate_pairs,
                "partial": report.partial_pairs,
            }, ok=report.ok)
            self.emit(report)
            return 0 if report.ok else 5

        if args.audit == "theta":
            theta = chebyshev_theta(args.x, args.n, args.a, sieve_limit)
            psi = chebyshev_psi(args.x, args.n, args.a, sieve_limit)
            self.ui.print_audit("chebyshev", {"theta": f"{theta:.12f}", "psi": f"{psi:.12f}"})
            self.emit({"x": args.x, "n": args.n, "a": args.a, "theta": theta, "psi": psi})
            return 0

        if args.audit == "T-bound":
            report = audit_T_lower_bound(args.s, args.n, sieve_limit)
            if report.desk_checkable:
                self.ui.print_audit("T lower bound", {
                    "T": report.T,
                    "lower bound": f"{report.lower_bound:.6g}",
                    "held": report.bound_held,
                    "theta chain": report.chain_holds,
                })
            else:
                self.ui.print_audit("T lower bound", {"status": report.reason})
            self.emit(report)
            return 0

        if args.audit == "margin":
            margin = audit_counting_margin(self._params_from_args())
            self.ui.print_audit("counting margin", {
                "ln bad triples": f"{margin.log_bad_triples:.4f}",
                "ln T lower bound": f"{margin.log_T_lower:.4f}",
                "margin": f"{margin.margin:.4f}",
            }, ok=margin.good_prime_guaranteed)
            self.emit(to_jsonable(margin) | {"margin": margin.margin,
                                             "good_prime_guaranteed": margin.good_prime_guaranteed})
            return 0

        raise ParameterError([f"unknown audit {args.audit!r}"])

    def cmd_config(self) -> int:
        if self.args.save:
            path = save_settings(self.settings)
            self.ui.print_success(f"settings saved to {path}")
        self.emit(self.settings.model_dump())
        return 0


# =============================================================================
# Entry Point
# =============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        app = GapforgeApp(args)
    except GapforgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"invalid settings: {e}", file=sys.stderr)
        return ParameterError.exit_code
    try:
        return app.run()
    except KeyboardInterrupt:
        print("\ninterrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
