"""
GAPFORGE Terminal Interface

Rich summaries on stderr; stdout stays reserved for JSON.
"""

from contextlib import nullcontext
from typing import Optional

from rich.console import Console
from rich.text import Text

from ..forge import Counterexample, SumAudit, VerificationReport
from ..params import ParamSet, as_ratio
from .components import COLORS, AuditPanel, CheckTable, ErrorPanel, LoadingSpinner, ParamsPanel


class GapforgeInterface:
    """
    Human-readable rendering for the CLI.

    Handles:
    - parameter towers and identity checks
    - verification reports
    - audit summaries
    - error display
    """

    def __init__(self, console: Optional[Console] = None, quiet: bool = False):
        """
        Initialize the interface.

        Args:
            console: Optional Rich Console instance (defaults to stderr)
            quiet: suppress everything except errors
        """
        self.console = console or Console(stderr=True)
        self.quiet = quiet
        self.colors = COLORS

    def spinner(self, message: str):
        if self.quiet or not self.console.is_terminal:
            return nullcontext()
        return LoadingSpinner(message, console=self.console)

    def print_params(self, ps: ParamSet):
        if self.quiet:
            return
        rows = [
            ("profile", ps.profile.value),
            ("rho", as_ratio(ps.rho)),
            ("C", as_ratio(ps.C)),
            ("L", f"{ps.L_val:.6g} ({ps.L_branch} branch)"),
            ("K", ps.K),
            ("s = 2^alpha", f"{ps.s} (alpha = {ps.alpha})"),
            ("r", ps.r),
            ("m", ps.m),
            ("n", ps.n),
            ("k", ps.k),
            ("delta", as_ratio(ps.delta, ps.s)),
            ("eta", as_ratio(ps.eta, ps.s)),
            ("A = K ln 8", f"{ps.A_exp:.4f}"),
        ]
        self.console.print(ParamsPanel.render(rows))
        if ps.identities is not None:
            checks = [(c.name, c.status, f"{c.lhs} vs {c.rhs}") for c in ps.identities.checks]
            self.console.print(CheckTable.render(checks, title="IDENTITIES", ok=ps.identities.ok))

    def print_counterexample(self, cx: Counterexample, path: Optional[str] = None):
        if self.quiet:
            return
        values = {
            "p": f"{cx.p.bit_length()}-bit prime",
            "candidates tried": cx.prime_search_log.candidates_tried,
            "sum audit": f"{cx.sum_audit.mode}, {cx.sum_audit.collisions_found} collisions",
            "witnesses": cx.z_count,
            "agreement per witness": cx.params.required_agreement,
            "certificate": f"(r-1)m = {cx.cert.max_joint_agreement_bound} < rm = {cx.cert.required_agreement}",
        }
        if path:
            values["written to"] = path
        self.console.print(AuditPanel.render("forge", values, ok=True))

    def print_report(self, report: VerificationReport):
        if self.quiet:
            return
        rows = [(c.name, c.status, c.detail) for c in report.checks]
        self.console.print(CheckTable.render(rows, title=f"VERIFY ({report.level})", ok=report.ok))

    def print_sum_audit(self, audit: SumAudit):
        self.print_audit("sums", {
            "mode": audit.mode,
            "subsets examined": audit.subsets_examined,
            "distinct sums": audit.distinct_sums,
            "collisions": audit.collisions_found,
        }, ok=audit.collisions_found == 0)

    def print_audit(self, name: str, values: dict, ok: Optional[bool] = None):
        if self.quiet:
            return
        self.console.print(AuditPanel.render(name, values, ok))

    def print_error(self, message: str, title: str = "Error", suggestion: Optional[str] = None):
        self.console.print(ErrorPanel.render(message, title, suggestion))

    def print_success(self, message: str):
        if self.quiet:
            return
        self.console.print(Text(f"✓ {message}", style=f"bold {COLORS['success']}"))
