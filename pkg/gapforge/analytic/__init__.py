# Analytic package
"""Number-theoretic audits: Chebyshev functions, cyclotomic resultants, prime counts."""

from .audits import (
    BadPrimeAudit,
    CountingMargin,
    ResultantAudit,
    ResultantCert,
    TBoundReport,
    audit_bad_primes,
    audit_counting_margin,
    audit_resultant_bound,
    audit_T_lower_bound,
)
from .chebyshev import SieveTable, chebyshev_psi, chebyshev_theta, count_primes_in_ap, euler_phi
from .resultant import IntPoly, cyclotomic_pow2, resultant_crt, resultant_int, subset_sum_poly

__all__ = [
    "BadPrimeAudit",
    "CountingMargin",
    "ResultantAudit",
    "ResultantCert",
    "TBoundReport",
    "audit_bad_primes",
    "audit_counting_margin",
    "audit_resultant_bound",
    "audit_T_lower_bound",
    "SieveTable",
    "chebyshev_psi",
    "chebyshev_theta",
    "count_primes_in_ap",
    "euler_phi",
    "IntPoly",
    "cyclotomic_pow2",
    "resultant_crt",
    "resultant_int",
    "subset_sum_poly",
]
