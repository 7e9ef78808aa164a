"""
GAPFORGE Counting Audits

Desk-scale audits of the counting argument behind the good prime:

- every resultant Res(Phi_s, Q) for distinct half-system subsets is nonzero
  and at most (2r)^(s/2) in absolute value,
- the bad primes in [4^s, 8^s] dividing one resultant number B <= log_4(s),
  and each one really makes the two sums collide,
- T = #{p in [4^s, 8^s] prime, p = 1 (mod n)} against its lower bound,
- the bad-triple count against T in log space.

All reports are descriptive records; none of them raise on a failed bound.
"""

import itertools
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from sympy import factorint

from ..config import DEFAULT_AUDIT_EXHAUSTIVE_BUDGET, DEFAULT_FACTOR_BITS_BUDGET, DEFAULT_SIEVE_LIMIT
from ..errors import ParameterError
from ..params import ParamSet
from ..poly import DensePoly, poly_gcd
from .chebyshev import chebyshev_psi, chebyshev_theta, count_primes_in_ap, euler_phi
from .resultant import IntPoly, cyclotomic_pow2, resultant_crt, resultant_int, subset_sum_poly


logger = logging.getLogger(__name__)

Pair = Tuple[Tuple[int, ...], Tuple[int, ...]]
T = TypeVar("T")
R = TypeVar("R")


# =============================================================================
# Records
# =============================================================================

@dataclass(frozen=True)
class ResultantCert:
    s: int
    r: int
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    res_value: int
    bound: int
    bad_primes_in_interval: Tuple[int, ...] = ()
    fully_factored: bool = True
    degenerate: bool = False
    crt_value: Optional[int] = None

    @property
    def within_bound(self) -> bool:
        return abs(self.res_value) <= self.bound


@dataclass(frozen=True)
class ResultantAudit:
    s: int
    r: int
    mode: str
    pairs_examined: int
    bound: int
    all_within_bound: bool
    all_nonzero: bool
    crt_mismatches: int
    max_ratio: Fraction
    certs: Tuple[ResultantCert, ...] = field(repr=False, default=())

    @property
    def ok(self) -> bool:
        return self.all_within_bound and self.all_nonzero and not self.crt_mismatches


@dataclass(frozen=True)
class BadPrimeEntry:
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    res_value: int
    bad_primes: Tuple[int, ...]
    confirmed: Tuple[bool, ...]
    status: str  # "ok" | "degenerate: identically colliding" | "partial: factoring budget exceeded"

    @property
    def B(self) -> int:
        return len(self.bad_primes)


@dataclass(frozen=True)
class BadPrimeAudit:
    s: int
    r: int
    interval: Tuple[int, int]
    pairs_examined: int
    max_B: int
    B_bound: float
    degenerate_pairs: int
    partial_pairs: int
    entries: Tuple[BadPrimeEntry, ...] = field(repr=False, default=())

    @property
    def bound_holds(self) -> bool:
        return all(4 ** e.B <= self.s for e in self.entries if e.status == "ok")

    @property
    def all_confirmed(self) -> bool:
        return all(all(e.confirmed) for e in self.entries)

    @property
    def ok(self) -> bool:
        return self.bound_holds and self.all_confirmed


@dataclass(frozen=True)
class TBoundReport:
    s: int
    n: int
    desk_checkable: bool
    reason: str = ""
    T: Optional[int] = None
    phi_n: Optional[int] = None
    lower_bound: Optional[float] = None
    lower_bound_half_phi: Optional[float] = None
    forms_agree: Optional[bool] = None
    bound_held: Optional[bool] = None
    theta_lo: Optional[float] = None
    theta_hi: Optional[float] = None
    psi_hi: Optional[float] = None
    chain_holds: Optional[bool] = None
    trivial_bound: Optional[float] = None
    trivial_holds: Optional[bool] = None
    linnik_rhs: Optional[float] = None
    linnik_held: Optional[bool] = None


@dataclass(frozen=True)
class CountingMargin:
    s: int
    r: int
    n: int
    log_bad_triples: float
    log_T_lower: float

    @property
    def margin(self) -> float:
        return self.log_T_lower - self.log_bad_triples

    @property
    def good_prime_guaranteed(self) -> bool:
        return self.margin > 0


# =============================================================================
# Pair Selection
# =============================================================================

def _parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def half_system_pairs(
    s: int,
    r: int,
    sample_count: Optional[int] = None,
    rng: Optional[random.Random] = None,
    exhaustive_budget: int = DEFAULT_AUDIT_EXHAUSTIVE_BUDGET,
) -> Tuple[str, List[Pair]]:
    """
    Ordered pairs I != J of r-subsets of [0, s/2).

    Every pair when sample_count is None and the pair count fits the budget;
    otherwise sample_count (default 1000) random pairs.
    """
    half = s // 2
    if not 1 <= r <= half:
        raise ParameterError([f"r={r} outside [1, s/2]"])
    total = math.comb(half, r)
    if sample_count is None and total * (total - 1) <= exhaustive_budget:
        subsets = list(itertools.combinations(range(half), r))
        return "exhaustive", [(I, J) for I in subsets for J in subsets if I != J]
    if total < 2:
        return "exhaustive", []

    rng = rng or random.Random(s * 1009 + r)
    pairs: List[Pair] = []
    while len(pairs) < (sample_count or 1000):
        I = tuple(sorted(rng.sample(range(half), r)))
        J = tuple(sorted(rng.sample(range(half), r)))
        if I != J:
            pairs.append((I, J))
    return "sampled", pairs


# =============================================================================
# Resultant Audit
# =============================================================================

def resultant_bound(s: int, r: int) -> int:
    """(2r)^(s/2)."""
    return (2 * r) ** (s // 2)


def resultant_cert(s: int, I: Sequence[int], J: Sequence[int], cross_check: bool = False) -> ResultantCert:
    r = len(I)
    Q = subset_sum_poly(I, J, s)
    value = resultant_int(cyclotomic_pow2(s), Q)
    return ResultantCert(
        s=s,
        r=r,
        I=tuple(I),
        J=tuple(J),
        res_value=value,
        bound=resultant_bound(s, r),
        degenerate=value == 0,
        crt_value=resultant_crt(s, Q) if cross_check else None,
    )


def audit_resultant_bound(
    s: int,
    r: int,
    sample_count: Optional[int] = None,
    pairs: Optional[Sequence[Pair]] = None,
    rng: Optional[random.Random] = None,
    cross_check: bool = True,
    threads: int = 1,
    exhaustive_budget: int = DEFAULT_AUDIT_EXHAUSTIVE_BUDGET,
) -> ResultantAudit:
    """
    Check |Res(Phi_s, Q)| <= (2r)^(s/2) for each examined pair I != J.

    Args:
        s: 2-power subgroup order
        r: subset size
        sample_count: number of random pairs; None means exhaustive when it fits
        pairs: explicit pairs (any exponents in [0, s)); overrides selection
        cross_check: also compute every resultant by modular CRT
    """
    cyclotomic_pow2(s)
    if pairs is not None:
        mode, selected = "explicit", [(tuple(I), tuple(J)) for I, J in pairs]
        if any(I == J for I, J in selected):
            raise ParameterError(["I = J"])
    else:
        mode, selected = half_system_pairs(s, r, sample_count, rng, exhaustive_budget)

    certs = _parallel_map(lambda pair: resultant_cert(s, pair[0], pair[1], cross_check), selected, threads)
    bound = resultant_bound(s, r)
    mismatches = sum(1 for c in certs if c.crt_value is not None and c.crt_value != c.res_value)
    max_ratio = max((Fraction(abs(c.res_value), bound) for c in certs), default=Fraction(0))
    logger.info("resultant audit s=%d r=%d: %d pairs (%s), max ratio %.4g", s, r, len(certs), mode, float(max_ratio))
    return ResultantAudit(
        s=s,
        r=r,
        mode=mode,
        pairs_examined=len(certs),
        bound=bound,
        all_within_bound=all(c.within_bound for c in certs),
        all_nonzero=not any(c.degenerate for c in certs),
        crt_mismatches=mismatches,
        max_ratio=max_ratio,
        certs=tuple(certs),
    )


# =============================================================================
# Bad Primes
# =============================================================================

def sums_collide_mod(s: int, Q: IntPoly, q: int) -> bool:
    """
    Whether Q vanishes at a root of Phi_s over an extension of F_q, i.e.
    gcd(Phi_s, Q) mod q is nonconstant.
    """
    phi = DensePoly(cyclotomic_pow2(s).reduce(q), q)
    return poly_gcd(phi, DensePoly(Q.reduce(q), q)).degree > 0


def audit_bad_primes(
    s: int,
    r: int,
    pairs: Optional[Sequence[Pair]] = None,
    sample_count: Optional[int] = None,
    rng: Optional[random.Random] = None,
    interval: Optional[Tuple[int, int]] = None,
    factor_bits_budget: int = DEFAULT_FACTOR_BITS_BUDGET,
    threads: int = 1,
    exhaustive_budget: int = DEFAULT_AUDIT_EXHAUSTIVE_BUDGET,
) -> BadPrimeAudit:
    """
    Factor each resultant and count its prime factors in [4^s, 8^s].

    B <= log_4(s) is checked as 4^B <= s. Zero resultants are flagged
    degenerate and excluded; resultants above the factoring budget are
    flagged partial.
    """
    cyclotomic_pow2(s)
    lo, hi = interval or (4 ** s, 8 ** s)
    if pairs is None:
        _, pairs = half_system_pairs(s, r, sample_count, rng, exhaustive_budget)

    def examine(pair: Pair) -> BadPrimeEntry:
        I, J = tuple(pair[0]), tuple(pair[1])
        Q = subset_sum_poly(I, J, s)
        value = resultant_int(cyclotomic_pow2(s), Q)
        if value == 0:
            return BadPrimeEntry(I, J, 0, (), (), "degenerate: identically colliding")
        if abs(value).bit_length() > factor_bits_budget:
            return BadPrimeEntry(I, J, value, (), (), "partial: factoring budget exceeded")
        bad = tuple(sorted(q for q in factorint(abs(value)) if lo <= q <= hi))
        return BadPrimeEntry(I, J, value, bad, tuple(sums_collide_mod(s, Q, q) for q in bad), "ok")

    entries = _parallel_map(examine, list(pairs), threads)
    scored = [e for e in entries if e.status == "ok"]
    audit = BadPrimeAudit(
        s=s,
        r=r,
        interval=(lo, hi),
        pairs_examined=len(entries),
        max_B=max((e.B for e in scored), default=0),
        B_bound=math.log(s, 4),
        degenerate_pairs=sum(1 for e in entries if e.status.startswith("degenerate")),
        partial_pairs=sum(1 for e in entries if e.status.startswith("partial")),
        entries=tuple(entries),
    )
    if audit.partial_pairs:
        logger.warning("%d resultants exceeded the factoring budget", audit.partial_pairs)
    return audit


# =============================================================================
# Prime Counts
# =============================================================================

def audit_T_lower_bound(s: int, n: int, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> TBoundReport:
    """
    Count T over [4^s, 8^s] by sieve and set it beside
    8^s / (2 phi(n) sqrt(n) ln 8^s), reported, never asserted.
    """
    lo, hi = 4 ** s, 8 ** s
    if hi > sieve_limit:
        return TBoundReport(s=s, n=n, desk_checkable=False,
                            reason=f"not desk-checkable: 8^s = 8^{s} exceeds sieve limit {sieve_limit}")

    T = count_primes_in_ap(lo, hi, n, 1, sieve_limit)
    phi = euler_phi(n)
    log_x = s * math.log(8)
    general = hi / (2 * phi * math.sqrt(n) * log_x)
    half_phi = hi / (n ** 1.5 * log_x)

    theta_lo = chebyshev_theta(lo, n, 1, sieve_limit)
    theta_hi = chebyshev_theta(hi, n, 1, sieve_limit)
    psi_hi = chebyshev_psi(hi, n, 1, sieve_limit)
    trivial = (lo / n + 1) * math.log(lo)
    linnik = hi / (phi * math.sqrt(n))

    return TBoundReport(
        s=s,
        n=n,
        desk_checkable=True,
        T=T,
        phi_n=phi,
        lower_bound=general,
        lower_bound_half_phi=half_phi,
        forms_agree=math.isclose(general, half_phi, rel_tol=1e-12) if 2 * phi == n else None,
        bound_held=T >= general,
        theta_lo=theta_lo,
        theta_hi=theta_hi,
        psi_hi=psi_hi,
        chain_holds=theta_hi - theta_lo <= T * log_x * (1 + 1e-12),
        trivial_bound=trivial,
        trivial_holds=theta_lo <= trivial,
        linnik_rhs=linnik,
        linnik_held=psi_hi >= linnik,
    )


def audit_counting_margin(ps: ParamSet) -> CountingMargin:
    """ln(log_4(s) * C(s, r)^2) against ln(8^s / (n^(3/2) ln 8^s))."""
    s, r, n = ps.s, ps.r, ps.n
    log_bad = math.log(math.log(s, 4)) + 2 * math.log(math.comb(s, r))
    log_T = s * math.log(8) - 1.5 * math.log(n) - math.log(s * math.log(8))
    return CountingMargin(s=s, r=r, n=n, log_bad_triples=log_bad, log_T_lower=log_T)
