"""
GAPFORGE Reed-Solomon Code

The code RS[F_p, <omega>, k] = evaluations of polynomials of degree <= k,
agreement-witness checking, brute-force distance oracles for tiny instances,
and the certificate that correlated agreement cannot occur on the line
X^(rm) + z X^((r-1)m).
"""

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

from .errors import BudgetError, InvariantViolation, ParameterError
from .modmath import FieldElement, PrimeFieldCtx
from .poly import DensePoly, EvalTable, ntt_interpolate


logger = logging.getLogger(__name__)

DEFAULT_ORACLE_BUDGET = 10**7


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class CodeDesc:
    """RS code over ctx's domain with degree bound k (dimension k+1)."""
    ctx: PrimeFieldCtx
    k: int

    def __post_init__(self):
        if not 0 <= self.k < self.ctx.n:
            raise ParameterError([f"k={self.k} outside [0, n={self.ctx.n})"])

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def p(self) -> int:
        return self.ctx.p


@dataclass(frozen=True)
class AgreementWitness:
    """A point z on the line and a codeword agreeing with f + z g on a listed set."""
    z: FieldElement
    codeword_poly: DensePoly
    agreement_exponents: Tuple[int, ...]
    claimed_delta: Fraction
    xi_exponents: Tuple[int, ...] = ()


@dataclass(frozen=True)
class WitnessVerdict:
    ok: bool
    agreement: int
    distance_bound: Fraction
    failure: Optional[str] = None
    offending_index: Optional[int] = None


@dataclass(frozen=True)
class NoCorrelatedAgreementCert:
    """
    Any q of degree <= k makes q - X^((r-1)m) a nonzero polynomial of degree
    (r-1)m, so g agrees with a codeword on at most (r-1)m points, short of
    the rm a correlated-agreement set would need.
    """
    g_degree: int
    max_joint_agreement_bound: int
    required_agreement: int
    n: int
    k: int
    interleaved_distance_lower_bound: Fraction = field(default=Fraction(0))

    @property
    def holds(self) -> bool:
        return self.max_joint_agreement_bound < self.required_agreement


# =============================================================================
# Membership and Witnesses
# =============================================================================

def is_codeword(code: CodeDesc, w: EvalTable) -> bool:
    """True iff w interpolates to a polynomial of degree <= k."""
    if len(w) != code.n:
        raise ParameterError([f"word length {len(w)} != n = {code.n}"])
    return ntt_interpolate(code.ctx, w).degree <= code.k


def required_agreement(n: int, delta: Fraction) -> int:
    """Smallest agreement count whose distance bound is <= delta."""
    return math.ceil((1 - Fraction(delta)) * n)


def check_agreement_witness(code: CodeDesc, w: EvalTable, wit: AgreementWitness,
                            delta: Optional[Fraction] = None) -> WitnessVerdict:
    """
    Check that wit.codeword_poly has degree <= k, the agreement list is a
    strictly increasing set of domain indices of size >= (1 - delta) n, and w
    equals the codeword at every listed index.

    When delta is given it is the verifier's own target: the witness must
    claim exactly that delta and the size requirement comes from it, never
    from the witness.
    """
    n = code.n
    indices = wit.agreement_exponents
    bound = 1 - Fraction(len(indices), n)

    def fail(reason: str, index: Optional[int] = None) -> WitnessVerdict:
        return WitnessVerdict(False, len(indices), bound, reason, index)

    if delta is not None and Fraction(wit.claimed_delta) != Fraction(delta):
        return fail(f"claimed delta {wit.claimed_delta} != {delta}")
    if len(w) != n:
        return fail(f"word length {len(w)} != n = {n}")
    if wit.codeword_poly.p != code.p or w.p != code.p:
        return fail("modulus mismatch")
    if wit.codeword_poly.degree > code.k:
        return fail(f"codeword degree {wit.codeword_poly.degree} exceeds k = {code.k}")

    previous = -1
    for t in indices:
        if not previous < t < n:
            return fail(f"agreement index {t} out of order or outside [0, {n})", t)
        previous = t

    needed = required_agreement(n, wit.claimed_delta if delta is None else delta)
    if len(indices) < needed:
        return fail(f"insufficient agreement set: {len(indices)} < {needed}")

    domain = code.ctx.domain
    for t in indices:
        if w[t] != wit.codeword_poly(domain[t]):
            return fail(f"disagreement at index {t}", t)

    return WitnessVerdict(True, len(indices), bound)


# =============================================================================
# Brute-Force Oracles
# =============================================================================

def _check_budget(code: CodeDesc, budget: int):
    size = code.p ** (code.k + 1)
    if size > budget:
        raise BudgetError(f"oracle unavailable: p^(k+1) = {size} exceeds budget {budget}")


def _partition_agreement(code: CodeDesc, w: EvalTable, leading: Sequence[int]) -> int:
    """
    Best agreement over codewords whose X^1..X^k coefficients start with
    `leading`; the constant term is chosen optimally as the most frequent
    residual value.
    """
    p, k, dom = code.p, code.k, code.ctx.domain
    best = 0
    tails = itertools.product(range(p), repeat=k - len(leading)) if k else [()]
    for tail in tails:
        upper = tuple(leading) + tuple(tail)
        residual = Counter()
        for t in range(code.n):
            x = dom[t]
            value, power = 0, x
            for c in upper:
                value += c * power
                power = power * x % p
            residual[(w[t] - value) % p] += 1
        best = max(best, residual.most_common(1)[0][1])
    return best


def _agreement_partitions(code: CodeDesc) -> Iterator[Tuple[int, ...]]:
    if code.k == 0:
        yield ()
        return
    for lead in range(code.p):
        yield (lead,)


def max_agreement_bruteforce(code: CodeDesc, w: EvalTable, budget: int = DEFAULT_ORACLE_BUDGET,
                             threads: int = 1) -> int:
    """max over codewords c of #{t : w_t = c_t}; enumeration split by the X^1 coefficient."""
    _check_budget(code, budget)
    if len(w) != code.n:
        raise ParameterError([f"word length {len(w)} != n = {code.n}"])
    partitions = list(_agreement_partitions(code))
    logger.debug("brute-force agreement over p^(k+1) = %d codewords", code.p ** (code.k + 1))
    if threads > 1 and len(partitions) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return max(pool.map(lambda lead: _partition_agreement(code, w, lead), partitions))
    return max(_partition_agreement(code, w, lead) for lead in partitions)


def distance_to_code_bruteforce(code: CodeDesc, w: EvalTable, budget: int = DEFAULT_ORACLE_BUDGET,
                                threads: int = 1) -> Fraction:
    """Exact relative Hamming distance from w to the code."""
    best = max_agreement_bruteforce(code, w, budget, threads)
    return Fraction(code.n - best, code.n)


# =============================================================================
# Correlated Agreement
# =============================================================================

def no_correlated_agreement_cert(code: CodeDesc, r: int, m: int) -> NoCorrelatedAgreementCert:
    """Certificate that [X^(rm), X^((r-1)m)] has no correlated agreement at radius 1 - rm/n."""
    g_degree = (r - 1) * m
    if g_degree <= code.k:
        raise ParameterError([f"(r-1)m = {g_degree} <= k = {code.k}"])
    if g_degree >= code.n:
        raise ParameterError([f"(r-1)m = {g_degree} >= n = {code.n}"])
    cert = NoCorrelatedAgreementCert(
        g_degree=g_degree,
        max_joint_agreement_bound=g_degree,
        required_agreement=r * m,
        n=code.n,
        k=code.k,
        interleaved_distance_lower_bound=1 - Fraction(g_degree, code.n),
    )
    if not cert.holds:
        raise InvariantViolation("certificate bound does not separate from rm")
    return cert


def interleaved_disagreement(f: EvalTable, g: EvalTable, cf: EvalTable, cg: EvalTable) -> int:
    """Positions where [f, g] differs from [cf, cg] in either coordinate."""
    return sum(1 for a, b, c, d in zip(f.values, g.values, cf.values, cg.values) if a != c or b != d)


def interleaved_distance_lower_bound(code: CodeDesc, g: EvalTable, budget: int = DEFAULT_ORACLE_BUDGET,
                                     threads: int = 1) -> Fraction:
    """Delta([f, g], C^2) >= Delta(g, C), measured by the oracle on the g-coordinate."""
    return distance_to_code_bruteforce(code, g, budget, threads)
