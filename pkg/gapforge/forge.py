"""
GAPFORGE Forge

Builds and re-verifies counterexamples: searches a good prime p = 1 + n t in
[4^s, 8^s], collects r-subsets of the half system {xi^0, ..., xi^(s/2-1)} with
pairwise distinct sums lambda, turns each into an agreement witness for
z = -lambda, and attaches the no-correlated-agreement certificate.
"""

import itertools
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, TypeVar

from .errors import InsufficientSumsError, InvariantViolation, ParameterError, SearchFailure
from .modmath import FieldElement, PrimeFieldCtx, certify_order, is_probable_prime
from .params import ParamSet, Profile, check_identities, derive_params
from .poly import eval_monomial_word, expand_coset_product, line_generators
from .rscode import (
    AgreementWitness,
    CodeDesc,
    NoCorrelatedAgreementCert,
    check_agreement_witness,
    distance_to_code_bruteforce,
    interleaved_distance_lower_bound,
    no_correlated_agreement_cert,
)


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


# =============================================================================
# Policy and Records
# =============================================================================

@dataclass(frozen=True)
class ForgePolicy:
    """Search and audit budgets; see config.Settings for the defaults."""
    max_candidates: int = 20_000
    strategy: str = "random"          # "random" | "sequential"
    audit_exhaustive_budget: int = 10**6
    audit_samples: int = 10**6
    witness_budget: int = 4096
    rounds: int = 64
    threads: int = 1
    oracle_budget: int = 10**7

    @classmethod
    def from_settings(cls, settings) -> "ForgePolicy":
        return cls(
            max_candidates=settings.max_candidates,
            strategy=settings.prime_strategy,
            audit_exhaustive_budget=settings.audit_exhaustive_budget,
            audit_samples=settings.audit_samples,
            witness_budget=settings.witness_budget,
            rounds=settings.mr_rounds,
            threads=settings.worker_count,
            oracle_budget=settings.oracle_budget,
        )


@dataclass(frozen=True)
class SumAudit:
    """
    Distinctness audit of r-subset sums of the half system.

    exhaustive: every subset examined; distinct_sums counts distinct values.
    sampled: random subset pairs; distinct_sums counts pairs whose sums differ.
    """
    mode: str
    subsets_examined: int
    collisions_found: int
    distinct_sums: int
    pairs_compared: int = 0


@dataclass(frozen=True)
class PrimeSearchLog:
    seed: int
    strategy: str
    candidates_tried: int
    primes_rejected: int = 0


class PrimeSearchResult(NamedTuple):
    p: int
    audit: SumAudit
    log: PrimeSearchLog
    field: PrimeFieldCtx


class LambdaChoice(NamedTuple):
    subset: Tuple[int, ...]
    lam: FieldElement


@dataclass(frozen=True)
class Counterexample:
    params: ParamSet
    p: int
    omega: FieldElement
    xi: FieldElement
    r: int
    m: int
    witnesses: Tuple[AgreementWitness, ...]
    cert: NoCorrelatedAgreementCert
    z_count: int
    prime_search_log: PrimeSearchLog
    sum_audit: SumAudit
    seed: int

    def field_ctx(self, rounds: int = 64) -> PrimeFieldCtx:
        return PrimeFieldCtx(p=self.p, n=self.params.n, omega=self.omega, m=self.m, rounds=rounds)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""
    measured: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class VerificationReport:
    level: str
    checks: Tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


@dataclass(frozen=True)
class SumCountVerdict:
    ok: bool
    mode: str
    distinct_sums: int
    lower_bound: Fraction
    collected: int
    required: int
    subset_count: int
    asymptotic_estimate: float
    detail: str = ""


LEVELS = ("witness", "exhaustive", "oracle")


# =============================================================================
# Helpers
# =============================================================================

def _parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    """Order-preserving map; results do not depend on the worker count."""
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _subset_sum(powers: Sequence[int], subset: Iterable[int], p: int) -> int:
    return sum(powers[e] for e in subset) % p


def agreement_indices(field_ctx: PrimeFieldCtx, subset: Iterable[int]) -> Tuple[int, ...]:
    """Sorted domain indices of the union of cosets H_e, e in subset."""
    s = field_ctx.s
    return tuple(sorted(e + i * s for e in subset for i in range(field_ctx.m)))


# =============================================================================
# Sum Audit
# =============================================================================

def audit_subset_sums(
    field_ctx: PrimeFieldCtx,
    r: int,
    exhaustive_budget: int = 10**6,
    samples: int = 10**6,
    rng: Optional[random.Random] = None,
) -> SumAudit:
    """Check that r-subset sums of {xi^0, ..., xi^(s/2-1)} are pairwise distinct in F_p."""
    half = field_ctx.s // 2
    p = field_ctx.p
    powers = field_ctx.xi_powers[:half]
    total = math.comb(half, r)

    if total <= exhaustive_budget:
        sums = {_subset_sum(powers, subset, p) for subset in itertools.combinations(range(half), r)}
        return SumAudit(
            mode="exhaustive",
            subsets_examined=total,
            collisions_found=total - len(sums),
            distinct_sums=len(sums),
            pairs_compared=total * (total - 1) // 2,
        )

    rng = rng or random.Random(p)
    population = range(half)
    collisions = distinct = pairs = 0
    for _ in range(samples):
        a = rng.sample(population, r)
        b = rng.sample(population, r)
        if set(a) == set(b):
            continue
        pairs += 1
        if _subset_sum(powers, a, p) == _subset_sum(powers, b, p):
            collisions += 1
        else:
            distinct += 1
    return SumAudit(
        mode="sampled",
        subsets_examined=2 * samples,
        collisions_found=collisions,
        distinct_sums=distinct,
        pairs_compared=pairs,
    )


# =============================================================================
# Good Prime Search
# =============================================================================

def find_good_prime(ps: ParamSet, seed: int = 0, policy: Optional[ForgePolicy] = None) -> PrimeSearchResult:
    """
    Search p = 1 + n t in [4^s, min(8^s, n^A)] that is probably prime and
    whose subset sums pass the audit.

    Raises:
        ParameterError: strict profile with 4^s < n^3
        SearchFailure: max_candidates exhausted
    """
    policy = policy or ForgePolicy()
    s, n = ps.s, ps.n
    if 4 ** s < n ** 3:
        if ps.profile is Profile.STRICT:
            raise ParameterError(["4^s < n^3"])
        logger.warning("4^s < n^3 at s=%d, n=%d (waived in desk profile)", s, n)

    lo, hi = ps.search_interval()
    if hi < ps.prime_interval()[1]:
        logger.debug("search capped at 2^%d <= n^A", hi.bit_length() - 1)
    t_lo = -(-(lo - 1) // n)
    t_hi = (hi - 1) // n
    rng = random.Random(seed)

    rejected = 0
    for attempt in range(policy.max_candidates):
        if policy.strategy == "sequential":
            t = t_lo + attempt
            if t > t_hi:
                break
        else:
            t = rng.randint(t_lo, t_hi)
        candidate = 1 + n * t
        if not is_probable_prime(candidate, policy.rounds):
            continue

        field_ctx = PrimeFieldCtx.build(candidate, n, ps.m, rng=rng, rounds=policy.rounds)
        audit = audit_subset_sums(
            field_ctx, ps.r, policy.audit_exhaustive_budget, policy.audit_samples, rng
        )
        if audit.collisions_found:
            rejected += 1
            logger.debug("bad prime %d: %d collisions", candidate, audit.collisions_found)
            continue

        log = PrimeSearchLog(seed=seed, strategy=policy.strategy,
                             candidates_tried=attempt + 1, primes_rejected=rejected)
        logger.info("good prime after %d candidates (%d bits, %s audit)",
                    attempt + 1, candidate.bit_length(), audit.mode)
        return PrimeSearchResult(candidate, audit, log, field_ctx)

    raise SearchFailure(
        f"no good prime within {policy.max_candidates} candidates",
        candidates_tried=policy.max_candidates,
        seed=seed,
    )


# =============================================================================
# Lambda Enumeration and Witnesses
# =============================================================================

def enumerate_lambda(field_ctx: PrimeFieldCtx, r: int, target_count: int) -> List[LambdaChoice]:
    """
    Walk r-subsets of [0, s/2) in lexicographic order, keeping each subset
    whose sum is new, until target_count distinct sums are held.
    """
    half = field_ctx.s // 2
    total = math.comb(half, r)
    if target_count > total:
        raise ParameterError([f"target_count {target_count} > C(s/2, r) = {total}"])

    p = field_ctx.p
    powers = field_ctx.xi_powers[:half]
    seen = set()
    chosen: List[LambdaChoice] = []
    for subset in itertools.combinations(range(half), r):
        if len(chosen) >= target_count:
            break
        lam = _subset_sum(powers, subset, p)
        if lam in seen:
            continue
        seen.add(lam)
        chosen.append(LambdaChoice(subset, lam))

    if len(chosen) < target_count:
        raise InsufficientSumsError(len(chosen), target_count)
    return chosen


def build_witness(field_ctx: PrimeFieldCtx, r: int, k: int, subset: Sequence[int],
                  claimed_delta: Fraction) -> AgreementWitness:
    """Witness for z = -lambda: codeword -R agreeing on the union of the cosets."""
    lam, remainder = expand_coset_product(field_ctx, subset)
    witness = AgreementWitness(
        z=(-lam) % field_ctx.p,
        codeword_poly=-remainder,
        agreement_exponents=agreement_indices(field_ctx, subset),
        claimed_delta=Fraction(claimed_delta),
        xi_exponents=tuple(subset),
    )
    verdict = check_agreement_witness(CodeDesc(field_ctx, k), eval_monomial_word(field_ctx, witness.z, r), witness)
    if not verdict.ok:
        raise InvariantViolation(f"forged witness for {tuple(subset)} fails: {verdict.failure}")
    return witness


def forge_line(field_ctx: PrimeFieldCtx, r: int, k: int, subsets: Sequence[Sequence[int]],
               claimed_delta: Fraction, threads: int = 1) -> List[AgreementWitness]:
    """Witnesses for each subset over an arbitrary prime field (no ParamSet needed)."""
    return _parallel_map(lambda subset: build_witness(field_ctx, r, k, subset, claimed_delta),
                         list(subsets), threads)


def witness_target(ps: ParamSet, witness_budget: int) -> int:
    total = ps.sum_count()
    if ps.profile is Profile.DESK:
        return total
    return max(ps.z_target(), min(total, witness_budget))


def build_counterexample(ps: ParamSet, seed: int = 0, policy: Optional[ForgePolicy] = None,
                         field_ctx: Optional[PrimeFieldCtx] = None) -> Counterexample:
    """
    Run the whole pipeline for ps.

    Args:
        ps: derived parameters
        seed: prime-search seed; the output is a function of (ps, seed, policy)
        policy: budgets and worker count
        field_ctx: preset field that bypasses the prime search
    """
    policy = policy or ForgePolicy()
    if field_ctx is None:
        p, audit, log, field_ctx = find_good_prime(ps, seed, policy)
    else:
        if field_ctx.n != ps.n or field_ctx.m != ps.m:
            raise ParameterError(["preset field does not match (n, m)"])
        audit = audit_subset_sums(field_ctx, ps.r, policy.audit_exhaustive_budget,
                                  policy.audit_samples, random.Random(seed))
        log = PrimeSearchLog(seed=seed, strategy="preset", candidates_tried=0)

    target = witness_target(ps, policy.witness_budget)
    choices = enumerate_lambda(field_ctx, ps.r, target)
    witnesses = forge_line(field_ctx, ps.r, ps.k, [c.subset for c in choices], ps.delta, policy.threads)

    if ps.profile is Profile.STRICT and len(witnesses) < ps.z_target():
        raise InvariantViolation(f"{len(witnesses)} witnesses < n^C = {ps.z_target()}")

    cert = no_correlated_agreement_cert(CodeDesc(field_ctx, ps.k), ps.r, ps.m)
    logger.info("forged %d witnesses over n=%d (delta=%s)", len(witnesses), ps.n, ps.delta)
    return Counterexample(
        params=ps,
        p=field_ctx.p,
        omega=field_ctx.omega,
        xi=field_ctx.xi,
        r=ps.r,
        m=ps.m,
        witnesses=tuple(witnesses),
        cert=cert,
        z_count=len(witnesses),
        prime_search_log=log,
        sum_audit=audit,
        seed=seed,
    )


# =============================================================================
# Verification
# =============================================================================

def audit_sum_count_bound(ps: ParamSet, measured: SumAudit, collected: Optional[int] = None) -> SumCountVerdict:
    """
    distinct_sums >= ceil((s/(2r))^r) for an exhaustive audit, and in the
    strict profile collected >= n^C.
    """
    lower = Fraction(ps.s, 2 * ps.r) ** ps.r
    required = ps.z_target()
    collected = measured.distinct_sums if collected is None else collected
    rho = float(ps.rho)
    estimate = ps.n ** (rho * ps.K * math.log(1 / (2 * rho))) * (1 / (2 * rho)) ** 2

    ok, notes = True, []
    if measured.mode == "exhaustive":
        if measured.distinct_sums < math.ceil(lower):
            ok = False
            notes.append(f"distinct sums {measured.distinct_sums} < (s/2r)^r = {float(lower):.4g}")
    else:
        notes.append("(s/2r)^r bound not applicable to a sampled audit")
    if ps.profile is Profile.STRICT and collected < required:
        ok = False
        notes.append(f"collected {collected} < n^C = {required}")

    return SumCountVerdict(
        ok=ok,
        mode=measured.mode,
        distinct_sums=measured.distinct_sums,
        lower_bound=lower,
        collected=collected,
        required=required,
        subset_count=ps.sum_count(),
        asymptotic_estimate=estimate,
        detail="; ".join(notes),
    )


def _check(name: str, passed: bool, detail: str = "", **measured) -> CheckResult:
    return CheckResult(name, "pass" if passed else "fail", detail, measured)


def verify_line(
    field_ctx: PrimeFieldCtx,
    r: int,
    k: int,
    witnesses: Sequence[AgreementWitness],
    z_count: int,
    delta: Fraction,
    level: str = "witness",
    stored_cert: Optional[NoCorrelatedAgreementCert] = None,
    oracle_budget: int = 10**7,
    threads: int = 1,
) -> List[CheckResult]:
    """Field, witness, certificate and (optionally) oracle checks for one line."""
    checks: List[CheckResult] = []
    p, n, m, s = field_ctx.p, field_ctx.n, field_ctx.m, field_ctx.s
    delta = Fraction(delta)
    code = CodeDesc(field_ctx, k)

    checks.append(_check("field.omega_order", certify_order(field_ctx.omega, n, p), omega=str(field_ctx.omega)))
    checks.append(_check("field.xi_order", certify_order(field_ctx.xi, s, p), xi=str(field_ctx.xi)))

    def check_one(item: Tuple[int, AgreementWitness]) -> Optional[CheckResult]:
        index, wit = item
        label = f"witness[{index}]"
        tag = wit.xi_exponents
        if (len(tag) != r or any(not isinstance(e, int) for e in tag)
                or list(tag) != sorted(set(tag)) or not all(0 <= e < s // 2 for e in tag)):
            return _check(f"{label}.tag", False, f"tag {tag} is not {r} increasing exponents in [0, {s // 2})",
                          witness=index)
        if Fraction(wit.claimed_delta) != delta:
            return _check(f"{label}.claimed_delta", False, f"claimed {wit.claimed_delta}, expected {delta}",
                          witness=index)
        lam = sum(field_ctx.xi_powers[e] for e in tag) % p
        if (-lam) % p != wit.z:
            return _check(f"{label}.z", False, "z != -sum of tagged xi-values", witness=index)
        for t in wit.agreement_exponents:
            if 0 <= t < n and t % s not in tag:
                return _check(f"{label}.coset", False, f"index {t} not in a tagged coset",
                              witness=index, index=t)
            if 0 <= t < n and pow(field_ctx.domain[t], m, p) != field_ctx.xi_powers[t % s]:
                return _check(f"{label}.coset", False, f"(omega^{t})^m != xi^{t % s}", witness=index, index=t)
        verdict = check_agreement_witness(code, eval_monomial_word(field_ctx, wit.z, r), wit, delta)
        if not verdict.ok:
            return _check(f"{label}.agreement", False, verdict.failure or "",
                          witness=index, index=verdict.offending_index)
        return None

    failures = [c for c in _parallel_map(check_one, list(enumerate(witnesses)), threads) if c is not None]
    checks.extend(failures)
    checks.append(_check("witnesses", not failures, f"{len(witnesses) - len(failures)}/{len(witnesses)} pass",
                         checked=len(witnesses)))

    distinct = len({wit.z for wit in witnesses})
    checks.append(_check("z.distinct_count", distinct == len(witnesses) == z_count,
                         f"{distinct} distinct z, {len(witnesses)} witnesses, z_count={z_count}",
                         distinct=distinct, z_count=z_count))

    fresh = no_correlated_agreement_cert(code, r, m)
    same = stored_cert is None or stored_cert == fresh
    checks.append(_check("certificate", fresh.holds and same,
                         f"(r-1)m = {fresh.max_joint_agreement_bound} < rm = {fresh.required_agreement}",
                         bound=fresh.max_joint_agreement_bound, required=fresh.required_agreement))

    if level == "oracle":
        checks.extend(_oracle_checks(code, r, witnesses, delta, fresh, oracle_budget, threads))
    return checks


def _oracle_checks(code: CodeDesc, r: int, witnesses: Sequence[AgreementWitness], delta: Fraction,
                   cert: NoCorrelatedAgreementCert, budget: int, threads: int) -> List[CheckResult]:
    size = code.p ** (code.k + 1)
    if size > budget:
        reason = f"p^(k+1) = {size} exceeds oracle budget {budget}"
        return [CheckResult("oracle.distance", "skip", reason), CheckResult("oracle.g_agreement", "skip", reason)]

    checks = []
    worst = Fraction(0)
    for wit in witnesses:
        worst = max(worst, distance_to_code_bruteforce(code, eval_monomial_word(code.ctx, wit.z, r), budget, threads))
    checks.append(_check("oracle.distance", worst <= delta, f"max distance {worst} <= delta {delta}",
                         max_distance=str(worst)))

    _, g = line_generators(code.ctx, r)
    interleaved = interleaved_distance_lower_bound(code, g, budget, threads)
    g_agreement = int(code.n - interleaved * code.n)
    checks.append(_check(
        "oracle.g_agreement",
        g_agreement <= cert.max_joint_agreement_bound and interleaved > delta,
        f"max agreement of g {g_agreement} <= (r-1)m = {cert.max_joint_agreement_bound}; "
        f"Delta([f,g], C^2) >= {interleaved} > {delta}",
        g_agreement=g_agreement,
        interleaved_lower_bound=str(interleaved),
    ))
    return checks


def verify_counterexample(cx: Counterexample, level: str = "witness",
                          policy: Optional[ForgePolicy] = None) -> VerificationReport:
    """
    Re-derive and re-check everything in cx without trusting any stored verdict.

    witness: params, prime, field orders, every witness, z distinctness, certificate
    exhaustive: plus the subset-sum audit and its count bound
    oracle: plus brute-force distance oracles when p^(k+1) fits the budget
    """
    if level not in LEVELS:
        raise ParameterError([f"unknown level {level!r}"])
    policy = policy or ForgePolicy()
    ps = cx.params
    checks: List[CheckResult] = []

    identities = check_identities(ps)
    checks.append(_check("params.identities", identities.ok,
                         "; ".join(f"{c.name}: {c.lhs} != {c.rhs}" for c in identities.failures())))
    try:
        fresh = derive_params(ps.C, ps.rate, ps.alpha, ps.profile,
                              ps.m if ps.profile is Profile.DESK else None)
        same = (fresh.s, fresh.r, fresh.m, fresh.n, fresh.k, fresh.delta, fresh.K) == \
               (ps.s, ps.r, ps.m, ps.n, ps.k, ps.delta, ps.K)
        checks.append(_check("params.rederive", same))
    except ParameterError as exc:
        checks.append(_check("params.rederive", False, str(exc)))

    lo, hi = ps.prime_interval()
    checks.append(_check("prime.probable", is_probable_prime(cx.p, policy.rounds), bits=cx.p.bit_length()))
    checks.append(_check("prime.congruence", cx.p % ps.n == 1, f"p mod n = {cx.p % ps.n}"))
    checks.append(_check("prime.interval", lo <= cx.p <= hi, f"4^s <= p <= 8^s with s = {ps.s}"))
    ratio = math.log(cx.p) / math.log(ps.n)
    checks.append(_check("prime.exponent_bound", ratio <= ps.A_exp,
                         f"ln p / ln n = {ratio:.4f} <= K ln 8 = {ps.A_exp:.4f}", ratio=ratio))

    if cx.r != ps.r or cx.m != ps.m:
        checks.append(_check("params.line", False, "stored r, m disagree with params"))
        return VerificationReport(level, tuple(checks))

    try:
        field_ctx = PrimeFieldCtx(p=cx.p, n=ps.n, omega=cx.omega, m=cx.m, rounds=policy.rounds)
    except ParameterError as exc:
        checks.append(_check("field.omega_order", False, str(exc)))
        return VerificationReport(level, tuple(checks))
    checks.append(_check("field.xi_matches", field_ctx.xi == cx.xi, xi=str(cx.xi)))

    checks.extend(verify_line(field_ctx, ps.r, ps.k, cx.witnesses, cx.z_count, ps.delta, level,
                              cx.cert, policy.oracle_budget, policy.threads))

    if ps.profile is Profile.STRICT:
        checks.append(_check("z.strict_target", cx.z_count >= ps.z_target(),
                             f"z_count {cx.z_count} >= n^C = {ps.z_target()}"))

    if level in ("exhaustive", "oracle"):
        audit = audit_subset_sums(field_ctx, ps.r, policy.audit_exhaustive_budget,
                                  policy.audit_samples, random.Random(cx.seed))
        checks.append(_check("sums.audit", audit.collisions_found == 0,
                             f"{audit.mode}: {audit.collisions_found} collisions",
                             mode=audit.mode, distinct_sums=audit.distinct_sums))
        bound = audit_sum_count_bound(ps, audit, collected=cx.z_count)
        checks.append(_check("sums.count_bound", bound.ok, bound.detail,
                             distinct_sums=bound.distinct_sums, collected=bound.collected))

    return VerificationReport(level, tuple(checks))
