"""
GAPFORGE Parameter Tower

Derives and audits the parameter tower of the counterexample family:
rate rho = u/2^v, the threshold L(rho, C), the power of two K, the subgroup
size s = 2^alpha, the relative-distance knob r = rho*s + 2, the coset size m,
block length n = s*m, degree bound k = (r-2)*m, the radius delta = 1 - r/s
and the gap eta = 2/s to capacity.

All distances and rates are exact Fractions. Real-valued quantities (L, the
prime exponent A = K*ln 8) are floats and are never used in a certificate.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from sympy import integer_nthroot

from .errors import ParameterError


RationalLike = Union[int, str, Fraction]

FLOOR_BRANCH = 9 / (2 * math.log(8))


# =============================================================================
# Helpers
# =============================================================================

def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def as_ratio(value: Fraction, denominator: Optional[int] = None) -> str:
    """Render a Fraction as "num/den", optionally over a fixed denominator."""
    if denominator is not None and (value * denominator).denominator == 1:
        return f"{value.numerator * (denominator // value.denominator)}/{denominator}"
    return f"{value.numerator}/{value.denominator}"


def ceil_power(n: int, exponent: Fraction) -> int:
    """Exact ceil(n ** exponent) for a nonnegative rational exponent."""
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ParameterError(["exponent < 0"])
    root, exact = integer_nthroot(n ** exponent.numerator, exponent.denominator)
    return int(root) if exact else int(root) + 1


# =============================================================================
# Domain Types
# =============================================================================

class Profile(str, Enum):
    """Which constraint set a ParamSet was derived under."""
    STRICT = "strict"
    DESK = "desk"


@dataclass(frozen=True)
class RateSpec:
    """Code rate rho = u / 2^v, restricted to (0, 1/2)."""
    u: int
    v: int

    def __post_init__(self):
        violations = []
        if self.u <= 0:
            violations.append("u <= 0")
        if self.v <= 0:
            violations.append("v <= 0")
        if not violations and self.u >= 2 ** (self.v - 1):
            violations.append("u >= 2^(v-1)")
        if violations:
            raise ParameterError(violations)

    @property
    def rho(self) -> Fraction:
        return Fraction(self.u, 2 ** self.v)


@dataclass(frozen=True)
class LBound:
    """Value of L(rho, C) together with both branches of the max."""
    value: float
    rate_branch: float
    floor_branch: float

    @property
    def branch(self) -> str:
        return "rate" if self.rate_branch >= self.floor_branch else "floor"


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    status: str  # "pass" | "fail" | "waived"
    lhs: str
    rhs: str

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class IdentityReport:
    profile: "Profile"
    checks: Tuple[IdentityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def failures(self) -> List[IdentityCheck]:
        return [check for check in self.checks if not check.ok]

    def get(self, name: str) -> IdentityCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


@dataclass(frozen=True)
class ParamSet:
    """The complete parameter tower of one instance."""
    C: Fraction
    rate: RateSpec
    L_val: float
    L_branch: str
    K: int
    alpha: int
    s: int
    r: int
    m: int
    n: int
    k: int
    delta: Fraction
    eta: Fraction
    A_exp: float
    profile: Profile
    identities: Optional[IdentityReport] = field(default=None, compare=False)

    @property
    def rho(self) -> Fraction:
        return self.rate.rho

    @property
    def half(self) -> int:
        """Size of the half system of exponents [0, s/2)."""
        return self.s // 2

    @property
    def required_agreement(self) -> int:
        """(1 - delta) * n = r * m."""
        return self.r * self.m

    @property
    def log2_n(self) -> int:
        return self.n.bit_length() - 1

    def sum_count(self) -> int:
        """a = C(s/2, r), the number of r-subsets of the half system."""
        return math.comb(self.half, self.r)

    def z_target(self) -> int:
        """ceil(n^C), the number of distinct z a counterexample must carry."""
        return ceil_power(self.n, self.C)

    def prime_interval(self) -> Tuple[int, int]:
        """[4^s, 8^s], where the good prime is searched."""
        return 4 ** self.s, 8 ** self.s

    def search_interval(self) -> Tuple[int, int]:
        """
        prime_interval capped at 2^floor(A log2 n) <= n^A, so every prime the
        search returns also satisfies p <= n^A. The cap is dropped when it
        would fall below 4^s.
        """
        lo, hi = self.prime_interval()
        cap = 1 << math.floor(self.A_exp * self.log2_n)
        return (lo, min(hi, cap)) if cap >= lo else (lo, hi)


# =============================================================================
# Operations
# =============================================================================

def compute_L(rate: RateSpec, C: RationalLike) -> LBound:
    """L(rho, C) = max{C / (rho ln(1/(2 rho))), 9 / (2 ln 8)} with natural logs."""
    C = Fraction(C)
    if C <= 0:
        raise ParameterError(["C <= 0"])
    rho = rate.rho
    rate_branch = float(C) / (float(rho) * math.log(1 / (2 * float(rho))))
    return LBound(
        value=max(rate_branch, FLOOR_BRANCH),
        rate_branch=rate_branch,
        floor_branch=FLOOR_BRANCH,
    )


def choose_K(L_val: float) -> int:
    """
    K = 2^(floor(log2 L) + 1).

    frexp gives L = f * 2^e with f in [0.5, 1), so floor(log2 L) = e - 1
    without rounding; exact powers of two land on f = 0.5 and go up one.
    """
    if not L_val > 0:
        raise ParameterError(["L_val <= 0"])
    if L_val < 1:
        raise ParameterError(["L_val < 1"])
    _, exponent = math.frexp(L_val)
    K = 2 ** exponent
    if not (Fraction(L_val) <= K <= 2 * Fraction(L_val)):
        raise ParameterError([f"K={K} outside [L, 2L] for L={L_val!r}"])
    return K


def derive_params(
    C: RationalLike,
    rate: RateSpec,
    alpha: int,
    profile: Union[Profile, str] = Profile.STRICT,
    m_override: Optional[int] = None,
) -> ParamSet:
    """
    Derive the full ParamSet.

    Args:
        C: sum-count exponent (positive rational)
        rate: rho = u/2^v
        alpha: s = 2^alpha
        profile: strict (all constraints) or desk (K constraints waived)
        m_override: coset size, required in desk profile, forbidden in strict

    Raises:
        ParameterError listing every violated constraint by name.
    """
    profile = Profile(profile)
    C = Fraction(C)
    bound = compute_L(rate, C)
    K = choose_K(bound.value)

    violations = []
    if alpha < 1:
        violations.append("alpha < 1")
    if alpha < rate.v:
        violations.append("alpha < v")

    if profile is Profile.STRICT:
        if m_override is not None:
            violations.append("m_override given in strict profile")
        if 2 ** alpha < K:
            violations.append("alpha < log2 K")
        if K * alpha > 2 ** alpha:
            violations.append("2^alpha/alpha < K")
    else:
        if m_override is None:
            violations.append("m_override missing (desk)")
        elif not is_power_of_two(m_override):
            violations.append("m not a power of 2")

    if violations:
        raise ParameterError(violations)

    s = 2 ** alpha
    r = rate.u * 2 ** (alpha - rate.v) + 2
    if r > s // 2:
        raise ParameterError(["r > s/2"])

    if profile is Profile.STRICT:
        m = 2 ** (s // K - alpha)
    else:
        m = m_override

    n = s * m
    ps = ParamSet(
        C=C,
        rate=rate,
        L_val=bound.value,
        L_branch=bound.branch,
        K=K,
        alpha=alpha,
        s=s,
        r=r,
        m=m,
        n=n,
        k=(r - 2) * m,
        delta=1 - Fraction(r, s),
        eta=Fraction(2, s),
        A_exp=K * math.log(8),
        profile=profile,
    )
    return replace(ps, identities=check_identities(ps))


def check_identities(ps: ParamSet) -> IdentityReport:
    """Recompute every identity of the tower with exact rationals."""
    checks = []

    def add(name: str, lhs, rhs, waived: bool = False):
        if waived:
            status = "waived"
        else:
            status = "pass" if lhs == rhs else "fail"
        checks.append(IdentityCheck(name, status, str(lhs), str(rhs)))

    add("s = 2^alpha", ps.s, 2 ** ps.alpha)
    add("m power of 2", is_power_of_two(ps.m), True)
    add("n = s*m", ps.n, ps.s * ps.m)
    add("k = (r-2)*m", ps.k, (ps.r - 2) * ps.m)
    add("rho = k/n", ps.rho, Fraction(ps.k, ps.n))
    add("delta = 1 - r/s", ps.delta, 1 - Fraction(ps.r, ps.s))
    add("eta = 2/s", ps.eta, Fraction(2, ps.s))
    add("(1 - rho) - delta = eta", (1 - ps.rho) - ps.delta, ps.eta)

    strict = ps.profile is Profile.STRICT
    if strict and is_power_of_two(ps.n):
        add("K*log2(n) = s", ps.K * ps.log2_n, ps.s)
    elif strict:
        add("K*log2(n) = s", f"K*log2({ps.n})", ps.s)
    else:
        checks.append(IdentityCheck("K*log2(n) = s", "waived", "waived (desk)", str(ps.s)))

    if strict:
        add("L <= K <= 2L", Fraction(ps.L_val) <= ps.K <= 2 * Fraction(ps.L_val), True)

    return IdentityReport(profile=ps.profile, checks=tuple(checks))
