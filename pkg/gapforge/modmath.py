"""
GAPFORGE Modular Arithmetic

Prime-field arithmetic on Python integers, Miller-Rabin primality testing and
the multiplicative subgroup ladder omega -> xi = omega^m.

Field elements are plain ints in [0, p); the context carries the modulus.
"""

import random
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError, InvariantViolation, ParameterError


FieldElement = int

# Deterministic Miller-Rabin: the first twelve primes decide every N < 2^64,
# the first thirteen every N < 3,317,044,064,679,887,385,961,981.
_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_BASES_WIDE = _BASES_64 + (41,)
_LIMIT_64 = 1 << 64
_LIMIT_WIDE = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

MAX_ROOT_ATTEMPTS = 10_000


# =============================================================================
# Primality
# =============================================================================

def _decompose_pow2(x: int) -> Tuple[int, int]:
    """Return (r, d) with x = 2^r * d and d odd."""
    r = (x & -x).bit_length() - 1
    return r, x >> r


def _miller_rabin_round(n: int, a: int, r: int, d: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(N: int, rounds: int = 64) -> bool:
    """
    Miller-Rabin test.

    Below 3.3*10^24 a fixed witness set makes the answer exact. Above, `rounds`
    witnesses are drawn from a generator seeded by N, so repeated calls agree.
    A composite verdict is always correct.
    """
    if N < 2:
        return False
    for q in _SMALL_PRIMES:
        if N == q:
            return True
        if N % q == 0:
            return False

    r, d = _decompose_pow2(N - 1)
    if N < _LIMIT_64:
        bases: Sequence[int] = _BASES_64
    elif N < _LIMIT_WIDE:
        bases = _BASES_WIDE
    else:
        rng = random.Random(N)
        bases = [rng.randrange(2, N - 1) for _ in range(rounds)]

    return all(_miller_rabin_round(N, a, r, d) for a in bases)


# =============================================================================
# Prime Field Context
# =============================================================================

def find_root_of_unity(p: int, n: int, rng: Optional[random.Random] = None) -> FieldElement:
    """
    Sample a primitive n-th root of unity in F_p, n a power of 2.

    Draws g, takes w = g^((p-1)/n) and keeps it once w^(n/2) != 1, which for a
    2-power n certifies exact order n.
    """
    if n <= 0 or n & (n - 1):
        raise ParameterError([f"n={n} is not a power of 2"])
    if (p - 1) % n:
        raise ParameterError([f"n={n} does not divide p-1"])
    if n == 1:
        return 1

    rng = rng or random.Random(p ^ n)
    cofactor = (p - 1) // n
    for _ in range(MAX_ROOT_ATTEMPTS):
        g = rng.randrange(2, p) if p > 3 else 2
        w = pow(g, cofactor, p)
        if pow(w, n // 2, p) != 1:
            return w
    raise InvariantViolation(f"no primitive {n}-th root found mod {p}; is p prime?")


@dataclass(frozen=True)
class PrimeFieldCtx:
    """
    A prime field F_p with the domain D = <omega> of size n and the ladder
    xi = omega^m of order s = n/m.
    """
    p: int
    n: int
    omega: FieldElement
    m: int = 1
    rounds: int = 64

    def __post_init__(self):
        violations = []
        if not is_probable_prime(self.p, self.rounds):
            violations.append(f"p={self.p} is not prime")
        if self.n <= 0 or self.n & (self.n - 1):
            violations.append("n not a power of 2")
        elif (self.p - 1) % self.n:
            violations.append("n does not divide p-1")
        if self.m <= 0 or self.n % self.m:
            violations.append("m does not divide n")
        if violations:
            raise ParameterError(violations)
        if not certify_order(self.omega, self.n, self.p):
            raise ParameterError([f"omega={self.omega} does not have order {self.n}"])

    @classmethod
    def build(cls, p: int, n: int, m: int = 1, rng: Optional[random.Random] = None,
              rounds: int = 64) -> "PrimeFieldCtx":
        """Construct the context, sampling omega."""
        return cls(p=p, n=n, omega=find_root_of_unity(p, n, rng), m=m, rounds=rounds)

    @property
    def s(self) -> int:
        return self.n // self.m

    @cached_property
    def xi(self) -> FieldElement:
        return pow(self.omega, self.m, self.p)

    @cached_property
    def domain(self) -> Tuple[FieldElement, ...]:
        """omega^t for t in [0, n)."""
        values = [1] * self.n
        for t in range(1, self.n):
            values[t] = values[t - 1] * self.omega % self.p
        return tuple(values)

    @cached_property
    def xi_powers(self) -> Tuple[FieldElement, ...]:
        """xi^j for j in [0, s)."""
        return tuple(self.domain[j * self.m] for j in range(self.s))

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a + b) % self.p

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a - b) % self.p

    def neg(self, a: FieldElement) -> FieldElement:
        return -a % self.p

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * b % self.p

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        return pow(a, e, self.p)

    def inv(self, a: FieldElement) -> FieldElement:
        if a % self.p == 0:
            raise DomainError("inverse of zero")
        return pow(a, self.p - 2, self.p)


def certify_order(omega: FieldElement, n: int, p: int) -> bool:
    """omega^n = 1 and omega^(n/2) != 1, i.e. exact order n for a 2-power n."""
    if pow(omega, n, p) != 1:
        return False
    return n == 1 or pow(omega, n // 2, p) != 1


_OPS = {"add": 2, "sub": 2, "mul": 2, "inv": 1, "pow": 2}


def field_arith(ctx: PrimeFieldCtx, op: str, *operands: int) -> FieldElement:
    """Dispatch one of add/sub/mul/inv/pow on reduced operands."""
    if op not in _OPS:
        raise ParameterError([f"unknown op {op!r}"])
    if len(operands) != _OPS[op]:
        raise ParameterError([f"{op} takes {_OPS[op]} operands"])
    if op == "pow":
        base, exponent = operands
        if not 0 <= base < ctx.p:
            raise ParameterError(["operand not reduced mod p"])
        return ctx.pow(base, exponent)
    if any(not 0 <= x < ctx.p for x in operands):
        raise ParameterError(["operand not reduced mod p"])
    return getattr(ctx, op)(*operands)


# =============================================================================
# Subgroup Cosets
# =============================================================================

def coset_indices(ctx: PrimeFieldCtx, j_exponent: int) -> List[int]:
    """Domain indices t = j + i*s (0 <= i < m) of the coset H_j."""
    if not 0 <= j_exponent < ctx.s:
        raise ParameterError([f"j={j_exponent} outside [0, {ctx.s})"])
    return [j_exponent + i * ctx.s for i in range(ctx.m)]


def subgroup_coset(ctx: PrimeFieldCtx, j_exponent: int) -> List[FieldElement]:
    """H_j = {a in D : a^m = xi^j} = {omega^(j + i*s)}."""
    return [ctx.domain[t] for t in coset_indices(ctx, j_exponent)]


def fermat_self_test(ctx: PrimeFieldCtx, trials: int = 16, rng: Optional[random.Random] = None) -> bool:
    """x^(p-1) = 1 for random nonzero x."""
    rng = rng or random.Random(ctx.p)
    return all(pow(rng.randrange(1, ctx.p), ctx.p - 1, ctx.p) == 1 for _ in range(trials))
