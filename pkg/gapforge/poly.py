"""
GAPFORGE Polynomials over F_p

Dense coefficient-form polynomials, radix-2 NTT evaluation and interpolation
on the domain <omega>, and the coset-product expansion

    prod_j (X^m - xi^(e_j)) = X^(rm) - lambda X^((r-1)m) + R(X),  deg R <= (r-2)m

that produces the near-codeword witnesses.
"""

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Sequence, Tuple

from .errors import ContextError, DegreeError, DomainError, InvariantViolation, ParameterError
from .modmath import FieldElement, PrimeFieldCtx, find_root_of_unity


# Below this many output coefficients schoolbook beats the transform.
NTT_THRESHOLD = 64


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class DensePoly:
    """Coefficients over F_p, index = degree, trailing zeros trimmed."""
    coeffs: Tuple[int, ...]
    p: int

    def __post_init__(self):
        coeffs = [c % self.p for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def zero(cls, p: int) -> "DensePoly":
        return cls((), p)

    @classmethod
    def constant(cls, c: int, p: int) -> "DensePoly":
        return cls((c,), p)

    @classmethod
    def monomial(cls, degree: int, p: int, c: int = 1) -> "DensePoly":
        return cls((0,) * degree + (c,), p)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        y = 0
        for c in reversed(self.coeffs):
            y = (y * x + c) % self.p
        return y

    def _check(self, other: "DensePoly"):
        if self.p != other.p:
            raise ContextError(f"mixed moduli {self.p} and {other.p}")

    def __add__(self, other: "DensePoly") -> "DensePoly":
        self._check(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(tuple(self.coeff(i) + other.coeff(i) for i in range(size)), self.p)

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        self._check(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(tuple(self.coeff(i) - other.coeff(i) for i in range(size)), self.p)

    def __neg__(self) -> "DensePoly":
        return DensePoly(tuple(-c for c in self.coeffs), self.p)

    def __mul__(self, other: "DensePoly") -> "DensePoly":
        return poly_mul(self, other)

    def scale(self, c: int) -> "DensePoly":
        return DensePoly(tuple(a * c for a in self.coeffs), self.p)


@dataclass(frozen=True)
class EvalTable:
    """Values of a word on the domain: values[t] is the value at omega^t."""
    values: Tuple[int, ...]
    p: int

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, t: int) -> int:
        return self.values[t]

    def _check(self, other: "EvalTable"):
        if self.p != other.p:
            raise ContextError(f"mixed moduli {self.p} and {other.p}")
        if len(self) != len(other):
            raise ParameterError(["tables of different length"])

    def __add__(self, other: "EvalTable") -> "EvalTable":
        self._check(other)
        return EvalTable(tuple((a + b) % self.p for a, b in zip(self.values, other.values)), self.p)

    def scale(self, c: int) -> "EvalTable":
        return EvalTable(tuple(a * c % self.p for a in self.values), self.p)

    def with_value(self, t: int, value: int) -> "EvalTable":
        values = list(self.values)
        values[t] = value % self.p
        return EvalTable(tuple(values), self.p)


class CosetProduct(NamedTuple):
    lam: FieldElement
    remainder: DensePoly


# =============================================================================
# Number-Theoretic Transform
# =============================================================================

def _transform(values: Sequence[int], root: int, p: int) -> List[int]:
    """In-order iterative Cooley-Tukey: out[t] = sum_j values[j] * root^(j*t)."""
    size = len(values)
    a = [v % p for v in values]

    # bit-reversal permutation
    j = 0
    for i in range(1, size):
        bit = size >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]

    length = 2
    while length <= size:
        half = length // 2
        step = pow(root, size // length, p)
        twiddles = [1] * half
        for i in range(1, half):
            twiddles[i] = twiddles[i - 1] * step % p
        for start in range(0, size, length):
            for i in range(half):
                u = a[start + i]
                v = a[start + i + half] * twiddles[i] % p
                a[start + i] = (u + v) % p
                a[start + i + half] = (u - v) % p
        length <<= 1
    return a


def ntt_evaluate(ctx: PrimeFieldCtx, f: DensePoly) -> EvalTable:
    """f(omega^t) for every t in [0, n)."""
    if f.p != ctx.p:
        raise ContextError(f"polynomial over F_{f.p} used with F_{ctx.p}")
    if f.degree >= ctx.n:
        raise DegreeError(f"deg f = {f.degree} >= n = {ctx.n}; reduce mod X^n - 1 first")
    padded = list(f.coeffs) + [0] * (ctx.n - len(f.coeffs))
    return EvalTable(tuple(_transform(padded, ctx.omega, ctx.p)), ctx.p)


def ntt_interpolate(ctx: PrimeFieldCtx, w: EvalTable) -> DensePoly:
    """Inverse of ntt_evaluate."""
    if w.p != ctx.p:
        raise ContextError(f"table over F_{w.p} used with F_{ctx.p}")
    if len(w) != ctx.n:
        raise ParameterError([f"table length {len(w)} != n = {ctx.n}"])
    coeffs = _transform(w.values, ctx.inv(ctx.omega), ctx.p)
    n_inv = ctx.inv(ctx.n % ctx.p)
    return DensePoly(tuple(c * n_inv for c in coeffs), ctx.p)


@lru_cache(maxsize=64)
def _transform_root(p: int, size: int) -> int:
    return find_root_of_unity(p, size, random.Random(p * 31 + size))


# =============================================================================
# Multiplication and Division
# =============================================================================

def _schoolbook(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [c % p for c in out]


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    """Exact product; NTT above NTT_THRESHOLD when F_p has a large enough 2-power root."""
    a._check(b)
    p = a.p
    if a.is_zero() or b.is_zero():
        return DensePoly.zero(p)

    out_len = len(a.coeffs) + len(b.coeffs) - 1
    size = 1 << (out_len - 1).bit_length()
    if out_len < NTT_THRESHOLD or (p - 1) % size:
        return DensePoly(tuple(_schoolbook(a.coeffs, b.coeffs, p)), p)

    root = _transform_root(p, size)
    fa = _transform(list(a.coeffs) + [0] * (size - len(a.coeffs)), root, p)
    fb = _transform(list(b.coeffs) + [0] * (size - len(b.coeffs)), root, p)
    prod = _transform([x * y % p for x, y in zip(fa, fb)], pow(root, p - 2, p), p)
    size_inv = pow(size, p - 2, p)
    return DensePoly(tuple(c * size_inv for c in prod[:out_len]), p)


def poly_divmod(a: DensePoly, b: DensePoly) -> Tuple[DensePoly, DensePoly]:
    """Euclidean division a = q*b + r with deg r < deg b."""
    a._check(b)
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    p = a.p
    rem = list(a.coeffs)
    lead_inv = pow(b.coeffs[-1], p - 2, p)
    db = b.degree
    quot = [0] * max(len(rem) - db, 0)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * lead_inv % p
        if c:
            quot[i - db] = c
            for j, bj in enumerate(b.coeffs):
                rem[i - db + j] = (rem[i - db + j] - c * bj) % p
    return DensePoly(tuple(quot), p), DensePoly(tuple(rem[:db]), p)


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd over F_p (zero if both are zero)."""
    a._check(b)
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero():
        return a
    return a.scale(pow(a.coeffs[-1], a.p - 2, a.p))


# =============================================================================
# Coset Product and Line Words
# =============================================================================

def expand_coset_product(ctx: PrimeFieldCtx, xi_exponents: Iterable[int]) -> CosetProduct:
    """
    Expand prod_j (X^m - xi^(e_j)) and split off its two leading terms.

    Returns lambda = sum_j xi^(e_j) and R with
    prod = X^(rm) - lambda X^((r-1)m) + R, deg R <= (r-2)m.
    """
    exponents = list(xi_exponents)
    if len(set(exponents)) != len(exponents):
        raise ParameterError(["duplicate exponents"])
    if len(exponents) < 2:
        raise ParameterError(["r < 2"])
    if any(not 0 <= e < ctx.s for e in exponents):
        raise ParameterError([f"exponent outside [0, {ctx.s})"])

    p, m, r = ctx.p, ctx.m, len(exponents)
    xi_values = [ctx.xi_powers[e] for e in exponents]
    lam = sum(xi_values) % p

    # multiply by X^m - value as shift-and-subtract
    coeffs = [1]
    for value in xi_values:
        shifted = [0] * m + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = (shifted[i] - value * c) % p
        coeffs = shifted
    product = DensePoly(tuple(coeffs), p)

    if product.degree != r * m or product.coeff((r - 1) * m) != (-lam) % p:
        raise InvariantViolation("coset product does not have leading terms X^(rm) - lambda X^((r-1)m)")

    remainder = product - DensePoly.monomial(r * m, p) + DensePoly.monomial((r - 1) * m, p, lam)
    if remainder.degree > (r - 2) * m:
        raise InvariantViolation(f"deg R = {remainder.degree} > (r-2)m = {(r - 2) * m}")
    return CosetProduct(lam, remainder)


def eval_monomial_word(ctx: PrimeFieldCtx, z: FieldElement, r: int) -> EvalTable:
    """(f + z g)(omega^t) = omega^(t rm) + z omega^(t (r-1) m), read off the domain powers."""
    n, p, m = ctx.n, ctx.p, ctx.m
    dom = ctx.domain
    return EvalTable(
        tuple((dom[t * r * m % n] + z * dom[t * (r - 1) * m % n]) % p for t in range(n)),
        p,
    )


def line_generators(ctx: PrimeFieldCtx, r: int) -> Tuple[EvalTable, EvalTable]:
    """The words f = X^(rm) and g = X^((r-1)m) on the domain."""
    return eval_monomial_word(ctx, 0, r), eval_monomial_word(ctx, 0, r - 1)
