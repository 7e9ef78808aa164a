"""
GAPFORGE Cyclotomic Resultants

Integer polynomials, Phi_s = X^(s/2) + 1 for 2-power s, the subset-sum
difference polynomial Q = sum_I X^i - sum_J X^j, and Res(P, Q) computed two
independent ways: fraction-free (Bareiss) elimination of the Sylvester matrix,
and products over primitive s-th roots modulo several primes joined by CRT.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from sympy.ntheory.modular import crt

from ..errors import ParameterError
from ..modmath import find_root_of_unity, is_probable_prime
from ..params import is_power_of_two


# =============================================================================
# Integer Polynomials
# =============================================================================

@dataclass(frozen=True)
class IntPoly:
    """Exact integer coefficients, index = degree, trailing zeros trimmed."""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        y = 0
        for c in reversed(self.coeffs):
            y = y * x + c
        return y

    def reduce(self, p: int) -> Tuple[int, ...]:
        """Coefficients mod p."""
        return tuple(c % p for c in self.coeffs)

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        text = ""
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            monomial = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            term = (str(abs(c)) if abs(c) != 1 or i == 0 else "") + monomial
            if not text:
                text = "-" + term if c < 0 else term
            else:
                text += (" - " if c < 0 else " + ") + term
        return text


def cyclotomic_pow2(s: int) -> IntPoly:
    """Phi_s = X^(s/2) + 1; only 2-power s is supported."""
    if s < 2 or not is_power_of_two(s):
        raise ParameterError([f"s={s} is not a power of 2 >= 2"])
    return IntPoly((1,) + (0,) * (s // 2 - 1) + (1,))


def subset_sum_poly(I: Iterable[int], J: Iterable[int], s: int = 0) -> IntPoly:
    """
    Q = sum_{i in I} X^i - sum_{j in J} X^j; shared exponents cancel.

    When s is given every exponent must lie in [0, s).
    """
    I, J = list(I), list(J)
    if len(I) != len(J):
        raise ParameterError([f"|I| = {len(I)} != |J| = {len(J)}"])
    exponents = I + J
    if any(e < 0 for e in exponents) or (s and any(e >= s for e in exponents)):
        raise ParameterError(["exponent outside [0, s)"])
    if not exponents:
        return IntPoly(())
    coeffs = [0] * (max(exponents) + 1)
    for e in I:
        coeffs[e] += 1
    for e in J:
        coeffs[e] -= 1
    return IntPoly(tuple(coeffs))


# =============================================================================
# Resultants
# =============================================================================

def sylvester_matrix(P: IntPoly, Q: IntPoly) -> List[List[int]]:
    """(deg P + deg Q) square matrix: deg Q shifted rows of P, then deg P of Q."""
    dp, dq = P.degree, Q.degree
    size = dp + dq
    rows = []
    for shift in range(dq):
        row = [0] * size
        for i, c in enumerate(reversed(P.coeffs)):
            row[shift + i] = c
        rows.append(row)
    for shift in range(dp):
        row = [0] * size
        for i, c in enumerate(reversed(Q.coeffs)):
            row[shift + i] = c
        rows.append(row)
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination; every division is exact."""
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign, previous = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[-1][-1]


def resultant_int(P: IntPoly, Q: IntPoly) -> int:
    """
    Res(P, Q) = lc(P)^deg Q * prod_{P(x)=0} Q(x), exact.

    Args:
        P: nonconstant integer polynomial
        Q: any integer polynomial (zero gives 0)
    """
    if P.degree < 1:
        raise ParameterError(["P must be nonconstant"])
    if Q.is_zero():
        return 0
    if Q.degree == 0:
        return Q.leading ** P.degree
    return bareiss_determinant(sylvester_matrix(P, Q))


def _crt_primes(s: int, bound: int) -> Iterable[int]:
    """Primes q = 1 (mod s) whose product exceeds 2*bound."""
    product, t = 1, 1
    while product <= 2 * bound:
        q = 1 + s * t
        t += 1
        if is_probable_prime(q):
            product *= q
            yield q


def resultant_crt(s: int, Q: IntPoly) -> int:
    """
    Res(Phi_s, Q) as prod of Q over primitive s-th roots, computed mod primes
    q = 1 (mod s) and recombined with the symmetric CRT residue.

    |Q(x)| <= ||Q||_1 on the unit circle bounds the result by ||Q||_1^(s/2).
    """
    cyclotomic_pow2(s)
    if Q.is_zero():
        return 0
    bound = Q.l1_norm() ** (s // 2)
    moduli, residues = [], []
    for q in _crt_primes(s, bound):
        zeta = find_root_of_unity(q, s)
        coeffs = Q.reduce(q)
        value = 1
        for j in range(1, s, 2):
            x = pow(zeta, j, q)
            y = 0
            for c in reversed(coeffs):
                y = (y * x + c) % q
            value = value * y % q
        moduli.append(q)
        residues.append(value)

    residue, modulus = crt(moduli, residues)
    residue, modulus = int(residue), int(modulus)
    return residue - modulus if residue > modulus // 2 else residue
