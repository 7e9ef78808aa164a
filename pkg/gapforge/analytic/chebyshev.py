"""
GAPFORGE Chebyshev Functions

theta(x; n, a) = sum of ln q over primes q <= x, q = a (mod n), and
psi(x; n, a) = sum of the von Mangoldt weight over prime powers q^j <= x in
the same class, both read from a sieve table that grows on demand up to the
configured limit.
"""

import logging
import math
import random
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sympy import totient

from ..config import DEFAULT_SIEVE_LIMIT
from ..errors import BudgetError, InvariantViolation, ParameterError
from ..sieves import NumpySieve, PythonSieve, SieveBackend


logger = logging.getLogger(__name__)

MIN_TABLE = 1 << 16


# =============================================================================
# Sieve Table
# =============================================================================

def _trial_division_is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    return all(x % d for d in range(3, math.isqrt(x) + 1, 2))


@dataclass(frozen=True, eq=False)
class SieveTable:
    """Sorted primes <= limit."""
    limit: int
    primes: np.ndarray

    @classmethod
    def build(cls, limit: int, backend: Optional[SieveBackend] = None) -> "SieveTable":
        backend = backend or NumpySieve(limit)
        if isinstance(backend, NumpySieve):
            primes = backend.primes_array(2, limit)
        else:
            primes = np.asarray(backend.primes_in_range(2, limit), dtype=np.int64)
        return cls(limit=limit, primes=primes)

    def is_prime(self, x: int) -> bool:
        if not 0 <= x <= self.limit:
            raise BudgetError(f"{x} outside sieve table [0, {self.limit}]")
        i = int(np.searchsorted(self.primes, x))
        return i < len(self.primes) and int(self.primes[i]) == x

    def upto(self, x: int) -> np.ndarray:
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]

    def spot_check(self, samples: int = 200, rng: Optional[random.Random] = None) -> bool:
        """Compare the table with trial division on random integers."""
        rng = rng or random.Random(self.limit)
        return all(self.is_prime(x) == _trial_division_is_prime(x)
                   for x in (rng.randint(0, self.limit) for _ in range(samples)))


_table: Optional[SieveTable] = None
_table_lock = threading.Lock()


def get_table(x: int, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> SieveTable:
    """
    Shared table covering x.

    Built by one writer under a lock and only ever replaced by a larger one;
    readers keep whatever table they were handed.
    """
    global _table
    if x > sieve_limit:
        raise BudgetError(f"x = {x} exceeds sieve limit {sieve_limit}")
    with _table_lock:
        if _table is None or _table.limit < x:
            size = min(max(x, MIN_TABLE, 2 * (_table.limit if _table else 0)), sieve_limit)
            logger.debug("building sieve table to %d", size)
            _table = SieveTable.build(size)
        return _table


# =============================================================================
# Chebyshev Functions
# =============================================================================

def _in_class(primes: np.ndarray, n: int, a: int) -> np.ndarray:
    if n < 1:
        raise ParameterError(["n < 1"])
    return primes[primes % n == a % n]


def chebyshev_theta(x: float, n: int = 1, a: int = 0, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> float:
    """theta(x; n, a), natural log."""
    x = math.floor(x)
    if x < 2:
        return 0.0
    primes = _in_class(get_table(x, sieve_limit).upto(x), n, a)
    return math.fsum(np.log(primes.astype(np.float64)).tolist())


def prime_power_excess(x: float, n: int = 1, a: int = 0, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> float:
    """psi - theta: ln q summed over q^j <= x, j >= 2, q^j = a (mod n)."""
    x = math.floor(x)
    if x < 4:
        return 0.0
    if n < 1:
        raise ParameterError(["n < 1"])
    terms = []
    for q in get_table(x, sieve_limit).upto(math.isqrt(x)).tolist():
        power = q * q
        while power <= x:
            if power % n == a % n:
                terms.append(math.log(q))
            power *= q
    return math.fsum(terms)


def chebyshev_psi(x: float, n: int = 1, a: int = 0, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> float:
    """psi(x; n, a), natural log."""
    return chebyshev_theta(x, n, a, sieve_limit) + prime_power_excess(x, n, a, sieve_limit)


# =============================================================================
# Primes in Progressions
# =============================================================================

def count_primes_in_ap(
    lo: int,
    hi: int,
    n: int,
    a: int,
    sieve_limit: int = DEFAULT_SIEVE_LIMIT,
    backend: Optional[SieveBackend] = None,
    cross_check: bool = False,
) -> int:
    """
    Exact #{q prime in [lo, hi] : q = a (mod n)} by segmented sieve.

    With cross_check the numpy and pure-Python backends must agree.
    """
    if n < 1:
        raise ParameterError(["n < 1"])
    if lo > hi:
        return 0
    if hi > sieve_limit:
        raise BudgetError(f"hi = {hi} exceeds sieve limit {sieve_limit}")

    backend = backend or NumpySieve(sieve_limit)
    count = backend.count_in_progression(lo, hi, n, a)
    if cross_check:
        other = PythonSieve(sieve_limit) if isinstance(backend, NumpySieve) else NumpySieve(sieve_limit)
        second = other.count_in_progression(lo, hi, n, a)
        if second != count:
            raise InvariantViolation(f"sieve backends disagree on [{lo}, {hi}]: {count} != {second}")
    return count


def euler_phi(n: int) -> int:
    if n < 1:
        raise ParameterError(["n < 1"])
    return int(totient(n))
