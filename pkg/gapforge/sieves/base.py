"""
GAPFORGE Sieve Backend Base Class

Abstract base class for the prime sieves used by the analytic audits.
"""

import math
from abc import ABC, abstractmethod
from typing import Iterator, List, Sequence

from ..errors import BudgetError


class SieveBackend(ABC):
    """
    Abstract base class for sieve backends.

    A backend enumerates primes in [lo, hi] segment by segment; every query
    is bounded by `limit`.
    """

    backend_name = "abstract"

    def __init__(self, limit: int, segment_size: int = 1 << 22):
        """
        Initialize the backend.

        Args:
            limit: largest integer any query may reach
            segment_size: integers covered per segment
        """
        self.limit = limit
        self.segment_size = segment_size

    @abstractmethod
    def base_primes(self, bound: int) -> Sequence[int]:
        """All primes <= bound (bound is at most sqrt(limit) in practice)."""
        pass

    @abstractmethod
    def segment_primes(self, lo: int, hi: int, base: Sequence[int]) -> Sequence[int]:
        """Primes in [lo, hi) given every prime <= sqrt(hi - 1) in `base`."""
        pass

    # -------------------------------------------------------------------------
    # Queries
    # -------------------------------------------------------------------------

    def _check(self, hi: int):
        if hi > self.limit:
            raise BudgetError(f"{hi} exceeds sieve limit {self.limit}")

    def iter_segments(self, lo: int, hi: int) -> Iterator[Sequence[int]]:
        """Primes in [lo, hi], one sorted chunk per segment."""
        self._check(hi)
        lo = max(lo, 2)
        if lo > hi:
            return
        base = self.base_primes(math.isqrt(hi))
        start = lo
        while start <= hi:
            stop = min(start + self.segment_size, hi + 1)
            yield self.segment_primes(start, stop, base)
            start = stop

    def primes_in_range(self, lo: int, hi: int) -> List[int]:
        primes: List[int] = []
        for chunk in self.iter_segments(lo, hi):
            primes.extend(int(q) for q in chunk)
        return primes

    def count_in_progression(self, lo: int, hi: int, n: int, a: int) -> int:
        """#{q prime in [lo, hi] : q = a (mod n)}."""
        a %= n
        return sum(sum(1 for q in chunk if q % n == a) for chunk in self.iter_segments(lo, hi))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(limit={self.limit})"
