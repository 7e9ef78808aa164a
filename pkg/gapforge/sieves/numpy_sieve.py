"""
GAPFORGE numpy Sieve

Odd-only segmented sieve of Eratosthenes with vectorised strided clears.
"""

import math
from typing import Sequence

import numpy as np

from .base import SieveBackend


def simple_sieve(limit: int) -> np.ndarray:
    """Primes <= limit as int64."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if is_prime[q]:
            is_prime[q * q::q] = False
    return np.flatnonzero(is_prime).astype(np.int64)


class NumpySieve(SieveBackend):
    """Segmented sieve over odd numbers backed by numpy boolean masks."""

    backend_name = "numpy"

    def base_primes(self, bound: int) -> np.ndarray:
        return simple_sieve(bound)

    def segment_primes(self, lo: int, hi: int, base: Sequence[int]) -> np.ndarray:
        found = [np.array([2], dtype=np.int64)] if lo <= 2 < hi else []

        low = max(lo, 3)
        if low % 2 == 0:
            low += 1
        if low >= hi:
            return np.concatenate(found) if found else np.array([], dtype=np.int64)

        odd_count = (hi - low + 1) // 2
        mask = np.ones(odd_count, dtype=bool)
        for q in base:
            q = int(q)
            if q == 2:
                continue
            q2 = q * q
            if q2 >= hi:
                break
            start = max(q2, (low + q - 1) // q * q)
            if start % 2 == 0:
                start += q
            if start >= hi:
                continue
            mask[(start - low) // 2::q] = False

        found.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        return np.concatenate(found)

    def count_in_progression(self, lo: int, hi: int, n: int, a: int) -> int:
        a %= n
        return int(sum(np.count_nonzero(chunk % n == a) for chunk in self.iter_segments(lo, hi)))

    def primes_array(self, lo: int, hi: int) -> np.ndarray:
        """Primes in [lo, hi] as one int64 array."""
        chunks = list(self.iter_segments(lo, hi))
        return np.concatenate(chunks) if chunks else np.array([], dtype=np.int64)
