"""
GAPFORGE Pure-Python Sieve

bytearray segmented sieve; the independent second opinion for numpy counts.
"""

import math
from typing import List, Sequence

from .base import SieveBackend


class PythonSieve(SieveBackend):
    backend_name = "python"

    def base_primes(self, bound: int) -> List[int]:
        if bound < 2:
            return []
        flags = bytearray([1]) * (bound + 1)
        flags[0] = flags[1] = 0
        for q in range(2, math.isqrt(bound) + 1):
            if flags[q]:
                flags[q * q::q] = bytes(len(range(q * q, bound + 1, q)))
        return [i for i, flag in enumerate(flags) if flag]

    def segment_primes(self, lo: int, hi: int, base: Sequence[int]) -> List[int]:
        size = hi - lo
        flags = bytearray([1]) * size
        for q in base:
            if q * q >= hi:
                break
            start = max(q * q, (lo + q - 1) // q * q)
            if start < hi:
                flags[start - lo::q] = bytes(len(range(start, hi, q)))
        return [lo + i for i, flag in enumerate(flags) if flag and lo + i >= 2]
