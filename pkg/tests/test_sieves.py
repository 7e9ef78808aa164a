import pytest
from hypothesis import given
import hypothesis.strategies as st
from sympy import primerange

from gapforge.errors import BudgetError
from gapforge.sieves import BACKENDS, NumpySieve, PythonSieve, get_backend
from gapforge.sieves.numpy_sieve import simple_sieve


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    # small segments so every query crosses segment boundaries
    return BACKENDS[request.param](limit=10**6, segment_size=1000)


def test_simple_sieve():
    assert simple_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_sieve(1).tolist() == []


def test_primes_in_range_matches_sympy(backend):
    assert backend.primes_in_range(0, 20_000) == list(primerange(0, 20_001))


@pytest.mark.parametrize("lo, hi", [(2, 2), (3, 3), (4, 4), (0, 1), (999_000, 1_000_000), (17, 18)])
def test_edge_ranges(backend, lo, hi):
    assert backend.primes_in_range(lo, hi) == list(primerange(lo, hi + 1))


@given(lo=st.integers(min_value=0, max_value=200_000), width=st.integers(min_value=0, max_value=5000))
def test_backends_agree(lo, width):
    hi = lo + width
    numpy_primes = NumpySieve(10**6, segment_size=777).primes_in_range(lo, hi)
    python_primes = PythonSieve(10**6, segment_size=1024).primes_in_range(lo, hi)
    assert numpy_primes == python_primes == list(primerange(lo, hi + 1))


def test_count_in_progression(backend):
    assert backend.count_in_progression(2, 100, 4, 1) == 11
    assert backend.count_in_progression(2, 100, 4, 3) == 13
    assert backend.count_in_progression(0, 10**5, 64, 1) == sum(1 for q in primerange(2, 10**5 + 1) if q % 64 == 1)


def test_limit_is_enforced(backend):
    with pytest.raises(BudgetError):
        backend.primes_in_range(0, 10**6 + 1)


def test_get_backend():
    assert isinstance(get_backend("python", 100), PythonSieve)
    assert get_backend("numpy", 100).limit == 100
    with pytest.raises(ValueError):
        get_backend("wheel")
