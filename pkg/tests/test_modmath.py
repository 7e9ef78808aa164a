import random

import pytest
from hypothesis import given
import hypothesis.strategies as st
from sympy import isprime

from gapforge.errors import DomainError, ParameterError
from gapforge.modmath import (
    PrimeFieldCtx,
    certify_order,
    coset_indices,
    fermat_self_test,
    field_arith,
    find_root_of_unity,
    is_probable_prime,
    subgroup_coset,
)


# =============================================================================
# Primality
# =============================================================================

@pytest.mark.parametrize("N, expected", [
    (2, True),
    (4294967311, True),
    (4294967297, False),   # 641 * 6700417
    (1, False),
    (561, False),          # Carmichael
    (2**61 - 1, True),
    (2**64 + 13, True),     # wide witness set
    (2**89 - 1, True),      # random witnesses
    (2**127 - 1, True),
    ((2**61 - 1) * (2**89 - 1), False),
])
def test_is_probable_prime(N, expected):
    assert is_probable_prime(N) is expected


@given(st.integers(min_value=0, max_value=10**7))
def test_is_probable_prime_matches_sympy(N):
    assert is_probable_prime(N) == isprime(N)


def test_is_probable_prime_is_repeatable():
    N = 2**255 - 19
    assert all(is_probable_prime(N, rounds=8) for _ in range(3))


# =============================================================================
# Field Arithmetic
# =============================================================================

def test_inverse_and_power(tiny_field):
    assert field_arith(tiny_field, "inv", 5) == 7
    assert field_arith(tiny_field, "pow", 2, 8) == 1
    assert field_arith(tiny_field, "mul", 11, 1) == 11


def test_inverse_of_zero(tiny_field):
    with pytest.raises(DomainError):
        tiny_field.inv(0)


def test_field_arith_rejects_unreduced(tiny_field):
    with pytest.raises(ParameterError):
        field_arith(tiny_field, "add", 17, 1)


@given(st.integers(min_value=1, max_value=16), st.integers(min_value=1, max_value=16))
def test_field_axioms_mod_17(a, b):
    ctx = PrimeFieldCtx(p=17, n=8, omega=2, m=2)
    assert ctx.mul(a, ctx.inv(a)) == 1
    assert ctx.add(ctx.sub(a, b), b) == a
    assert ctx.mul(a, b) == ctx.mul(b, a)


# =============================================================================
# Roots of Unity and Cosets
# =============================================================================

def test_known_roots_mod_17():
    assert certify_order(2, 8, 17)
    assert certify_order(3, 16, 17)
    assert not certify_order(4, 8, 17)


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_find_root_of_unity_mod_17(n):
    omega = find_root_of_unity(17, n, random.Random(1))
    assert certify_order(omega, n, 17)


def test_find_root_of_unity_rejects_non_divisor():
    with pytest.raises(ParameterError):
        find_root_of_unity(17, 3)
    with pytest.raises(ParameterError):
        find_root_of_unity(17, 32)


def test_context_validates_order():
    with pytest.raises(ParameterError):
        PrimeFieldCtx(p=17, n=8, omega=4, m=2)
    with pytest.raises(ParameterError):
        PrimeFieldCtx(p=15, n=2, omega=14)


def test_xi_ladder(tiny_field):
    assert tiny_field.s == 4
    assert tiny_field.xi == 4
    assert tiny_field.xi_powers == (1, 4, 16, 13)
    assert tiny_field.domain == (1, 2, 4, 8, 16, 15, 13, 9)


def test_subgroup_cosets(tiny_field):
    assert subgroup_coset(tiny_field, 0) == [1, 16]
    assert subgroup_coset(tiny_field, 1) == [2, 15]
    for a in subgroup_coset(tiny_field, 1):
        assert pow(a, 2, 17) == tiny_field.xi


def test_cosets_partition_the_domain(tiny_field):
    indices = sorted(t for j in range(tiny_field.s) for t in coset_indices(tiny_field, j))
    assert indices == list(range(tiny_field.n))


def test_single_coset_is_whole_domain():
    ctx = PrimeFieldCtx(p=17, n=8, omega=2, m=8)
    assert ctx.s == 1
    assert sorted(subgroup_coset(ctx, 0)) == sorted(ctx.domain)


def test_build_samples_valid_omega():
    p = 1 + 64 * 10**6
    while not is_probable_prime(p):
        p += 64
    ctx = PrimeFieldCtx.build(p, 64, 4, random.Random(3))
    assert certify_order(ctx.omega, 64, p)
    assert certify_order(ctx.xi, 16, p)
    assert fermat_self_test(ctx)
