import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from gapforge.errors import InsufficientSumsError, ParameterError, SearchFailure
from gapforge.forge import (
    ForgePolicy,
    SumAudit,
    agreement_indices,
    audit_subset_sums,
    audit_sum_count_bound,
    build_counterexample,
    enumerate_lambda,
    find_good_prime,
    forge_line,
    verify_counterexample,
    verify_line,
    witness_target,
)
from gapforge.modmath import PrimeFieldCtx
from gapforge.poly import DensePoly


def _colliding_field() -> PrimeFieldCtx:
    """F_17 with n = 16, m = 1: 28 two-subsets of eight values cannot have distinct sums mod 17."""
    return PrimeFieldCtx(p=17, n=16, omega=3, m=1)


def _tamper_witness(cx, index, **changes):
    witnesses = list(cx.witnesses)
    witnesses[index] = dataclasses.replace(witnesses[index], **changes)
    return dataclasses.replace(cx, witnesses=tuple(witnesses))


# =============================================================================
# Hand Instance over F_17
# =============================================================================

def test_tiny_line_witness(tiny_field, tiny_delta):
    [wit] = forge_line(tiny_field, 2, 0, [(0, 1)], tiny_delta)
    assert wit.z == 12
    assert wit.codeword_poly == DensePoly.constant(13, 17)
    assert wit.agreement_exponents == (0, 1, 4, 5)


def test_tiny_line_verifies_with_oracles(tiny_field, tiny_delta):
    witnesses = forge_line(tiny_field, 2, 0, [(0, 1)], tiny_delta)
    checks = verify_line(tiny_field, 2, 0, witnesses, 1, tiny_delta, level="oracle")
    assert all(check.status == "pass" for check in checks)
    names = {check.name for check in checks}
    assert {"oracle.distance", "oracle.g_agreement", "certificate"} <= names
    oracle = next(check for check in checks if check.name == "oracle.g_agreement")
    assert oracle.measured["g_agreement"] == 2


def test_agreement_indices(tiny_field):
    assert agreement_indices(tiny_field, (0, 1)) == (0, 1, 4, 5)
    assert agreement_indices(tiny_field, (3,)) == (3, 7)


# =============================================================================
# Sum Audit and Lambda Enumeration
# =============================================================================

def test_audit_detects_collisions():
    audit = audit_subset_sums(_colliding_field(), 2)
    assert audit.mode == "exhaustive"
    assert audit.subsets_examined == 28
    assert audit.collisions_found == 28 - audit.distinct_sums > 0


def test_sampled_audit_counts_pairs():
    audit = audit_subset_sums(_colliding_field(), 2, exhaustive_budget=10, samples=200, rng=random.Random(0))
    assert audit.mode == "sampled"
    assert audit.subsets_examined == 400
    assert audit.pairs_compared == audit.collisions_found + audit.distinct_sums
    assert audit.collisions_found > 0


def test_enumerate_lambda_runs_out():
    with pytest.raises(InsufficientSumsError) as excinfo:
        enumerate_lambda(_colliding_field(), 2, 28)
    assert excinfo.value.found < 28
    assert excinfo.value.exit_code == 3


def test_enumerate_lambda_rejects_oversized_target(tiny_field):
    with pytest.raises(ParameterError):
        enumerate_lambda(tiny_field, 2, 2)


def test_enumerate_lambda_is_lexicographic():
    choices = enumerate_lambda(_colliding_field(), 2, 3)
    assert choices[0].subset == (0, 1)
    assert [c.subset for c in choices] == sorted(c.subset for c in choices)
    assert len({c.lam for c in choices}) == 3


# =============================================================================
# Prime Search
# =============================================================================

def test_search_exhausted(desk_params):
    with pytest.raises(SearchFailure) as excinfo:
        find_good_prime(desk_params, seed=1, policy=ForgePolicy(max_candidates=0))
    assert excinfo.value.seed == 1


def test_search_finds_congruent_prime(desk_params):
    result = find_good_prime(desk_params, seed=3, policy=ForgePolicy(strategy="sequential"))
    lo, hi = desk_params.prime_interval()
    assert lo <= result.p <= hi
    assert result.p % desk_params.n == 1
    assert result.audit.collisions_found == 0
    assert result.log.strategy == "sequential"


# =============================================================================
# Desk Counterexample
# =============================================================================

def test_desk_counterexample_shape(desk_counterexample):
    cx = desk_counterexample
    assert cx.z_count == len(cx.witnesses) == 28
    assert all(len(w.agreement_exponents) == 24 for w in cx.witnesses)
    assert all(w.claimed_delta == Fraction(10, 16) for w in cx.witnesses)
    assert len({w.z for w in cx.witnesses}) == 28
    assert cx.cert.max_joint_agreement_bound == 20
    assert cx.cert.required_agreement == 24
    assert cx.sum_audit.mode == "exhaustive"


@pytest.mark.parametrize("level", ["witness", "exhaustive"])
def test_desk_counterexample_verifies(desk_counterexample, level):
    report = verify_counterexample(desk_counterexample, level)
    assert report.ok, [c.name for c in report.failures()]


def test_desk_oracle_is_skipped(desk_counterexample):
    report = verify_counterexample(desk_counterexample, "oracle")
    assert report.ok
    assert report.get("oracle.distance").status == "skip"
    assert "exceeds oracle budget" in report.get("oracle.g_agreement").detail


def test_unknown_level(desk_counterexample):
    with pytest.raises(ParameterError):
        verify_counterexample(desk_counterexample, "thorough")


def test_same_seed_same_counterexample(desk_params, desk_counterexample):
    again = build_counterexample(desk_params, seed=7, policy=ForgePolicy(threads=4))
    assert again == desk_counterexample


def test_preset_field(desk_params, desk_counterexample):
    cx = build_counterexample(desk_params, seed=7, field_ctx=desk_counterexample.field_ctx())
    assert cx.p == desk_counterexample.p
    assert cx.prime_search_log.strategy == "preset"
    assert cx.witnesses == desk_counterexample.witnesses


def test_preset_field_must_match(desk_params, tiny_field):
    with pytest.raises(ParameterError):
        build_counterexample(desk_params, field_ctx=tiny_field)


# =============================================================================
# Tampering
# =============================================================================

def test_tampered_z_count(desk_counterexample):
    report = verify_counterexample(dataclasses.replace(desk_counterexample, z_count=27))
    assert not report.ok
    assert report.get("z.distinct_count").status == "fail"


def test_tampered_agreement_index(desk_counterexample):
    indices = list(desk_counterexample.witnesses[3].agreement_exponents)
    indices[5] += 1
    report = verify_counterexample(_tamper_witness(desk_counterexample, 3, agreement_exponents=tuple(indices)))
    assert not report.ok
    assert any(c.name.startswith("witness[3].") for c in report.failures())
    assert report.get("witnesses").status == "fail"


def test_truncated_agreement_with_inflated_delta(desk_counterexample):
    wit = desk_counterexample.witnesses[0]
    cx = _tamper_witness(desk_counterexample, 0, agreement_exponents=wit.agreement_exponents[:1],
                         claimed_delta=Fraction(63, 64))
    report = verify_counterexample(cx, "exhaustive")
    assert not report.ok
    assert report.get("witness[0].claimed_delta").status == "fail"


def test_truncated_agreement_set(desk_counterexample):
    wit = desk_counterexample.witnesses[0]
    report = verify_counterexample(_tamper_witness(desk_counterexample, 0,
                                                   agreement_exponents=wit.agreement_exponents[:-1]))
    assert not report.ok
    assert "insufficient agreement set: 23 < 24" in report.get("witness[0].agreement").detail


def test_tampered_claimed_delta(desk_counterexample):
    report = verify_counterexample(_tamper_witness(desk_counterexample, 5, claimed_delta=Fraction(3, 4)))
    assert not report.ok
    assert report.get("witness[5].claimed_delta").status == "fail"


@pytest.mark.parametrize("edit", [
    lambda tag: (99,) + tag[1:],
    lambda tag: (-1,) + tag[1:],
    lambda tag: (),
    lambda tag: tag[:-1],
    lambda tag: tuple(reversed(tag)),
    lambda tag: (tag[0],) + tag[:-1],
    lambda tag: tag[:-1] + (8,),
])
def test_malformed_tag_is_reported(desk_counterexample, edit):
    tag = desk_counterexample.witnesses[0].xi_exponents
    report = verify_counterexample(_tamper_witness(desk_counterexample, 0, xi_exponents=edit(tag)))
    assert not report.ok
    assert report.get("witness[0].tag").status == "fail"


def test_swapped_tag_fails_z(desk_counterexample):
    first, second = desk_counterexample.witnesses[:2]
    report = verify_counterexample(_tamper_witness(desk_counterexample, 0, xi_exponents=second.xi_exponents))
    assert first.xi_exponents != second.xi_exponents
    assert report.get("witness[0].z").status == "fail"


@given(index=st.integers(min_value=0, max_value=27), position=st.integers(min_value=0, max_value=23),
       bit=st.integers(min_value=0, max_value=7))
def test_any_agreement_bit_flip_is_caught(desk_counterexample, index, position, bit):
    indices = list(desk_counterexample.witnesses[index].agreement_exponents)
    indices[position] ^= 1 << bit
    report = verify_counterexample(_tamper_witness(desk_counterexample, index, agreement_exponents=tuple(indices)))
    assert not report.ok
    assert report.get("witnesses").status == "fail"
    assert any(c.name.startswith(f"witness[{index}].") for c in report.failures())


def test_tampered_prime(desk_counterexample):
    report = verify_counterexample(dataclasses.replace(desk_counterexample, p=desk_counterexample.p + 64))
    assert not report.ok
    assert {"prime.probable", "field.omega_order"} & {c.name for c in report.failures()}


@given(index=st.integers(min_value=0, max_value=27), bit=st.integers(min_value=0, max_value=40))
def test_any_z_bit_flip_is_caught(desk_counterexample, index, bit):
    wit = desk_counterexample.witnesses[index]
    report = verify_counterexample(_tamper_witness(desk_counterexample, index, z=wit.z ^ (1 << bit)))
    assert not report.ok
    assert report.get(f"witness[{index}].z").status == "fail"


@given(index=st.integers(min_value=0, max_value=27), bit=st.integers(min_value=0, max_value=40),
       position=st.integers(min_value=0, max_value=16))
def test_any_codeword_bit_flip_is_caught(desk_counterexample, index, bit, position):
    wit = desk_counterexample.witnesses[index]
    coeffs = list(wit.codeword_poly.coeffs) + [0] * (17 - len(wit.codeword_poly.coeffs))
    coeffs[position] ^= 1 << bit
    poly = DensePoly(tuple(coeffs), wit.codeword_poly.p)
    if poly == wit.codeword_poly:
        return
    report = verify_counterexample(_tamper_witness(desk_counterexample, index, codeword_poly=poly))
    assert report.get(f"witness[{index}].agreement").status == "fail"


# =============================================================================
# Sum Count Bound
# =============================================================================

def test_sum_count_bound_desk(desk_params, desk_counterexample):
    verdict = audit_sum_count_bound(desk_params, desk_counterexample.sum_audit)
    assert verdict.ok
    assert verdict.lower_bound == Fraction(4, 3) ** 6
    assert verdict.subset_count == 28


def test_sum_count_bound_sampled_is_noted(desk_params):
    verdict = audit_sum_count_bound(desk_params, SumAudit("sampled", 20, 0, 10, 10))
    assert verdict.ok
    assert "not applicable" in verdict.detail


def test_sum_count_bound_exhaustive_shortfall(desk_params):
    verdict = audit_sum_count_bound(desk_params, SumAudit("exhaustive", 28, 23, 5))
    assert not verdict.ok


def test_sum_count_bound_strict_needs_n_to_C(strict_params):
    verdict = audit_sum_count_bound(strict_params, SumAudit("sampled", 20, 0, 10, 10), collected=255)
    assert not verdict.ok
    assert verdict.required == 256


def test_witness_target(desk_params, strict_params):
    assert witness_target(desk_params, 4) == 28
    assert witness_target(strict_params, 100) == 256
    assert witness_target(strict_params, 4096) == 4096


# =============================================================================
# Strict Profile
# =============================================================================

@pytest.mark.slow
def test_strict_counterexample(strict_params):
    policy = ForgePolicy(audit_samples=2000, witness_budget=256, threads=2)
    cx = build_counterexample(strict_params, seed=1, policy=policy)
    assert cx.z_count >= 256
    assert cx.sum_audit.mode == "sampled"
    assert all(len(w.agreement_exponents) == 72 for w in cx.witnesses)
    report = verify_counterexample(cx, "witness", policy)
    assert report.ok, [c.name for c in report.failures()]
    assert report.get("z.strict_target").passed
    assert report.get("prime.exponent_bound").measured["ratio"] <= strict_params.A_exp
