"""
GAPFORGE Acceptance Runs

Runs the hand instance, the desk and strict profiles end to end, and the
resultant and Chebyshev audits, printing one line per check with timings.
Pass --skip-strict to leave out the strict profile.
"""

import math
import os
import random
import sys
import time
from fractions import Fraction

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gapforge.analytic import (
    audit_bad_primes,
    audit_resultant_bound,
    chebyshev_psi,
    chebyshev_theta,
    count_primes_in_ap,
    cyclotomic_pow2,
    resultant_int,
    subset_sum_poly,
)
from gapforge.forge import (
    ForgePolicy,
    audit_sum_count_bound,
    build_counterexample,
    forge_line,
    verify_counterexample,
    verify_line,
)
from gapforge.modmath import PrimeFieldCtx
from gapforge.params import Profile, RateSpec, derive_params

failures = 0


def check(label: str, ok: bool, detail: str = ""):
    global failures
    if not ok:
        failures += 1
    print(f"  {'✅' if ok else '❌'} {label}" + (f"  ({detail})" if detail else ""))


def timed(title: str):
    print(f"\n[{title}]")
    return time.perf_counter()


def done(start: float, limit: float):
    elapsed = time.perf_counter() - start
    check(f"runtime {elapsed:.2f}s < {limit:g}s", elapsed < limit)


def hand_instance():
    start = timed("hand instance p=17, n=8")
    field = PrimeFieldCtx(p=17, n=8, omega=2, m=2)
    [wit] = forge_line(field, 2, 0, [(0, 1)], Fraction(1, 2))
    check("z = 12, codeword 13", wit.z == 12 and wit.codeword_poly.coeffs == (13,))
    checks = verify_line(field, 2, 0, [wit], 1, Fraction(1, 2), level="oracle")
    check("oracle level passes", all(c.status == "pass" for c in checks))
    done(start, 1)


def desk_profile():
    start = timed("desk profile s=16, n=64")
    ps = derive_params(1, RateSpec(1, 2), 4, Profile.DESK, m_override=4)
    cx = build_counterexample(ps, seed=7, policy=ForgePolicy(threads=os.cpu_count() or 1))
    check("p = 1 (mod 64) in [2^32, 2^48]", cx.p % 64 == 1 and 2**32 <= cx.p <= 2**48, f"p = {cx.p}")
    check("exhaustive audit, zero collisions", cx.sum_audit.mode == "exhaustive" and cx.sum_audit.collisions_found == 0)
    check("28 witnesses", cx.z_count == 28)
    check("certificate 20 < 24", cx.cert.max_joint_agreement_bound == 20 and cx.cert.required_agreement == 24)
    check("sum count bound", audit_sum_count_bound(ps, cx.sum_audit).ok)
    check("verify --level exhaustive", verify_counterexample(cx, "exhaustive").ok)
    done(start, 10)


def strict_profile():
    start = timed("strict profile s=64, n=256")
    ps = derive_params(1, RateSpec(1, 2), 6, Profile.STRICT)
    check("identities", ps.identities.ok and ps.K * ps.log2_n == ps.s)
    policy = ForgePolicy(threads=os.cpu_count() or 1)
    cx = build_counterexample(ps, seed=1, policy=policy)
    ratio = math.log(cx.p) / math.log(ps.n)
    check("p = 1 (mod 256) in [2^128, 2^192]", cx.p % 256 == 1 and 2**128 <= cx.p <= 2**192)
    check("ln p / ln n <= K ln 8", ratio <= ps.A_exp, f"{ratio:.4f} <= {ps.A_exp:.4f}")
    check(">= 256 distinct z", cx.z_count >= 256, f"{cx.z_count}")
    check(f"sampled sum audit, {policy.audit_samples} pairs, zero collisions",
          cx.sum_audit.mode == "sampled" and cx.sum_audit.collisions_found == 0)
    check("verify --level witness", verify_counterexample(cx, "witness", policy).ok)
    done(start, 300)


def resultant_audits():
    start = timed("resultant audits")
    check("Res(X^2+1, 1+x-x^2-x^3) = 8",
          resultant_int(cyclotomic_pow2(4), subset_sum_poly((0, 1), (2, 3), 4)) == 8)
    small = audit_resultant_bound(8, 2)
    check("s=8 r=2: 30 pairs, nonzero, <= 256", small.pairs_examined == 30 and small.ok)
    desk = audit_resultant_bound(16, 6, sample_count=1000, rng=random.Random(0))
    check("s=16 r=6: 1000 pairs <= 12^8", desk.ok)
    bad = audit_bad_primes(16, 6, sample_count=1000, rng=random.Random(0))
    check("B <= log_4 16, bad primes confirmed", bad.ok, f"max B = {bad.max_B}")
    done(start, 60)


def chebyshev():
    start = timed("Chebyshev functions")
    check("theta(10;4,1) = ln 5", abs(chebyshev_theta(10, 4, 1) - math.log(5)) < 1e-12)
    check("psi(10;4,1) = ln 15", abs(chebyshev_psi(10, 4, 1) - math.log(15)) < 1e-12)
    check("primes = 1 (mod 4) up to 100: 11", count_primes_in_ap(2, 100, 4, 1) == 11)
    rng = random.Random(0)
    ordered = True
    for _ in range(1000):
        x, n = rng.randint(2, 10**6), rng.choice([1, 2, 4, 8, 16, 64])
        a = rng.randrange(n)
        ordered &= chebyshev_psi(x, n, a) >= chebyshev_theta(x, n, a) - 1e-9
    check("psi >= theta on 1000 queries", ordered)
    done(start, 30)


def main():
    # Force utf-8 output for windows console
    if sys.platform == "win32":
        sys.stdout.reconfigure(encoding="utf-8")

    print("🔍 GAPFORGE acceptance runs")
    print("===========================")
    hand_instance()
    desk_profile()
    if "--skip-strict" not in sys.argv:
        strict_profile()
    resultant_audits()
    chebyshev()

    print(f"\n{'✅ all checks passed' if not failures else f'❌ {failures} check(s) failed'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
