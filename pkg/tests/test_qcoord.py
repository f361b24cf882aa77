import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumkit import (
    BadNormalization,
    TruncSeries,
    canonical_coordinate,
    dieudonne_check,
    exp_integrality_check,
    n_integrality_report,
    omega_congruence_check,
)

F = Fraction


def S(coeffs, trunc=None):
    return TruncSeries.from_coeffs(coeffs, trunc)


# ---------------------------------------------------------------------------
# canonical coordinate
# ---------------------------------------------------------------------------


def test_q_of_trivial_pair():
    q = canonical_coordinate(TruncSeries.one(5), TruncSeries.zero(5))
    assert q.coeffs == (0, 1, 0, 0, 0, 0)


def test_q_quintic_prefix(quintic_row30):
    f, g = quintic_row30[0], quintic_row30[1]
    q = canonical_coordinate(f, g)
    assert q.trunc == 31
    assert q.coeffs[:4] == (0, 1, 770, 1014275)


def test_q_quintic_against_bruteforce_exp(quintic_row30):
    f = quintic_row30[0].truncate(12)
    g = quintic_row30[1].truncate(12)
    h = g * f.invert()
    acc = TruncSeries.one(12)
    power = TruncSeries.one(12)
    fact = 1
    for k in range(1, 12):
        power = power * h
        fact *= k
        acc = acc + power * F(1, fact)
    q = canonical_coordinate(f, g)
    assert q.coeffs[1:13] == acc.coeffs


def test_q_normalization():
    with pytest.raises(BadNormalization):
        canonical_coordinate(S([2, 1], 3), TruncSeries.zero(3))
    with pytest.raises(BadNormalization):
        canonical_coordinate(TruncSeries.one(3), S([1, 1], 3))


def test_q_scaling_consistency(quintic_row30):
    # replacing z by c z maps q(z) to (1/c) q(c z)
    c = F(3)
    f = quintic_row30[0].truncate(10)
    g = quintic_row30[1].truncate(10)
    scale = lambda s: TruncSeries(tuple(x * c**k for k, x in enumerate(s.coeffs)))
    q_scaled = canonical_coordinate(scale(f), scale(g))
    q = canonical_coordinate(f, g)
    expected = TruncSeries(
        tuple(x * c ** (k - 1) for k, x in enumerate(q.coeffs))
    )
    assert q_scaled == expected


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7),
                min_size=0, max_size=8))
@settings(max_examples=60)
def test_q_has_unit_linear_coefficient(tail):
    f = TruncSeries.from_coeffs([F(1)] + tail)
    g = TruncSeries.from_coeffs([F(0)] + tail[::-1])
    q = canonical_coordinate(f, g)
    assert q.coeffs[0] == 0
    assert q.coeffs[1] == 1


# ---------------------------------------------------------------------------
# Dieudonne
# ---------------------------------------------------------------------------


def test_dieudonne_constant_one():
    ok, profile = dieudonne_check(TruncSeries.one(6), 3)
    assert ok and profile.min_valuation >= 0


def test_dieudonne_geometric_series():
    # (1 - z^p) / (1 - z)^p = 1 mod p
    geo = S([1] * 12)
    for p in (2, 3, 5):
        ok, _ = dieudonne_check(geo, p)
        assert ok


def test_dieudonne_geometric_binomial_oracle():
    # direct check: ratio coefficients are binomial alternating sums
    geo = S([1] * 10)
    p = 3
    ratio = geo.pow_int(p) * geo.substitute_power(p).truncate(10).invert()
    # (1-z)^{-p} * ... recompute from scratch with integer binomials
    from math import comb

    direct_num = [F(comb(p + k - 1, k)) for k in range(10)]  # 1/(1-z)^p
    expansion = S(direct_num) * S([1] + [0] * (p - 1) + [-1], 10)
    assert ratio.coeffs == expansion.coeffs


def test_dieudonne_detects_denominator():
    for p in (2, 5):
        bad = S([1, F(1, p)], 4)
        ok, profile = dieudonne_check(bad, p)
        assert not ok
        assert profile.min_valuation < 0


def test_dieudonne_random_integer_series():
    rng = random.Random(17)
    for _ in range(30):
        coeffs = [1] + [rng.randint(-50, 50) for _ in range(9)]
        for p in (2, 3, 5):
            ok, _ = dieudonne_check(S(coeffs), p)
            assert ok


def test_dieudonne_requires_unit_constant():
    with pytest.raises(BadNormalization):
        dieudonne_check(S([2, 1], 3), 2)


# ---------------------------------------------------------------------------
# exponential integrality
# ---------------------------------------------------------------------------


def test_expint_zero():
    assert exp_integrality_check(TruncSeries.zero(5), 3)


def test_expint_p_times_z():
    p = 5
    h = S([0, p], 10)
    assert exp_integrality_check(h, p)
    # and exp(pz) - 1 is divisible by p coefficientwise
    e = h.exp()
    scaled = (e - TruncSeries.one(10)) * F(1, p)
    assert scaled.valuation_profile(p).is_integral


def test_expint_rejects_z_over_p():
    assert not exp_integrality_check(S([0, F(1, 5)], 6), 5)


def test_expint_requires_zero_constant():
    with pytest.raises(BadNormalization):
        exp_integrality_check(TruncSeries.one(4), 3)


# ---------------------------------------------------------------------------
# omega congruence
# ---------------------------------------------------------------------------


def test_omega_trivial():
    ok, _ = omega_congruence_check(TruncSeries.one(6), TruncSeries.zero(6), 5)
    assert ok


def test_omega_quintic_small(quintic_row30):
    f, g = quintic_row30[0], quintic_row30[1]
    for p in (7, 11):
        ok, profile = omega_congruence_check(f, g, p)
        assert ok, profile


def test_omega_rejects_denominator():
    # the offending term of g(z^p)/f(z^p) sits at z^p, so keep p < trunc
    ok, profile = omega_congruence_check(
        TruncSeries.one(5), S([0, F(1, 2)], 5), 2
    )
    assert not ok
    assert profile.min_valuation < 0


def test_omega_implies_exp_integrality(quintic_row30):
    # an omega congruence that holds forces exp(g/f) to stay p-integral
    f, g = quintic_row30[0], quintic_row30[1]
    for p in (7, 11, 13):
        ok, _ = omega_congruence_check(f, g, p)
        if ok:
            h = g * f.invert()
            assert h.exp().valuation_profile(p).is_integral


# ---------------------------------------------------------------------------
# N-integrality report
# ---------------------------------------------------------------------------


def test_report_integer_series():
    report = n_integrality_report(S([1, 2, 3], 5))
    assert report.bad_primes == ()
    assert report.suggested_N == 1
    assert report.per_prime == ()
    assert report.certified_trunc == 5
    assert report.unfactored_residue == 1


def test_report_powers_of_two():
    s = TruncSeries(tuple(F(1, 2**n) for n in range(8)))
    report = n_integrality_report(s)
    assert report.bad_primes == (2,)
    assert report.suggested_N == 2
    assert report.worst_valuations == ((2, -7),)
    assert report.per_prime[0][0] == 2
    assert report.per_prime[0][1].min_valuation == -7


def test_report_respects_prime_bound():
    s = S([1, F(1, 2), F(1, 101)], 4)
    report = n_integrality_report(s, prime_bound=10)
    assert report.bad_primes == (2, 101)
    assert report.suggested_N == 202
    assert [p for p, _ in report.per_prime] == [2]


def test_report_quintic_q_is_integral(quintic_row30):
    f, g = quintic_row30[0], quintic_row30[1]
    q = canonical_coordinate(f, g)
    report = n_integrality_report(q, subject="q(quintic)")
    assert report.bad_primes == ()
    assert report.suggested_N == 1


def test_report_same_bad_primes_with_or_without_z_shift(quintic_row30):
    f = quintic_row30[0].truncate(12)
    g = quintic_row30[1].truncate(12)
    e = (g * f.invert()).exp()
    assert (
        n_integrality_report(e).bad_primes
        == n_integrality_report(e.shift(1)).bad_primes
    )


def test_report_unfactored_residue_guard():
    p1, p2 = 1000003, 1000033
    s = S([1, F(1, p1 * p2)], 3)
    report = n_integrality_report(s)
    assert report.unfactored_residue == p1 * p2
    assert report.bad_primes == ()  # nothing below the cap divides it
