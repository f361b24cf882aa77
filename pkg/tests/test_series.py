import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumkit import (
    INF,
    BadConstantTerm,
    SeriesMatrix,
    SingularConstantTerm,
    TruncSeries,
    ZeroConstantTerm,
    vp,
)

F = Fraction


def S(coeffs, trunc=None):
    return TruncSeries.from_coeffs(coeffs, trunc)


small_fractions = st.fractions(
    min_value=-20, max_value=20, max_denominator=12
)
series_strategy = st.lists(small_fractions, min_size=1, max_size=12).map(
    lambda cs: TruncSeries.from_coeffs(cs)
)
unit_series = st.lists(small_fractions, min_size=0, max_size=10).map(
    lambda cs: TruncSeries.from_coeffs([F(1)] + cs)
)


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------


def test_mul_difference_of_squares():
    a = S([1, 1], 3)
    b = S([1, -1], 3)
    assert (a * b).coeffs == (F(1), F(0), F(-1))


def test_mul_identity():
    b = S([3, F(1, 2), 7], 5)
    assert (TruncSeries.one(5) * b).coeffs == b.coeffs


def test_mul_geometric_telescopes():
    geo = S([1] * 5)
    assert (geo * S([1, -1], 5)).coeffs == (F(1), 0, 0, 0, 0)


def test_mul_min_trunc():
    assert (S([1] * 7) * S([1] * 4)).trunc == 4


def naive_convolution(a, b, trunc):
    return [
        sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
        for k in range(trunc)
    ]


def test_mul_against_bruteforce_random_polys():
    rng = random.Random(7)
    for _ in range(200):
        a = [F(rng.randint(-9, 9)) for _ in range(rng.randint(1, 7))]
        b = [F(rng.randint(-9, 9)) for _ in range(rng.randint(1, 7))]
        trunc = min(len(a), len(b))
        got = S(a) * S(b)
        assert list(got.coeffs) == naive_convolution(a, b, trunc)


def test_every_operation_against_bruteforce_on_random_polys():
    # degree <= 6 integer polynomials, every operation replayed naively
    rng = random.Random(42)
    for _ in range(150):
        a = [rng.randint(-9, 9) for _ in range(rng.randint(1, 7))]
        b = [rng.randint(-9, 9) for _ in range(rng.randint(1, 7))]
        sa, sb = S(a), S(b)
        n = min(len(a), len(b))
        pad = lambda c, m: c + [0] * (m - len(c))
        assert list((sa + sb).coeffs) == [
            x + y for x, y in zip(pad(a, n), pad(b, n))
        ]
        assert list((sa - sb).coeffs) == [
            x - y for x, y in zip(pad(a, n), pad(b, n))
        ]
        assert list(sa.delta().coeffs) == [k * c for k, c in enumerate(a)]
        q = rng.randint(1, 4)
        sub = sa.substitute_power(q)
        assert all(
            sub.coeffs[e] == (a[e // q] if e % q == 0 else 0)
            for e in range(sub.trunc)
        )
        p = rng.choice([2, 3, 5, 7])
        cart = sa.cartier(p)
        assert all(
            cart.coeffs[i] == a[i * p] for i in range(cart.trunc)
        )
        pull = sa.cartier_pullback(p)
        assert all(
            pull.coeffs[e] == (a[e] if e % p == 0 else 0)
            for e in range(len(a))
        )


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------


def test_invert_geometric():
    assert S([1, -1], 6).invert().coeffs == (1, 1, 1, 1, 1, 1)


def test_invert_one():
    assert TruncSeries.one(4).invert().coeffs == (1, 0, 0, 0)


def test_invert_quintic_denominator():
    inv = S([1, -3125], 5).invert()
    assert inv.coeffs == tuple(F(3125) ** k for k in range(5))


def test_invert_zero_constant_term():
    with pytest.raises(ZeroConstantTerm):
        S([0, 1], 3).invert()


@given(series_strategy)
@settings(max_examples=80)
def test_invert_roundtrip(a):
    if a.constant_term == 0:
        return
    assert (a * a.invert()).coeffs == TruncSeries.one(a.trunc).coeffs


# ---------------------------------------------------------------------------
# delta, substitution, cartier
# ---------------------------------------------------------------------------


def test_delta_examples():
    assert TruncSeries.one(3).delta().is_zero()
    assert S([0, 1], 3).delta().coeffs == (0, 1, 0)
    assert S([1, 2, 3]).delta().coeffs == (0, 2, 6)


def test_substitute_power_identity():
    a = S([2, 3, 4])
    assert a.substitute_power(1).coeffs == a.coeffs


def test_substitute_power_cube():
    out = S([1, 1]).substitute_power(3)
    assert out.coeffs == (1, 0, 0, 1)
    assert out.trunc == 4


def test_substitute_power_doubling():
    out = S([1] * 5).substitute_power(2)
    assert out.trunc == 9
    assert out.coeffs[:5] == (1, 0, 1, 0, 1)
    assert out.coeffs == (1, 0, 1, 0, 1, 0, 1, 0, 1)


def test_cartier_all_ones_fixed_point():
    geo = S([1] * 7)
    out = geo.cartier(3)
    assert out.trunc == 3  # ceil(7/3)
    assert out.coeffs == (1, 1, 1)


def test_cartier_kills_z():
    assert S([0, 1]).cartier(2).is_zero()


def test_cartier_index_selection():
    assert S([1, 2, 3, 4, 5]).cartier(2).coeffs == (1, 3, 5)


def test_cartier_pullback_keeps_trunc():
    a = S([1, 2, 3, 4, 5, 6, 7])
    out = a.cartier_pullback(2)
    assert out.trunc == a.trunc
    assert out.coeffs == (1, 0, 3, 0, 5, 0, 7)
    assert out.agrees_with(a.cartier(2).substitute_power(2))


@given(series_strategy, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=120)
def test_cartier_twists_delta(a, p):
    # Lambda_p(delta(f)) = p * delta(Lambda_p(f))
    lhs = a.delta().cartier(p)
    rhs = a.cartier(p).delta() * p
    assert lhs.coeffs == rhs.coeffs


@given(series_strategy, series_strategy, st.sampled_from([2, 3, 5]))
@settings(max_examples=120)
def test_cartier_projection_formula(a, b, p):
    # Lambda_p(f * g(z^p)) = Lambda_p(f) * g
    prod = a * b.substitute_power(p).truncate(min(a.trunc, b.trunc))
    lhs = prod.cartier(p)
    rhs = a.cartier(p) * b
    n = min(lhs.trunc, rhs.trunc)
    assert lhs.coeffs[:n] == rhs.coeffs[:n]


# ---------------------------------------------------------------------------
# exp / log
# ---------------------------------------------------------------------------


def test_exp_zero():
    assert TruncSeries.zero(4).exp().coeffs == (1, 0, 0, 0)


def test_log_one():
    assert TruncSeries.one(4).log().is_zero()


def test_exp_770z():
    assert S([0, 770], 3).exp().coeffs == (1, 770, 296450)


def test_exp_against_bruteforce_sum():
    # exp(a) = sum a^k / k! computed by naive powering
    a = S([0, 2, F(-1, 3), 5], 8)
    acc = TruncSeries.one(8)
    power = TruncSeries.one(8)
    fact = 1
    for k in range(1, 8):
        power = power * a
        fact *= k
        acc = acc + power * F(1, fact)
    assert a.exp().coeffs == acc.coeffs


def test_exp_bad_constant_term():
    with pytest.raises(BadConstantTerm):
        TruncSeries.one(3).exp()
    with pytest.raises(BadConstantTerm):
        TruncSeries.zero(3).log()


@given(st.lists(small_fractions, min_size=0, max_size=9))
@settings(max_examples=80)
def test_exp_log_roundtrip(tail):
    a = TruncSeries.from_coeffs([F(0)] + tail)
    assert a.exp().log().coeffs == a.coeffs
    b = TruncSeries.from_coeffs([F(1)] + tail)
    assert b.log().exp().coeffs == b.coeffs


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


def test_vp_basics():
    assert vp(F(50), 5) == 2
    assert vp(F(1, 5), 5) == -1
    assert vp(F(0), 5) == INF
    assert INF > 10**9


def test_valuation_profile_integers():
    profile = S([1, 5], 4).valuation_profile(5)
    assert profile.min_valuation == 0
    assert profile.negative_valuations == ()
    assert profile.is_integral


def test_valuation_profile_single_denominator():
    profile = S([0, F(1, 5)]).valuation_profile(5)
    assert profile.min_valuation == -1
    assert profile.negative_valuations == ((1, -1),)


def test_valuation_profile_factor_six():
    a = S([1, F(1, 6)])
    assert a.valuation_profile(2).min_valuation == -1
    assert a.valuation_profile(5).min_valuation == 0


def test_valuation_profile_zero_series():
    profile = TruncSeries.zero(3).valuation_profile(7)
    assert profile.min_valuation == INF
    assert profile.is_integral


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def test_mat_invert_identity():
    eye = SeriesMatrix.identity(3, 5)
    assert eye.invert() == eye


def test_mat_invert_diagonal():
    m = SeriesMatrix.diagonal([1, 7], 4)
    inv = m.invert()
    assert inv.entry(0, 0).coeffs[0] == 1
    assert inv.entry(1, 1).coeffs[0] == F(1, 7)
    assert inv.entry(0, 1).is_zero()


def test_mat_invert_neumann_series():
    # (I + N z)^{-1} = I - N z + N^2 z^2 - ... for nilpotent N
    n = 3
    trunc = 6
    nilp = [[F(int(j == i + 1)) for j in range(n)] for i in range(n)]
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = [F(int(i == j)), nilp[i][j]]
            row.append(S(coeffs, trunc))
        entries.append(tuple(row))
    m = SeriesMatrix(tuple(entries))
    inv = m.invert()
    # N^2 has a single nonzero entry at (0, 2); N^3 = 0
    assert inv.entry(0, 1).coeffs[1] == -1
    assert inv.entry(0, 2).coeffs[2] == 1
    assert (m * inv) == SeriesMatrix.identity(n, trunc)


def test_mat_invert_singular():
    with pytest.raises(SingularConstantTerm):
        SeriesMatrix.diagonal([0, 1], 3).invert()


def test_mat_invert_random_roundtrip():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 4)
        trunc = rng.randint(1, 6)
        entries = tuple(
            tuple(
                S(
                    [F(int(i == j)) + F(rng.randint(-3, 3), rng.randint(1, 4))]
                    + [F(rng.randint(-4, 4)) for _ in range(trunc - 1)],
                )
                for j in range(n)
            )
            for i in range(n)
        )
        m = SeriesMatrix(entries)
        try:
            inv = m.invert()
        except SingularConstantTerm:
            continue
        assert m * inv == SeriesMatrix.identity(n, trunc)
        assert inv * m == SeriesMatrix.identity(n, trunc)


def test_matrix_det_and_profiles():
    m = SeriesMatrix.from_constant([[1, F(1, 3)], [0, F(5, 7)]], 3)
    d = m.det()
    assert d.coeffs[0] == F(5, 7)
    profile = m.valuation_profile(7)
    assert profile.min_valuation == -1
    assert profile.negative_valuations == ((0, -1),)


def test_matrix_ops_are_entrywise():
    m = SeriesMatrix.from_constant([[1, 2], [3, 4]], 4)
    z = S([0, 1], 4)
    shifted = m.map(lambda e: e * z)
    assert shifted.delta().entry(1, 0).coeffs == (0, 3, 0, 0)
    assert shifted.cartier(2).trunc == 2
    assert shifted.substitute_power(2).trunc == 7


def test_shift_extends_knowledge():
    a = S([1, 2, 3])
    out = a.shift(2)
    assert out.trunc == 5
    assert out.coeffs == (0, 0, 1, 2, 3)


def test_truncate_cannot_extend():
    with pytest.raises(ValueError):
        S([1, 2]).truncate(5)
