from fractions import Fraction
from math import comb

import mpmath
import pytest

from voronoi_bounds import constants as C


def test_gamma_and_s():
    assert C.gamma_bound(2) == Fraction(3, 2)
    assert C.gamma_bound(4) == 2
    assert C.gamma_bound(17) == Fraction(21, 4)
    assert [C.s_bound(n) for n in (2, 4, 17)] == [3, 15, 131071]


def test_a_const_examples():
    assert C.a_const(2) == 3
    assert C.a_const(3) == 21
    assert C.a_const(4) == 256


@pytest.mark.parametrize("n", range(2, 12))
def test_a_const_is_least_integer_ceiling(n):
    a = C.a_const(n)
    exact_sq = C.a_exact_squared(n)
    assert a * a >= exact_sq > (a - 1) ** 2
    # independent float route
    approx = n ** (n - 1) * (1 + n / 4) ** (n / 2)
    assert a - 1 < approx * (1 + 1e-12) and a >= approx * (1 - 1e-12)


def test_b_const():
    assert C.b_const(2) == Fraction(49, 2)
    assert C.b_const(3) == Fraction(79507, 2)
    assert C.b_const(4) == Fraction(513**4, 2)


def test_c_const_examples():
    assert C.c_const(0, 2) == 25
    assert C.c_const(1, 2) == 288
    assert C.c_const(1, 2, b_mode="ceil") == comb(25, 2)


@pytest.mark.parametrize("k", range(0, 6))
@pytest.mark.parametrize("n", [2, 3])
def test_ceil_mode_dominates_exact(k, n):
    assert C.c_const(k, n, "ceil") >= C.c_const(k, n, "exact")


def test_f_const():
    assert C.f_const(1, 2) == 3
    assert C.f_const(2, 4) == 105
    assert C.f_const(0, 7) == 1
    assert C.f_const(4, 2) == 0


def test_monotone_in_n():
    assert all(C.a_const(n) <= C.a_const(n + 1) for n in range(2, 12))
    assert all(C.b_const(n) <= C.b_const(n + 1) for n in range(2, 12))
    assert all(C.f_const(3, n) <= C.f_const(3, n + 1) for n in range(2, 12))


def test_h_small():
    h = C.h_const(1, 2)
    # l = 3 - 1 - 1 = 1, f(1,2) = 3, c(1,2) = 288
    assert h.extra["l"] == 1
    assert h.value == 3**288
    assert h.provenance if hasattr(h, "provenance") else True
    with pytest.raises(ValueError):
        C.h_const(2, 2)


def test_k1():
    k1 = C.k_const(1)
    assert k1.base == 35 and k1.extra["l"] == 4
    assert k1.multiplier == C.c_const(4, 3)


def test_v_is_k():
    assert C.v_const(3).ln == C.k_const(4).ln


def test_h_8_17_sizes():
    c = C.c_const(144, 17)
    assert 64_000 <= C.decimal_digits(c) <= 64_200
    f = C.f_const(144, 17)
    assert 480 <= C.decimal_digits(f) <= 495
    h = C.h_const(8, 17)
    shift = c.bit_length() - 200
    with mpmath.workdps(40):
        log10_c = mpmath.log10(c >> shift) + shift * mpmath.log10(2)
        ratio = mpmath.mpf(h.log10) / (mpmath.power(10, log10_c) * mpmath.log10(f))
    assert abs(ratio - 1) < mpmath.mpf(10) ** -25


def test_decimal_digits_matches_str():
    for x in (0, 9, 10, 99999, 10**50, 3**1000):
        assert C.decimal_digits(x) == len(str(x))


def test_certified_precision_is_stable():
    a = C.k_const(3, digits=25)
    b = C.k_const(3, digits=50)
    assert b.ln.startswith(a.ln[:20])


def test_epsilon():
    with mpmath.workdps(40):
        l2 = mpmath.log(2)
        e1 = 4 * l2 + 14 + 8 * l2 + 22 + 7 * l2 + mpmath.mpf(31) / 2 + 3 * l2 + mpmath.mpf(7) / 2 * l2 + 5
        assert abs(C.epsilon_poly(1) - e1) < mpmath.mpf(10) ** -25
        assert C.epsilon_poly(6) <= 8 * 6**4 * mpmath.log(6)
        assert C.epsilon_poly(10) > C.epsilon_poly(6)


@pytest.mark.parametrize("m", [6, 7])
def test_lemma2(m):
    rep = C.lemma2_check(m)
    assert rep["ok"], rep


def test_lemma2_requires_m_ge_6():
    with pytest.raises(ValueError):
        C.lemma2_check(5)


def test_lemma2_lhs_increasing():
    vals = [mpmath.mpf(C.lemma2_check(m)["lnln_k"]) for m in (6, 7, 8)]
    assert vals == sorted(vals)


def test_vandiver_bound_n5():
    rep = C.vandiver_bound_check(5)
    assert rep["ok"]
    assert abs(float(rep["lnln_v"]) / 1.4e5 - 1) < 0.1


def test_hermite_power():
    assert C.hermite_power(4, exact=True) == 4
    assert C.hermite_power(4) == 16
    with pytest.raises(ValueError):
        C.hermite_power(9, exact=True)


def test_precision_floor():
    with pytest.raises((ValueError, C.PrecisionError)):
        C.k_const(2, digits=10)
