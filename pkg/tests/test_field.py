import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_simpson.errors import (
    CharacterAdmissibilityError,
    DivisionBelowPrecision,
    ExpDomainError,
    InvalidFieldConfig,
    LogDomainError,
)
from padic_simpson.field import (
    FieldConfig,
    ZpElement,
    binomial_zp,
    irreducible_mod_p,
    padic_exp,
    padic_log,
    zp_scalar_power,
)

F5 = FieldConfig(5, 10)
F12 = FieldConfig(5, 12)
QUAD = FieldConfig(3, 10, (1, 0, 1))  # x^2 + 1, unramified at 3
RAM = FieldConfig(3, 12, (3, 0, 1), "eisenstein")  # x^2 + 3


def exp_oracle(q, p, N, terms=80):
    """Exact rational partial sum of exp, enough terms to be exact mod p^N."""
    total, term = Fraction(0), Fraction(1)
    for k in range(terms):
        total += term
        term = term * q / (k + 1)
    return total


def log_oracle(q, terms=120):
    x = q - 1
    return sum(Fraction((-1) ** (k + 1)) * x ** k / k for k in range(1, terms))


# -- config ------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(4, 10)
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(5, 3)
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(5, 10, (1, 0, 1))  # x^2 + 1 splits mod 5
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(3, 10, (9, 0, 1), "eisenstein")
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(3, 10, (3, 1, 1), "eisenstein")
    with pytest.raises(InvalidFieldConfig):
        FieldConfig(11, 10, (2, 0, 1))  # residue field of size 121
    assert RAM.e == 2 and QUAD.e == 1 and QUAD.d == 2


def test_irreducibility_oracle():
    # brute force: a quadratic or cubic is irreducible iff it has no root mod p
    for p in (2, 3, 5):
        for a in range(p):
            for b in range(p):
                f = (a, b, 1)
                has_root = any((a + b * x + x * x) % p == 0 for x in range(p))
                assert irreducible_mod_p(f, p) == (not has_root)


# -- arithmetic ---------------------------------------------------------------

def test_arithmetic_examples():
    assert F5(1) + F5(1) == 2
    a = F5(Fraction(7, 3))
    assert (a - a).is_zero()
    inv = F5(1) / F5(6)
    assert inv * 6 == 1
    assert inv == F5(Fraction(1, 6))


def test_valuation_examples():
    assert F5(5).valuation() == 1
    assert F5(6).valuation() == 0
    assert RAM.uniformizer().valuation() == Fraction(1, 2)
    assert F5(0).valuation() == math.inf


def test_division_below_precision():
    tiny = F5(0, prec=4)
    with pytest.raises(DivisionBelowPrecision):
        F5(1) / tiny
    with pytest.raises(ZeroDivisionError):
        F5(1) / F5(0)


def test_division_precision_loss():
    b = F5(25 + 125)
    q = F5(1) / b
    # absolute precision drops by 2 v(b)
    assert q.prec == F5.precision - 2 * 2
    assert q.valuation() == -2


def test_extension_arithmetic():
    x = QUAD([0, 1])
    assert x * x == -1
    assert (1 + 3 * x).inverse() * (1 + 3 * x) == 1
    pi = RAM.uniformizer()
    assert pi * pi == -3
    assert pi.inverse() * pi == 1
    assert RAM(Fraction(1, 3)) * 3 == 1


def test_expansion_format():
    assert str(F5(6)) == "1 + 1*π + O(π^10)"
    assert str(F5(Fraction(1, 5))) == "1*π^-1 + O(π^10)"
    assert str(RAM(Fraction(1, 3))) == "2*π^-2 + 1 + O(π^12)"


def test_shift_is_exact():
    a = RAM(7)
    assert a.shift(3).shift(-3) == a
    assert RAM.uniformizer().shift(-1) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_valuation_is_a_valuation(a, b):
    x, y = F12(a), F12(b)
    vs = x + y
    if not vs.is_zero():
        assert vs.valuation() >= min(x.valuation(), y.valuation())
    if x.valuation() != y.valuation():
        assert vs.valuation() == min(x.valuation(), y.valuation())
    if a and b and x.valuation() + y.valuation() < F12.precision:
        assert (x * y).valuation() == x.valuation() + y.valuation()


@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_field_ops_match_rationals(a, b):
    x, y = F12(a), F12(b)
    assert x + y == F12(a + b)
    assert x * y == F12(a * b)
    if b:
        assert x / y == F12(a / b)


# -- log / exp -------------------------------------------------------------------

def test_log_exp_examples():
    assert padic_log(F12(1)).is_zero()
    assert padic_log(padic_exp(F12(5))) == 5
    assert padic_exp(F12(0)) == 1
    sq = F12(6) * F12(6)
    assert padic_log(sq) == padic_log(F12(6)) * 2


def test_exp_of_p_matches_rational_series():
    expected = F12(exp_oracle(Fraction(5), 5, 12))
    got = padic_exp(F12(5))
    assert got == expected
    assert got.prec >= 10


def test_log_matches_rational_series():
    expected = F12(log_oracle(Fraction(6)))
    assert padic_log(F12(6)) == expected


def test_domain_errors():
    with pytest.raises(LogDomainError):
        padic_log(F12(2))
    with pytest.raises(ExpDomainError):
        padic_exp(F12(1))
    with pytest.raises(ExpDomainError):
        # v(pi) = 1/2 is not above 1/(p-1) at p = 3
        padic_exp(RAM.uniformizer())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5 ** 6), st.integers(0, 5 ** 6))
def test_log_is_a_homomorphism(a, b):
    x, y = F12(1 + 5 * a), F12(1 + 5 * b)
    assert padic_log(x * y) == padic_log(x) + padic_log(y)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5 ** 6))
def test_exp_inverts_log(a):
    x = F12(1 + 5 * a)
    assert padic_exp(padic_log(x)) == x


def test_log_in_extensions():
    x = QUAD([0, 1])
    a, b = 1 + 3 * x, 1 + 9 * x + 3
    assert padic_log(a * b) == padic_log(a) + padic_log(b)
    pi = RAM.uniformizer()
    u = 1 + pi ** 3
    assert padic_exp(padic_log(u)) == u


# -- Z_p ------------------------------------------------------------------------------

def test_zp_element_digits():
    z = ZpElement(-1, 5, 4)
    assert z.digits == (4, 4, 4, 4)
    assert ZpElement.from_rational(Fraction(1, 1 - 5), 5, 4).digits == (1, 1, 1, 1)


def test_binomial_examples():
    assert binomial_zp(ZpElement(5, 5, 12), 2, F12) == 10
    assert binomial_zp(ZpElement(123, 5, 12), 0, F12) == 1
    minus_one = ZpElement(-1, 5, 12)
    # exact rational binomial at the integer -1
    oracle = Fraction(math.prod(-1 - i for i in range(3)), math.factorial(3))
    assert binomial_zp(minus_one, 3, F12) == F12(oracle)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 5 ** 12 - 1), st.integers(0, 6))
def test_binomial_integral(g, k):
    assert binomial_zp(ZpElement(g, 5, 12), k, F12).valuation() >= 0


def test_scalar_power_examples():
    lam = F12(6)
    assert zp_scalar_power(lam, ZpElement(0, 5, 12)) == 1
    assert zp_scalar_power(lam, ZpElement(2, 5, 12)) == F12(36)
    with pytest.raises(CharacterAdmissibilityError):
        zp_scalar_power(F12(2), ZpElement(1, 5, 12))


def test_scalar_power_limit():
    z = ZpElement.from_rational(Fraction(1, 1 - 5), 5, 12)
    got = zp_scalar_power(F12(6), z)
    # (1+p)^(1+p+...+p^m) stabilizes digit by digit
    s_m = sum(5 ** i for i in range(14))
    assert got == F12(6) ** s_m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 10))
def test_scalar_power_matches_integer_power(n):
    lam = F12(1 + 5 * 17)
    assert zp_scalar_power(lam, ZpElement(n, 5, 12)) == lam ** n


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5 ** 12 - 1), st.integers(0, 5 ** 12 - 1))
def test_scalar_power_group_law(a, b):
    lam = F12(1 + 5 * 3)
    za, zb = ZpElement(a, 5, 12), ZpElement(b, 5, 12)
    assert zp_scalar_power(lam, za + zb) == zp_scalar_power(lam, za) * zp_scalar_power(lam, zb)
