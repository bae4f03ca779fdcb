from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quintic_acm.fields import (
    DEFAULT_PRIMES,
    CyclotomicElement,
    CyclotomicField,
    FieldMismatchError,
    ModularField,
    zdiv_exact,
    zmul,
    znorm,
)

small = st.integers(-6, 6)
zz = st.tuples(small, small, small, small)

Z = sympy.Symbol("z")
PHI5 = sympy.Poly(Z**4 + Z**3 + Z**2 + Z + 1, Z)


def as_poly(a):
    return sympy.Poly(sum(c * Z**e for e, c in enumerate(a)), Z)


def test_default_primes():
    assert len(set(DEFAULT_PRIMES)) == 3
    for p in DEFAULT_PRIMES:
        assert sympy.isprime(p)
        assert p % 5 == 1
        assert p < 2**26


def test_zeta_is_primitive_fifth_root():
    K = CyclotomicField()
    z = K.zeta()
    assert z**5 == K(1)
    assert all(z**e != K(1) for e in range(1, 5))
    assert sum((z**e for e in range(1, 5)), K(1)) == K(0)
    for p in DEFAULT_PRIMES:
        F = ModularField(p)
        assert (F.zeta() ** 5).value == 1 and F.zeta().value != 1


def test_modular_field_rejects_bad_primes():
    with pytest.raises(ValueError):
        ModularField(13)


def test_mixed_fields_raise():
    a, b = ModularField(11)(3), ModularField(31)(3)
    with pytest.raises(FieldMismatchError):
        a + b


@settings(max_examples=200, deadline=None)
@given(zz, zz)
def test_zmul_matches_polynomial_product_mod_cyclotomic(a, b):
    expected = (as_poly(a) * as_poly(b)).rem(PHI5)
    got = as_poly(zmul(a, b))
    assert (got - expected).rem(PHI5).is_zero


@settings(max_examples=100, deadline=None)
@given(zz)
def test_norm_is_resultant(a):
    # N(a) = Res(Phi_5, a(z)) for monic Phi_5
    assert znorm(a) == sympy.resultant(PHI5.as_expr(), as_poly(a).as_expr(), Z)


@settings(max_examples=100, deadline=None)
@given(zz, zz)
def test_exact_division(a, b):
    if not any(b):
        return
    assert zdiv_exact(zmul(a, b), b) == a


@settings(max_examples=100, deadline=None)
@given(zz, zz, zz)
def test_cyclotomic_field_axioms(a, b, c):
    x, y, w = CyclotomicElement(a), CyclotomicElement(b), CyclotomicElement(c)
    assert x * (y + w) == x * y + x * w
    assert (x * y) * w == x * (y * w)
    if not x.is_zero():
        assert x * x.inverse() == CyclotomicElement((1, 0, 0, 0))
        assert (y / x) * x == y


@settings(max_examples=200, deadline=None)
@given(zz, zz, st.sampled_from(DEFAULT_PRIMES))
def test_reduction_mod_p_is_a_ring_map(a, b, p):
    F = ModularField(p)
    assert F.from_zz(zmul(a, b)) == F.from_zz(a) * F.from_zz(b) % p
    assert F.from_zz((Fraction(1, 3), 0, 0, 0)) * 3 % p == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**12), st.integers(1, 10**12), st.sampled_from(DEFAULT_PRIMES))
def test_modular_arithmetic(x, y, p):
    F = ModularField(p)
    a, b = F(x), F(y)
    assert (a * b).value == x * y % p
    assert (a - b).value == (x - y) % p
    if y % p:
        assert (a / b * b) == a
