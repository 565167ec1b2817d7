import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatbill.exactnum import (CycNumber, NotSelfConjugate, compare_norm, cross, dot, power_table,
                               real_interval, reduce_exponents, sign_of_real, totient, unit, vec, zeta)


def test_totient_small():
    assert [totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_basic_identities():
    i = zeta(4)
    assert i * i == CycNumber.rational(-1, 4)
    w = zeta(3)
    assert (1 + w + w * w).is_zero()
    z8 = zeta(8)
    assert z8.conj() * z8 == CycNumber.rational(1, 8)


def test_signs():
    z8 = zeta(8)
    assert sign_of_real(z8 + z8.inverse()) == 1
    x = zeta(7, 3) + zeta(7, 4)
    assert sign_of_real(x - x) == 0
    z5 = zeta(5)
    assert sign_of_real(z5 + z5 ** 4 - Fraction(1, 2)) == 1


def test_sign_needs_real_input():
    with pytest.raises(NotSelfConjugate):
        sign_of_real(zeta(8))


def test_compare_norm():
    assert compare_norm(vec(1, 0), vec(0, 1)) == 0
    assert compare_norm(vec(1, 1), vec(1, 0)) == 1
    assert compare_norm(unit(1, 8), vec(1, Fraction(1, 10), 16)) == -1


def test_mixed_orders_lift_to_lcm():
    s = zeta(3) + zeta(4)
    assert s.order == 12
    assert abs(complex(s) - (cmath.exp(2j * math.pi / 3) + 1j)) < 1e-12


def test_reduced_representation_is_canonical():
    # zeta_6 = 1 + zeta_6^2 in the reduced basis of Q(zeta_6)
    a = CycNumber.from_exponents(6, [0, 1, 0, 0, 0, 0])
    b = CycNumber.from_exponents(6, [1, 0, 0, 0, 0, 0]) + CycNumber.from_exponents(6, [0, 0, 1, 0, 0, 0])
    assert a == b and hash(a) == hash(b)
    assert len(a.numerators) == totient(6)


def test_power_table_matches_floats():
    for n in (5, 8, 12, 15):
        for k, row in enumerate(power_table(n)):
            z = CycNumber._make(n, row, 1)
            assert abs(complex(z) - cmath.exp(2j * math.pi * k / n)) < 1e-9


def test_reduce_exponents_kills_cyclotomic_relation():
    assert not any(reduce_exponents(7, [1] * 7))


def test_cross_and_dot():
    u, v = vec(1, 2), vec(3, -1)
    assert cross(u, v).to_fraction() == -7
    assert dot(u, v).to_fraction() == 1


def test_json_roundtrip():
    x = zeta(16, 3) * Fraction(5, 7) - 2
    assert CycNumber.from_json(x.to_json()) == x


def test_real_interval_encloses():
    x = zeta(12) + zeta(12, 11)  # sqrt(3)
    lo, hi = real_interval(x)
    assert lo <= Fraction(math.sqrt(3)) <= hi or abs(float(lo) - math.sqrt(3)) < 1e-15


orders = st.sampled_from([3, 4, 5, 7, 8, 9, 12, 16, 20])
small = st.integers(-6, 6)


@st.composite
def elements(draw, order=None):
    n = draw(orders) if order is None else order
    coeffs = draw(st.lists(small, min_size=totient(n), max_size=totient(n)))
    den = draw(st.integers(1, 5))
    return CycNumber(n, [Fraction(c, den) for c in coeffs])


@st.composite
def pairs(draw):
    n = draw(orders)
    return draw(elements(n)), draw(elements(n)), draw(elements(n))


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_field_axioms(xyz):
    x, y, z = xyz
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == CycNumber.rational(0, x.order)
    if not x.is_zero():
        assert x * x.inverse() == CycNumber.rational(1, x.order)


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_embedding_is_a_ring_map(xyz):
    x, y, _ = xyz
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-6 * (1 + abs(complex(x) * complex(y)))
    assert abs(complex(x.conj()) - complex(x).conjugate()) < 1e-9 * (1 + abs(complex(x)))


@settings(max_examples=80, deadline=None)
@given(elements())
def test_sign_agrees_with_float(x):
    r = (x + x.conj()) * Fraction(1, 2)
    f = complex(r).real
    s = sign_of_real(r)
    if abs(f) > 1e-9:
        assert s == (1 if f > 0 else -1)
    if r.is_zero():
        assert s == 0
