import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatbill import svconstants as sv
from flatbill.svconstants import ExceptionalParameters, PiRational


def df_gamma(k):
    """k!! from the gamma function, independent of the product loop."""
    if k % 2 == 0:
        return round(2 ** (k // 2) * math.gamma(k / 2 + 1))
    return round(2 ** ((k + 1) / 2) * math.gamma(k / 2 + 1) / math.sqrt(math.pi))


# frozen from df_gamma
DF_TABLE = [1, 1, 1, 2, 3, 8, 15, 48, 105, 384, 945, 3840, 10395]


def saddle_oracle(d1, d2):
    """Float value of the saddle constant, via gamma-function double factorials."""
    ratio = (df_gamma(d1 + d2 + 2) * df_gamma(d1 + 1) * df_gamma(d2 + 1)
             / (df_gamma(d1 + d2 + 1) * df_gamma(d1) * df_gamma(d2)))
    if d1 % 2 and d2 % 2:
        return 2 * ratio / math.pi ** 2
    return ratio / 2


def pi(c, k):
    return PiRational(Fraction(c), k)


def test_double_factorial():
    assert [sv.double_factorial(k) for k in range(-1, 12)] == DF_TABLE
    assert [df_gamma(k) for k in range(-1, 12)] == DF_TABLE
    with pytest.raises(ValueError):
        sv.double_factorial(-2)


@pytest.mark.parametrize("k", range(1, 15))
def test_double_factorial_product(k):
    assert sv.double_factorial(k) * sv.double_factorial(k - 1) == math.factorial(k)


def test_saddle_examples():
    assert sv.c_saddle(0, 0) == pi(1, 0)
    assert sv.c_saddle(-1, 0) == pi(Fraction(1, 2), 0)
    assert sv.c_saddle(1, -1) == pi(8, -2)
    with pytest.raises(ValueError):
        sv.c_saddle(-1, -1)


def test_saddle_frozen_values():
    # oracle outputs, frozen
    assert sv.c_saddle(0, 1) == pi(Fraction(3, 2), 0)
    assert sv.c_saddle(2, 3) == pi(Fraction(35, 8), 0)
    assert sv.c_saddle(1, 1) == pi(Fraction(64, 3), -2)
    assert sv.c_saddle(3, 5) == pi(Fraction(65536, 945), -2)


@pytest.mark.parametrize("d1", range(-1, 9))
def test_saddle_against_oracle(d1):
    for d2 in range(-1, 9):
        if d1 == d2 == -1:
            continue
        c = sv.c_saddle(d1, d2)
        assert c == sv.c_saddle(d2, d1)
        assert float(c) == pytest.approx(saddle_oracle(d1, d2), rel=1e-12)
        assert c.coefficient > 0


def test_stratum_examples():
    assert sv.c_env_stratum(1, 3) == pi(14, -2)
    assert sv.c_simp_stratum(1, 3) == pi(Fraction(28, 15), -2)
    assert sv.c_cyl_stratum(1, 3) == pi(Fraction(238, 15), -2)
    with pytest.raises(ValueError):
        sv.c_cyl_stratum(0, 3)


def test_cyl_is_env_plus_simp():
    for k1 in range(1, 11):
        for k2 in range(1, 11):
            assert sv.c_cyl_stratum(k1, k2) == sv.c_env_stratum(k1, k2) + sv.c_simp_stratum(k1, k2)


def test_double_cover_examples():
    assert sv.c_cyl_abelian_double(1, 3) == pi(Fraction(266, 15), -2)
    assert sv.c_cyl_hyp_double(1, 3) == pi(Fraction(217, 15), -2)
    assert sv.c_cyl_abelian_double(1, 1) == pi(Fraction(65, 6), -2)


def test_billiard_constants():
    assert sv.c_right_triangle(3, 8) == pi(Fraction(119, 1920), -1)
    assert float(sv.c_right_triangle(3, 8)) == pytest.approx(0.01973, abs=1e-5)
    assert sv.c_isosceles(2, 3, 7) == pi(Fraction(1, 7), -1)
    assert sv.c_parallelogram(2, 3, 5) == pi(Fraction(21, 40), -1)
    assert sv.c_right_trapezoid(3, 5, 8) == pi(Fraction(119, 480), -1)


@pytest.mark.parametrize("call", [lambda: sv.c_right_triangle(1, 5), lambda: sv.c_isosceles(1, 5, 7),
                                  lambda: sv.c_isosceles(3, 4, 10), lambda: sv.c_parallelogram(1, 2, 3)])
def test_exceptional_parameters_raise(call):
    with pytest.raises(ExceptionalParameters):
        call()


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        sv.c_isosceles(2, 2, 7)
    with pytest.raises(ValueError):
        sv.c_parallelogram(2, 4, 5)


def test_diagonal_constants():
    assert sv.c_diag_right_triangle(3, 8, "vertex_a", "vertex_right") == pi(Fraction(1, 4), -1)
    cands = sv.diagonal_candidates(3, 8, "interior", "interior")
    assert cands["general"] == pi(1, 1)
    assert cands["angle"] == pi(2, 1)
    with pytest.raises(ValueError):
        sv.c_diag_right_triangle(3, 8, "vertex_a", "vertex_a")
    with pytest.raises(ExceptionalParameters):
        sv.c_diag_right_triangle(1, 4, "interior", "interior")


@given(st.integers(1, 30), st.integers(1, 30))
def test_stratum_constants_symmetric_and_positive(k1, k2):
    for f in (sv.c_cyl_stratum, sv.c_env_stratum, sv.c_simp_stratum, sv.c_cyl_abelian_double, sv.c_cyl_hyp_double):
        assert f(k1, k2) == f(k2, k1)
        assert float(f(k1, k2)) > 0


@given(st.integers(3, 60), st.integers(3, 60))
def test_quadrilateral_constants_symmetric(a, b):
    if math.gcd(a, b) != 1:
        return
    n = a + b
    assert sv.c_parallelogram(a, b, n) == sv.c_parallelogram(b, a, n)
    assert sv.c_right_trapezoid(a, b, n) == sv.c_right_trapezoid(b, a, n)


def test_pirational_rendering():
    c = sv.c_cyl_stratum(1, 3)
    assert str(c) == "238/15 · π^-2"
    d = c.to_json()
    assert d["coefficient"] == "238/15" and d["pi_power"] == -2
    assert d["float"] == pytest.approx(238 / 15 / math.pi ** 2)
