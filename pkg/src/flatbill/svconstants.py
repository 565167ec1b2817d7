"""Closed-form Siegel-Veech constants and billiard counting constants.

Every constant is an exact rational times an integer power of pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd


class ExceptionalParameters(ValueError):
    """Raised for parameters excluded by the counting formulas."""


@dataclass(frozen=True, order=True)
class PiRational:
    coefficient: Fraction
    pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient == 0:
            object.__setattr__(self, "pi_power", 0)

    def __float__(self) -> float:
        return float(self.coefficient) * math.pi ** self.pi_power

    def __add__(self, other: "PiRational") -> "PiRational":
        if self.coefficient == 0:
            return other
        if other.coefficient == 0:
            return self
        if self.pi_power != other.pi_power:
            raise ValueError("cannot add constants with different powers of pi")
        return PiRational(self.coefficient + other.coefficient, self.pi_power)

    def __sub__(self, other: "PiRational") -> "PiRational":
        return self + PiRational(-other.coefficient, other.pi_power)

    def __mul__(self, other):
        if isinstance(other, PiRational):
            return PiRational(self.coefficient * other.coefficient, self.pi_power + other.pi_power)
        return PiRational(self.coefficient * Fraction(other), self.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiRational):
            return PiRational(self.coefficient / other.coefficient, self.pi_power - other.pi_power)
        return PiRational(self.coefficient / Fraction(other), self.pi_power)

    def exact(self) -> str:
        c = self.coefficient
        if self.pi_power == 0:
            return str(c)
        return f"{c} · π^{self.pi_power}"

    def to_json(self) -> dict:
        return {"exact": self.exact(), "coefficient": str(self.coefficient),
                "pi_power": self.pi_power, "float": float(self)}

    def __str__(self):
        return self.exact()


def double_factorial(k: int) -> int:
    if k < -1:
        raise ValueError("double factorial needs k >= -1")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def c_saddle(d1: int, d2: int) -> PiRational:
    """Constant for saddle connections joining singularities of orders d1, d2."""
    if d1 < -1 or d2 < -1:
        raise ValueError("singularity orders must be >= -1")
    if d1 == -1 and d2 == -1:
        raise ValueError("configuration joining two poles is not covered")
    df = double_factorial
    base = Fraction(df(d1 + d2 + 2) * df(d1 + 1) * df(d2 + 1), df(d1 + d2 + 1) * df(d1) * df(d2))
    if d1 % 2 and d2 % 2:
        return PiRational(2 * base, -2)
    return PiRational(base / 2, 0)


def _check_orders(k1: int, k2: int) -> None:
    if k1 <= 0 or k2 <= 0:
        raise ValueError("zero orders must be positive")


def c_cyl_stratum(k1: int, k2: int) -> PiRational:
    _check_orders(k1, k2)
    s = k1 + k2
    return PiRational(Fraction((s + 4) * (s + 3), 4) * (1 + Fraction(2, (k1 + 2) * (k2 + 2))), -2)


def c_env_stratum(k1: int, k2: int) -> PiRational:
    _check_orders(k1, k2)
    return PiRational(Fraction(comb(k1 + k2 + 4, 2), 2), -2)


def c_simp_stratum(k1: int, k2: int) -> PiRational:
    _check_orders(k1, k2)
    return PiRational(Fraction(comb(k1 + k2 + 4, 2), 2) * Fraction(2, (k1 + 2) * (k2 + 2)), -2)


def c_env_configuration(d: int, k1: int, k2: int) -> PiRational:
    """Envelope bounded by a pole-pole connection and a loop at a zero of order d."""
    _check_orders(k1, k2)
    return PiRational(Fraction(d + 1, 2 * (k1 + k2 + 2)), -2)


def c_simp_configuration(k1: int, k2: int) -> PiRational:
    _check_orders(k1, k2)
    return PiRational(Fraction(1, 2 * comb(k1 + k2 + 2, k1 + 1)), -2)


def c_cyl_abelian_double(k1: int, k2: int) -> PiRational:
    """Cylinder constant on the holonomy double cover, coefficient of 2 pi L^2/area."""
    _check_orders(k1, k2)
    return PiRational(Fraction(comb(k1 + k2 + 4, 2), 2) * (1 + Fraction(4, (k1 + 2) * (k2 + 2))), -2)


def c_cyl_hyp_double(k1: int, k2: int) -> PiRational:
    """Cylinder constant on the hyperelliptic double, coefficient of 2 pi L^2/area."""
    _check_orders(k1, k2)
    return PiRational(Fraction(comb(k1 + k2 + 4, 2), 2) * (1 + Fraction(1, 2 * (k1 + 2) * (k2 + 2))), -2)


def _coprime3(a: int, b: int, c: int) -> bool:
    return gcd(gcd(a, b), c) == 1


def c_right_triangle(a: int, n: int) -> PiRational:
    """Periodic-band constant for the right triangle with angles (a/2n, (n-a)/2n, 1/2) pi."""
    b = n - a
    if not (0 < a < n) or gcd(a, 2 * n) != 1 and gcd(b, 2 * n) != 1:
        raise ValueError(f"invalid right triangle parameters a={a}, n={n}")
    if min(a, b) <= 2:
        raise ExceptionalParameters(
            f"right triangle ({a},{n}) is exceptional (min(a, n-a) <= 2); see the classify module")
    return PiRational((1 - Fraction(1, n)) * (1 + Fraction(2, a * b)) / 16, -1)


def c_isosceles(a: int, b: int, n: int) -> PiRational:
    if 2 * a + b != n or not _coprime3(a, b, n):
        raise ValueError(f"invalid isosceles parameters a={a}, b={b}, n={n}")
    if a == 1 or b in (1, 2, 4):
        raise ExceptionalParameters(
            f"isosceles triangle ({a},{b},{n}) is exceptional; see the classify module")
    g = gcd(n, 2)
    return PiRational((1 - Fraction(g, n)) * (1 + Fraction(2, a * b * g)) / 8, -1)


def c_parallelogram(a: int, b: int, n: int) -> PiRational:
    _check_quad(a, b, n)
    g = gcd(n, 2)
    return PiRational((1 - Fraction(g, 2 * n)) * (1 + Fraction(1, a * b * g)) / 2, -1)


def c_right_trapezoid(a: int, b: int, n: int) -> PiRational:
    _check_quad(a, b, n)
    g = gcd(n, 2)
    return PiRational((1 - Fraction(g, 2 * n)) * (1 + Fraction(g * g, 2 * a * b)) / 4, -1)


def _check_quad(a: int, b: int, n: int) -> None:
    if a + b != n or a <= 0 or b <= 0 or not _coprime3(a, b, n):
        raise ValueError(f"invalid quadrilateral parameters a={a}, b={b}, n={n}")
    if n == 2 or min(a, b) == 1:
        raise ExceptionalParameters(f"quadrilateral ({a},{b},{n}) is excluded (n = 2 or min(a,b) = 1)")


# -- generalized diagonals in right triangles -------------------------------

POINT_KINDS = ("vertex_a", "vertex_b", "vertex_right", "boundary", "interior")


def diagonal_point_data(a: int, n: int, kind: str) -> tuple[int, int]:
    """(order d, number of preimages) of a billiard point on the partial unfolding.

    vertex_a / vertex_b are the vertices of angle a pi/2n and (n-a) pi/2n.
    The right-angle vertex is treated as a boundary point carrying a pole.
    """
    b = n - a
    table = {
        "vertex_a": (a - 2, 1),
        "vertex_b": (b - 2, 1),
        "vertex_right": (-1, n),
        "boundary": (0, n),
        "interior": (0, 2 * n),
    }
    if kind not in table:
        raise ValueError(f"unknown point kind {kind!r}")
    return table[kind]


def c_diag_right_triangle(a: int, n: int, p1: str, p2: str, *, check_distinct: bool = True) -> PiRational:
    """Constant c with N(L) ~ c L^2 / area for generalized diagonals p1 -> p2."""
    b = n - a
    if min(a, b) <= 2:
        raise ExceptionalParameters(f"right triangle ({a},{n}) is exceptional")
    if check_distinct and p1 == p2 and p1.startswith("vertex"):
        raise ValueError("the diagonal count covers two distinct points")
    d1, n1 = diagonal_point_data(a, n, p1)
    d2, n2 = diagonal_point_data(a, n, p2)
    c = c_saddle(d1, d2)
    return c * Fraction(n1 * n2, 4 * n * n) * PiRational(1, 1)


def cone_angle(a: int, n: int, kind: str) -> Fraction:
    """Angle around a billiard point in units of pi."""
    return {"vertex_a": Fraction(a, 2 * n), "vertex_b": Fraction(n - a, 2 * n),
            "vertex_right": Fraction(1, 2), "boundary": Fraction(1), "interior": Fraction(2)}[kind]


def c_diag_angle_display(a: int, n: int, p1: str, p2: str) -> PiRational:
    """Alternative closed form theta1 theta2 / (2 pi), stated for a non-vertex endpoint."""
    if p1.startswith("vertex") and p2.startswith("vertex"):
        raise ValueError("angle form needs at least one endpoint that is not a vertex")
    t = cone_angle(a, n, p1) * cone_angle(a, n, p2)
    return PiRational(t / 2, 1)


def diagonal_candidates(a: int, n: int, p1: str, p2: str) -> dict[str, PiRational]:
    """Both candidate normalizations for generalized diagonals."""
    out = {"general": c_diag_right_triangle(a, n, p1, p2, check_distinct=False)}
    try:
        out["angle"] = c_diag_angle_display(a, n, p1, p2)
    except ValueError:
        pass
    return out
