"""Orbit-closure classification for unfoldings of right triangles, isosceles
triangles, quadrilateral families and almost-right polygons.

Also: eigenspace dimensions of the unfolding of a right triangle, its rank,
and the degree of the minimal half-translation cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .strata import StratumSignature

RANK_HIGH = "≥2"
TORUS_COVER = "torus_cover"

VEECH_KINDS = frozenset({
    "torus_cover", "regular_ngon", "double_regular_ngon", "double_cover_of_double_regular_ngon",
})
KINDS = VEECH_KINDS | {
    "quadratic_double_of_stratum", "quadratic_double_of_hyp_component", "full_hyperelliptic_locus",
}

DISCRETE_NOTE = ("generic member: polygons with these angles whose orbit closure is smaller "
                 "form a discrete set, which is not determined here")


@dataclass(frozen=True)
class OrbitClosureDescription:
    kind: str
    rank: int | str
    m: int | None = None
    stratum: StratumSignature | None = None
    base: StratumSignature | None = None
    generic_member: bool = False
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown orbit closure kind {self.kind!r}")

    @property
    def is_veech(self) -> bool:
        return self.kind in VEECH_KINDS

    def summary(self) -> str:
        k = self.kind
        if k == "torus_cover":
            return "torus cover" + (f" (regular {self.m}-gon)" if self.m else "")
        if k == "regular_ngon":
            return f"regular {self.m}-gon locus"
        if k == "double_regular_ngon":
            return f"double regular {self.m}-gon locus"
        if k == "double_cover_of_double_regular_ngon":
            return f"double cover of the double regular {self.m}-gon locus"
        if k == "quadratic_double_of_stratum":
            return f"quadratic double of {self.stratum}"
        if k == "quadratic_double_of_hyp_component":
            return f"quadratic double of the hyperelliptic component covering {self.base}"
        return f"dense in the hyperelliptic locus over {self.base}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "summary": self.summary(),
            "rank": self.rank,
            "m": self.m,
            "stratum": self.stratum.to_json() if self.stratum else None,
            "base": self.base.to_json() if self.base else None,
            "generic_member": self.generic_member,
            "notes": list(self.notes),
        }


def _q(*orders, component=None) -> StratumSignature:
    return StratumSignature.quadratic(orders, component=component)


def _check_right(a: int, n: int) -> None:
    if not (isinstance(a, int) and isinstance(n, int)) or not 0 < a < n:
        raise ValueError(f"right triangle needs 0 < a < n, got a={a}, n={n}")
    if gcd(a, 2 * n) != 1:
        raise ValueError(f"right triangle needs gcd(a, 2n) = 1, got a={a}, n={n}")


def _check_isosceles(a: int, b: int, n: int) -> None:
    if min(a, b, n) <= 0 or 2 * a + b != n:
        raise ValueError(f"isosceles triangle needs 2a + b = n, got ({a}, {b}, {n})")
    if gcd(gcd(a, b), n) != 1:
        raise ValueError(f"isosceles triangle needs gcd(a, b, n) = 1, got ({a}, {b}, {n})")


def _check_quad(a: int, b: int, n: int) -> None:
    if min(a, b, n) <= 0 or a + b != n:
        raise ValueError(f"quadrilateral family needs a + b = n, got ({a}, {b}, {n})")
    if gcd(gcd(a, b), n) != 1:
        raise ValueError(f"quadrilateral family needs gcd(a, b, n) = 1, got ({a}, {b}, {n})")


# -- right triangles --------------------------------------------------------

def eigenspace_dim_criterion(a: int, n: int, ell: int) -> int:
    x = (ell * a) % (2 * n)
    return int(x % 2 == 1 and 1 <= x <= n - 1)


def eigenspace_dim_fractional(a: int, n: int, ell: int) -> int:
    if ell % (2 * n) == 0:
        return 0

    def frac(x: Fraction) -> Fraction:
        return x - (x.numerator // x.denominator)

    def t(l: int) -> Fraction:
        return frac(Fraction(l, 2)) + frac(Fraction(l * a, 2 * n)) + frac(Fraction(l * (n - a), 2 * n))

    return int(t(-ell) - 1)


def eigenspace_dim(a: int, n: int, ell: int) -> int:
    """Dimension of the ell-th eigenspace of holomorphic one-forms on the unfolding of Q_{a,n}."""
    _check_right(a, n)
    d1 = eigenspace_dim_criterion(a, n, ell)
    d2 = eigenspace_dim_fractional(a, n, ell)
    if d1 != d2:
        raise AssertionError(f"eigenspace formulas disagree at a={a}, n={n}, ell={ell}")
    return d1


def eigenspace_genus(a: int, n: int) -> int:
    return sum(eigenspace_dim(a, n, ell) for ell in range(2 * n))


def rank_right(a: int, n: int):
    _check_right(a, n)
    return 1 if a in (1, n - 1, n - 2) else RANK_HIGH


def classify_right(a: int, n: int) -> OrbitClosureDescription:
    _check_right(a, n)
    b = n - a
    rank = rank_right(a, n)
    small = min(a, b)
    if small <= 2:
        m = 2 * n // small
        if n in (2, 3):
            return OrbitClosureDescription("torus_cover", 1, m=m,
                                           notes=("unfolding is a torus cover",))
        kind = "regular_ngon" if m % 2 == 0 else "double_regular_ngon"
        return OrbitClosureDescription(kind, 1, m=m, notes=(f"smallest angle is π/{m}",))
    return OrbitClosureDescription("quadratic_double_of_stratum", rank, stratum=_q(a - 2, b - 2, *[-1] * n))


# -- isosceles triangles ----------------------------------------------------

def classify_isosceles(a: int, b: int, n: int) -> OrbitClosureDescription:
    _check_isosceles(a, b, n)
    if n in (3, 4, 6):
        m = {3: 6, 4: 4, 6: 6}[n]
        return OrbitClosureDescription("torus_cover", 1, m=m, notes=("unfolding is a torus cover",))
    if n % 2:
        if a == 1:
            return OrbitClosureDescription("double_regular_ngon", 1, m=n)
        if b == 1:
            return OrbitClosureDescription("regular_ngon", 1, m=2 * n)
        return OrbitClosureDescription("quadratic_double_of_stratum", RANK_HIGH,
                                       stratum=_q(2 * a - 2, b - 2, *[-1] * n))
    half = b // 2
    if min(a, half) == 1:
        return OrbitClosureDescription("double_regular_ngon", 1, m=n)
    if b == 4:
        return OrbitClosureDescription("double_cover_of_double_regular_ngon", 1, m=n // 2)
    return OrbitClosureDescription("quadratic_double_of_hyp_component", RANK_HIGH,
                                   base=_q(a - 2, half - 2, *[-1] * (n // 2)),
                                   notes=("the hyperelliptic component is a locus of double covers of the base",))


# -- quadrilateral families -------------------------------------------------

def _quad_notes(n: int) -> tuple:
    notes = [DISCRETE_NOTE]
    if n in (2, 3, 4, 6):
        notes.append(f"n = {n}: the generic locus has small rank and specific members need separate treatment")
    return tuple(notes)


def classify_parallelogram(a: int, b: int, n: int) -> OrbitClosureDescription:
    _check_quad(a, b, n)
    if n % 2:
        st = _q(2 * a - 2, 2 * b - 2, *[-1] * (2 * n))
        return OrbitClosureDescription("quadratic_double_of_stratum", RANK_HIGH, stratum=st,
                                       generic_member=True, notes=_quad_notes(n))
    st = _q(a - 2, a - 2, b - 2, b - 2, component="hyp")
    return OrbitClosureDescription("quadratic_double_of_hyp_component", RANK_HIGH, stratum=st,
                                   base=st, generic_member=True, notes=_quad_notes(n))


def classify_right_trapezoid(a: int, b: int, n: int) -> OrbitClosureDescription:
    _check_quad(a, b, n)
    if n % 2:
        st = _q(2 * a - 2, 2 * b - 2, *[-1] * (2 * n))
    else:
        st = _q(a - 2, b - 2, *[-1] * n)
    return OrbitClosureDescription("quadratic_double_of_stratum", RANK_HIGH, stratum=st,
                                   generic_member=True, notes=_quad_notes(n))


# -- almost-right polygons --------------------------------------------------

def _as_fraction(x) -> Fraction:
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(x.p, x.q)
    return Fraction(x)


def almost_right_split(signature) -> tuple[list[Fraction], list[Fraction]]:
    """Split angles (units of pi) into the non-right ones and the multiples of 1/2."""
    angles = [_as_fraction(x) for x in signature]
    if len(angles) < 3:
        raise ValueError("a polygon needs at least three angles")
    if any(not 0 < x < 2 for x in angles):
        raise ValueError("angles must lie strictly between 0 and 2π")
    if sum(angles) != len(angles) - 2:
        raise ValueError(f"angles sum to {sum(angles)}π, expected {len(angles) - 2}π")
    odd = [x for x in angles if (2 * x).denominator != 1]
    right = [x for x in angles if (2 * x).denominator == 1]
    if len(odd) > 2:
        raise ValueError("not almost-right: more than two angles are not multiples of π/2")
    return odd, right


def almost_right_stratum(signature) -> StratumSignature:
    """Stratum of the smallest cover of the pillowcase double with holonomy in {±1}."""
    odd, right = almost_right_split(signature)
    if not odd:
        d = 1
        orders = []
    else:
        d = (2 * odd[0]).denominator
        orders = [int(d * 2 * x) - 2 for x in odd]
    marked = 0
    for x in right:
        j = int(2 * x)
        if j == 2:
            continue
        orders.extend([j - 2] * d)
    return StratumSignature.quadratic(orders, marked)


def _route_exceptional(angles: list[Fraction]) -> OrbitClosureDescription | None:
    """Isosceles triangles and parallelograms: the two shapes whose doubles have paired cone angles."""
    if any((2 * x).denominator == 1 for x in angles):
        return None
    if len(angles) == 3:
        for i in range(3):
            x, y, z = angles[i], angles[(i + 1) % 3], angles[(i + 2) % 3]
            if x == y:
                n = lcm(x.denominator, z.denominator)
                return classify_isosceles(int(x * n), int(z * n), n)
    if len(angles) == 4 and angles[0] == angles[2] and angles[1] == angles[3]:
        n = lcm(angles[0].denominator, angles[1].denominator)
        a, b = sorted((int(angles[0] * n), int(angles[1] * n)))
        return classify_parallelogram(a, b, n)
    return None


def classify_almost_right(signature) -> OrbitClosureDescription:
    from .polygon import normalize_right

    routed = _route_exceptional([_as_fraction(x) for x in signature])
    if routed is not None:
        return routed
    odd, right = almost_right_split(signature)
    corners = [x for x in right if x != 1]
    k = len(odd) + len(corners)
    if not odd:
        return OrbitClosureDescription("torus_cover", 1, notes=("all angles are multiples of π/2",))
    if k == 3:
        e = lcm(odd[0].denominator, odd[1].denominator)
        a, n = normalize_right(int(odd[0] * e), int(odd[1] * e), e)
        return classify_right(a, n)
    if k == 4:
        n = lcm(odd[0].denominator, odd[1].denominator)
        a, b = int(odd[0] * n), int(odd[1] * n)
        if a + b != n:
            raise ValueError("quadrilateral with two right angles needs the other two to sum to π")
        return classify_right_trapezoid(min(a, b), max(a, b), n)
    base = almost_right_stratum(signature)
    return OrbitClosureDescription(
        "full_hyperelliptic_locus", RANK_HIGH, base=base, generic_member=True,
        notes=(DISCRETE_NOTE, "base records the genus zero stratum of the partial unfolding"))


# -- minimal covers ---------------------------------------------------------

def minimal_cover_degree(spec):
    """Degree of the minimal half-translation cover of the unfolding, or TORUS_COVER."""
    fam = getattr(spec, "family", None)
    params = getattr(spec, "params", {}) or {}
    if fam == "right_triangle":
        a, n = params["a"], params["n"]
        _check_right(a, n)
        return TORUS_COVER if n in (2, 3) else 2
    if fam == "isosceles":
        a, b, n = params["a"], params["b"], params["n"]
        _check_isosceles(a, b, n)
        if n in (3, 4, 6):
            return TORUS_COVER
        return 2 if n % 2 else 4
    raise ValueError(f"minimal cover degree is only known for right and isosceles triangles, not {fam!r}")
