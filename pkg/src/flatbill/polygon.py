"""Rational polygons: specs, exact realization and the square-gluing construction.

Angles are stored as fractions of pi.  Vertices are exact elements of a
cyclotomic field Q(zeta_N), read as points of the complex plane.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .exactnum import CycNumber, cross, sign_of_real

FAMILIES = ("right_triangle", "isosceles", "parallelogram", "isosceles_trapezoid",
            "right_trapezoid", "almost_right", "generic")


@dataclass(frozen=True, order=True)
class RationalAngle:
    """The angle p*pi/q."""

    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0 or self.p <= 0:
            raise ValueError(f"angle {self.p}π/{self.q} must be positive")
        g = gcd(self.p, self.q)
        if g != 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    @classmethod
    def of(cls, x) -> "RationalAngle":
        if isinstance(x, RationalAngle):
            return x
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self):
        return math.pi * self.p / self.q

    def __str__(self):
        if self.q == 1:
            return "π" if self.p == 1 else f"{self.p}π"
        return f"{'' if self.p == 1 else self.p}π/{self.q}"


@dataclass(frozen=True)
class PolygonSpec:
    """Cyclic angle list plus the lengths of the first k-2 edges.

    Edges are walked counterclockwise starting at vertex ``start``; the
    remaining two lengths are solved from closure.
    """

    angles: tuple
    lengths: tuple
    family: str = "generic"
    params: dict = field(default_factory=dict)
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(RationalAngle.of(a) for a in self.angles))
        object.__setattr__(self, "lengths", tuple(Fraction(x) for x in self.lengths))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown polygon family {self.family!r}")
        k = len(self.angles)
        if k < 3:
            raise ValueError("a polygon needs at least three vertices")
        total = sum(a.value for a in self.angles)
        if total != k - 2:
            raise ValueError(f"angles sum to {total}π but a {k}-gon needs {k - 2}π")
        if any(a.value >= 2 for a in self.angles):
            raise ValueError("interior angles must be below 2π")
        if len(self.lengths) != k - 2:
            raise ValueError(f"need {k - 2} edge lengths, got {len(self.lengths)}")
        if any(x <= 0 for x in self.lengths):
            raise ValueError("edge lengths must be positive")

    @property
    def angle_values(self) -> tuple:
        return tuple(a.value for a in self.angles)

    @property
    def field_order(self) -> int:
        return field_order_for(self.angle_values)

    def label(self) -> str:
        if self.params:
            inner = ",".join(f"{k}={v}" for k, v in self.params.items())
            return f"{self.family}({inner})"
        return f"{self.family}[{', '.join(str(a) for a in self.angles)}]"


def field_order_for(angles) -> int:
    q = 1
    for a in angles:
        q = lcm(q, Fraction(a).denominator)
    return lcm(4, 2 * q)


@dataclass(frozen=True)
class RealizedPolygon:
    vertices: tuple
    angles: tuple
    order: int
    spec: PolygonSpec | None = None

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> tuple:
        v = self.vertices
        return tuple(v[(i + 1) % len(v)] - v[i] for i in range(len(v)))

    def edge_directions(self) -> tuple:
        """Edge direction of edge i as an exponent j with direction exp(i pi j / (N/2))."""
        out = []
        turn = 0
        for i in range(self.k):
            if i:
                turn += 1 - self.angles[i]
            out.append(turn)
        return tuple(out)

    def area(self) -> CycNumber:
        v = self.vertices
        total = CycNumber.rational(0, self.order)
        for i in range(len(v)):
            total = total + cross(v[i], v[(i + 1) % len(v)])
        return total * Fraction(1, 2)

    def area_float(self) -> float:
        return float(self.area())

    def unit_area_scale(self) -> float:
        """Factor that rescales the polygon to unit area."""
        return 1.0 / math.sqrt(self.area_float())

    def scaled(self, s) -> "RealizedPolygon":
        s = Fraction(s)
        return RealizedPolygon(tuple(v * s for v in self.vertices), self.angles, self.order, self.spec)

    def complex_vertices(self) -> list[complex]:
        return [v.to_complex() for v in self.vertices]

    def signature(self) -> list[Fraction]:
        return sorted(self.angles)

    def is_almost_right(self) -> bool:
        return sum(1 for a in self.angles if (2 * a).denominator != 1) == 2

    def check(self) -> None:
        """Verify closure and that the turning at every vertex matches its angle."""
        zero = sum(self.edges, CycNumber.rational(0, self.order))
        if not zero.is_zero():
            raise AssertionError("edge vectors do not sum to zero")
        read = read_angles(self.vertices, self.order)
        if tuple(read) != tuple(self.angles):
            raise AssertionError(f"angles {read} do not match {self.angles}")


def _unit(order: int, angle: Fraction) -> CycNumber:
    """exp(i pi angle) inside Q(zeta_order)."""
    k = angle * order / 2
    if k.denominator != 1:
        raise ValueError(f"angle {angle}π not representable in order {order}")
    return CycNumber.zeta(order, int(k))


def read_angles(vertices, order: int) -> list[Fraction]:
    """Interior angles in units of pi, read off exactly from the vertices."""
    k = len(vertices)
    edges = [vertices[(i + 1) % k] - vertices[i] for i in range(k)]
    out = []
    for i in range(k):
        w = edges[i] * edges[i - 1].conj()
        z = complex(w)
        guess = round(math.atan2(z.imag, z.real) / (2 * math.pi) * order) % order
        found = None
        for j in (guess, (guess + 1) % order, (guess - 1) % order):
            u = w * CycNumber.zeta(order, -j)
            if u.is_real() and sign_of_real(u) > 0:
                found = j
                break
        if found is None:
            raise ValueError("edge turning is not a rational multiple of π in this field")
        turn = Fraction(2 * found, order)
        if turn > 1:
            turn -= 2
        out.append(1 - turn)
    return out


def realize(spec: PolygonSpec) -> RealizedPolygon:
    """Exact vertices for the spec; the last two edge lengths come from closure."""
    k = len(spec.angles)
    N = spec.field_order
    ang = spec.angle_values
    s = spec.start % k
    dirs = []
    turn = Fraction(0)
    for j in range(k):
        i = (s + j) % k
        if j:
            turn += 1 - ang[i]
        dirs.append(_unit(N, turn))
    pos = CycNumber.rational(0, N)
    pts = [pos]
    for j in range(k - 2):
        pos = pos + dirs[j] * spec.lengths[j]
        pts.append(pos)
    u, w = dirs[k - 2], dirs[k - 1]
    det = cross(u, w)
    if det.is_zero():
        raise ValueError("last two edges are parallel; closure is underdetermined")
    neg = -pos
    l1 = cross(neg, w) / det
    l2 = cross(u, neg) / det
    if sign_of_real(l1) <= 0 or sign_of_real(l2) <= 0:
        raise ValueError("infeasible lengths: closing edges would have non-positive length")
    pts.append(pos + u * l1)
    verts = [None] * k
    for j in range(k):
        verts[(s + j) % k] = pts[j]
    poly = RealizedPolygon(tuple(verts), tuple(ang), N, spec)
    poly.check()
    return poly


# -- families ---------------------------------------------------------------

def normalize_right(a: int, b: int, e: int) -> tuple[int, int]:
    """Normalize angles (a/e, b/e, 1/2)pi to (a', n) with a' odd and gcd(a', 2n) = 1."""
    if min(a, b, e) <= 0:
        raise ValueError("angle data must be positive")
    if Fraction(a, e) + Fraction(b, e) != Fraction(1, 2):
        raise ValueError(f"angles {a}/{e} + {b}/{e} do not sum to 1/2")
    if gcd(gcd(a, b), e) != 1:
        raise ValueError(f"gcd(a, b, e) = {gcd(gcd(a, b), e)} must be 1")
    n = e // 2
    if a % 2 == 0:
        a, b = b, a
    if gcd(a, 2 * n) != 1:
        raise ValueError(f"cannot normalize ({a}, {b}, {e})")
    return a, n


def make_right_triangle(a: int, n: int, scale=1) -> PolygonSpec:
    """Angles (a/2n, (n-a)/2n, 1/2)pi; the leg at the a-vertex is horizontal with length scale."""
    if not 0 < a < n or gcd(a, 2 * n) != 1:
        raise ValueError(f"right triangle needs 0 < a < n and gcd(a, 2n) = 1, got a={a}, n={n}")
    angles = (Fraction(a, 2 * n), Fraction(n - a, 2 * n), Fraction(1, 2))
    return PolygonSpec(angles, (Fraction(scale),), "right_triangle", {"a": a, "n": n}, start=2)


def make_isosceles(a: int, b: int, n: int, scale=1) -> PolygonSpec:
    """Angles (a/n, a/n, b/n)pi with the base from (0,0) to (scale,0)."""
    if min(a, b, n) <= 0 or 2 * a + b != n:
        raise ValueError(f"isosceles triangle needs 2a + b = n, got ({a}, {b}, {n})")
    if gcd(gcd(a, b), n) != 1:
        raise ValueError(f"isosceles triangle needs gcd(a, b, n) = 1, got ({a}, {b}, {n})")
    angles = (Fraction(a, n), Fraction(a, n), Fraction(b, n))
    return PolygonSpec(angles, (Fraction(scale),), "isosceles", {"a": a, "b": b, "n": n})


def _check_quad(a, b, n):
    if min(a, b, n) <= 0 or a + b != n:
        raise ValueError(f"quadrilateral family needs a + b = n, got ({a}, {b}, {n})")
    if gcd(gcd(a, b), n) != 1:
        raise ValueError(f"quadrilateral family needs gcd(a, b, n) = 1, got ({a}, {b}, {n})")


def make_parallelogram(a: int, b: int, n: int, free_param=1) -> PolygonSpec:
    """Angles (a/n, b/n, a/n, b/n)pi; free_param is the ratio of the second side to the first."""
    _check_quad(a, b, n)
    t = Fraction(free_param)
    if t <= 0:
        raise ValueError("parallelogram side ratio must lie in (0, ∞)")
    angles = (Fraction(a, n), Fraction(b, n), Fraction(a, n), Fraction(b, n))
    return PolygonSpec(angles, (Fraction(1), t), "parallelogram", {"a": a, "b": b, "n": n, "t": t})


def make_isosceles_trapezoid(a: int, b: int, n: int, free_param=Fraction(1, 2)) -> PolygonSpec:
    """Angles (a/n, a/n, b/n, b/n)pi, unit base; free_param is the leg length."""
    _check_quad(a, b, n)
    t = Fraction(free_param)
    lo, hi = free_param_interval("isosceles_trapezoid", a, b, n)
    if not (t > 0 and (hi is None or t < hi)):
        raise ValueError(f"leg length {t} outside the open interval (0, {hi})")
    angles = (Fraction(a, n), Fraction(a, n), Fraction(b, n), Fraction(b, n))
    return PolygonSpec(angles, (Fraction(1), t), "isosceles_trapezoid", {"a": a, "b": b, "n": n, "t": t})


def make_right_trapezoid(a: int, b: int, n: int, free_param=Fraction(1, 2)) -> PolygonSpec:
    """Angles (a/n, b/n, 1/2, 1/2)pi; unit slanted leg, free_param is the parallel side at the b-vertex."""
    _check_quad(a, b, n)
    t = Fraction(free_param)
    lo, hi = free_param_interval("right_trapezoid", a, b, n)
    if not (t > lo and (hi is None or t < hi)):
        raise ValueError(f"side length {t} outside the open interval ({lo}, {hi})")
    angles = (Fraction(a, n), Fraction(b, n), Fraction(1, 2), Fraction(1, 2))
    return PolygonSpec(angles, (Fraction(1), t), "right_trapezoid", {"a": a, "b": b, "n": n, "t": t})


def free_param_interval(family: str, a: int, b: int, n: int):
    """Open interval of admissible free parameters; endpoints as floats, None for infinity."""
    if family == "parallelogram":
        return 0.0, None
    if family == "isosceles_trapezoid":
        c = math.cos(math.pi * a / n)
        return 0.0, (None if c <= 0 else 1 / (2 * c))
    if family == "right_trapezoid":
        # the parallel side at the a-vertex has length t + cos(a pi / n)
        c = math.cos(math.pi * a / n)
        return max(0.0, -c), None
    raise ValueError(f"family {family!r} has no free parameter")


def make_square(side=1) -> PolygonSpec:
    h = Fraction(1, 2)
    return PolygonSpec((h, h, h, h), (Fraction(side), Fraction(side)), "generic", {"shape": "square"})


def make_generic(angles, lengths=None) -> PolygonSpec:
    angles = [Fraction(x) for x in angles]
    if lengths is None:
        lengths = [1] * (len(angles) - 2)
    return PolygonSpec(tuple(angles), tuple(lengths), "generic")


# -- gluing in a square -----------------------------------------------------

def _from_points(vertices, angles, order, spec=None) -> RealizedPolygon:
    poly = RealizedPolygon(tuple(vertices), tuple(Fraction(a) for a in angles), order, spec)
    poly.check()
    return poly


def is_almost_right_angles(angles) -> bool:
    return sum(1 for a in angles if (2 * Fraction(a)).denominator != 1) == 2


def glue_square(P: RealizedPolygon, edge_index: int) -> RealizedPolygon:
    """Glue a square onto the outside of an edge that has a right-angle endpoint."""
    if not is_almost_right_angles(P.angles):
        raise ValueError("glue_square needs an almost-right polygon")
    k = P.k
    i = edge_index % k
    j = (i + 1) % k
    half = Fraction(1, 2)
    if P.angles[i] != half and P.angles[j] != half:
        raise ValueError(f"edge {i} has no endpoint of angle π/2")
    u, w = P.vertices[i], P.vertices[j]
    out = (w - u) * CycNumber.zeta(P.order, 3 * P.order // 4)  # rotate by -pi/2
    new_v = list(P.vertices[: i + 1]) + [u + out, w + out] + list(P.vertices[i + 1:])
    angs = list(P.angles)
    angs[i] += half
    angs[j] += half
    new_a = angs[: i + 1] + [half, half] + angs[i + 1:]
    return _from_points(new_v, new_a, P.order)


def insert_marked_point(P: RealizedPolygon, edge_index: int, t=Fraction(1, 2)) -> RealizedPolygon:
    """Split an edge at parameter t by a vertex of angle pi."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError("split parameter must lie in (0, 1)")
    i = edge_index % P.k
    u, w = P.vertices[i], P.vertices[(i + 1) % P.k]
    m = u + (w - u) * t
    new_v = list(P.vertices[: i + 1]) + [m] + list(P.vertices[i + 1:])
    new_a = list(P.angles[: i + 1]) + [Fraction(1)] + list(P.angles[i + 1:])
    return _from_points(new_v, new_a, P.order)


def remove_marked_point(P: RealizedPolygon, index: int) -> RealizedPolygon:
    if P.angles[index] != 1:
        raise ValueError("only vertices of angle π can be removed")
    new_v = [v for j, v in enumerate(P.vertices) if j != index]
    new_a = [a for j, a in enumerate(P.angles) if j != index]
    return _from_points(new_v, new_a, P.order)


def _find_edge(P: RealizedPolygon, a: int, b: int) -> int:
    k = P.k
    if (a + 1) % k == b:
        return a
    if (b + 1) % k == a:
        return b
    raise ValueError("vertices are not adjacent")


def build_almost_right(signature) -> RealizedPolygon:
    """Realize an almost-right signature by gluing squares onto a right triangle.

    Deterministic order: expand the two non-right angles first, then grow a
    zigzag of 3pi/2 corners next to a spare right angle, then fix the number
    of marked points.
    """
    sig = [Fraction(x) for x in signature]
    if any(not 0 < x < 2 for x in sig):
        raise ValueError("angles must lie strictly between 0 and 2π")
    if sum(sig) != len(sig) - 2:
        raise ValueError(f"angles sum to {sum(sig)}π, expected {len(sig) - 2}π")
    odd = [x for x in sig if (2 * x).denominator != 1]
    if len(odd) != 2:
        raise ValueError("almost-right signatures have exactly two angles that are not multiples of π/2")
    half = Fraction(1, 2)
    betas = [x - half * int(2 * x) for x in odd]
    N = field_order_for(sig)
    # seed triangle (beta1, beta2, pi/2): vertices v1 = (1,0), v2 = (0, tan beta1), right angle at 0
    seed = PolygonSpec(tuple(betas) + (half,), (Fraction(1),), "generic", start=2)
    seed_poly = realize(seed)
    P = RealizedPolygon(tuple(v.lift(N) for v in seed_poly.vertices), seed_poly.angles, N)
    marks = [P.vertices[0], P.vertices[1]]  # exact positions of v1, v2

    def index_of(pt):
        return P.vertices.index(pt)

    for which in (0, 1):
        while P.angles[index_of(marks[which])] < odd[which]:
            # straight-angle points lie on straight edges; drop them so the
            # next right angle becomes adjacent again
            while Fraction(1) in P.angles:
                P = remove_marked_point(P, P.angles.index(Fraction(1)))
            i = index_of(marks[which])
            k = P.k
            nbr = None
            for j in ((i + 1) % k, (i - 1) % k):
                if P.angles[j] == half:
                    nbr = j
                    break
            if nbr is None:
                raise AssertionError("no right-angle neighbour to glue against")
            P = glue_square(P, _find_edge(P, i, nbr))

    n_three = sum(1 for x in sig if x == Fraction(3, 2))
    if n_three:
        expanded = {index_of(marks[w]) for w in (0, 1) if odd[w] > half}
        k = P.k
        p = None
        for j in range(k):
            if P.angles[j] == half and not any((j + d) % k in expanded for d in (1, -1)):
                p = P.vertices[j]
                break
        if p is None:
            raise AssertionError("no spare right angle for the zigzag")
        for _ in range(n_three):
            j = index_of(p)
            # clockwise from the marked point to p means the edge ending at p in ccw order
            prev = (j - 1) % P.k
            if P.angles[prev] != 1:
                P = insert_marked_point(P, prev, Fraction(1, 2))
                j = index_of(p)
                prev = (j - 1) % P.k
            P = glue_square(P, prev)
            # new vertices sit at prev+1 (next to the marked point) and prev+2 (next to p)
            p = P.vertices[(prev + 2) % P.k]
    # fix marked points: remove extras, add missing ones
    want_pi = sum(1 for x in sig if x == 1)
    while sum(1 for a in P.angles if a == 1) > want_pi:
        P = remove_marked_point(P, P.angles.index(Fraction(1)))
    while sum(1 for a in P.angles if a == 1) < want_pi:
        P = insert_marked_point(P, 0, Fraction(1, 2))
    if sorted(P.angles) != sorted(sig):
        raise AssertionError(f"construction produced {sorted(P.angles)}, wanted {sorted(sig)}")
    return P


def almost_right_spec(signature) -> PolygonSpec:
    sig = tuple(Fraction(x) for x in signature)
    return PolygonSpec(sig, tuple([Fraction(1)] * (len(sig) - 2)), "almost_right")


# -- text syntax ------------------------------------------------------------

def _kv(body: str) -> dict:
    out = {}
    for part in filter(None, body.split(",")):
        if "=" not in part:
            raise ValueError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _fraction_list(text: str) -> list[Fraction]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected a bracketed list, got {text!r}")
    return [Fraction(x.strip()) for x in text[1:-1].split(",") if x.strip()]


def parse_polygon(text: str):
    """Parse the CLI polygon syntax; returns a PolygonSpec or, for almost-right input, a RealizedPolygon."""
    text = text.strip()
    if ":" not in text:
        if text == "square":
            return make_square()
        raise ValueError(f"cannot parse polygon {text!r}")
    tag, body = text.split(":", 1)
    tag = tag.strip().lower()
    if tag in ("almost", "poly"):
        m = re.match(r"\s*(\[[^\]]*\])\s*(?:;\s*lengths\s*=\s*(\[[^\]]*\]))?\s*$", body)
        if not m:
            raise ValueError(f"cannot parse angle list {body!r}")
        angles = _fraction_list(m.group(1))
        if tag == "almost":
            return build_almost_right(angles)
        lengths = _fraction_list(m.group(2)) if m.group(2) else None
        return make_generic(angles, lengths)
    kv = _kv(body)

    def ints(*names):
        try:
            return [int(kv[n]) for n in names]
        except KeyError as exc:
            raise ValueError(f"missing parameter {exc.args[0]!r} in {text!r}") from None

    if tag == "right":
        a, n = ints("a", "n")
        return make_right_triangle(a, n, Fraction(kv.get("scale", 1)))
    if tag == "iso":
        a, b, n = ints("a", "b", "n")
        return make_isosceles(a, b, n, Fraction(kv.get("scale", 1)))
    if tag in ("para", "itrap", "rtrap"):
        a, b, n = ints("a", "b", "n")
        maker = {"para": make_parallelogram, "itrap": make_isosceles_trapezoid, "rtrap": make_right_trapezoid}[tag]
        default = {"para": "1", "itrap": "1/4", "rtrap": "1/2"}[tag]
        return maker(a, b, n, Fraction(kv.get("t", default)))
    raise ValueError(f"unknown polygon tag {tag!r}")


def as_realized(obj) -> RealizedPolygon:
    if isinstance(obj, RealizedPolygon):
        return obj
    if isinstance(obj, PolygonSpec):
        if obj.family == "almost_right":
            return build_almost_right(obj.angle_values)
        return realize(obj)
    if isinstance(obj, str):
        return as_realized(parse_polygon(obj))
    raise TypeError(f"cannot realize {type(obj).__name__}")
