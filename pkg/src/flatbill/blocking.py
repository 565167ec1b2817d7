"""Finite-blocking verdicts for the classified families, and an empirical
illumination search that can falsify them.

Verdicts are table-driven; every verdict carries a provenance string naming
the branch that produced it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import CycNumber, cross, sign_of_real
from .geodesic import Kernel, _corner_dev, _Search, enumerate_saddle_connections
from .polygon import PolygonSpec, as_realized
from .unfold import apply, inverse, mark_billiard_points, to_point

TORUS_N = {"right_triangle": (2, 3), "isosceles": (3, 4, 6)}


@dataclass(frozen=True)
class PointSpec:
    """A point of a polygon.

    kind is one of vertex, edge_midpoint, boundary, interior, barycenter.
    """

    kind: str
    index: int | None = None
    param: Fraction | None = None
    coords: tuple | None = None

    @classmethod
    def vertex(cls, i: int) -> "PointSpec":
        return cls("vertex", i)

    @classmethod
    def midpoint(cls, i: int) -> "PointSpec":
        return cls("edge_midpoint", i)

    @classmethod
    def boundary(cls, i: int, t) -> "PointSpec":
        return cls("boundary", i, Fraction(t))

    @classmethod
    def interior(cls, x, y) -> "PointSpec":
        return cls("interior", coords=(Fraction(x), Fraction(y)))

    @classmethod
    def barycenter(cls) -> "PointSpec":
        return cls("barycenter")

    @classmethod
    def parse(cls, text: str) -> "PointSpec":
        """v0, m1, b2:1/3, c, or x,y."""
        text = text.strip()
        if text in ("c", "barycenter"):
            return cls.barycenter()
        if text[0] == "v" and text[1:].isdigit():
            return cls.vertex(int(text[1:]))
        if text[0] == "m" and text[1:].isdigit():
            return cls.midpoint(int(text[1:]))
        if text[0] == "b" and ":" in text:
            i, t = text[1:].split(":")
            return cls.boundary(int(i), Fraction(t))
        if "," in text:
            x, y = text.split(",")
            return cls.interior(Fraction(x), Fraction(y))
        raise ValueError(f"cannot parse point {text!r}")

    def resolve(self, P) -> CycNumber:
        P = as_realized(P)
        v, k = P.vertices, P.k
        if self.kind == "vertex":
            return v[self.index % k]
        if self.kind == "edge_midpoint":
            i = self.index % k
            return (v[i] + v[(i + 1) % k]) * Fraction(1, 2)
        if self.kind == "boundary":
            i = self.index % k
            if not 0 <= self.param <= 1:
                raise ValueError("boundary parameter must lie in [0, 1]")
            return v[i] + (v[(i + 1) % k] - v[i]) * self.param
        if self.kind == "barycenter":
            total = v[0]
            for w in v[1:]:
                total = total + w
            return total * Fraction(1, k)
        if self.kind == "interior":
            z = to_point(self.coords, P.order)
            for i in range(k):
                if sign_of_real(cross(v[(i + 1) % k] - v[i], z - v[i])) < 0:
                    raise ValueError(f"point {self.coords} lies outside the polygon")
            return z
        raise ValueError(f"unknown point kind {self.kind!r}")

    def __str__(self):
        if self.kind == "vertex":
            return f"v{self.index}"
        if self.kind == "edge_midpoint":
            return f"m{self.index}"
        if self.kind == "boundary":
            return f"b{self.index}:{self.param}"
        if self.kind == "barycenter":
            return "c"
        return f"{self.coords[0]},{self.coords[1]}"


@dataclass(frozen=True)
class BlockingVerdict:
    blocked: bool
    blocking_set: str  # empty, midpoint_of_edge(i), barycenter, two_midpoints, torus_midpoints, none
    provenance: str
    points: tuple = ()  # exact blocking points when finite and known
    generic_member: bool = False

    def __post_init__(self):
        if not self.blocked and self.blocking_set != "none":
            raise ValueError("an unblocked verdict has no blocking set")

    def to_json(self) -> dict:
        return {"blocked": self.blocked, "blocking_set": self.blocking_set, "provenance": self.provenance,
                "points": [str(p) for p in self.points], "generic_member": self.generic_member}


UNBLOCKED = "none"


def _vertex_of(P, z) -> int | None:
    for i, v in enumerate(P.vertices):
        if v == z:
            return i
    return None


def _unblocked(why: str, generic=False) -> BlockingVerdict:
    return BlockingVerdict(False, UNBLOCKED, why, generic_member=generic)


def blocked_triangle(spec: PolygonSpec, p1: PointSpec, p2: PointSpec) -> BlockingVerdict:
    fam = spec.family
    if fam not in ("right_triangle", "isosceles"):
        raise ValueError(f"blocked_triangle handles right and isosceles triangles, not {fam!r}")
    P = as_realized(spec)
    z1, z2 = p1.resolve(P), p2.resolve(P)
    i1, i2 = _vertex_of(P, z1), _vertex_of(P, z2)
    prm = spec.params
    if prm["n"] in TORUS_N[fam]:
        pts = tuple(sorted(torus_blocking_points(P, z1, z2), key=lambda z: (complex(z).real, complex(z).imag)))
        return BlockingVerdict(True, "torus_midpoints", f"{fam}: unfolding is a torus cover, every pair is blocked; "
                               "blocking set = midpoints of the connecting paths", pts)
    if fam == "right_triangle":
        a, n = prm["a"], prm["n"]
        small = 0 if a == 1 else (1 if n - a == 1 else None)
        if small is not None and i1 == i2 == small:
            return BlockingVerdict(True, "empty", f"right triangle with smallest angle π/{2 * n}: "
                                   "that vertex is blocked from itself")
        return _unblocked("right triangle: no blocked pairs besides the listed ones")
    a, b, n = prm["a"], prm["b"], prm["n"]
    mid = (P.vertices[0] + P.vertices[1]) * Fraction(1, 2)
    base = BlockingVerdict  # shorthand

    def by_mid(why):
        return base(True, "midpoint_of_edge(0)", why, (mid,))

    if a == 1 and i1 in (0, 1) and i2 in (0, 1):
        if n % 2 == 0:
            return by_mid("isosceles with base angles π/n, n even: any two base vertices are blocked")
        if i1 != i2:
            return by_mid("isosceles with base angles π/n, n odd: the two distinct base vertices are blocked")
    if n % 2 == 1 and b == 1 and i1 == i2 == 2:
        return by_mid("isosceles with apex π/n, n odd: the apex is blocked from itself")
    if n % 2 == 0 and b == 2 and i1 == i2 == 2:
        return by_mid("isosceles with apex 2π/n, n even: the apex is blocked from itself")
    return _unblocked("isosceles triangle: no blocked pairs besides the listed ones")


def blocked_quadrilateral(spec: PolygonSpec, p1: PointSpec, p2: PointSpec, accept_generic: bool = True
                          ) -> BlockingVerdict:
    """Verdict for a member of the parallelogram or trapezoid families with generic orbit closure."""
    fam = spec.family
    if fam not in ("parallelogram", "isosceles_trapezoid", "right_trapezoid"):
        raise ValueError(f"blocked_quadrilateral handles the quadrilateral families, not {fam!r}")
    a, b, n = spec.params["a"], spec.params["b"], spec.params["n"]
    if n in (2, 3, 4, 6):
        raise ValueError(f"n = {n}: the unfolding is a torus cover or lies in a small known locus; "
                         "use the torus or genus two periodic-point theory instead")
    if not accept_generic:
        raise ValueError("quadrilateral verdicts hold for generic members only; pass accept_generic=True")
    P = as_realized(spec)
    z1, z2 = p1.resolve(P), p2.resolve(P)
    i1, i2 = _vertex_of(P, z1), _vertex_of(P, z2)
    if min(a, b) != 1:
        return _unblocked(f"{fam}: min(a, b) > 1, no blocked pairs", True)
    if fam == "right_trapezoid":
        small = 0 if a == 1 else 1
        if i1 == i2 == small:
            return BlockingVerdict(True, "empty", "right trapezoid: the π/n vertex is blocked from itself",
                                   generic_member=True)
        return _unblocked("right trapezoid: only the π/n vertex is blocked, from itself", True)
    if fam == "parallelogram":
        small = (0, 2) if a == 1 else (1, 3)
        c = (P.vertices[0] + P.vertices[2]) * Fraction(1, 2)
        pts, desc = (c,), "barycenter"
    else:
        small = (0, 1) if a == 1 else (2, 3)
        v = P.vertices
        pts = ((v[0] + v[1]) * Fraction(1, 2), (v[2] + v[3]) * Fraction(1, 2))
        desc = "two_midpoints"
    if i1 in small and i2 in small and (n % 2 == 0 or i1 != i2):
        parity = "even" if n % 2 == 0 else "odd"
        return BlockingVerdict(True, desc, f"{fam}, n {parity}: the π/n vertices are blocked", pts, True)
    return _unblocked(f"{fam}: only the π/n vertices are blocked", True)


def verdict(spec: PolygonSpec, p1: PointSpec, p2: PointSpec) -> BlockingVerdict:
    if spec.family in ("right_triangle", "isosceles"):
        return blocked_triangle(spec, p1, p2)
    return blocked_quadrilateral(spec, p1, p2)


# -- empirical illumination -------------------------------------------------

@dataclass
class IlluminationResult:
    found: bool
    L: float
    length: float | None = None
    length2: CycNumber | None = None
    start_direction: CycNumber | None = None  # initial direction in the polygon
    searched: int = 0  # saddle connections examined

    def to_json(self) -> dict:
        return {"found": self.found, "L": self.L, "length": self.length,
                "length2": str(self.length2) if self.length2 is not None else None,
                "start_direction": str(self.start_direction) if self.start_direction is not None else None,
                "searched": self.searched}


def _marked_surface(P, targets):
    """Partial unfolding with the given points marked; polygon vertices are always singular."""
    Y, counts = mark_billiard_points(P, targets, "pm")
    idx = []
    for z in targets:
        idx.append(next(i for i, w in enumerate(Y.ptri.points) if w == z))
    ids = [{c.id for c in Y.cone_points if c.point == p} for p in idx]
    singular = Y.singular_ids() | {c.id for c in Y.cone_points if Y.ptri.kind[c.point] == "vertex"}
    return Y, ids, singular


def connecting_paths(P, z1, z2, L, avoid=(), one_start=False):
    """All billiard saddle connections from z1 to z2 of length <= L avoiding vertices and the avoid set.

    The deck group of the cover permutes the preimages of a point
    transitively, so with one_start=True the search starts from a single
    preimage of whichever endpoint has more of them (a cone point of angle
    2π is cheaper to search from than a polygon vertex).  Every billiard
    path still appears, as the projection of some connection, possibly
    traversed backwards.
    """
    P = as_realized(P)
    targets = [z1] + ([z2] if z2 != z1 else []) + [z for z in avoid if z != z1 and z != z2]
    Y, ids, singular = _marked_surface(P, targets)
    K = Kernel(Y, singular)
    starts, ends = ids[0], (ids[1] if z2 != z1 else ids[0])
    if one_start:
        if len(ends) > len(starts):
            starts, ends = ends, starts
        starts = {min(starts)}
    Lq = Fraction(L).limit_denominator(10**6)
    return Y, K, enumerate_saddle_connections(Y, Lq, (starts, ends), kernel=K, keep_paths=True)


def empirical_illumination(P, p1, p2, L, avoid=()) -> IlluminationResult:
    """Search for a billiard path from p1 to p2 of length <= L avoiding the given points.

    The budget is doubled from a small start so that a short witness is found early.
    """
    P = as_realized(P)
    z1 = p1.resolve(P) if isinstance(p1, PointSpec) else to_point(p1, P.order)
    z2 = p2.resolve(P) if isinstance(p2, PointSpec) else to_point(p2, P.order)
    av = [a.resolve(P) if isinstance(a, PointSpec) else to_point(a, P.order) for a in avoid]
    budget = min(float(L), 2.0)
    searched = 0
    while True:
        Y, K, scs = connecting_paths(P, z1, z2, budget, av, one_start=True)
        searched = len(scs)
        if scs:
            sc = scs[0]
            g = Y.copies[Y.copy_of[sc.start_corner[0]]]
            u = apply(inverse(g, Y.order), sc.holonomy)
            return IlluminationResult(True, float(L), sc.length, sc.length2, u, searched)
        if budget >= float(L):
            return IlluminationResult(False, float(L), searched=searched)
        budget = min(float(L), budget * 2)


def path_midpoint(Y, K: Kernel, sc) -> CycNumber:
    """The midpoint of a saddle connection, as a point of the polygon."""
    if sc.path is None:
        raise ValueError("saddle connection was enumerated without paths")
    t0, c0 = sc.start_corner
    M = K.to_cyc(sc.hol) * Fraction(1, 2)
    search = _Search(K, None, None, keep_paths=False)
    V = _corner_dev(K, t0, c0)
    t, k = t0, 0
    steps = list(sc.path[1:])
    frames = [(t, k, V)]
    for (t2, e2) in steps:
        e = K.glue[t2][e2][1]
        t, k, V, _, _ = search.cross_into(t, k, V, e, None)
        frames.append((t, k, V))
    for (t, k, V) in frames:
        pts = [K.to_cyc(x[0]) for x in V]
        if all(sign_of_real(cross(pts[(j + 1) % 3] - pts[j], M - pts[j])) >= 0 for j in range(3)):
            local0 = Y.triangles[t][0]
            local = (M - pts[0]) * CycNumber.zeta(K.N, -k) + local0
            g = Y.copies[Y.copy_of[t]]
            return apply(inverse(g, Y.order), local)
    raise ValueError("midpoint not located along the path")


def midpoint_set(P, z1, z2, L) -> set:
    """Polygon points at the midpoints of all connecting paths of length <= L."""
    Y, K, scs = connecting_paths(P, z1, z2, L, one_start=True)
    return {path_midpoint(Y, K, sc) for sc in scs}


TORUS_MIDPOINT_BUDGET = 12


def torus_blocking_points(P, z1, z2, L=TORUS_MIDPOINT_BUDGET) -> set:
    """Finite blocking set for a torus-cover polygon.

    On a torus cover, the developed midpoint of a path from z1 to z2 is
    z1 + h/2 with h in the period lattice, so the midpoints of all connecting
    paths project to finitely many polygon points.  They are collected from
    the paths of length <= L.  Completeness is not proven here: an avoidance
    search at a larger budget is the check.
    """
    return midpoint_set(P, z1, z2, L)
