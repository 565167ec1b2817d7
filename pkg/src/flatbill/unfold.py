"""Unfoldings of rational polygons as triangulated flat surfaces.

A polygon P is triangulated once (in P coordinates).  Copies of P are
indexed by cosets H\\G, where G is the dihedral group generated by the
linear parts of the edge reflections and H a subgroup of rotations:

* H trivial gives the translation-surface unfolding,
* H = {1, -1} gives the partial unfolding (holonomy in {1, -1}),
* H = all rotations gives the pillowcase double.

Each surface triangle carries exact local coordinates.  A gluing of edge e
of triangle t to edge e2 of triangle t2 comes with a rotation r: a vector w
in the frame of t2 reads as zeta_N^r * w in the frame of t.
"""
from __future__ import annotations

import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .exactnum import CycNumber, cross, dot, sign_of_real, vec
from .polygon import RealizedPolygon, as_realized, field_order_for
from .strata import StratumSignature

MAX_COPIES = int(os.environ.get("FLATBILL_MAX_COPIES", "20000"))
FORMAT = "flatbill-surface/1"


class SurfaceError(RuntimeError):
    """Construction produced an inconsistent surface."""


# -- the reflection group ---------------------------------------------------

def compose(g, h, N):
    """(k1, s1) o (k2, s2) for maps z -> zeta^k z or zeta^k conj(z)."""
    k1, s1 = g
    k2, s2 = h
    return ((k1 + (-k2 if s1 else k2)) % N, s1 ^ s2)


def inverse(g, N):
    k, s = g
    return g if s else ((-k) % N, 0)


def apply(g, z: CycNumber) -> CycNumber:
    k, s = g
    if s:
        z = z.conj()
    if k == 0:
        return z
    return z * CycNumber.zeta(z.order, k)


def direction_exponent(v: CycNumber, N: int) -> int:
    """j with v / |v| = zeta_N^j, checked exactly."""
    z = complex(v)
    guess = round(math.atan2(z.imag, z.real) / (2 * math.pi) * N) % N
    for j in (guess, (guess + 1) % N, (guess - 1) % N):
        u = v * CycNumber.zeta(N, -j)
        if u.is_real() and sign_of_real(u) > 0:
            return j
    raise SurfaceError("edge direction is not an N-th root of unity")


def edge_reflections(P: RealizedPolygon) -> list[tuple[int, int]]:
    N = P.order
    return [((2 * direction_exponent(e, N)) % N, 1) for e in P.edges]


def rotation_step(P: RealizedPolygon) -> int:
    """Generator exponent of the rotation subgroup of G."""
    N = P.order
    refl = edge_reflections(P)
    step = N
    for r in refl:
        step = gcd(step, (r[0] - refl[0][0]) % N)
    return step


def group_order(P: RealizedPolygon) -> int:
    return 2 * P.order // rotation_step(P)


def riemann_hurwitz_genus(angles) -> int:
    """Genus of the translation-surface unfolding from the angles alone.

    Euler characteristic of the tiling by |G| copies: vertex i of angle p/q
    contributes |G| / 2q points.
    """
    angles = [Fraction(a) for a in angles]
    k = len(angles)
    # rotations by 2 pi (1 - angle) generate a cyclic group of order lcm(denominators)
    rot = 1
    for a in angles:
        rot = lcm(rot, a.denominator)
    G = 2 * rot
    V = sum(Fraction(G, 2 * a.denominator) for a in angles)
    chi = V - Fraction(G * k, 2) + G
    if chi.denominator != 1 or chi.numerator % 2:
        raise SurfaceError("non-integral genus")
    return int(1 - chi.numerator // 2)


# -- triangulating the polygon ----------------------------------------------

def _orient(a, b, c) -> int:
    return sign_of_real(cross(b - a, c - a))


@dataclass
class PolygonTriangulation:
    """Triangulation of P with optional extra points.

    ``points[i]`` in P coordinates; ``theta[i]`` the angle around the point
    (units of pi); ``kind[i]`` one of "vertex", "boundary", "interior";
    ``vertex_index[i]`` the polygon vertex index for vertices.
    """

    points: list
    theta: list
    kind: list
    vertex_index: list
    triangles: list  # CCW index triples
    boundary: dict  # directed segment (a, b) -> polygon edge index

    def locate(self, z: CycNumber):
        """('point', i) | ('edge', t, e) | ('inside', t) | None."""
        for i, p in enumerate(self.points):
            if p == z:
                return ("point", i)
        for t, tri in enumerate(self.triangles):
            s = [_orient(self.points[tri[e]], self.points[tri[(e + 1) % 3]], z) for e in range(3)]
            if min(s) < 0:
                continue
            zeros = [e for e in range(3) if s[e] == 0]
            if not zeros:
                return ("inside", t)
            return ("edge", t, zeros[0])
        return None

    def _add_point(self, z, theta, kind, vidx=None) -> int:
        self.points.append(z)
        self.theta.append(theta)
        self.kind.append(kind)
        self.vertex_index.append(vidx)
        return len(self.points) - 1

    def insert(self, z: CycNumber, *, polygon_vertex: int | None = None, theta=None) -> int:
        loc = self.locate(z)
        if loc is None:
            raise ValueError("point lies outside the polygon")
        if loc[0] == "point":
            return loc[1]
        if loc[0] == "inside":
            t = loc[1]
            a, b, c = self.triangles[t]
            p = self._add_point(z, Fraction(2) if theta is None else theta, "interior")
            self.triangles[t] = (a, b, p)
            self.triangles.append((b, c, p))
            self.triangles.append((c, a, p))
            return p
        _, t, e = loc
        a, b, c = self.triangles[t][e], self.triangles[t][(e + 1) % 3], self.triangles[t][(e + 2) % 3]
        if (a, b) in self.boundary:
            edge = self.boundary.pop((a, b))
            kind = "vertex" if polygon_vertex is not None else "boundary"
            p = self._add_point(z, Fraction(1) if theta is None else theta, kind, polygon_vertex)
            self.boundary[(a, p)] = edge
            self.boundary[(p, b)] = edge
            self.triangles[t] = (a, p, c)
            self.triangles.append((p, b, c))
            return p
        p = self._add_point(z, Fraction(2) if theta is None else theta, "interior")
        self.triangles[t] = (a, p, c)
        self.triangles.append((p, b, c))
        for t2, tri in enumerate(self.triangles):
            for e2 in range(3):
                if tri[e2] == b and tri[(e2 + 1) % 3] == a:
                    d = tri[(e2 + 2) % 3]
                    self.triangles[t2] = (b, p, d)
                    self.triangles.append((p, a, d))
                    return p
        raise SurfaceError("internal edge without a partner triangle")


def triangulate(P: RealizedPolygon) -> PolygonTriangulation:
    """Ear clipping on the corners of P; straight-angle vertices are inserted afterwards."""
    corners = [i for i in range(P.k) if P.angles[i] != 1]
    pts = [P.vertices[i] for i in corners]
    m = len(pts)
    idx = list(range(m))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * m * m:
            raise ValueError("polygon could not be triangulated (is it simple?)")
        found = False
        for j in range(len(idx)):
            a, b, c = idx[j - 1], idx[j], idx[(j + 1) % len(idx)]
            if _orient(pts[a], pts[b], pts[c]) <= 0:
                continue
            ok = True
            for o in idx:
                if o in (a, b, c):
                    continue
                if (_orient(pts[a], pts[b], pts[o]) >= 0 and _orient(pts[b], pts[c], pts[o]) >= 0
                        and _orient(pts[c], pts[a], pts[o]) >= 0):
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                idx.pop(j)
                found = True
                break
        if not found:
            raise ValueError("polygon could not be triangulated (is it simple?)")
    if _orient(*(pts[i] for i in idx)) <= 0:
        raise ValueError("degenerate polygon")
    tris.append(tuple(idx))
    boundary = {}
    # map corner-to-corner boundary segments to the polygon edge that starts there
    for j in range(m):
        boundary[(j, (j + 1) % m)] = corners[j]
    tri = PolygonTriangulation(
        points=pts, theta=[P.angles[i] for i in corners], kind=["vertex"] * m,
        vertex_index=list(corners), triangles=tris, boundary=boundary)
    for i in range(P.k):
        if P.angles[i] == 1:
            tri.insert(P.vertices[i], polygon_vertex=i, theta=Fraction(1))
    # boundary segments must name the polygon edge they lie on
    tri.boundary = {(a, b): _edge_of_segment(P, tri.points[a], tri.points[b]) for (a, b) in tri.boundary}
    return tri


def _edge_of_segment(P: RealizedPolygon, za: CycNumber, zb: CycNumber) -> int:
    """Index of the polygon edge containing the segment za -> zb, traversed forwards."""
    for i in range(P.k):
        u, w = P.vertices[i], P.vertices[(i + 1) % P.k]
        d = w - u
        if not (cross(d, za - u).is_zero() and cross(d, zb - u).is_zero()):
            continue
        ta, tb, L = dot(d, za - u), dot(d, zb - u), dot(d, d)
        if sign_of_real(ta) >= 0 and sign_of_real(tb - ta) > 0 and sign_of_real(L - tb) >= 0:
            return i
    raise SurfaceError("boundary segment not on a polygon edge")


# -- surfaces ---------------------------------------------------------------

@dataclass
class ConePoint:
    id: int
    cone_angle: Fraction  # units of pi
    location: list  # (copy, polygon point index) pairs
    marked: bool = False
    point: int = -1  # index into the triangulation points
    label: str = ""

    @property
    def regular(self) -> bool:
        return self.cone_angle == 2 and not self.marked

    def to_json(self) -> dict:
        return {"id": self.id, "cone_angle": str(self.cone_angle), "location": [list(x) for x in self.location],
                "marked": self.marked, "point": self.point, "label": self.label}


@dataclass
class TranslationSurface:
    """A flat surface glued from triangles.

    kind: "translation" (all gluing rotations trivial), "half_translation"
    (rotations in {1, -1}) or "cone" (the pillowcase double).
    """

    order: int
    kind: str
    triangles: list  # (v0, v1, v2) CycNumbers, CCW, local frame
    gluings: list  # gluings[t][e] = (t2, e2, r)
    vertex: list  # vertex[t][c] = cone point id
    cone_points: list
    copy_of: list = field(default_factory=list)  # triangle -> copy index
    ptri_of: list = field(default_factory=list)  # triangle -> polygon triangle index
    corner_point: list = field(default_factory=list)  # triangle -> polygon point per corner
    boundary_edge: list = field(default_factory=list)  # triangle -> polygon edge per edge or None
    copies: list = field(default_factory=list)  # group elements (k, s)
    polygon: RealizedPolygon | None = None
    ptri: PolygonTriangulation | None = None
    subgroup: str = ""
    marked_points: list = field(default_factory=list)

    @property
    def n_copies(self) -> int:
        return len(self.copies)

    def area(self) -> CycNumber:
        total = CycNumber.rational(0, self.order)
        for a, b, c in self.triangles:
            total = total + cross(b - a, c - a)
        return total * Fraction(1, 2)

    def euler_characteristic(self) -> int:
        F = len(self.triangles)
        E = sum(len(g) for g in self.gluings) // 2
        V = len(self.cone_points)
        return V - E + F

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic()
        return (2 - chi) // 2

    def singular_ids(self) -> set:
        return {c.id for c in self.cone_points if not c.regular}

    def verify(self) -> None:
        """Exact checks: gluings match, involution, Gauss-Bonnet."""
        N = self.order
        for t, row in enumerate(self.gluings):
            for e, (t2, e2, r) in enumerate(row):
                back = self.gluings[t2][e2]
                if back[0] != t or back[1] != e or (back[2] + r) % N:
                    raise SurfaceError(f"gluing of ({t},{e}) is not an involution")
                if (t, e) == (t2, e2):
                    raise SurfaceError("edge glued to itself")
                a, b = self.triangles[t][e], self.triangles[t][(e + 1) % 3]
                a2, b2 = self.triangles[t2][e2], self.triangles[t2][(e2 + 1) % 3]
                if not ((b2 - a2) * CycNumber.zeta(N, r) + (b - a)).is_zero():
                    raise SurfaceError(f"edge holonomies of ({t},{e}) and ({t2},{e2}) disagree")
                if self.kind == "translation" and r % N:
                    raise SurfaceError("translation surface with a rotated gluing")
                if self.kind == "half_translation" and r % (N // 2):
                    raise SurfaceError("half-translation surface with a non-trivial rotation")
        chi = self.euler_characteristic()
        curvature = sum(2 - c.cone_angle for c in self.cone_points)
        if curvature != 2 * chi:
            raise SurfaceError(f"Gauss-Bonnet fails: sum(2 - angle) = {curvature}, 2 chi = {2 * chi}")
        if self.kind == "translation":
            if any(c.cone_angle.denominator != 1 or c.cone_angle.numerator % 2 for c in self.cone_points):
                raise SurfaceError("translation surface with a cone angle not in 2 pi Z")
        if self.kind == "half_translation":
            if any(c.cone_angle.denominator != 1 for c in self.cone_points):
                raise SurfaceError("half-translation surface with a cone angle not in pi Z")

    # serialization
    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "kind": self.kind,
            "cyclotomic_order": self.order,
            "polygons": [[v.to_json() for v in tri] for tri in self.triangles],
            "gluings": [[t, e, t2, e2, r] for t, row in enumerate(self.gluings)
                        for e, (t2, e2, r) in enumerate(row) if (t, e) <= (t2, e2)],
            "vertex": [list(v) for v in self.vertex],
            "cone_points": [c.to_json() for c in self.cone_points],
            "marked_points": list(self.marked_points),
            "copy_of": list(self.copy_of),
            "ptri_of": list(self.ptri_of),
            "corner_point": [list(c) for c in self.corner_point],
            "boundary_edge": [list(b) for b in self.boundary_edge],
            "copies": [list(g) for g in self.copies],
            "subgroup": self.subgroup,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "TranslationSurface":
        if d.get("format") != FORMAT:
            raise ValueError(f"unknown surface format {d.get('format')!r}")
        tris = [tuple(CycNumber.from_json(v) for v in tri) for tri in d["polygons"]]
        glue = [[None] * 3 for _ in tris]
        for t, e, t2, e2, r in d["gluings"]:
            glue[t][e] = (t2, e2, r)
            glue[t2][e2] = (t, e, (-r) % d["cyclotomic_order"])
        cps = [ConePoint(c["id"], Fraction(c["cone_angle"]), [tuple(x) for x in c["location"]],
                         c["marked"], c["point"], c["label"]) for c in d["cone_points"]]
        return cls(
            order=d["cyclotomic_order"], kind=d["kind"], triangles=tris, gluings=glue,
            vertex=[tuple(v) for v in d["vertex"]], cone_points=cps,
            copy_of=d.get("copy_of", []), ptri_of=d.get("ptri_of", []),
            corner_point=[tuple(c) for c in d.get("corner_point", [])],
            boundary_edge=[tuple(b) for b in d.get("boundary_edge", [])],
            copies=[tuple(g) for g in d.get("copies", [])], subgroup=d.get("subgroup", ""),
            marked_points=d.get("marked_points", []))

    @classmethod
    def loads(cls, text: str) -> "TranslationSurface":
        return cls.from_json(json.loads(text))


def _subgroup_coset_key(g, N, subgroup, pm_ok):
    k, s = g
    if subgroup == "trivial":
        return g
    if subgroup == "pm":
        return (k % (N // 2), s) if pm_ok else g
    if subgroup == "rot":
        return (0, s)
    raise ValueError(f"unknown subgroup {subgroup!r}")


def build_surface(P: RealizedPolygon, subgroup: str = "trivial", ptri: PolygonTriangulation | None = None,
                  marked: set | None = None) -> TranslationSurface:
    """Glue copies of P indexed by H\\G; see the module docstring."""
    N = P.order
    if ptri is None:
        ptri = triangulate(P)
    marked = set(marked or ())
    refl = edge_reflections(P)
    step = rotation_step(P)
    pm_ok = (N // 2) % step == 0
    if 2 * N // step > MAX_COPIES:
        raise ValueError(f"group order {2 * N // step} exceeds the cap {MAX_COPIES}")

    def key(g):
        return _subgroup_coset_key(g, N, subgroup, pm_ok)

    # BFS over cosets from the identity, edges in index order
    reps = [(0, 0)]
    index = {key((0, 0)): 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        g = reps[c]
        for i in range(P.k):
            h = compose(g, refl[i], N)
            kk = key(h)
            if kk not in index:
                index[kk] = len(reps)
                reps.append(h)
                queue.append(len(reps) - 1)
    if len(reps) > MAX_COPIES:
        raise ValueError(f"{len(reps)} copies exceed the cap {MAX_COPIES}")

    def h_rotation(h, rep):
        # h = sigma o rep with sigma a rotation; return its exponent
        sigma = compose(h, inverse(rep, N), N)
        if sigma[1]:
            raise SurfaceError("coset element differs by a reflection")
        return sigma[0]

    corner_map = {0: (0, 1, 2), 1: (0, 2, 1)}  # new corner j takes old corner perm[j]
    # old edge e (corner e -> e+1) becomes new edge: identity, or reversed order
    edge_map = {0: (0, 1, 2), 1: (2, 1, 0)}
    tris, copy_of, ptri_of, corner_pt, bedge = [], [], [], [], []
    tid = {}
    for c, g in enumerate(reps):
        perm = corner_map[g[1]]
        for pt, tri in enumerate(ptri.triangles):
            pts = [tri[perm[j]] for j in range(3)]
            tid[(c, pt)] = len(tris)
            tris.append(tuple(apply(g, ptri.points[p]) for p in pts))
            copy_of.append(c)
            ptri_of.append(pt)
            corner_pt.append(tuple(pts))
    nT = len(tris)
    glue = [[None] * 3 for _ in range(nT)]
    # internal edges of the polygon triangulation
    seg_owner = {}
    for pt, tri in enumerate(ptri.triangles):
        for e in range(3):
            seg_owner[(tri[e], tri[(e + 1) % 3])] = (pt, e)
    for c, g in enumerate(reps):
        emap = edge_map[g[1]]
        for pt, tri in enumerate(ptri.triangles):
            t = tid[(c, pt)]
            row = []
            for e in range(3):
                a, b = tri[e], tri[(e + 1) % 3]
                ne = emap[e]
                if (a, b) in ptri.boundary:
                    continue
                pt2, e2 = seg_owner[(b, a)]
                glue[t][ne] = (tid[(c, pt2)], emap[e2], 0)
    # polygon edges: copy g, edge i <-> coset of g o rho_i
    for c, g in enumerate(reps):
        emap = edge_map[g[1]]
        for pt, tri in enumerate(ptri.triangles):
            t = tid[(c, pt)]
            for e in range(3):
                a, b = tri[e], tri[(e + 1) % 3]
                if (a, b) not in ptri.boundary:
                    continue
                i = ptri.boundary[(a, b)]
                h = compose(g, refl[i], N)
                c2 = index[key(h)]
                r = h_rotation(h, reps[c2])
                # the neighbour copy has the opposite parity, so its local edge index differs
                ne = emap[e]
                ne2 = edge_map[reps[c2][1]][e]
                glue[t][ne] = (tid[(c2, pt)], ne2, r)
    if any(x is None for row in glue for x in row):
        raise SurfaceError("unglued edge")
    # cone points: union-find on (copy, polygon point)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c, g in enumerate(reps):
        for (a, b), i in ptri.boundary.items():
            h = compose(g, refl[i], N)
            c2 = index[key(h)]
            union((c, a), (c2, a))
            union((c, b), (c2, b))
    classes = {}
    for c in range(len(reps)):
        for p in range(len(ptri.points)):
            classes.setdefault(find((c, p)), []).append((c, p))
    cone_points = []
    cid = {}
    for root in sorted(classes):
        members = classes[root]
        p = members[0][1]
        angle = sum((ptri.theta[q] for _, q in members), Fraction(0))
        kind = ptri.kind[p]
        label = f"vertex {ptri.vertex_index[p]}" if kind == "vertex" else kind
        cp = ConePoint(len(cone_points), angle, sorted(members), marked=p in marked, point=p, label=label)
        for m in members:
            cid[m] = cp.id
        cone_points.append(cp)
    vertex = [tuple(cid[(copy_of[t], corner_pt[t][j])] for j in range(3)) for t in range(nT)]
    # boundary edge tags in local edge numbering
    bnd = []
    for t in range(nT):
        pts = corner_pt[t]
        row = []
        for e in range(3):
            row.append(ptri.boundary.get((pts[e], pts[(e + 1) % 3]), ptri.boundary.get((pts[(e + 1) % 3], pts[e]))))
        bnd.append(tuple(row))
    if subgroup == "trivial" or (subgroup == "pm" and not pm_ok):
        kind = "translation"
    elif subgroup == "pm":
        kind = "half_translation"
    else:
        kind = "half_translation" if all((2 * a).denominator == 1 for a in P.angles) else "cone"
    S = TranslationSurface(
        order=N, kind=kind, triangles=tris, gluings=glue, vertex=vertex, cone_points=cone_points,
        copy_of=copy_of, ptri_of=ptri_of, corner_point=corner_pt, boundary_edge=bnd, copies=reps,
        polygon=P, ptri=ptri, subgroup=subgroup, marked_points=sorted(marked))
    S.verify()
    expected = P.area() * len(reps)
    if not (S.area() - expected).is_zero():
        raise SurfaceError("area is not the number of copies times the polygon area")
    return S


def pillowcase_double(P) -> TranslationSurface:
    return build_surface(as_realized(P), "rot")


def _lift_polygon(vertices, angles, spec=None) -> RealizedPolygon:
    N = field_order_for(angles)
    verts = tuple(v.lift(lcm(v.order, N)) for v in vertices)
    M = max(v.order for v in verts)
    verts = tuple(v.lift(M) for v in verts)
    poly = RealizedPolygon(verts, tuple(Fraction(a) for a in angles), M, spec)
    poly.check()
    return poly


def symmetric_half(P: RealizedPolygon):
    """Half of a symmetric family member with the same unfolding, or None.

    Isosceles triangles split along the axis into right triangles;
    parallelograms and isosceles trapezoids split into right trapezoids.
    Returns (half, fold) where fold maps points of P into the half.
    """
    fam = P.spec.family if P.spec else None
    v = P.vertices
    if fam == "isosceles":
        mid = (v[0] + v[1]) * Fraction(1, 2)
        a = P.angles[0]
        half = _lift_polygon((v[0], mid, v[2]), (a, Fraction(1, 2), P.angles[2] / 2))
        axis = v[1] - v[0]

        def fold(z):
            if sign_of_real(dot(axis, z - mid)) > 0:
                return mid - (z - mid).conj() * (axis * axis.conj().inverse())
            return z
        return half, fold
    if fam == "isosceles_trapezoid":
        m1 = (v[0] + v[1]) * Fraction(1, 2)
        m2 = (v[2] + v[3]) * Fraction(1, 2)
        half = _lift_polygon((v[0], m1, m2, v[3]), (P.angles[0], Fraction(1, 2), Fraction(1, 2), P.angles[3]))
        axis = v[1] - v[0]

        def fold(z):
            if sign_of_real(dot(axis, z - m1)) > 0:
                return m1 - (z - m1).conj() * (axis * axis.conj().inverse())
            return z
        return half, fold
    if fam == "parallelogram":
        c = (v[0] + v[2]) * Fraction(1, 2)
        for s in range(2):
            p0, p1, p2, p3 = (v[(s + j) % 4] for j in range(4))
            d = p1 - p0
            t = dot(d, c - p0) / dot(d, d)
            if sign_of_real(t) > 0 and sign_of_real(1 - t) > 0:
                m1 = p0 + d * t
                m2 = c * 2 - m1
                angs = (P.angles[s], Fraction(1, 2), Fraction(1, 2), P.angles[(s + 3) % 4])
                half = _lift_polygon((p0, m1, m2, p3), angs)

                def fold(z, m1=m1, d=d):
                    if sign_of_real(dot(d, z - m1)) > 0:
                        return c * 2 - z
                    return z
                return half, fold
        raise SurfaceError("no perpendicular cut through the centre")
    return None


def partial_unfold(P) -> TranslationSurface:
    """Smallest cover of the pillowcase double with holonomy in {1, -1}.

    When the reflection group of P lacks -1 but P is a symmetric member of
    a family, the symmetric half (which has the same unfolding) is used.
    """
    P = as_realized(P)
    N = P.order
    if (N // 2) % rotation_step(P) != 0:
        split = symmetric_half(P)
        if split is not None:
            return build_surface(split[0], "pm")
    return build_surface(P, "pm")


def holonomy_surface(P) -> TranslationSurface:
    """Cover of the pillowcase double of P itself with holonomy in {1, -1}."""
    return build_surface(as_realized(P), "pm")


def unfold(P) -> TranslationSurface:
    return build_surface(as_realized(P), "trivial")


def stratum_of(S: TranslationSurface) -> StratumSignature:
    orders, marked = [], 0
    for c in S.cone_points:
        if S.kind == "translation":
            if c.cone_angle.denominator != 1 or c.cone_angle.numerator % 2:
                raise SurfaceError("cone angle not a multiple of 2π on a translation surface")
            k = c.cone_angle.numerator // 2 - 1
        else:
            if c.cone_angle.denominator != 1:
                raise ValueError("this surface carries no quadratic differential (cone angle not in πZ)")
            k = c.cone_angle.numerator - 2
        if k == 0:
            marked += c.marked
        else:
            orders.append(k)
    st = StratumSignature("abelian" if S.kind == "translation" else "quadratic", tuple(orders), marked)
    if st.genus != S.genus:
        raise SurfaceError(f"stratum genus {st.genus} differs from the triangulation genus {S.genus}")
    return st


def cone_angles(S: TranslationSurface) -> list[Fraction]:
    return sorted(c.cone_angle for c in S.cone_points)


# -- marked billiard points -------------------------------------------------

def to_point(z, order: int) -> CycNumber:
    if isinstance(z, CycNumber):
        return z.lift(lcm(z.order, order)) if order % z.order == 0 else z
    x, y = z
    return vec(Fraction(x), Fraction(y), order)


def mark_billiard_points(S_or_P, points, subgroup: str | None = None):
    """Rebuild the surface with every preimage of the given polygon points marked.

    Returns (surface, counts) where counts[i] is the number of preimages of points[i].
    """
    if isinstance(S_or_P, TranslationSurface):
        P, sub = S_or_P.polygon, subgroup or S_or_P.subgroup
        ptri = triangulate(P) if S_or_P.ptri is None else _copy_ptri(S_or_P.ptri)
    else:
        P, sub = as_realized(S_or_P), subgroup or "pm"
        ptri = triangulate(P)
    idx = []
    for z in points:
        z = to_point(z, P.order)
        if z.order != P.order:
            raise ValueError("point coordinates need a larger cyclotomic field than the polygon")
        # vertices and boundary points keep their angle; insert decides interior/boundary
        idx.append(ptri.insert(z))
    S = build_surface(P, sub, ptri, marked=set(idx))
    counts = [sum(1 for c in S.cone_points if c.point == p) for p in idx]
    return S, counts


def _copy_ptri(t: PolygonTriangulation) -> PolygonTriangulation:
    return PolygonTriangulation(list(t.points), list(t.theta), list(t.kind), list(t.vertex_index),
                                list(t.triangles), dict(t.boundary))
