"""Saddle connections and cylinders on triangulated flat surfaces.

Developed positions are exact: integer vectors in the power basis of
Q(zeta_N) over one common denominator, with a complex float shadow used for
fast predicates.  Whenever a float predicate is within its error margin the
exact value decides.

Enumeration is a visibility search.  From every corner of a start vertex a
wedge (open on both sides) is pushed across the opposite edge; a vertex
strictly inside a wedge is visible and splits it.  Rays that run exactly
through vertices (corner boundary rays, or rays through regular points) are
followed separately, so every direction is owned by exactly one search item.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
import operator
from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .exactnum import CycNumber, cross, reduce_exponents, sign_of_real, totient
from .unfold import ConePoint, SurfaceError, TranslationSurface

REL_TOL = 1e-9


def _add(a, b):
    return tuple(map(operator.add, a, b))


def _sub(a, b):
    return tuple(map(operator.sub, a, b))


def _neg(a):
    return tuple(-x for x in a)


class Kernel:
    """Precomputed exact and float data for one surface."""

    def __init__(self, S: TranslationSurface, singular: set | None = None):
        self.S = S
        N = self.N = S.order
        self.phi = totient(N)
        den = 1
        for tri in S.triangles:
            for v in tri:
                den = den * v.denominator // math.gcd(den, v.denominator)
        self.D = den
        self.zf = [cmath.exp(2j * math.pi * j / N) for j in range(self.phi)]
        # rotations that can occur as developing frames
        rots = {0}
        frontier = [0]
        gl = {r for row in S.gluings for (_, _, r) in row}
        while frontier:
            k = frontier.pop()
            for r in gl:
                k2 = (k + r) % N
                if k2 not in rots:
                    rots.add(k2)
                    frontier.append(k2)
        self.rots = sorted(rots)
        self.rot = {}
        self.rotf = {}
        for t, tri in enumerate(S.triangles):
            for k in self.rots:
                z = CycNumber.zeta(N, k)
                vs = [self.to_int(v * z if k else v) for v in tri]
                self.rot[t, k] = vs
                self.rotf[t, k] = [self.to_float(x) for x in vs]
        # third vertex relative to corner e
        self.rel = {}
        for (t, k), vs in self.rot.items():
            fs = self.rotf[t, k]
            for e in range(3):
                self.rel[t, k, e] = (_sub(vs[(e + 2) % 3], vs[e]), fs[(e + 2) % 3] - fs[e])
        self.glue = S.gluings
        self.vertex = S.vertex
        if singular is None:
            # a flat torus without marked points: use its triangulation vertices
            singular = S.singular_ids() or {c.id for c in S.cone_points}
        self.singular = set(singular)
        self.corners = defaultdict(list)
        for t in range(len(S.triangles)):
            for c in range(3):
                self.corners[S.vertex[t][c]].append((t, c))
        self.exact_calls = 0

    # conversions
    def to_int(self, x: CycNumber) -> tuple:
        x = x if x.order == self.N else x.lift(self.N)
        f = self.D // x.denominator
        return tuple(c * f for c in x.numerators)

    def to_float(self, v: tuple) -> complex:
        zf = self.zf
        return sum(c * zf[j] for j, c in enumerate(v) if c) / self.D

    def to_cyc(self, v: tuple) -> CycNumber:
        return CycNumber._make(self.N, list(v), self.D)

    def rotate(self, v: tuple, k: int) -> tuple:
        k %= self.N
        if k == 0:
            return v
        if 2 * k == self.N:
            return _neg(v)
        return self.to_int(self.to_cyc(v) * CycNumber.zeta(self.N, k))

    # predicates
    def cross_sign(self, a, af, b, bf) -> int:
        c = af.real * bf.imag - af.imag * bf.real
        tol = REL_TOL * abs(af) * abs(bf)
        if c > tol:
            return 1
        if c < -tol:
            return -1
        self.exact_calls += 1
        if self.cross_is_zero(a, b):
            return 0
        return sign_of_real(cross(self.to_cyc(a), self.to_cyc(b)))

    def cross_is_zero(self, a, b) -> bool:
        """Exact test of cross(a, b) = 0 in integer arithmetic."""
        N = self.N
        w = [0] * N
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        w[(j - i) % N] += ai * bj
        v = [w[m] - w[-m % N] for m in range(N)]
        return not any(reduce_exponents(N, v))

    def dot_sign(self, a, af, b, bf) -> int:
        c = af.real * bf.real + af.imag * bf.imag
        tol = REL_TOL * abs(af) * abs(bf)
        if c > tol:
            return 1
        if c < -tol:
            return -1
        self.exact_calls += 1
        x, y = self.to_cyc(a), self.to_cyc(b)
        return sign_of_real((x.conj() * y).real_part())

    def len2_le(self, v, vf, L2: Fraction) -> bool:
        n = abs(vf) ** 2
        if n < float(L2) * (1 - REL_TOL):
            return True
        if n > float(L2) * (1 + REL_TOL):
            return False
        self.exact_calls += 1
        return sign_of_real(CycNumber.rational(L2, self.N) - self.to_cyc(v).abs2()) >= 0

    def len2_cyc(self, v) -> CycNumber:
        return self.to_cyc(v).abs2()

    def cone_angle(self, vid: int) -> Fraction:
        return self.S.cone_points[vid].cone_angle


# -- records ----------------------------------------------------------------

@dataclass
class SaddleConnection:
    """An unoriented saddle connection stored in its canonical orientation.

    ``holonomy`` is in the local frame of the start triangle; ``end_rot``
    is the frame rotation of the end triangle relative to the start frame.
    """

    start: int
    end: int
    start_corner: tuple
    end_corner: tuple
    end_rot: int
    hol: tuple
    holf: complex
    path: tuple | None = None
    kernel: Kernel | None = field(default=None, repr=False, compare=False)

    @property
    def length2_float(self) -> float:
        return abs(self.holf) ** 2

    @property
    def length(self) -> float:
        return abs(self.holf)

    @property
    def holonomy(self) -> CycNumber:
        return self.kernel.to_cyc(self.hol)

    @property
    def length2(self) -> CycNumber:
        return self.holonomy.abs2()

    def end_direction(self) -> tuple:
        """Local direction at the end corner pointing back along the connection."""
        return self.kernel.rotate(_neg(self.hol), -self.end_rot)

    def sort_key(self):
        ang = math.atan2(self.holf.imag, self.holf.real)
        return (round(self.length2_float, 9), round(ang % math.pi, 12), self.start_corner, self.end_corner)


@dataclass
class Dart:
    sc: int
    sign: int  # +1 canonical orientation, -1 reversed
    corner: tuple
    direction: tuple  # local, int vector
    directionf: complex
    end_corner: tuple
    end_rot: int  # frame of end triangle relative to start triangle


@dataclass
class Cylinder:
    direction: CycNumber  # circumference vector in the frame of the first bottom dart
    circumference2: CycNumber
    height2: CycNumber
    area: CycNumber
    bottom: list  # darts (sc index, sign)
    top: list
    kind: str
    circumference_float: float = 0.0
    height_float: float = 0.0

    @property
    def circumference(self) -> float:
        return self.circumference_float

    @property
    def height(self) -> float:
        return self.height_float

    def boundary_ids(self) -> set:
        return {d[0] for d in self.bottom} | {d[0] for d in self.top}


# -- the search -------------------------------------------------------------

class _Search:
    """One visibility search rooted at a start vertex placed at the origin."""

    def __init__(self, K: Kernel, visit, prune, keep_paths=False, maxdist=None):
        self.K = K
        self.maxdist = maxdist  # plain distance pruning when prune is None
        self.visit = visit  # visit(vid, pos, posf, t, c, k, path) -> True if it blocks
        self.prune = prune  # prune(A, Af, B, Bf, R, Rf, Lv, Lvf) for wedges, (X, Xf, D, Df) for rays
        self.keep_paths = keep_paths
        self.stack = []

    def cross_into(self, t, k, V, e, path):
        """Cross edge e of developed triangle t; returns (t2, k2, V2, e2, path2)."""
        K = self.K
        t2, e2, r = K.glue[t][e]
        k2 = (k + r) % K.N
        a, b = V[e], V[(e + 1) % 3]
        rel, relf = K.rel[t2, k2, e2]
        c = (_add(b[0], rel), b[1] + relf)
        W = [None, None, None]
        W[e2] = b
        W[(e2 + 1) % 3] = a
        W[(e2 + 2) % 3] = c
        p2 = (t2, e2, path) if self.keep_paths else None
        return t2, k2, W, e2, p2

    def push_wedge(self, t, k, V, e, R, Lv, path):
        t2, k2, W, e2, p2 = self.cross_into(t, k, V, e, path)
        A, B = W[(e2 + 1) % 3], W[e2]
        if self.maxdist is not None:
            if _seg_wedge_distance(A[1], B[1], R[1], Lv[1]) > self.maxdist:
                return
        elif self.prune("wedge", A, B, R, Lv):
            return
        self.stack.append(("w", t2, k2, W, e2, R, Lv, p2))

    def push_ray_edge(self, t, k, V, e, D, path):
        t2, k2, W, e2, p2 = self.cross_into(t, k, V, e, path)
        A, B = W[(e2 + 1) % 3], W[e2]
        if self.maxdist is not None:
            if _seg_ray_distance(A[1], B[1], D[1]) > self.maxdist:
                return
        elif self.prune("ray", A, B, D, D):
            return
        self.stack.append(("r", t2, k2, W, e2, D, p2))

    def hit_vertex(self, t, k, V, c, path):
        """A search item reached developed vertex c of t."""
        K = self.K
        X = V[c]
        vid = K.vertex[t][c]
        blocks = self.visit(vid, X[0], X[1], t, c, k, V, path)
        if not blocks:
            self.stack.append(("v", t, k, V, c, X, path))

    def run(self):
        K = self.K
        stack = self.stack
        exact = K.cross_sign
        tol = REL_TOL
        while stack:
            item = stack.pop()
            kind = item[0]
            if kind == "w":
                _, t, k, V, e, R, Lv, path = item
                c = (e + 2) % 3
                C = V[c]
                cf, rf, lf = C[1], R[1], Lv[1]
                cx, cy, rx, ry, lx, ly = cf.real, cf.imag, rf.real, rf.imag, lf.real, lf.imag
                ca = abs(cx) + abs(cy)
                x = rx * cy - ry * cx
                m = tol * (abs(rx) + abs(ry)) * ca
                sR = 1 if x > m else (-1 if x < -m else exact(R[0], rf, C[0], cf))
                x = cx * ly - cy * lx
                m = tol * (abs(lx) + abs(ly)) * ca
                sL = 1 if x > m else (-1 if x < -m else exact(C[0], cf, Lv[0], lf))
                if sR > 0 and sL > 0:
                    self.hit_vertex(t, k, V, c, path)
                    self.push_wedge(t, k, V, (e + 1) % 3, R, C, path)
                    self.push_wedge(t, k, V, c, C, Lv, path)
                elif sR <= 0:
                    self.push_wedge(t, k, V, c, R, Lv, path)
                else:
                    self.push_wedge(t, k, V, (e + 1) % 3, R, Lv, path)
            elif kind == "r":
                _, t, k, V, e, D, path = item
                C = V[(e + 2) % 3]
                s = exact(D[0], D[1], C[0], C[1])
                if s == 0:
                    self.hit_vertex(t, k, V, (e + 2) % 3, path)
                elif s > 0:
                    self.push_ray_edge(t, k, V, (e + 1) % 3, D, path)
                else:
                    self.push_ray_edge(t, k, V, (e + 2) % 3, D, path)
            else:
                # continue the ray from the origin straight through a regular vertex
                _, t, k, V, c, X, path = item
                self.through_vertex(t, k, V, c, X, path)

    def through_vertex(self, t, k, V, c, X, path):
        K = self.K
        D = X
        guard = len(K.corners[K.vertex[t][c]]) + 2
        for _ in range(guard):
            Rv = (_sub(V[(c + 1) % 3][0], X[0]), V[(c + 1) % 3][1] - X[1])
            Lv = (_sub(V[(c + 2) % 3][0], X[0]), V[(c + 2) % 3][1] - X[1])
            sR = K.cross_sign(Rv[0], Rv[1], D[0], D[1])
            sL = K.cross_sign(D[0], D[1], Lv[0], Lv[1])
            if sR == 0 and K.dot_sign(Rv[0], Rv[1], D[0], D[1]) > 0:
                self.hit_vertex(t, k, V, (c + 1) % 3, path)
                return
            if sR > 0 and sL > 0:
                # through the corner interior to the opposite edge
                self.push_ray_edge(t, k, V, (c + 1) % 3, D, path)
                return
            # rotate counterclockwise to the next corner
            e = (c + 2) % 3
            t, k, V, e2, path = self.cross_into(t, k, V, e, path)
            c = e2
        raise SurfaceError("could not continue a ray through a regular vertex")


def _corner_dev(K: Kernel, t: int, c: int, k: int = 0):
    """Developed vertices of triangle t with corner c at the origin, frame k."""
    vs, fs = K.rot[t, k], K.rotf[t, k]
    o, of = vs[c], fs[c]
    return [(_sub(vs[j], o), fs[j] - of) for j in range(3)]


def _seg_wedge_distance(Af, Bf, Rf, Lf, ray=False) -> float:
    """Lower bound for the distance from 0 to the part of segment AB inside the wedge."""
    if ray:
        return _seg_ray_distance(Af, Bf, Rf)
    ax, ay = Af.real, Af.imag
    dx, dy = Bf.real - ax, Bf.imag - ay
    lo, hi = 0.0, 1.0
    # cross(R, A + s d) >= 0
    rx, ry = Rf.real, Rf.imag
    c1 = rx * dy - ry * dx
    if c1 > 0:
        lo = (ry * ax - rx * ay) / c1
    elif c1 < 0:
        hi = (ry * ax - rx * ay) / c1
    # cross(A + s d, L) >= 0
    lx, ly = Lf.real, Lf.imag
    c1 = dx * ly - dy * lx
    if c1 > 0:
        s = (ay * lx - ax * ly) / c1
        if s > lo:
            lo = s
    elif c1 < 0:
        s = (ay * lx - ax * ly) / c1
        if s < hi:
            hi = s
    lo = lo - 1e-7 if lo > 1e-7 else 0.0
    hi = hi + 1e-7 if hi < 1 - 1e-7 else 1.0
    if lo > hi:
        lo = hi = (lo + hi) / 2
    dd = dx * dx + dy * dy
    if dd == 0:
        return math.hypot(ax, ay)
    s = -(ax * dx + ay * dy) / dd
    s = hi if s > hi else (lo if s < lo else s)
    return math.hypot(ax + s * dx, ay + s * dy)


def _seg_ray_distance(Af, Bf, Df) -> float:
    """Distance from 0 to where the ray through Df meets segment AB (lower bound)."""
    ax, ay = Af.real, Af.imag
    dx, dy = Bf.real - ax, Bf.imag - ay
    rx, ry = Df.real, Df.imag
    c1 = rx * dy - ry * dx
    if c1 == 0:
        return min(math.hypot(ax, ay), math.hypot(ax + dx, ay + dy))
    s = (ry * ax - rx * ay) / c1
    s = 1.0 if s > 1 else (0.0 if s < 0 else s)
    lo, hi = max(0.0, s - 1e-7), min(1.0, s + 1e-7)
    dd = dx * dx + dy * dy
    t = -(ax * dx + ay * dy) / dd
    t = hi if t > hi else (lo if t < lo else t)
    return math.hypot(ax + t * dx, ay + t * dy)


def _normalize_end(K: Kernel, t, k, V, c):
    """Owning corner at vertex c for the direction back to the origin."""
    X = V[c]
    back = (_neg(X[0]), -X[1])
    Lv = (_sub(V[(c + 2) % 3][0], X[0]), V[(c + 2) % 3][1] - X[1])
    if K.cross_sign(back[0], back[1], Lv[0], Lv[1]) == 0 and K.dot_sign(back[0], back[1], Lv[0], Lv[1]) > 0:
        t2, e2, r = K.glue[t][(c + 2) % 3]
        return (t2, e2), (k + r) % K.N
    return (t, c), k


def _dir_cmp_cw(K: Kernel, d0, d0f, d1, d1f) -> bool:
    """True when d0 is clockwise of d1 inside one corner."""
    return K.cross_sign(d1, d1f, d0, d0f) < 0


def enumerate_saddle_connections(S: TranslationSurface, L, endpoint_filter=None, *, kernel: Kernel | None = None,
                                 singular=None, keep_paths=False) -> list[SaddleConnection]:
    """All unoriented saddle connections of length <= L, canonically sorted.

    endpoint_filter = (A, B): only connections joining a point of A to a point of B.
    """
    L = Fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    K = kernel or Kernel(S, singular)
    L2 = L * L
    Lf = float(L) * (1 + 1e-7) + 1e-12
    if endpoint_filter is not None:
        starts, ends = set(endpoint_filter[0]), set(endpoint_filter[1])
        if not starts <= K.singular or not ends <= K.singular:
            K.singular |= starts | ends
    else:
        starts = ends = set(K.singular)
    found = []
    for s in sorted(starts):
        for (t0, c0) in K.corners[s]:
            found.extend(_search_corner(K, s, t0, c0, L2, Lf, starts, ends, keep_paths))
    found.sort(key=lambda sc: sc.sort_key())
    return found


def _search_corner(K: Kernel, s, t0, c0, L2, Lf, starts, ends, keep_paths):
    out = []
    V = _corner_dev(K, t0, c0)

    def prune(kind, A, B, R, Lv):
        if kind == "wedge":
            return _seg_wedge_distance(A[1], B[1], R[1], Lv[1]) > Lf
        return _seg_wedge_distance(A[1], B[1], R[1], R[1], ray=True) > Lf

    def visit(vid, X, Xf, t, c, k, Vd, path):
        if vid not in K.singular:
            return abs(Xf) > Lf
        if vid in ends and K.len2_le(X, Xf, L2):
            (t1, c1), k1 = _normalize_end(K, t, k, Vd, c)
            keep = True
            if vid in starts:
                if (t1, c1) < (t0, c0):
                    keep = False
                elif (t1, c1) == (t0, c0):
                    d1 = K.rotate(_neg(X), -k1)
                    keep = _dir_cmp_cw(K, X, Xf, d1, K.to_float(d1))
            if keep:
                out.append(SaddleConnection(s, vid, (t0, c0), (t1, c1), k1, X, Xf,
                                            _unwind(path) if keep_paths else None, K))
        return True

    search = _Search(K, visit, None, keep_paths, maxdist=Lf)
    root = (t0, None, None) if keep_paths else None
    # the right boundary ray of the corner hits vertex c0 + 1 directly
    search.hit_vertex(t0, 0, V, (c0 + 1) % 3, root)
    R, Lv = V[(c0 + 1) % 3], V[(c0 + 2) % 3]
    search.push_wedge(t0, 0, V, (c0 + 1) % 3, R, Lv, root)
    search.run()
    return out


def _unwind(path):
    out = []
    while path is not None:
        out.append(path[:2])
        path = path[2]
    return tuple(reversed(out))


# -- cylinders --------------------------------------------------------------

def _darts(K: Kernel, scs: list[SaddleConnection]):
    darts = {}
    index = defaultdict(list)
    for i, sc in enumerate(scs):
        d_plus = Dart(i, 1, sc.start_corner, sc.hol, sc.holf, sc.end_corner, sc.end_rot)
        back = sc.end_direction()
        d_minus = Dart(i, -1, sc.end_corner, back, K.to_float(back), sc.start_corner, (-sc.end_rot) % K.N)
        for d in (d_plus, d_minus):
            darts[(i, d.sign)] = d
            index[d.corner].append(d)
    by_angle = {}
    for corner, lst in index.items():
        lst.sort(key=lambda d: cmath.phase(d.directionf))
        by_angle[corner] = ([cmath.phase(d.directionf) for d in lst], lst)
    return darts, by_angle


_ANGLE_TOL = 1e-6


def _find_dart(K: Kernel, index, corner, w, wf):
    """The dart at corner pointing along w, located by bisecting on its angle."""
    if corner not in index:
        return None
    angles, lst = index[corner]
    theta = cmath.phase(wf)
    for shift in (0.0, 2 * math.pi, -2 * math.pi):
        lo = bisect_left(angles, theta + shift - _ANGLE_TOL)
        hi = bisect_right(angles, theta + shift + _ANGLE_TOL)
        for d in lst[lo:hi]:
            if (K.cross_sign(d.direction, d.directionf, w, wf) == 0
                    and K.dot_sign(d.direction, d.directionf, w, wf) > 0):
                return d
    return None


def _corner_vectors(K: Kernel, t, c, k):
    vs, fs = K.rot[t, k], K.rotf[t, k]
    R = (_sub(vs[(c + 1) % 3], vs[c]), fs[(c + 1) % 3] - fs[c])
    Lv = (_sub(vs[(c + 2) % 3], vs[c]), fs[(c + 2) % 3] - fs[c])
    return R, Lv


def _in_sector(K, R, Lv, w) -> bool:
    """w in the half-open corner sector [R, Lv)."""
    if K.cross_sign(R[0], R[1], w[0], w[1]) < 0:
        return False
    if K.cross_sign(R[0], R[1], w[0], w[1]) == 0:
        return K.dot_sign(R[0], R[1], w[0], w[1]) > 0
    return K.cross_sign(w[0], w[1], Lv[0], Lv[1]) > 0


def _sweep_cw(K: Kernel, corner, k, start_dir, target, max_steps):
    """Rotate clockwise from start_dir (inside corner, frame k) to the first corner owning target.

    Directions are developed vectors (int, float).  Returns (corner, k).
    """
    t, c = corner
    R, Lv = _corner_vectors(K, t, c, k)
    # inside the first corner only the arc from R up to start_dir counts
    if (K.cross_sign(R[0], R[1], target[0], target[1]) > 0
            and K.cross_sign(target[0], target[1], start_dir[0], start_dir[1]) > 0):
        return (t, c), k
    if (K.cross_sign(R[0], R[1], target[0], target[1]) == 0
            and K.dot_sign(R[0], R[1], target[0], target[1]) > 0):
        return (t, c), k
    for _ in range(max_steps):
        t2, e2, r = K.glue[t][c]
        t, c, k = t2, (e2 + 1) % 3, (k + r) % K.N
        R, Lv = _corner_vectors(K, t, c, k)
        if _in_sector(K, R, Lv, target):
            return (t, c), k
    raise SurfaceError("clockwise sweep did not reach the target direction")


def _chain(K: Kernel, darts, index, first: Dart, Lf: float):
    """Boundary chain with the cylinder on the left, starting with dart first.

    Returns (list of darts, circumference vector in the frame of first) or None.
    """
    N = K.N
    chain = [first]
    k = 0
    total = first.direction
    totalf = first.directionf
    v = first.direction
    vf = first.directionf
    cur = first
    seen = {(first.sc, first.sign)}
    while True:
        # arrive at the end corner; developed frame of the end triangle
        k = (k + cur.end_rot) % N
        back = K.rotate(_neg(v), 0)
        back = (back, -vf)
        arr = cur.end_corner
        # arrival direction in the arrival frame is back; rotate it into the corner frame
        target = (v, vf)
        n_corners = len(K.corners[K.vertex[arr[0]][arr[1]]])
        corner, k2 = _sweep_cw(K, arr, k, back, target, n_corners + 1)
        local = K.rotate(v, -k2)
        nxt = _find_dart(K, index, corner, local, K.to_float(local))
        if nxt is None:
            return None
        key = (nxt.sc, nxt.sign)
        if key == (first.sc, first.sign):
            if k2 % N != 0:
                return None
            return chain, (total, totalf)
        if key in seen:
            return None
        seen.add(key)
        chain.append(nxt)
        # parallel to v but not necessarily the same length
        step = K.rotate(nxt.direction, k2)
        total = _add(total, step)
        totalf += K.to_float(step)
        if abs(totalf) > Lf:
            return None
        v, vf = step, K.to_float(step)
        cur = nxt
        k = k2


def _cyl_kind(K: Kernel, S: TranslationSurface, bottom, top) -> str:
    def shape(chain):
        if len(chain) == 1:
            return "loop"
        if len(chain) == 2 and chain[0].sc == chain[1].sc:
            return "fold"
        return "other"

    b, t = shape(bottom), shape(top)
    if b == "loop" and t == "loop":
        return "simple"
    if {b, t} == {"loop", "fold"}:
        return "envelope"
    if b == "fold" and t == "fold":
        return "complex"
    return "other"


def _height_search(K: Kernel, first: Dart, cvec, Lf_area):
    """Lowest singular point above the bottom chain within one period.

    Returns (position, posf, t, c, k, V) of the best hit.
    """
    v, vf = first.direction, first.directionf
    cf = cvec[1]
    clen = abs(cf)
    unit = vf / abs(vf)
    best = {"h": Lf_area, "hit": None}

    def par_h(zf):
        w = zf / unit
        return w.real, w.imag

    def prune(kind, A, B, R, Lv):
        pa, ha = par_h(A[1])
        pb, hb = par_h(B[1])
        if kind == "wedge":
            dist = _seg_wedge_distance(A[1], B[1], R[1], Lv[1])
        else:
            dist = _seg_wedge_distance(A[1], B[1], R[1], R[1], ray=True)
        margin = 1e-7 * (1 + clen)
        if min(ha, hb) > best["h"] + margin and dist > best["h"] + margin:
            return True
        if min(pa, pb) > clen + margin and dist > clen + margin:
            return True
        if max(pa, pb) < -margin:
            return True
        return False

    def visit(vid, X, Xf, t, c, k, Vd, path):
        p, h = par_h(Xf)
        if vid in K.singular:
            if h > 1e-12 and -1e-9 <= p < clen * (1 + 1e-9) and h < best["h"] * (1 + 1e-9):
                if best["hit"] is None or h < best["h"] * (1 - 1e-12):
                    best["h"] = h
                    best["hit"] = (X, Xf, t, c, k, Vd)
            return True
        return h > best["h"] * (1 + 1e-7) + 1e-9

    search = _Search(K, visit, prune)
    t, c = first.corner
    k = 0
    neg = (_neg(v), -vf)
    # sweep counterclockwise from v until -v, seeding one wedge per corner
    for _ in range(len(K.corners[K.vertex[t][c]]) + 2):
        V = _corner_dev(K, t, c, k)
        R, Lv = V[(c + 1) % 3], V[(c + 2) % 3]
        lo = (v, vf) if (t, c) == first.corner and k == 0 else R
        if lo is R:
            # the corner's right ray is inside the half-plane; its vertex is a candidate
            if K.cross_sign(v, vf, R[0], R[1]) > 0:
                search.hit_vertex(t, k, V, (c + 1) % 3, None)
        end_here = K.cross_sign(neg[0], neg[1], Lv[0], Lv[1]) >= 0 and K.cross_sign(lo[0], lo[1], neg[0], neg[1]) > 0
        hi = neg if end_here else Lv
        search.push_wedge(t, k, V, (c + 1) % 3, lo, hi, None)
        if end_here:
            break
        t2, e2, r = K.glue[t][(c + 2) % 3]
        t, c, k = t2, e2, (k + r) % K.N
    search.run()
    return best["hit"]


def cylinders_up_to(S: TranslationSurface, L, *, scs=None, kernel: Kernel | None = None, singular=None):
    """All maximal cylinders with circumference <= L (translation or half-translation surfaces)."""
    L = Fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    if S.kind == "cone":
        raise ValueError("cylinders are only computed on translation or half-translation surfaces")
    K = kernel or Kernel(S, singular)
    if scs is None:
        scs = enumerate_saddle_connections(S, L, kernel=K)
    return _cylinders_from(K, S, scs, L)


def _cylinders_from(K: Kernel, S, scs, L):
    Lf = float(L) * (1 + 1e-9)
    darts, index = _darts(K, scs)
    used = set()
    cyls = []
    area_total = float(S.area())
    for key in sorted(darts):
        if key in used:
            continue
        first = darts[key]
        got = _chain(K, darts, index, first, Lf)
        if got is None:
            used.add(key)
            continue
        bottom, cvec = got
        for d in bottom:
            used.add((d.sc, d.sign))
        cf = abs(cvec[1])
        hit = _height_search(K, first, cvec, area_total / cf * (1 + 1e-6) + 1e-9)
        if hit is None:
            continue
        X, Xf, t, c, k, Vd = hit
        # top chain: from the hit vertex sweep clockwise from the direction back to the start until -v
        (corner, kk) = _hit_corner(K, t, k, Vd, c)
        v, vf = first.direction, first.directionf
        back = (_neg(X), -Xf)
        n_corners = len(K.corners[K.vertex[corner[0]][corner[1]]])
        try:
            tc, k2 = _sweep_cw(K, corner, kk, back, (_neg(v), -vf), n_corners + 1)
        except SurfaceError:
            continue
        local = K.rotate(_neg(v), -k2)
        top0 = _find_dart(K, index, tc, local, K.to_float(local))
        if top0 is None:
            continue
        got_top = _chain(K, darts, index, top0, Lf)
        if got_top is None:
            continue
        top, tvec = got_top
        for d in top:
            used.add((d.sc, d.sign))
        # the top circumference vector, read in the bottom frame, must be -cvec
        tv = K.rotate(tvec[0], k2)
        if _add(tv, cvec[0]) != tuple([0] * K.phi):
            continue
        cvec_c = K.to_cyc(cvec[0])
        area = cross(cvec_c, K.to_cyc(X))
        c2 = cvec_c.abs2()
        h2 = area * area / c2
        cyl = Cylinder(direction=cvec_c, circumference2=c2, height2=h2, area=area,
                       bottom=[(d.sc, d.sign) for d in bottom], top=[(d.sc, d.sign) for d in top],
                       kind=_cyl_kind(K, S, bottom, top),
                       circumference_float=cf, height_float=float(area) / cf)
        cyls.append(cyl)
    cyls.sort(key=lambda y: (round(y.circumference_float, 9),
                             round(math.atan2(complex(y.direction).imag, complex(y.direction).real) % math.pi, 12),
                             min(y.bottom + y.top)))
    return cyls


def _hit_corner(K: Kernel, t, k, V, c):
    return _normalize_end(K, t, k, V, c)


# -- single directions ------------------------------------------------------

def _direction_int(K: Kernel, direction) -> tuple:
    if isinstance(direction, CycNumber):
        return K.to_int(direction)
    x, y = direction
    from .exactnum import vec
    return K.to_int(vec(Fraction(x), Fraction(y), K.N))


def saddle_connections_in_direction(S: TranslationSurface, direction, max_length=None, *, kernel=None):
    """Saddle connections parallel to direction (either sign); errors when a separatrix does not close up."""
    K = kernel or Kernel(S)
    if S.kind == "cone":
        raise ValueError("directions are only global on translation or half-translation surfaces")
    v = _direction_int(K, direction)
    vf = K.to_float(v)
    if max_length is None:
        max_length = 50 * math.sqrt(float(S.area())) + 10
    Lf = float(max_length)
    out = []
    for s in sorted(K.singular):
        for (t0, c0) in K.corners[s]:
            for sgn in (1, -1):
                D = (v if sgn > 0 else _neg(v), vf * sgn)
                V = _corner_dev(K, t0, c0)
                R, Lv = V[(c0 + 1) % 3], V[(c0 + 2) % 3]
                if not _in_sector(K, R, Lv, D):
                    continue
                hits = []

                def visit(vid, X, Xf, t, c, k, Vd, path):
                    if vid in K.singular:
                        (t1, c1), k1 = _normalize_end(K, t, k, Vd, c)
                        hits.append(SaddleConnection(s, vid, (t0, c0), (t1, c1), k1, X, Xf, None, K))
                        return True
                    return False

                def prune(kind, A, B, R_, L_):
                    return _seg_wedge_distance(A[1], B[1], R_[1], R_[1], ray=True) > Lf

                search = _Search(K, visit, prune)
                if K.cross_sign(R[0], R[1], D[0], D[1]) == 0:
                    search.hit_vertex(t0, 0, V, (c0 + 1) % 3, None)
                else:
                    search.push_ray_edge(t0, 0, V, (c0 + 1) % 3, D, None)
                search.run()
                if not hits:
                    raise ValueError(f"direction is not periodic: a separatrix from point {s} "
                                     f"does not close within length {Lf:.3g}")
                sc = hits[0]
                rev_key = sc.end_corner
                keep = True
                if (rev_key < (t0, c0)) or (rev_key == (t0, c0) and not _dir_cmp_cw(
                        K, sc.hol, sc.holf, sc.end_direction(), K.to_float(sc.end_direction()))):
                    keep = False
                if keep:
                    out.append(sc)
    out.sort(key=lambda sc: sc.sort_key())
    return out, K


def cylinders_in_direction(S: TranslationSurface, direction, max_length=None):
    scs, K = saddle_connections_in_direction(S, direction, max_length)
    L = max((sc.length for sc in scs), default=0.0)
    total = sum(sc.length for sc in scs)
    cyls = _cylinders_from(K, S, scs, Fraction(total * 2 + 1).limit_denominator(1000))
    return cyls, scs, K


@dataclass
class CylinderGraph:
    cylinders: list
    edges: set  # (i, j): top of cylinder i shares a saddle connection with the bottom of j

    def to_json(self) -> dict:
        return {"vertices": len(self.cylinders), "edges": sorted(self.edges)}


def cylinder_graph(S: TranslationSurface, direction, max_length=None) -> CylinderGraph:
    cyls, scs, K = cylinders_in_direction(S, direction, max_length)
    if not area_partition_check(S, direction, _cyls=cyls):
        raise ValueError("direction is not completely periodic: cylinders do not fill the surface")
    v = _direction_int(K, direction)
    vf = K.to_float(v)
    # orient each cylinder so that "bottom" is the boundary traversed along +direction
    tops, bottoms = [], []
    for cyl in cyls:
        d0 = cyl.bottom[0]
        sc = scs[d0[0]]
        dirf = sc.holf if d0[1] > 0 else -sc.holf
        if abs(cmath.phase(dirf / vf)) < 1e-6:
            bottoms.append({x[0] for x in cyl.bottom})
            tops.append({x[0] for x in cyl.top})
        else:
            bottoms.append({x[0] for x in cyl.top})
            tops.append({x[0] for x in cyl.bottom})
    edges = set()
    for i in range(len(cyls)):
        for j in range(len(cyls)):
            if tops[i] & bottoms[j]:
                edges.add((i, j))
    return CylinderGraph(cyls, edges)


def area_partition_check(S: TranslationSurface, direction, max_length=None, *, _cyls=None) -> bool:
    """True iff the cylinders in the direction have total area equal to area(S), exactly."""
    try:
        cyls = _cyls if _cyls is not None else cylinders_in_direction(S, direction, max_length)[0]
    except ValueError:
        return False
    total = reduce(lambda a, b: a + b, (c.area for c in cyls), CycNumber.rational(0, S.order))
    return (total - S.area()).is_zero()


# -- fixtures ---------------------------------------------------------------

def square_tiled(right: list[int], up: list[int], marked_all: bool = True) -> TranslationSurface:
    """Translation surface from unit squares: square i has right neighbour right[i], top neighbour up[i].

    Each square is cut along its diagonal into two triangles.  Vertices with
    cone angle 2 pi are marked when marked_all is set.
    """
    n = len(right)
    if sorted(right) != list(range(n)) or sorted(up) != list(range(n)):
        raise ValueError("right and up must be permutations")
    N = 4
    from .exactnum import vec
    z = [vec(0, 0), vec(1, 0), vec(1, 1), vec(0, 1)]
    tris, glue = [], []
    # lower triangle 2i: (0,0),(1,0),(1,1); upper 2i+1: (0,0),(1,1),(0,1)
    for i in range(n):
        tris.append((z[0], z[1], z[2]))
        tris.append((z[0], z[2], z[3]))
    glue = [[None] * 3 for _ in tris]
    for i in range(n):
        lo, hi = 2 * i, 2 * i + 1
        glue[lo][2] = (hi, 0, 0)
        glue[hi][0] = (lo, 2, 0)
        # bottom of lo <-> top of the square below
        j = up[i]
        glue[hi][1] = (2 * j, 0, 0)
        glue[2 * j][0] = (hi, 1, 0)
        j = right[i]
        glue[lo][1] = (2 * j + 1, 2, 0)
        glue[2 * j + 1][2] = (lo, 1, 0)
    return surface_from_triangles(tris, glue, N, "translation", marked_all)


def surface_from_triangles(tris, glue, N, kind, marked_regular=True) -> TranslationSurface:
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, row in enumerate(glue):
        for e, (t2, e2, r) in enumerate(row):
            # vertex e of t <-> vertex e2+1 of t2; vertex e+1 <-> vertex e2
            for a, b in (((t, e), (t2, (e2 + 1) % 3)), ((t, (e + 1) % 3), (t2, e2))):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    classes = defaultdict(list)
    for t in range(len(tris)):
        for c in range(3):
            classes[find((t, c))].append((t, c))
    cps, vid = [], {}
    for root in sorted(classes):
        ang = 0.0
        for (t, c) in classes[root]:
            a, b, cc = (complex(x) for x in (tris[t][c], tris[t][(c + 1) % 3], tris[t][(c + 2) % 3]))
            ang += abs(cmath.phase((cc - a) / (b - a)))
        q = Fraction(ang / math.pi).limit_denominator(4 * N)
        if abs(float(q) * math.pi - ang) > 1e-6:
            raise SurfaceError("cone angle is not a rational multiple of pi")
        cp = ConePoint(len(cps), q, sorted(classes[root]), marked=(q == 2 and marked_regular), label="fixture")
        for x in classes[root]:
            vid[x] = cp.id
        cps.append(cp)
    vertex = [tuple(vid[(t, c)] for c in range(3)) for t in range(len(tris))]
    S = TranslationSurface(order=N, kind=kind, triangles=list(tris), gluings=glue, vertex=vertex, cone_points=cps,
                           copy_of=[0] * len(tris), subgroup="fixture",
                           marked_points=[c.id for c in cps if c.marked])
    S.verify()
    return S


def square_torus() -> TranslationSurface:
    return square_tiled([0], [0])


def hexagonal_torus() -> TranslationSurface:
    """Torus of the hexagonal lattice spanned by 1 and a sixth root of unity, with its point marked."""
    from .exactnum import zeta

    one, w = CycNumber.rational(1, 6), zeta(6)
    zero = CycNumber.rational(0, 6)
    tris = [(zero, one, w), (one, one + w, w)]
    glue = [[(1, 1, 0), (1, 2, 0), (1, 0, 0)], [(0, 2, 0), (0, 0, 0), (0, 1, 0)]]
    return surface_from_triangles(tris, glue, 6, "translation", True)


def staircase_l() -> TranslationSurface:
    """Three-square L: squares 0,1 in the bottom row, square 2 above square 0."""
    return square_tiled([1, 0, 2], [2, 1, 0], marked_all=False)


def staircase_4() -> TranslationSurface:
    """Four-square staircase: (0,0), (1,0), (1,1), (2,1)."""
    return square_tiled([1, 0, 3, 2], [0, 2, 1, 3], marked_all=False)


# -- output -----------------------------------------------------------------

def _dir_text(z: complex) -> str:
    return f"{z.real:.12g},{z.imag:.12g}"


def saddle_connections_csv(scs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["length2_exact", "length", "direction", "start", "end"])
    for sc in scs:
        w.writerow([str(sc.length2), f"{sc.length:.12g}", _dir_text(sc.holf), sc.start, sc.end])
    return buf.getvalue()


def cylinders_csv(cyls) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["circumference2_exact", "circumference", "height", "direction", "kind"])
    for c in cyls:
        w.writerow([str(c.circumference2), f"{c.circumference:.12g}", f"{c.height:.12g}",
                    _dir_text(complex(c.direction)), c.kind])
    return buf.getvalue()
