"""Billiard-level counts from cylinders and saddle connections on the
partial unfolding, and the weak-asymptotics estimator.

A band of periodic trajectories is an orbit of cylinders under the deck
group of the partial unfolding together with the sheet swap of the
pillowcase double.  Bands are identified by projecting their boundary
saddle connections to the polygon: a saddle connection projects to a
billiard path determined by its start point in P and its initial direction
in P, and those projections are invariant under every symmetry involved.
"""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import CycNumber, sign_of_real
from .geodesic import Kernel, _cylinders_from, enumerate_saddle_connections
from .polygon import as_realized
from .unfold import apply, holonomy_surface, inverse, mark_billiard_points, to_point


@dataclass
class Event:
    length2: CycNumber  # exact squared length
    length: float
    multiplicity: int
    divisor: int = 1
    flagged: int = 0  # bands among these that are fixed by the sheet swap

    def to_json(self) -> dict:
        return {"length2": str(self.length2), "length": self.length, "multiplicity": self.multiplicity,
                "divisor": self.divisor, "flagged": self.flagged}


@dataclass
class CountSeries:
    events: list
    mode: str
    polygon: str = ""
    area: float = 1.0
    normalized: bool = False
    L: float = 0.0
    meta: dict = field(default_factory=dict)

    def N(self, x: float) -> int:
        """Right-continuous cumulative count."""
        return sum(e.multiplicity for e in self.events if e.length <= x * (1 + 1e-12))

    @property
    def total(self) -> int:
        return sum(e.multiplicity for e in self.events)

    def lengths(self) -> list[float]:
        out = []
        for e in self.events:
            out.extend([e.length] * e.multiplicity)
        return out

    def to_json(self) -> dict:
        return {"mode": self.mode, "polygon": self.polygon, "area": self.area, "normalized": self.normalized,
                "L": self.L, "total": self.total, "meta": self.meta,
                "events": [e.to_json() for e in self.events]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["length2_exact", "length", "multiplicity"])
        for e in self.events:
            w.writerow([str(e.length2), f"{e.length:.12g}", e.multiplicity])
        return buf.getvalue()


def _merge_events(items) -> list[Event]:
    """items: (length2 exact, length float, flagged) -> events with exact ties merged."""
    items = sorted(items, key=lambda x: x[1])
    events: list[Event] = []
    for l2, lf, flag in items:
        match = None
        for e in reversed(events):
            if e.length < lf * (1 - 1e-9):
                break
            if e.length2 == l2:
                match = e
                break
        if match is None:
            events.append(Event(l2, lf, 1, 1, flag))
        else:
            match.multiplicity += 1
            match.flagged += flag
    events.sort(key=lambda e: e.length)
    return events


# -- projections to the polygon ---------------------------------------------

def _polygon_dir(S, K: Kernel, corner, local) -> CycNumber:
    g = S.copies[S.copy_of[corner[0]]]
    return apply(inverse(g, S.order), K.to_cyc(local))


def _projected_path(S, K: Kernel, sc) -> frozenset:
    """Unoriented billiard path of a saddle connection: {(start point, direction in P), (end ...)}."""
    t0, c0 = sc.start_corner
    t1, c1 = sc.end_corner
    p0 = S.corner_point[t0][c0]
    p1 = S.corner_point[t1][c1]
    u0 = _polygon_dir(S, K, sc.start_corner, sc.hol)
    u1 = _polygon_dir(S, K, sc.end_corner, sc.end_direction())
    return frozenset({(p0, u0), (p1, u1)})


def count_periodic_billiards(P, L, normalize: bool = False, *, return_cylinders: bool = False):
    """Bands of periodic billiard trajectories of length <= L.

    With normalize=True, lengths refer to the polygon rescaled to unit area.
    """
    P = as_realized(P)
    if L <= 0:
        raise ValueError("L must be positive")
    area = P.area()
    af = float(area)
    Lp = float(L) * (math.sqrt(af) if normalize else 1.0)
    Lq = Fraction(Lp).limit_denominator(10**9) + Fraction(1, 10**9)
    Y = holonomy_surface(P)
    d = len(Y.copies) // 2
    K = Kernel(Y)
    scs = enumerate_saddle_connections(Y, Lq, kernel=K)
    cyls = _cylinders_from(K, Y, scs, Lq)
    cyls = [c for c in cyls if c.circumference_float <= Lp * (1 + 1e-12)]
    groups = defaultdict(list)
    for cyl in cyls:
        key = frozenset(_projected_path(Y, K, scs[i]) for i in cyl.boundary_ids())
        groups[(key, cyl.circumference2)].append(cyl)
    items, anomalies, flagged = [], 0, 0
    for (key, c2), members in groups.items():
        size = len(members)
        if size not in (d, 2 * d):
            anomalies += 1
        fixed = int(size == d)
        flagged += fixed
        l2 = c2 / area if normalize else c2
        lf = members[0].circumference_float / (math.sqrt(af) if normalize else 1.0)
        items.append((l2, lf, fixed))
    series = CountSeries(_merge_events(items), "periodic_bands", P.spec.label() if P.spec else "polygon",
                         area=1.0 if normalize else af, normalized=normalize, L=float(L),
                         meta={"degree": d, "cylinders": len(cyls), "saddle_connections": len(scs),
                               "sheet_swap_fixed": flagged, "orbit_anomalies": anomalies,
                               "surface_copies": len(Y.copies)})
    if return_cylinders:
        return series, cyls
    return series


def _resolve_point(P, p):
    """A polygon point: vertex index (int) or coordinates."""
    if isinstance(p, int):
        if not 0 <= p < P.k:
            raise ValueError(f"vertex index {p} out of range")
        return P.vertices[p]
    z = to_point(p, P.order)
    if not _inside(P, z):
        raise ValueError(f"point {p} is outside the polygon")
    return z


def _inside(P, z) -> bool:
    from .exactnum import cross
    v = P.vertices
    for i in range(P.k):
        if sign_of_real(cross(v[(i + 1) % P.k] - v[i], z - v[i])) < 0:
            return False
    return True


def count_generalized_diagonals(P, p1, p2, L, normalize: bool = False, illumination: bool = False) -> CountSeries:
    """Billiard paths from p1 to p2 of length <= L that avoid every vertex and both points in between."""
    P = as_realized(P)
    if L <= 0:
        raise ValueError("L must be positive")
    z1, z2 = _resolve_point(P, p1), _resolve_point(P, p2)
    same = z1 == z2
    if same and not illumination:
        raise ValueError("p1 = p2 requires illumination mode")
    area = P.area()
    af = float(area)
    Lp = float(L) * (math.sqrt(af) if normalize else 1.0)
    Lq = Fraction(Lp).limit_denominator(10**9) + Fraction(1, 10**9)
    Y, counts = mark_billiard_points(P, [z1] if same else [z1, z2], "pm")
    ids1 = {c.id for c in Y.cone_points if c.point == _point_index(Y, z1)}
    ids2 = {c.id for c in Y.cone_points if c.point == _point_index(Y, z2)}
    K = Kernel(Y)
    scs = enumerate_saddle_connections(Y, Lq, (ids1, ids2), kernel=K)
    seen = {}
    for sc in scs:
        if sc.length > Lp * (1 + 1e-12):
            continue
        key = _projected_path(Y, K, sc)
        if key not in seen:
            seen[key] = sc
    items = []
    for sc in seen.values():
        l2 = sc.length2 / area if normalize else sc.length2
        lf = sc.length / (math.sqrt(af) if normalize else 1.0)
        items.append((l2, lf, 0))
    return CountSeries(_merge_events(items), "generalized_diagonals", P.spec.label() if P.spec else "polygon",
                       area=1.0 if normalize else af, normalized=normalize, L=float(L),
                       meta={"preimages": counts, "saddle_connections": len(scs),
                             "degree": len(Y.copies) // 2})


def _point_index(Y, z) -> int:
    pts = Y.ptri.points
    for i, w in enumerate(pts):
        if w == z:
            return i
    raise ValueError("point not found in the triangulation")


# -- weak asymptotics -------------------------------------------------------

def weak_asymptotic_estimate(series: CountSeries | list, L: float) -> float:
    """(1/T) * integral_0^T N(e^t) e^{-2t} dt with T = log L, evaluated piecewise in closed form."""
    lengths = series.lengths() if isinstance(series, CountSeries) else sorted(series)
    if not lengths:
        return 0.0
    T = math.log(L)
    if T <= 0:
        raise ValueError("L must exceed 1")
    times = sorted(max(0.0, math.log(x)) for x in lengths if x <= L * (1 + 1e-12))
    total = 0.0
    n = 0
    i = 0
    while i < len(times):
        t = times[i]
        while i < len(times) and times[i] == t:
            n += 1
            i += 1
        t_next = times[i] if i < len(times) else T
        total += n * (math.exp(-2 * t) - math.exp(-2 * t_next)) / 2
    return total / T


@dataclass
class EstimateReport:
    L_max: float
    estimate: float  # estimator times area
    predicted: float
    deviation: float
    trace: list  # (L, estimate * area) at L, L/2, L/4, L/8, smallest first

    def to_json(self) -> dict:
        return {"L_max": self.L_max, "estimate": self.estimate, "predicted": self.predicted,
                "deviation": self.deviation, "trace": [list(x) for x in self.trace]}


def compare_to_prediction(series: CountSeries, c_pred: float, area: float | None = None,
                          L: float | None = None) -> EstimateReport:
    if not series.events:
        raise ValueError("empty series")
    area = series.area if area is None else area
    L = L or series.L
    trace = []
    for j in (3, 2, 1, 0):
        x = L / 2 ** j
        if x > 1:
            trace.append((x, weak_asymptotic_estimate(series, x) * area))
    est = trace[-1][1]
    return EstimateReport(L, est, float(c_pred), abs(est - c_pred) / abs(c_pred), trace)
