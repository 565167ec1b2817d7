"""Independent brute-force oracles used by the tests.

Nothing here imports the enumeration engine: square-tiled surfaces are
walked combinatorially, and billiards in the square and the 45-45-90
triangle are simulated by reflecting a moving point off the walls.
"""
import math
from fractions import Fraction


def primitive_vectors(L):
    """Unoriented primitive integer vectors with length <= L."""
    out = [(0, 1)] if L >= 1 else []
    R = int(L)
    for x in range(1, R + 1):
        for y in range(-R, R + 1):
            if x * x + y * y <= L * L and math.gcd(x, y) == 1:
                out.append((x, y))
    return out


class SquareTiled:
    """Square-tiled surface given by right/up permutations."""

    # corners: 0 = bottom-left, 1 = bottom-right, 2 = top-right, 3 = top-left
    def __init__(self, right, up):
        self.right, self.up = list(right), list(up)
        n = len(right)
        self.left = [0] * n
        self.down = [0] * n
        for i in range(n):
            self.left[right[i]] = i
            self.down[up[i]] = i
        parent = list(range(4 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        for s in range(n):
            union(4 * s + 1, 4 * right[s] + 0)
            union(4 * s + 3, 4 * up[s] + 0)
            union(4 * s + 2, 4 * right[s] + 3)
            union(4 * s + 2, 4 * up[s] + 1)
        self.cls = [find(x) for x in range(4 * n)]
        size = {}
        for c in self.cls:
            size[c] = size.get(c, 0) + 1
        # four corners per 2 pi of cone angle
        self.singular = {c for c, k in size.items() if k > 4}
        self.n = n

    def vertex(self, s, corner):
        return self.cls[4 * s + corner]

    def _walk(self, s, p, q):
        """From the start corner of square s, walk the segment (p, q); return (square, end corner)."""
        sx, sy = (1 if p > 0 else -1), (1 if q > 0 else -1)
        ap, aq = abs(p), abs(q)
        events = sorted([(Fraction(i, ap), 0) for i in range(1, ap)] + [(Fraction(j, aq), 1) for j in range(1, aq)])
        for _, kind in events:
            if kind == 0:
                s = self.right[s] if sx > 0 else self.left[s]
            else:
                s = self.up[s] if sy > 0 else self.down[s]
        end = {(1, 1): 2, (-1, 1): 3, (-1, -1): 0, (1, -1): 1}[(sx, sy)]
        return s, end

    def _diagonal_neighbour(self, s, p, q):
        sx, sy = (1 if p > 0 else -1), (1 if q > 0 else -1)
        s = self.right[s] if sx > 0 else self.left[s]
        return self.up[s] if sy > 0 else self.down[s]

    def oriented_connections(self, L):
        """Holonomies (with multiplicity) of oriented saddle connections of length <= L."""
        out = []
        for (p0, q0) in primitive_vectors(L):
            for p, q in ((p0, q0), (-p0, -q0)):
                if p == 0 or q == 0:
                    out.extend(self._axis(p, q, L))
                    continue
                sx, sy = (1 if p > 0 else -1), (1 if q > 0 else -1)
                start_corner = {(1, 1): 0, (-1, 1): 1, (-1, -1): 2, (1, -1): 3}[(sx, sy)]
                for s0 in range(self.n):
                    if self.vertex(s0, start_corner) not in self.singular:
                        continue
                    s, m = s0, 0
                    while True:
                        m += 1
                        if m * m * (p * p + q * q) > L * L:
                            break
                        s, end = self._walk(s, p, q)
                        if self.vertex(s, end) in self.singular:
                            out.append((m * p, m * q))
                            break
                        s = self._diagonal_neighbour(s, p, q)
        return out

    def _axis(self, p, q, L):
        out = []
        if q == 0:
            step = self.right if p > 0 else self.left
            start, end = (0, 1) if p > 0 else (1, 0)
        else:
            step = self.up if q > 0 else self.down
            start, end = (0, 3) if q > 0 else (3, 0)
        for s0 in range(self.n):
            if self.vertex(s0, start) not in self.singular:
                continue
            s, m = s0, 0
            while m + 1 <= L:
                m += 1
                if self.vertex(s, end) in self.singular:
                    out.append((m * p, m * q))
                    break
                s = step[s]
        return out


# -- billiard simulation ----------------------------------------------------

SQRT2 = math.sqrt(2)


def _reflect_box(x, y, dx, dy, t):
    """Unfolded coordinates to the unit square position."""
    def fold(u):
        u = u % 2.0
        return u if u <= 1 else 2 - u

    return fold(x + dx * t), fold(y + dy * t)


def square_periodic_bands(L):
    """Bands of periodic billiard trajectories in the unit square with length <= L, as a sorted list of lengths.

    A trajectory in direction (p, q), p, q coprime, q >= 0, closes after
    unfolded displacement (2p, 2q), so its length is 2 sqrt(p^2 + q^2).
    Directions (p, q) and (-p, q) give the same family of trajectories
    only after traversal in reverse when p or q is 0.  The band count is
    found by simulating trajectories and identifying families by the cyclic
    sequence of walls hit.
    """
    families = {}
    R = int(L) + 1
    for p in range(0, R + 1):
        for q in range(0, R + 1):
            if math.gcd(p, q) != 1:
                continue
            length = 2 * math.hypot(p, q)
            if length > L * (1 + 1e-12):
                continue
            for sgn in (1, -1):
                if sgn < 0 and (p == 0 or q == 0):
                    continue
                dx, dy = p * sgn, q
                code = _square_code(0.1234567, 0.3141592, dx, dy, length)
                families[code] = length
    return sorted(families.values())


def _square_code(x0, y0, dx, dy, length):
    """Canonical cyclic wall sequence of the trajectory (reversal-invariant)."""
    norm = math.hypot(dx, dy)
    ux, uy = dx / norm, dy / norm
    hits = []
    # wall crossings in the unfolded plane: x = k or y = k
    for k in range(-200, 201):
        for axis, u0, du in ((0, x0, ux), (1, y0, uy)):
            if du == 0:
                continue
            t = (k - u0) / du
            if 1e-12 < t <= length + 1e-9:
                wall = (axis, k % 2)
                hits.append((t, wall))
    hits.sort()
    seq = tuple(w for _, w in hits)
    return _canonical_cycle(seq)


def _canonical_cycle(seq):
    if not seq:
        return ()
    rots = [seq[i:] + seq[:i] for i in range(len(seq))]
    rev = seq[::-1]
    rots += [rev[i:] + rev[:i] for i in range(len(rev))]
    return min(rots)


def triangle_periodic_bands(L, samples=None):
    """Periodic bands in the 45-45-90 triangle with legs 1, by simulation.

    The triangle tiles the plane by reflections; its unfolding is the
    square torus of side 2 (8 copies).  Closed trajectories are found by
    launching a generic point in every direction (p, q) whose period in the
    tiling is at most L, simulating the billiard with explicit reflections
    off the legs and the hypotenuse, and keeping trajectories that return
    to the start point with the start direction.  Families are identified
    by the cyclic sequence of walls hit, up to reversal.
    """
    x0, y0 = 0.2113, 0.1267  # generic interior point
    families = {}
    R = int(L) + 1
    for p in range(-R, R + 1):
        for q in range(-R, R + 1):
            if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                continue
            for period in (math.hypot(p, q), 2 * math.hypot(p, q)):
                if period > L * (1 + 1e-12):
                    continue
                res = _simulate_triangle(x0, y0, p, q, period)
                if res is not None:
                    code = _canonical_cycle(res)
                    families.setdefault(code, period)
    return sorted(families.values())


def _simulate_triangle(x, y, dx, dy, length):
    """Reflect inside {x >= 0, y >= 0, x + y <= 1}; return wall codes if the orbit closes at `length`."""
    n = math.hypot(dx, dy)
    dx, dy = dx / n, dy / n
    sx, sy, sdx, sdy = x, y, dx, dy
    walls = []
    travelled = 0.0
    eps = 1e-12
    while True:
        ts = []
        if dx < -eps:
            ts.append((-x / dx, 0))
        if dy < -eps:
            ts.append((-y / dy, 1))
        if dx + dy > eps:
            ts.append(((1 - x - y) / (dx + dy), 2))
        t, wall = min(ts)
        if travelled + t >= length - 1e-9:
            rest = length - travelled
            x, y = x + dx * rest, y + dy * rest
            if abs(x - sx) < 1e-7 and abs(y - sy) < 1e-7 and abs(dx - sdx) < 1e-7 and abs(dy - sdy) < 1e-7:
                return tuple(walls)
            return None
        x, y = x + dx * t, y + dy * t
        travelled += t
        walls.append(wall)
        if wall == 0:
            dx = -dx
        elif wall == 1:
            dy = -dy
        else:
            dx, dy = -dy, -dx
