"""Exact invariant suite behind ``flatbill selftest``.

Each check returns (ok, detail); the runner prints one line per check and
reports failure if any check fails or raises.
"""
from __future__ import annotations

import json
import math
import sys
from fractions import Fraction

from . import classify as cl
from . import svconstants as sv
from .geodesic import (area_partition_check, cylinders_up_to, enumerate_saddle_connections, hexagonal_torus,
                       square_torus, staircase_4, staircase_l)
from .polygon import make_right_triangle
from .strata import StratumSignature
from .unfold import TranslationSurface, partial_unfold, riemann_hurwitz_genus, stratum_of, unfold


def right_params(n_max: int):
    """All valid (a, n) for right triangles with 2 <= n <= n_max."""
    for n in range(2, n_max + 1):
        for a in range(1, n):
            if math.gcd(a, 2 * n) == 1:
                yield a, n


def isosceles_params(n_max: int):
    for n in range(3, n_max + 1):
        for a in range(1, n):
            b = n - 2 * a
            if b >= 1 and math.gcd(math.gcd(a, b), n) == 1:
                yield a, b, n


def fixture_surfaces():
    return {"square torus": square_torus(), "hexagonal torus": hexagonal_torus(),
            "L staircase": staircase_l(), "four-square staircase": staircase_4()}


def check_gauss_bonnet(n_max: int = 10):
    count = 0
    for S in fixture_surfaces().values():
        S.verify()
        count += 1
    for a, n in right_params(n_max):
        unfold(make_right_triangle(a, n)).verify()
        count += 1
    return True, f"{count} surfaces"


def check_area_partition():
    dirs = [(1, 0), (0, 1), (1, 1), (2, 1), (1, -2)]
    from .exactnum import vec

    for name, S in fixture_surfaces().items():
        if name == "hexagonal torus":
            continue
        for x, y in dirs:
            if not area_partition_check(S, vec(x, y)):
                return False, f"{name} direction ({x},{y})"
    H = hexagonal_torus()
    one = H.triangles[0][1]
    w = H.triangles[0][2]
    for d in (one, w, one + w, w - one, one * 2 + w):
        if not area_partition_check(H, d):
            return False, "hexagonal torus"
    return True, "fixtures x periodic directions"


def check_strata(n_max: int = 12):
    for a, n in right_params(n_max):
        got = stratum_of(partial_unfold(make_right_triangle(a, n)))
        want = StratumSignature.quadratic((a - 2, n - a - 2) + (-1,) * n)
        if _strip(got) != _strip(want):
            return False, f"(a,n)=({a},{n}): {got} vs {want}"
    return True, f"n <= {n_max}"


def _strip(st: StratumSignature) -> StratumSignature:
    return StratumSignature(st.kind, st.orders)


def check_sv_identities(k_max: int = 10):
    for k1 in range(1, k_max + 1):
        for k2 in range(1, k_max + 1):
            lhs = sv.c_cyl_stratum(k1, k2)
            rhs = sv.c_env_stratum(k1, k2) + sv.c_simp_stratum(k1, k2)
            if lhs.coefficient != rhs.coefficient or (lhs.coefficient and lhs.pi_power != rhs.pi_power):
                return False, f"c_cyl != c_env + c_simp at ({k1},{k2})"
    for d1 in range(-1, 9):
        for d2 in range(-1, 9):
            if d1 == d2 == -1:
                continue  # two poles: not a covered configuration
            if sv.c_saddle(d1, d2) != sv.c_saddle(d2, d1):
                return False, f"c_saddle asymmetric at ({d1},{d2})"
    return True, f"k1, k2 <= {k_max}"


def check_eigenspace_genus(n_max: int = 40):
    for a, n in right_params(n_max):
        g = riemann_hurwitz_genus([Fraction(a, 2 * n), Fraction(n - a, 2 * n), Fraction(1, 2)])
        if cl.eigenspace_genus(a, n) != g:
            return False, f"(a,n)=({a},{n})"
    return True, f"n <= {n_max}"


def primitive_vectors(L: float):
    """Unoriented primitive integer vectors of length <= L."""
    out = [(0, 1)] if L >= 1 else []
    R = int(L)
    for x in range(1, R + 1):
        for y in range(-R, R + 1):
            if x * x + y * y <= L * L and math.gcd(x, y) == 1:
                out.append((x, y))
    return out


def check_torus_oracle(L: float = 20):
    S = square_torus()
    want = len(primitive_vectors(L))
    scs = enumerate_saddle_connections(S, L)
    cyl = cylinders_up_to(S, L)
    if len(scs) != want or len(cyl) != want:
        return False, f"L={L}: {len(scs)} saddle connections, {len(cyl)} cylinders, oracle {want}"
    return True, f"L={L}: {want}"


def check_classifier_grid(n_max: int = 25):
    for a, n in right_params(n_max):
        res = cl.classify_right(a, n)
        veech = min(a, n - a) <= 2
        if res.is_veech != veech or (cl.rank_right(a, n) == 1) != veech:
            return False, f"right ({a},{n})"
    for a, b, n in isosceles_params(n_max):
        cl.classify_isosceles(a, b, n)
    return True, f"n <= {n_max}"


def check_fixture_file(path: str):
    with open(path) as fh:
        S = TranslationSurface.from_json(json.load(fh))
    S.verify()
    return True, path


def run_selftest(grid: int | None = None, fixture: str | None = None, stream=sys.stdout) -> bool:
    checks = [
        ("gauss_bonnet", check_gauss_bonnet),
        ("area_partition", check_area_partition),
        ("strata", check_strata),
        ("siegel_veech_identities", check_sv_identities),
        ("eigenspace_genus", check_eigenspace_genus),
        ("torus_oracle", check_torus_oracle),
    ]
    if grid is not None:
        checks.append(("classifier_grid", lambda: check_classifier_grid(grid)))
    if fixture is not None:
        checks.append(("fixture_file", lambda: check_fixture_file(fixture)))
    all_ok = True
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure of that invariant
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=stream)
    return all_ok
