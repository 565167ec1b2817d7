"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) modulo the
N-th cyclotomic polynomial, with integer numerators over one common
denominator.  Equality is therefore a coefficient comparison.  Signs of real
elements are certified by fixed-point interval evaluation of the canonical
embedding zeta_N -> exp(2 pi i / N).
"""
from __future__ import annotations

import cmath
import math
import os
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from mpmath import libmp

MAX_ORDER = int(os.environ.get("FLATBILL_MAX_ORDER", "5040"))
PRECISION_CAP = int(os.environ.get("FLATBILL_PRECISION_CAP", "4096"))
START_BITS = 64


class CyclotomicError(ArithmeticError):
    pass


class OrderOverflow(CyclotomicError):
    pass


class NotSelfConjugate(CyclotomicError):
    pass


class PrecisionExhausted(CyclotomicError):
    pass


# -- integer polynomial helpers (coefficients low -> high) ------------------

@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(n: int) -> int:
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _exact_div(a: list[int], b: Sequence[int]) -> list[int]:
    # b monic, division known to be exact
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coordinates of zeta_n^j, 0 <= j < n."""
    phi = totient(n)
    poly = cyclotomic_poly(n)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, poly)]
    return tuple(rows)


@lru_cache(maxsize=None)
def _ramanujan(n: int) -> tuple[int, ...]:
    # trace of zeta_n^k over Q, for 0 <= k < phi(n)
    out = []
    for k in range(totient(n)):
        g = math.gcd(n, k) if k else n
        m = n // g
        out.append(_mobius(m) * totient(n) // totient(m))
    return tuple(out)


def reduce_exponents(n: int, vec: Sequence[int]) -> list[int]:
    """Reduce sum vec[k] zeta_n^k (any length) to power-basis integers."""
    phi = totient(n)
    table = power_table(n)
    out = list(vec[:phi]) + [0] * max(0, phi - len(vec))
    for k in range(phi, len(vec)):
        c = vec[k]
        if c:
            row = table[k % n]
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
    return out


def _check_order(n: int) -> None:
    if n > MAX_ORDER:
        raise OrderOverflow(f"cyclotomic order {n} exceeds the configured bound {MAX_ORDER}")


# -- the field element ------------------------------------------------------

class CycNumber:
    """An element of Q(zeta_N) in the reduced power basis."""

    __slots__ = ("order", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs: Iterable = (), *, _raw: tuple | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        _check_order(order)
        self.order = order
        self._hash = None
        if _raw is not None:
            num, den = _raw
        else:
            fr = [Fraction(c) for c in coeffs]
            phi = totient(order)
            if len(fr) > phi:
                den = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fr), 1)
                ints = [int(f * den) for f in fr]
                num = reduce_exponents(order, ints)
            else:
                fr += [Fraction(0)] * (phi - len(fr))
                den = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fr), 1)
                num = [int(f * den) for f in fr]
        g = reduce(math.gcd, num, den)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self._num = tuple(num)
        self._den = den

    # constructors
    @classmethod
    def _make(cls, order: int, num: Sequence[int], den: int) -> "CycNumber":
        return cls(order, _raw=(list(num), den))

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "CycNumber":
        return cls._make(order, power_table(order)[k % order], 1)

    @classmethod
    def rational(cls, q, order: int = 1) -> "CycNumber":
        q = Fraction(q)
        num = [0] * totient(order)
        num[0] = q.numerator
        return cls._make(order, num, q.denominator)

    @classmethod
    def from_exponents(cls, order: int, vec: Sequence, den: int = 1) -> "CycNumber":
        """Build sum vec[k] zeta^k / den from an unreduced exponent vector."""
        fr = [Fraction(c) for c in vec]
        d = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fr), 1)
        ints = [int(f * d) for f in fr]
        return cls._make(order, reduce_exponents(order, ints), d * den)

    # views
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self._num[0], self._den)

    # order changes
    def lift(self, order: int) -> "CycNumber":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        _check_order(order)
        step = order // self.order
        vec = [0] * order
        for k, c in enumerate(self._num):
            vec[(k * step) % order] += c
        return CycNumber._make(order, reduce_exponents(order, vec), self._den)

    def _align(self, other) -> tuple["CycNumber", "CycNumber"]:
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(other, self.order)
        if other.order == self.order:
            return self, other
        m = self.order * other.order // math.gcd(self.order, other.order)
        _check_order(m)
        return self.lift(m), other.lift(m)

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        if a._den == b._den:
            return CycNumber._make(a.order, [x + y for x, y in zip(a._num, b._num)], a._den)
        d = a._den * b._den // math.gcd(a._den, b._den)
        fa, fb = d // a._den, d // b._den
        return CycNumber._make(a.order, [x * fa + y * fb for x, y in zip(a._num, b._num)], d)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._make(self.order, [-x for x in self._num], self._den)

    def __sub__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        return self + (-other if isinstance(other, CycNumber) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNumber._make(self.order, [x * q.numerator for x in self._num], self._den * q.denominator)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        phi = len(a._num)
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        return CycNumber._make(a.order, reduce_exponents(a.order, prod), a._den * b._den)

    __rmul__ = __mul__

    def conj(self) -> "CycNumber":
        n = self.order
        vec = [0] * n
        for k, c in enumerate(self._num):
            vec[(-k) % n] += c
        return CycNumber._make(n, reduce_exponents(n, vec), self._den)

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        n = self.order
        if n <= 2:
            return CycNumber.rational(1 / self.to_fraction(), n)
        a = [Fraction(c) for c in self._num]
        s = _poly_inverse_mod(a, [Fraction(c) for c in cyclotomic_poly(n)])
        return CycNumber(n, [c * self._den for c in s])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self * (1 / Fraction(other))
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNumber.rational(other, self.order) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNumber.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.rational(other, self.order)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        # normalized traces are invariant under lifting, so equal values of
        # different orders hash alike
        if self._hash is None:
            self._hash = hash((_normalized_trace(self), _normalized_trace(self * self.conj())))
        return self._hash

    def is_real(self) -> bool:
        return self == self.conj()

    # geometry on the embedded value
    def real_part(self) -> "CycNumber":
        return (self + self.conj()) * Fraction(1, 2)

    def imag_part(self) -> "CycNumber":
        m = self.order * 4 // math.gcd(self.order, 4)
        x = self.lift(m)
        return (x.conj() - x) * CycNumber.zeta(m, m // 4) * Fraction(1, 2)

    def abs2(self) -> "CycNumber":
        return self * self.conj()

    def to_complex(self) -> complex:
        n = self.order
        total = 0j
        for k, c in enumerate(self._num):
            if c:
                total += c * cmath.exp(2j * math.pi * k / n)
        return total / self._den

    def __complex__(self):
        return self.to_complex()

    def __float__(self):
        return self.to_complex().real

    def sign(self) -> int:
        return sign_of_real(self)

    # serialization
    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNumber":
        return cls(int(data["order"]), [Fraction(int(p), int(q)) for p, q in data["coeffs"]])

    def __repr__(self):
        return f"CycNumber({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.order}^{k}")
        return " + ".join(terms) if terms else "0"


PlaneVector = CycNumber


def _normalized_trace(x: CycNumber) -> Fraction:
    ram = _ramanujan(x.order)
    return Fraction(sum(c * r for c, r in zip(x.numerators, ram)), x.denominator * totient(x.order))


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(c) for c in out])


def _poly_inverse_mod(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = r0[0]
    _, s = _poly_divmod(s0, m)
    return [x / c for x in s]


# -- certified signs --------------------------------------------------------

@lru_cache(maxsize=256)
def _cos_fixed(n: int, bits: int) -> tuple[int, ...]:
    # round(cos(2 pi k / n) * 2^bits), each within 1 unit of the true value
    work = bits + 40
    out = []
    for k in range(totient(n)):
        arg = libmp.from_rational(2 * k, n, work)
        c = libmp.mpf_cos_pi(arg, work, libmp.round_nearest)
        out.append(libmp.to_int(libmp.mpf_shift(c, bits), libmp.round_nearest))
    return tuple(out)


def _fixed_real(x: CycNumber, bits: int) -> tuple[int, int]:
    # value * den * 2^bits lies in [A - E, A + E]
    table = _cos_fixed(x.order, bits)
    acc = 0
    err = 0
    for c, m in zip(x.numerators, table):
        if c:
            acc += c * m
            err += abs(c)
    return acc, err + 1


def real_interval(x: CycNumber, bits: int = START_BITS) -> tuple[Fraction, Fraction]:
    """Certified enclosure of the real part of the embedded value."""
    a, e = _fixed_real(x, bits)
    scale = x.denominator << bits
    return Fraction(a - e, scale), Fraction(a + e, scale)


def sign_of_real(x: CycNumber, cap: int | None = None) -> int:
    """Return -1, 0 or 1 for a self-conjugate element."""
    if not isinstance(x, CycNumber):
        q = Fraction(x)
        return (q > 0) - (q < 0)
    if x.is_rational():
        c = x.numerators[0]
        return (c > 0) - (c < 0)
    if not x.is_real():
        raise NotSelfConjugate("sign_of_real needs a self-conjugate element")
    if x.is_zero():
        return 0
    cap = PRECISION_CAP if cap is None else cap
    bits = START_BITS
    while bits <= cap:
        a, e = _fixed_real(x, bits)
        if a > e:
            return 1
        if a < -e:
            return -1
        bits *= 2
    raise PrecisionExhausted(f"sign not certified within {cap} bits")


def compare_norm(v: CycNumber, w: CycNumber) -> int:
    """Compare |v|^2 with |w|^2 exactly; returns -1, 0 or 1."""
    return sign_of_real(v.abs2() - w.abs2())


def cyc_arith(x: CycNumber, y: CycNumber | None, op: str) -> CycNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown operation {op!r}")


# -- plane helpers ----------------------------------------------------------

def zeta(order: int, k: int = 1) -> CycNumber:
    return CycNumber.zeta(order, k)


def unit(p: int, q: int) -> CycNumber:
    """exp(i pi p / q)."""
    g = math.gcd(p, q)
    p, q = p // g, q // g
    return CycNumber.zeta(2 * q, p)


def vec(x, y, order: int = 4) -> CycNumber:
    order = order * 4 // math.gcd(order, 4)
    return CycNumber.rational(x, order) + CycNumber.zeta(order, order // 4) * Fraction(y)


def cross(u: CycNumber, v: CycNumber) -> CycNumber:
    return (u.conj() * v).imag_part()


def dot(u: CycNumber, v: CycNumber) -> CycNumber:
    return (u.conj() * v).real_part()
