"""Stratum signatures for abelian and quadratic differentials."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class StratumSignature:
    """A stratum H(k1,...) or Q(k1,...) with optional marked points.

    ``orders`` holds the nonzero orders as a sorted tuple; regular marked
    points are counted separately in ``marked``.  ``component`` is ``"hyp"``
    for a hyperelliptic component, otherwise None.
    """

    kind: str
    orders: tuple = ()
    marked: int = 0
    component: str | None = None

    def __post_init__(self):
        if self.kind not in ("abelian", "quadratic"):
            raise ValueError(f"unknown stratum kind {self.kind!r}")
        orders = [int(k) for k in self.orders]
        extra = sum(1 for k in orders if k == 0)
        orders = [k for k in orders if k != 0]
        low = 0 if self.kind == "abelian" else -1
        if any(k < low for k in orders):
            raise ValueError(f"order below {low} in {self.kind} stratum")
        object.__setattr__(self, "orders", tuple(sorted(orders, key=lambda k: (k < 0, k))))
        object.__setattr__(self, "marked", self.marked + extra)
        total = sum(orders)
        if self.kind == "abelian" and total % 2:
            raise ValueError("abelian orders must have even sum")
        if self.kind == "quadratic" and total % 4:
            raise ValueError("quadratic orders must sum to a multiple of 4")

    @classmethod
    def abelian(cls, orders, marked=0) -> "StratumSignature":
        return cls("abelian", tuple(orders), marked)

    @classmethod
    def quadratic(cls, orders, marked=0, component=None) -> "StratumSignature":
        return cls("quadratic", tuple(orders), marked, component)

    @property
    def genus(self) -> int:
        s = sum(self.orders)
        return s // 2 + 1 if self.kind == "abelian" else s // 4 + 1

    def without_marked(self) -> "StratumSignature":
        return StratumSignature(self.kind, self.orders, 0, self.component)

    def multiset(self) -> Counter:
        return Counter(self.orders)

    def __str__(self) -> str:
        letter = "H" if self.kind == "abelian" else "Q"
        if self.component:
            letter += "^" + self.component
        parts = []
        counts = Counter(self.orders)
        for k in self.orders:
            if k in counts:
                c = counts.pop(k)
                if k < 0:
                    parts.append(f"{k}^{c}" if c > 1 else str(k))
                else:
                    parts.extend([str(k)] * c)
        if self.marked:
            parts.append(f"0^{self.marked}" if self.marked > 1 else "0")
        return f"{letter}({', '.join(parts)})" if parts else f"{letter}(∅)"

    def to_json(self) -> dict:
        return {"kind": self.kind, "orders": list(self.orders), "marked": self.marked,
                "component": self.component, "genus": self.genus, "text": str(self)}

    @classmethod
    def from_json(cls, d: dict) -> "StratumSignature":
        return cls(d["kind"], tuple(d["orders"]), d.get("marked", 0), d.get("component"))


def order_from_cone_angle(angle: Fraction, kind: str) -> int:
    """Order of a singularity with the given cone angle, angle measured in units of pi."""
    angle = Fraction(angle)
    if kind == "abelian":
        if angle.denominator != 1 or angle.numerator % 2:
            raise ValueError(f"cone angle {angle}π is not a multiple of 2π")
        return angle.numerator // 2 - 1
    if angle.denominator != 1:
        raise ValueError(f"cone angle {angle}π is not a multiple of π")
    return angle.numerator - 2
