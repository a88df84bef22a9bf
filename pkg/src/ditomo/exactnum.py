"""Exact arithmetic over the field Q(sqrt(2)).

Numbers of the form p + q*sqrt(2) with rational p, q are closed under the
four field operations, which is enough to carry the phi = pi/4 Bell
inequality coefficients (and their local-bound enumeration) exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)


class Rad2:
    """An element p + q*sqrt(2) of Q(sqrt(2)), with exact comparisons."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def sqrt2():
        return Rad2(0, 1)

    @classmethod
    def coerce(cls, value) -> "Rad2":
        if isinstance(value, Rad2):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot coerce {value!r} into Q(sqrt(2))")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = Rad2.coerce(other)
        return Rad2(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self):
        return Rad2(-self.p, -self.q)

    def __sub__(self, other):
        return self + (-Rad2.coerce(other))

    def __rsub__(self, other):
        return Rad2.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        other = Rad2.coerce(other)
        return Rad2(self.p * other.p + 2 * self.q * other.q,
                    self.p * other.q + self.q * other.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        other = Rad2.coerce(other)
        # multiply by the conjugate; p^2 - 2 q^2 = 0 only for 0
        den = other.p * other.p - 2 * other.q * other.q
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(2))")
        num = self * Rad2(other.p, -other.q)
        return Rad2(num.p / den, num.q / den)

    def __rtruediv__(self, other):
        return Rad2.coerce(other) / self

    # -- ordering -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of p + q*sqrt(2)."""
        p, q = self.p, self.q
        if p == 0 and q == 0:
            return 0
        if p >= 0 and q >= 0:
            return 1
        if p <= 0 and q <= 0:
            return -1
        # p and q have opposite signs: compare p^2 with 2 q^2
        if p > 0:  # q < 0
            return 1 if p * p > 2 * q * q else -1
        return -1 if p * p > 2 * q * q else 1

    def __eq__(self, other):
        try:
            other = Rad2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q))

    def __lt__(self, other):
        return (self - Rad2.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Rad2.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Rad2.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Rad2.coerce(other)).sign() >= 0

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversion -----------------------------------------------------------

    def __float__(self):
        return float(self.p) + float(self.q) * _SQRT2

    def is_rational(self) -> bool:
        return self.q == 0

    def __repr__(self):
        if self.q == 0:
            return f"Rad2({self.p})"
        return f"Rad2({self.p}, {self.q})"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        if self.p == 0:
            return f"{self.q}*sqrt(2)"
        return f"{self.p} + {self.q}*sqrt(2)"

    # -- serialization (spec'd JSON encoding) ---------------------------------

    def to_json(self) -> dict:
        return {"rat": [self.p.numerator, self.p.denominator],
                "rad2": [self.q.numerator, self.q.denominator]}

    @classmethod
    def from_json(cls, obj: dict) -> "Rad2":
        return cls(Fraction(obj["rat"][0], obj["rat"][1]),
                   Fraction(obj["rad2"][0], obj["rad2"][1]))


def as_float(x) -> float:
    """Uniform float view for mixed exact/float coefficient containers."""
    return float(x)


def coeff_to_json(x):
    """Serialize a coefficient, keeping exact values exact."""
    if isinstance(x, Rad2):
        return x.to_json()
    if isinstance(x, Fraction):
        return Rad2(x).to_json()
    if isinstance(x, int):
        return x
    return float(x)


def coeff_from_json(obj):
    if isinstance(obj, dict):
        return Rad2.from_json(obj)
    return obj
