"""Exact arithmetic in a quadratic extension K(sqrt t) of Q or F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .fields import Field, QQ


def field_sqrt(field: Field, t):
    """A square root of t in the field itself, or None."""
    t = field(t)
    if field.characteristic == 0:
        if t < 0:
            return None
        a, b = t.numerator, t.denominator
        ra, rb = isqrt(a), isqrt(b)
        if ra * ra == a and rb * rb == b:
            return Fraction(ra, rb)
        return None
    p = field.p
    if t == 0:
        return 0
    if p == 2:
        return t
    if pow(t, (p - 1) // 2, p) != 1:
        return None
    return next(x for x in range(p) if x * x % p == t)


@dataclass(frozen=True)
class Quad:
    """a + b*sqrt(t) with t a fixed non-square (b == 0 allowed for any t)."""

    a: object
    b: object
    t: object
    field: Field = QQ

    @classmethod
    def lift(cls, x, t, field: Field = QQ) -> "Quad":
        return cls(field(x), field.zero, field(t), field)

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.b and self.b and other.t != self.t:
                raise ValueError("mixing different quadratic extensions")
            return other
        return Quad(self.field(other), self.field.zero, self.t, self.field)

    def _t(self, other: "Quad"):
        return self.t if self.b else other.t

    def __add__(self, other):
        o = self._coerce(other)
        f = self.field
        return Quad(f.reduce(self.a + o.a), f.reduce(self.b + o.b), self._t(o), f)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Quad(f.reduce(-self.a), f.reduce(-self.b), self.t, f)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field
        t = self._t(o)
        return Quad(f.reduce(self.a * o.a + self.b * o.b * t), f.reduce(self.a * o.b + self.b * o.a), t, f)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        f = self.field
        norm = f.reduce(self.a * self.a - self.b * self.b * self.t)
        inv = f.inv(norm)
        return Quad(f.reduce(self.a * inv), f.reduce(-self.b * inv), self.t, f)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.a == other.a and self.b == other.b and (not self.b or self.t == other.t)
        return not self.b and self.a == other

    def __hash__(self):
        return hash((self.a, self.b, self.t if self.b else None))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    @property
    def is_rational(self) -> bool:
        return not self.b

    def rational(self):
        if self.b:
            raise ValueError(f"{self} is not in the base field")
        return self.a

    def __str__(self) -> str:
        f = self.field
        if not self.b:
            return f.format(self.a)
        if f.characteristic == 0 and self.b < 0:
            return f"{f.format(self.a)}-{f.format(-self.b)}*sqrt({f.format(self.t)})"
        return f"{f.format(self.a)}+{f.format(self.b)}*sqrt({f.format(self.t)})"


def parse_quad(text: str, field: Field = QQ) -> Quad:
    """Inverse of ``str(Quad)``."""
    text = text.strip()
    if "sqrt(" not in text:
        return Quad(field.parse(text), field.zero, field.zero, field)
    head, _, rest = text.rpartition("*sqrt(")
    t = field.parse(rest.rstrip(")"))
    idx = max(head.rfind("+"), head.rfind("-"))
    if idx <= 0:
        raise ValueError(f"cannot parse quadratic number {text!r}")
    a, b = head[:idx], head[idx:].lstrip("+")
    return Quad(field.parse(a), field.parse(b), t, field)
