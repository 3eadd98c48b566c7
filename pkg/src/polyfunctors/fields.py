"""Exact base fields: the rationals and prime fields F_p.

Field values are plain Python numbers: ``Fraction`` for Q and ``int`` in
``range(p)`` for F_p.  A field object knows how to normalise, invert, print
and parse its values; matrices and tensors carry the field they live over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Value = Union[Fraction, int]


class FieldMismatch(ValueError):
    """Raised when objects over different fields are combined."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Rationals:
    characteristic = 0

    @property
    def tag(self) -> str:
        return "q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    def reduce(self, x) -> Fraction:
        return x if type(x) is Fraction else Fraction(x)

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(x)

    def format(self, x) -> str:
        return str(Fraction(x))

    def parse(self, s: str) -> Fraction:
        s = s.strip()
        if "mod" in s:
            raise ValueError(f"{s!r} is not a rational number")
        return Fraction(s)

    def elements(self):
        raise ValueError("Q is infinite")

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def tag(self) -> str:
        return f"fp:{self.p}"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def __call__(self, x) -> int:
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x) -> int:
        return x % self.p

    def inv(self, x) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(x, -1, self.p)

    def format(self, x) -> str:
        return f"{x % self.p} mod {self.p}"

    def parse(self, s: str) -> int:
        s = s.strip()
        if "mod" in s:
            r, _, q = s.partition("mod")
            if int(q) != self.p:
                raise FieldMismatch(f"{s!r} is not an element of F_{self.p}")
            return int(r) % self.p
        return self(Fraction(s))

    def elements(self):
        return range(self.p)

    def __str__(self) -> str:
        return f"F_{self.p}"


Field = Union[Rationals, PrimeField]

QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse ``q`` or ``fp:<prime>``."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return QQ
    if text.startswith("fp:"):
        return GF(int(text[3:]))
    raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")


def same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"cannot combine {first} and {f}")
    return first
