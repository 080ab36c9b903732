"""Exact ground fields: the rationals and prime fields F_p.

All linear algebra in the engine runs over one exact field fixed at
session start.  Rational scalars are plain :class:`fractions.Fraction`;
prime-field scalars are :class:`FpElement` values carrying their modulus.
Both kinds support ``+ - * /``, unary ``-``, ``bool`` (nonzero test) and
decidable ``==``, which is all the linear algebra kit relies on.
"""

from __future__ import annotations

from fractions import Fraction


class Rationals:
    """The field of exact rationals."""

    char = 0
    name = "q"

    def of(self, numerator, denominator=1):
        return Fraction(numerator, denominator)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def parse(self, text: str):
        return Fraction(text)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")

    def __repr__(self):
        return "QQ"


class FpElement:
    """An element of F_p.  Arithmetic with plain ints coerces them mod p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        return FpElement(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        return FpElement(self.v - w, self.p)

    def __rsub__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        return FpElement(w - self.v, self.p)

    def __mul__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        return FpElement(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        if w == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.v * pow(w, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        w = self._lift(other)
        if w is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(w * pow(self.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v}"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The prime field F_p for prime p."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"fp:{p}"

    def of(self, numerator, denominator=1):
        x = FpElement(numerator, self.p)
        if denominator != 1:
            x = x / FpElement(denominator, self.p)
        return x

    @property
    def zero(self):
        return FpElement(0, self.p)

    @property
    def one(self):
        return FpElement(1, self.p)

    def parse(self, text: str):
        q = Fraction(text)
        return self.of(q.numerator, q.denominator)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def field_from_name(name: str):
    """Resolve a field flag value: ``q`` or ``fp:<p>``."""
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise ValueError(f"unknown field {name!r} (expected 'q' or 'fp:<p>')")
