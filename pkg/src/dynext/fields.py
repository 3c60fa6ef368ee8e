"""Exact coefficient fields: arbitrary-precision rationals and large prime fields.

Scalars are either ``fractions.Fraction`` (rationals, always stored reduced
with positive denominator) or :class:`ModP` residues in canonical range
``[0, p)``.  All arithmetic is exact; nothing in this package touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Union

from .errors import FieldMismatchError, UsageError

# Prime characteristics below this bound are refused by default: a large
# field keeps randomly sampled avoidance constants effectively generic.
MIN_PRIME_CHARACTERISTIC = 1 << 20

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ModP:
    """Residue in a prime field, stored in canonical range [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "ModP":
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldMismatchError(
                    f"mixed prime fields: p={self.p} vs p={other.p}")
            return other
        if isinstance(other, int):
            return ModP(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModP(pow(self.value, e, self.p), self.p)

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return ModP(pow(self.value, self.p - 2, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


Scalar = Union[Fraction, ModP]


@dataclass(frozen=True)
class Field:
    """Descriptor of the coefficient field: the rationals or F_p."""

    kind: str  # "rational" | "prime"
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rational":
            if self.characteristic != 0:
                raise UsageError("rational field has characteristic 0")
        elif self.kind == "prime":
            if not is_prime(self.characteristic):
                raise UsageError(f"{self.characteristic} is not prime")
        else:
            raise UsageError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "Field":
        return _QQ

    @classmethod
    def prime(cls, p: int, *, allow_small: bool = False) -> "Field":
        """Prime field F_p; refuses p <= 2^20 unless allow_small."""
        if not allow_small and p <= MIN_PRIME_CHARACTERISTIC:
            raise UsageError(
                f"prime characteristic {p} <= 2^20; pass allow_small=True to override")
        return cls("prime", p)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rational else ModP(0, self.characteristic)

    def one(self) -> Scalar:
        return Fraction(1) if self.is_rational else ModP(1, self.characteristic)

    def of(self, x) -> Scalar:
        """Coerce an int / Fraction / ModP into this field."""
        if self.is_rational:
            if isinstance(x, ModP):
                raise FieldMismatchError("residue given where a rational was expected")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != self.characteristic:
                raise FieldMismatchError(
                    f"residue mod {x.p} given to field of characteristic {self.characteristic}")
            return x
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return ModP(x.numerator, self.characteristic)
            return ModP(x.numerator, self.characteristic) / ModP(x.denominator, self.characteristic)
        return ModP(int(x), self.characteristic)

    def fraction(self, num: int, den: int) -> Scalar:
        if den == 0:
            raise ZeroDivisionError("zero denominator in scalar literal")
        if self.is_rational:
            return Fraction(num, den)
        return ModP(num, self.characteristic) / ModP(den, self.characteristic)

    def inv(self, x: Scalar) -> Scalar:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x if self.is_rational else x.inverse()

    def random_scalar(self, bound: int, rng: Random) -> Scalar:
        """Uniform integer in [-bound, bound] over Q; uniform residue over F_p."""
        if bound < 1:
            raise UsageError("bound must be >= 1")
        if self.is_rational:
            return Fraction(rng.randint(-bound, bound))
        return ModP(rng.randrange(self.characteristic), self.characteristic)

    def format_scalar(self, x: Scalar) -> str:
        return str(x)

    def __str__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"


_QQ = Field("rational")
