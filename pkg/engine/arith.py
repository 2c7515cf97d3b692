"""
Exact scalar arithmetic over the rationals and prime fields.

Polynomial code works on raw coefficient values (``Fraction`` for Q, ``int``
residues for F_p) through the ``FieldSpec`` helpers; ``Scalar`` is the
immutable public value type wrapping one such coefficient.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from engine.errors import FieldMismatchError, ZeroDivisionInFieldError

MAX_PRIME = 2 ** 31

RawScalar = Union[int, Fraction]


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: Q (characteristic 0) or F_p"""

    kind: str
    characteristic: int

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "prime_field":
            p = self.characteristic
            if p > MAX_PRIME or not isprime(p):
                raise ValueError(f"characteristic must be a prime <= 2^31, got {p}")
        else:
            raise ValueError(f"unknown field kind: {self.kind}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime_field", p)

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    def __str__(self):
        return f"F{self.characteristic}" if self.is_prime_field else "Q"

    # raw coefficient helpers

    def canon(self, value) -> RawScalar:
        """Bring an int, Fraction or rational-like value to canonical form"""
        if self.is_prime_field:
            p = self.characteristic
            if isinstance(value, Fraction) or hasattr(value, "denominator"):
                num, den = int(value.numerator), int(value.denominator)
                if den % p == 0:
                    raise ZeroDivisionInFieldError(f"denominator {den} vanishes in {self}")
                return num * pow(den, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def zero(self) -> RawScalar:
        return 0 if self.is_prime_field else Fraction(0)

    def one(self) -> RawScalar:
        return 1 if self.is_prime_field else Fraction(1)

    def add(self, a: RawScalar, b: RawScalar) -> RawScalar:
        if self.is_prime_field:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a: RawScalar, b: RawScalar) -> RawScalar:
        if self.is_prime_field:
            return (a - b) % self.characteristic
        return a - b

    def neg(self, a: RawScalar) -> RawScalar:
        if self.is_prime_field:
            return -a % self.characteristic
        return -a

    def mul(self, a: RawScalar, b: RawScalar) -> RawScalar:
        if self.is_prime_field:
            return a * b % self.characteristic
        return a * b

    def inv(self, a: RawScalar) -> RawScalar:
        if a == 0:
            raise ZeroDivisionInFieldError("division by zero")
        if self.is_prime_field:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a: RawScalar, b: RawScalar) -> RawScalar:
        return self.mul(a, self.inv(b))

    def render(self, a: RawScalar) -> str:
        if self.is_prime_field:
            return str(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"


@dataclass(frozen=True)
class Scalar:
    """An exact field element in canonical form"""

    value: RawScalar
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.canon(self.value))

    def _check(self, other: "Scalar"):
        if not isinstance(other, Scalar):
            return Scalar(other, self.field)
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field.div(self.value, other.value), self.field)

    def __neg__(self):
        return Scalar(self.field.neg(self.value), self.field)

    __radd__ = __add__
    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value == 0

    def canonical(self) -> "Scalar":
        return Scalar(self.value, self.field)

    def __str__(self):
        return self.field.render(self.value)


def scalar_arithmetic(a: Scalar, b: Scalar, op: str) -> Scalar:
    """
    Combine two scalars of the same field

    Args:
        a: left operand
        b: right operand
        op: one of add, sub, mul, div

    Returns:
        The exact result in canonical form
    """
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine elements of {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation: {op}")


def invert(a: Scalar) -> Scalar:
    return Scalar(a.field.inv(a.value), a.field)
