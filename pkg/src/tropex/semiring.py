"""Exact tropical and exploded semiring arithmetic.

The tropical semiring has elements ``t^x`` with multiplication adding
exponents and addition taking the minimum. The exploded semiring refines it
with a complex coefficient: ``c t^x``. Multiplication multiplies
coefficients and adds exponents, addition keeps the term of smaller exponent
and adds coefficients on a tie.

Exponents are :class:`fractions.Fraction` and coefficients are
:class:`GaussianRational`, so equality is decidable and every law holds
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import NegativeExponent, NotPositiveReal


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value) -> str:
    """Render a rational as ``"p"`` or ``"p/q"`` in lowest terms."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        # Trusted path for parts that are already Fractions.
        out = object.__new__(cls)
        object.__setattr__(out, "re", re)
        object.__setattr__(out, "im", im)
        return out

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("machine complex numbers are inexact; pass a GaussianRational")
        return cls(as_fraction(value), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._make(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = GaussianRational(1)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"


@dataclass(frozen=True)
class TropicalValue:
    """The element ``t^exponent`` of the tropical semiring."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", as_fraction(self.exponent))

    def __mul__(self, other: "TropicalValue") -> "TropicalValue":
        return trop_mul(self, other)

    def __add__(self, other: "TropicalValue") -> "TropicalValue":
        return trop_add(self, other)

    def __str__(self):
        return f"t^{{{format_rational(self.exponent)}}}"


@dataclass(frozen=True)
class ExplodedValue:
    """The element ``coeff * t^exponent`` of the exploded semiring.

    No normalization is applied: ``0 t^1`` and ``0 t^2`` are different.
    """

    coeff: GaussianRational
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", GaussianRational.coerce(self.coeff))
        object.__setattr__(self, "exponent", as_fraction(self.exponent))

    def __mul__(self, other: "ExplodedValue") -> "ExplodedValue":
        return exp_mul(self, other)

    def __add__(self, other: "ExplodedValue") -> "ExplodedValue":
        return exp_add(self, other)

    def __str__(self):
        c = str(self.coeff)
        if not self.coeff.is_real:
            c = f"({c})"
        return f"{c} t^{{{format_rational(self.exponent)}}}"


ONE = ExplodedValue(GaussianRational(1), Fraction(0))


def trop_mul(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    """Tropical product: exponents add."""
    return TropicalValue(a.exponent + b.exponent)


def trop_add(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    """Tropical sum: the smaller exponent wins."""
    return TropicalValue(min(a.exponent, b.exponent))


def exp_mul(a: ExplodedValue, b: ExplodedValue) -> ExplodedValue:
    """Exploded product: coefficients multiply, exponents add."""
    return ExplodedValue(a.coeff * b.coeff, a.exponent + b.exponent)


def exp_add(a: ExplodedValue, b: ExplodedValue) -> ExplodedValue:
    """Exploded sum.

    The term with the smaller exponent is returned unchanged. On a tie the
    coefficients are added and the exponent kept, even if the sum is zero.
    """
    if a.exponent < b.exponent:
        return a
    if b.exponent < a.exponent:
        return b
    return ExplodedValue(a.coeff + b.coeff, a.exponent)


def tropical_part(a: ExplodedValue) -> TropicalValue:
    """Forget the coefficient."""
    return TropicalValue(a.exponent)


def smooth_part(a: ExplodedValue) -> GaussianRational:
    """Coefficient at exponent zero, zero for positive exponents.

    Raises:
        NegativeExponent: the exponent is negative, so the value has no
            smooth part.
    """
    if a.exponent < 0:
        raise NegativeExponent(f"exponent {format_rational(a.exponent)} is negative")
    return a.coeff if a.exponent == 0 else GaussianRational(0)


def compare_positive(a: ExplodedValue, b: ExplodedValue) -> int:
    """Order values with positive real coefficients.

    A larger exponent means a smaller value; equal exponents compare by
    coefficient.

    Returns:
        -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``.

    Raises:
        NotPositiveReal: a coefficient is non-real or not positive.
    """
    for v in (a, b):
        if not v.coeff.is_real or v.coeff.re <= 0:
            raise NotPositiveReal(f"{v} does not have a positive real coefficient")
    if a.exponent != b.exponent:
        return -1 if a.exponent > b.exponent else 1
    if a.coeff.re != b.coeff.re:
        return -1 if a.coeff.re < b.coeff.re else 1
    return 0
