"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class EgfSeries:
    """sum c_k x^k for k = 0..N; everything above degree N is discarded."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar], degree: int) -> "EgfSeries":
        cs = list(coeffs)[: degree + 1]
        cs += [0] * (degree + 1 - len(cs))
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _check(self, other: "EgfSeries") -> None:
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "EgfSeries") -> "EgfSeries":
        self._check(other)
        return EgfSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "EgfSeries") -> "EgfSeries":
        self._check(other)
        return EgfSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "EgfSeries":
        return EgfSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other: Union["EgfSeries", Scalar]) -> "EgfSeries":
        if not isinstance(other, EgfSeries):
            return EgfSeries(tuple(a * other for a in self.coeffs))
        self._check(other)
        a, b = self.coeffs, other.coeffs
        return EgfSeries(
            tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(self.degree + 1))
        )

    __rmul__ = __mul__

    def shift(self, power: int = 1) -> "EgfSeries":
        """Multiply by x**power, truncating."""
        return EgfSeries.from_coeffs([0] * power + list(self.coeffs), self.degree)

    def div_one_minus_x(self) -> "EgfSeries":
        """Divide by the unit 1 - x, i.e. multiply by 1 + x + x^2 + ..."""
        return self * geometric(self.degree)

    def egf_counts(self) -> list[Fraction]:
        """k! * c_k for every k, the sequence this series counts exponentially."""
        return [factorial(k) * c for k, c in enumerate(self.coeffs)]


def constant(value: Scalar, degree: int) -> EgfSeries:
    return EgfSeries.from_coeffs([value], degree)


def monomial(power: int, degree: int) -> EgfSeries:
    return EgfSeries.from_coeffs([0] * power + [1], degree)


def exp_series(degree: int, rate: int = 1) -> EgfSeries:
    """e^(rate*x)."""
    return EgfSeries(tuple(Fraction(rate**k, factorial(k)) for k in range(degree + 1)))


def geometric(degree: int) -> EgfSeries:
    """1/(1-x)."""
    return EgfSeries((Fraction(1),) * (degree + 1))
