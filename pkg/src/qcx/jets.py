"""Second-order jets of analytic functions.

A jet carries (value, first derivative, second derivative) of an analytic
map at a single point.  All derivative propagation here is exact (closed
form), which matters because the criterion functionals downstream involve
ratios like f''/f' that are evaluated close to the unit circle where finite
differences lose accuracy.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass


class DomainError(ValueError):
    """Evaluation requested outside a map's domain (radius exceeded, pole hit)."""


@dataclass(frozen=True)
class Jet2:
    """Value and first two complex derivatives of an analytic map at a point."""

    value: complex
    d1: complex
    d2: complex

    @staticmethod
    def const(c: complex) -> "Jet2":
        return Jet2(complex(c), 0j, 0j)

    @staticmethod
    def variable(z: complex) -> "Jet2":
        """Jet of the identity map at z."""
        return Jet2(complex(z), 1 + 0j, 0j)

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.d1, -self.d2)

    def __mul__(self, other: "Jet2") -> "Jet2":
        # Leibniz through second order
        return Jet2(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2 * self.d1 * other.d1 + self.value * other.d2,
        )

    def __truediv__(self, other: "Jet2") -> "Jet2":
        if other.value == 0:
            raise DomainError("jet division by a value that vanishes at the point")
        q = self.value / other.value
        q1 = (self.d1 - q * other.d1) / other.value
        q2 = (self.d2 - 2 * q1 * other.d1 - q * other.d2) / other.value
        return Jet2(q, q1, q2)

    def scale(self, c: complex) -> "Jet2":
        return Jet2(c * self.value, c * self.d1, c * self.d2)


def compose(outer: Jet2, inner: Jet2) -> Jet2:
    """Jet of g(f(z)) from the jet of g at f(z) and the jet of f at z."""
    return Jet2(
        outer.value,
        outer.d1 * inner.d1,
        outer.d2 * inner.d1 * inner.d1 + outer.d1 * inner.d2,
    )


def jet_exp(j: Jet2) -> Jet2:
    e = cmath.exp(j.value)
    return Jet2(e, e * j.d1, e * (j.d2 + j.d1 * j.d1))


def jet_power(j: Jet2, p: complex, log_value: complex | None = None) -> Jet2:
    """Jet of j(z)**p.

    `log_value` selects the branch: it must be a logarithm of j.value.  When
    omitted the principal branch is used, which is only safe when the values
    stay clear of the negative real axis.
    """
    if j.value == 0:
        raise DomainError("power of a value that vanishes at the point")
    lg = cmath.log(j.value) if log_value is None else log_value
    w = cmath.exp(p * lg)
    r1 = j.d1 / j.value
    return Jet2(w, w * p * r1, w * (p * (p - 1) * r1 * r1 + p * j.d2 / j.value))
