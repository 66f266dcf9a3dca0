"""Exact hydrogenic radial functions and matrix elements of integer powers
of r.

Lengths are in Bohr radii with the nuclear charge Z explicit, so
R_{nl}(r) = norm * (sum_i coeffs[i] r^(l+i)) * exp(-Z r / n).  The radial
polynomial comes from the associated Laguerre expansion; normalization and
the positive-at-origin sign are imposed constructively, term-by-term, using
the exact integral  integral_0^inf r^m e^(-s r) dr = m! / s^(m+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactnum import (
    DomainError,
    PhasedSurd,
    RationalLike,
    factorial,
    surd_sqrt,
)

__all__ = [
    "RadialState",
    "RadialFunction",
    "radial_function",
    "matrix_element",
    "me_power",
    "expectation_rm4",
    "ps_zero_predicted",
    "kramers_check",
]


@dataclass(frozen=True)
class RadialState:
    """Bound-state labels (n, l) with nuclear charge Z > 0."""

    n: int
    l: int
    Z: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "Z", Fraction(self.Z))
        if self.n < 1:
            raise DomainError(f"principal quantum number must be >= 1, got n = {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise DomainError(f"orbital quantum number must satisfy 0 <= l <= n-1, got l = {self.l}, n = {self.n}")
        if self.Z <= 0:
            raise DomainError(f"nuclear charge must be positive, got Z = {self.Z}")


@dataclass(frozen=True)
class RadialFunction:
    """R(r) = norm * sum_i coeffs[i] r^(l+i) * exp(-rate r), normalized to
    integral R^2 r^2 dr = 1 with R(0+) > 0."""

    state: RadialState
    norm: PhasedSurd
    coeffs: tuple[Fraction, ...]
    rate: Fraction

    @property
    def l(self) -> int:
        return self.state.l


def radial_function(s: RadialState) -> RadialFunction:
    """Exact R_{nl} for the given state."""
    n, l, Z = s.n, s.l, s.Z
    rate = Z / n
    x = 2 * rate  # Laguerre argument scale
    q = n - l - 1
    # associated Laguerre L^{2l+1}_q expanded in powers of r; the i = 0 term
    # is positive, which fixes the sign at the origin
    coeffs = tuple(
        Fraction((-1) ** i * comb(n + l, q - i), factorial(i)) * x**i for i in range(q + 1)
    )
    norm_sq_inv = _poly_self_integral(l, coeffs, 2 * rate)
    return RadialFunction(s, surd_sqrt(1 / norm_sq_inv), coeffs, rate)


def _poly_self_integral(l: int, coeffs: tuple[Fraction, ...], s: Fraction) -> Fraction:
    """integral (sum c_i r^(l+i))^2 r^2 e^(-s r) dr."""
    total = Fraction(0)
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            m = 2 * l + i + j + 2
            total += ci * cj * factorial(m) / s ** (m + 1)
    return total


def matrix_element(s1: RadialState, s2: RadialState, k: int) -> PhasedSurd:
    """Exact integral R_{s1} r^k R_{s2} r^2 dr; supports distinct shells
    (two exponential rates)."""
    if s1.l + s2.l + 2 + k < 0:
        raise DomainError(
            f"divergent integral: r-exponent {s1.l + s2.l + 2 + k} at the origin "
            f"for k = {k}, l = {s1.l}, l' = {s2.l}"
        )
    f1 = radial_function(s1)
    f2 = radial_function(s2)
    s = f1.rate + f2.rate
    total = Fraction(0)
    for i, ci in enumerate(f1.coeffs):
        for j, cj in enumerate(f2.coeffs):
            m = f1.l + f2.l + i + j + 2 + k
            total += ci * cj * factorial(m) / s ** (m + 1)
    return f1.norm * f2.norm * PhasedSurd(total)


def me_power(n: int, l: int, lp: int, k: int, Z: RationalLike = 1) -> PhasedSurd:
    """<n l | r^k | n l'> exactly; symmetric in (l, l') and real."""
    Z = Fraction(Z)
    return matrix_element(RadialState(n, l, Z), RadialState(n, lp, Z), k)


def expectation_rm4(n: int, l: int, Z: RationalLike = 1) -> Fraction:
    """Closed form for <n l | r^-4 | n l>; diverges at l = 0."""
    if l < 1:
        raise DomainError("the r^-4 expectation diverges for l = 0")
    if not l <= n - 1:
        raise DomainError(f"need l <= n-1, got l = {l}, n = {n}")
    Z = Fraction(Z)
    denom = (
        (Fraction(l) + Fraction(3, 2))
        * (l + 1)
        * (Fraction(l) + Fraction(1, 2))
        * l
        * (Fraction(l) - Fraction(1, 2))
    )
    return Z**4 / (2 * Fraction(n) ** 5) * (3 * n**2 - l * (l + 1)) / denom


def ps_zero_predicted(l: int, lp: int, k: int) -> bool:
    """Selection-rule prediction: <n l| r^-k |n l'> vanishes for
    k = 2, ..., |l'-l| + 1."""
    if k < 2:
        raise DomainError(f"the selection rule concerns k >= 2, got k = {k}")
    return k <= abs(lp - l) + 1


def kramers_check(n: int, l: int, k: int) -> bool:
    """Three-term recursion on diagonal expectations at Z = 1:
    (k+1)/n^2 <r^k> - (2k+1) <r^(k-1)> + (k/4)((2l+1)^2 - k^2) <r^(k-2)> = 0.

    Requires k >= -2l so that all three members converge.
    """
    if k < -2 * l:
        raise DomainError(f"need k >= -2l for convergence, got k = {k}, l = {l}")
    e = {kk: me_power(n, l, l, kk).as_fraction() for kk in (k, k - 1, k - 2)}
    lhs = (
        Fraction(k + 1, n**2) * e[k]
        - (2 * k + 1) * e[k - 1]
        + Fraction(k, 4) * ((2 * l + 1) ** 2 - k**2) * e[k - 2]
    )
    return lhs == 0
