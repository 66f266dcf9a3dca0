"""Exact scalar arithmetic for the coupling-coefficient engine.

Three layers, all exact:

* arbitrary-precision rationals (``fractions.Fraction``, aliased ``Rational``),
* ``PhasedSurd`` -- canonical values of the form ``(p/q)*sqrt(d)*i^u`` with
  ``d`` squarefree and ``u`` in {0, 1}; closed under multiplication and
  division, addition only between like surds,
* ``EpsLeading`` -- the leading Laurent behaviour ``c * eps^(h/2)`` of a
  Gamma-factor product deformed by a small positive ``eps``, used to give
  finite meaning to factorial expressions at nonpositive integers.

Decimal output lives in the CLI; this module only renders and parses the
exact grammar ``["-"] COEF ["*sqrt(" NAT ")"] ["*i"]``.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction]

__all__ = [
    "Rational",
    "DomainError",
    "IncompatibleSurdError",
    "DivergenceError",
    "CancellationError",
    "factorial",
    "pochhammer",
    "PhasedSurd",
    "ZERO",
    "ONE",
    "surd",
    "surd_mul",
    "surd_add",
    "surd_sqrt",
    "EpsLeading",
    "EPS_ZERO",
    "eps_scalar",
    "gamma_eps",
    "eps_mul",
    "eps_inv",
    "eps_sum",
    "eps_sqrt",
    "eps_limit",
    "neg_factorial_ratio",
    "render_value",
    "parse_value",
]


class DomainError(ValueError):
    """An argument lies outside an operation's stated domain."""


class IncompatibleSurdError(ValueError):
    """Sum of unlike surds requested; canonical pipelines never produce one."""


class DivergenceError(ArithmeticError):
    """An eps-limit was taken at a pole; carries the offending doubled order."""

    def __init__(self, doubled_order: int, message: str | None = None):
        self.doubled_order = doubled_order
        super().__init__(message or f"divergent eps-limit: order eps^({doubled_order}/2)")


class CancellationError(ArithmeticError):
    """Leading-order terms cancelled exactly; the next Laurent coefficient is
    not carried, so the limit must be settled by the numeric extrapolation
    oracle instead."""


# --------------------------------------------------------------------------
# factorials and Pochhammer symbols
# --------------------------------------------------------------------------

_FACT_LOCK = threading.Lock()
_FACT_CACHE = [1, 1]


def factorial(m: int) -> int:
    """m! for m >= 0.  The cache only ever grows; growth is serialized,
    reads are lock-free."""
    if m < 0:
        raise DomainError(f"factorial of negative integer {m}; use gamma_eps for Gamma at nonpositive arguments")
    cache = _FACT_CACHE
    if m < len(cache):
        return cache[m]
    with _FACT_LOCK:
        while len(_FACT_CACHE) <= m:
            _FACT_CACHE.append(_FACT_CACHE[-1] * len(_FACT_CACHE))
        return _FACT_CACHE[m]


def pochhammer(a: RationalLike, j: int) -> Fraction:
    """Rising factorial a(a+1)...(a+j-1); empty product for j = 0."""
    if j < 0:
        raise DomainError(f"pochhammer index must be nonnegative, got {j}")
    result = Fraction(1)
    term = Fraction(a)
    for _ in range(j):
        result *= term
        term += 1
    return result


# --------------------------------------------------------------------------
# squarefree decomposition
# --------------------------------------------------------------------------

_SMALL_PRIME_LIMIT = 10_000


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write n = outer**2 * core with core squarefree; n >= 1.

    Trial division handles every value the coupling pipelines produce (their
    radicands are factorial-smooth).  A remainder that is neither 1, a prime
    certified by size, nor a perfect square can only come from adversarial
    input; it is factored exactly via sympy.
    """
    if n < 1:
        raise DomainError(f"squarefree split needs a positive integer, got {n}")
    outer, core = 1, 1
    p = 2
    while p <= _SMALL_PRIME_LIMIT and p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            outer *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    if n == 1:
        return outer, core
    root = math.isqrt(n)
    if root * root == n:
        return outer * root, core
    if n < _SMALL_PRIME_LIMIT * _SMALL_PRIME_LIMIT:
        # no divisor below the limit, so n is prime
        return outer, core * n
    from sympy import factorint

    for prime, e in factorint(n).items():
        outer *= prime ** (e // 2)
        if e % 2:
            core *= prime
    return outer, core


# --------------------------------------------------------------------------
# PhasedSurd
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PhasedSurd:
    """Canonical exact scalar ``coef * sqrt(radicand) * (i if imaginary)``.

    The constructor canonicalizes: the radicand is reduced to its squarefree
    core (square content folds into the coefficient) and zero is always
    ``(0, 1, False)``.  Canonical form makes dataclass equality value
    equality.
    """

    coef: Fraction = Fraction(0)
    radicand: int = 1
    imaginary: bool = False

    def __post_init__(self):
        coef = Fraction(self.coef)
        radicand = self.radicand
        if radicand < 1:
            raise DomainError(f"radicand must be a positive integer, got {radicand}")
        if coef == 0:
            radicand, imaginary = 1, False
        else:
            outer, radicand = _squarefree_split(radicand)
            coef *= outer
            imaginary = bool(self.imaginary)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "radicand", radicand)
        object.__setattr__(self, "imaginary", imaginary)

    # -- predicates and conversions ---------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.coef == 0

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1 and not self.imaginary

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise IncompatibleSurdError(f"{self!r} is not rational-valued")
        return self.coef

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "PhasedSurd":
        return PhasedSurd(-self.coef, self.radicand, self.imaginary)

    def __mul__(self, other) -> "PhasedSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        coef = self.coef * other.coef
        if coef == 0:
            return ZERO
        g = math.gcd(self.radicand, other.radicand)
        radicand = (self.radicand // g) * (other.radicand // g)
        coef *= g
        if self.imaginary and other.imaginary:
            coef = -coef
        return PhasedSurd(coef, radicand, self.imaginary != other.imaginary)

    __rmul__ = __mul__

    def __add__(self, other) -> "PhasedSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.radicand != other.radicand or self.imaginary != other.imaginary:
            raise IncompatibleSurdError(
                f"cannot add unlike surds {self.render()} and {other.render()}; "
                "this signals a logic bug in the calling pipeline"
            )
        return PhasedSurd(self.coef + other.coef, self.radicand, self.imaginary)

    __radd__ = __add__

    def __sub__(self, other) -> "PhasedSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def inverse(self) -> "PhasedSurd":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero surd")
        coef = 1 / (self.coef * self.radicand)
        if self.imaginary:
            coef = -coef
        return PhasedSurd(coef, self.radicand, self.imaginary)

    def __truediv__(self, other) -> "PhasedSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        return render_value(self)

    def __str__(self) -> str:
        return self.render()


def _coerce(value) -> "PhasedSurd":
    if isinstance(value, PhasedSurd):
        return value
    if isinstance(value, (int, Fraction)):
        return PhasedSurd(Fraction(value))
    return NotImplemented


ZERO = PhasedSurd()
ONE = PhasedSurd(Fraction(1))


def surd(coef: RationalLike, radicand: int = 1, imaginary: bool = False) -> PhasedSurd:
    """Convenience constructor with canonicalization."""
    return PhasedSurd(Fraction(coef), radicand, imaginary)


def surd_mul(x: PhasedSurd, y: PhasedSurd) -> PhasedSurd:
    """Exact product; i*i contributes -1 and square content leaves the radical."""
    return x * y


def surd_add(x: PhasedSurd, y: PhasedSurd) -> PhasedSurd:
    """Exact sum of like surds (or with zero)."""
    return x + y


def surd_sqrt(q: RationalLike) -> PhasedSurd:
    """Principal square root of a rational; negative input acquires phase i."""
    q = Fraction(q)
    if q == 0:
        return ZERO
    imaginary = q < 0
    mag = -q if imaginary else q
    # sqrt(a/b) = sqrt(a*b)/b keeps everything integral
    outer, core = _squarefree_split(mag.numerator * mag.denominator)
    return PhasedSurd(Fraction(outer, mag.denominator), core, imaginary)


# --------------------------------------------------------------------------
# EpsLeading: c * eps^(doubled_order / 2) as eps -> 0+
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsLeading:
    """Leading Laurent term of an eps-deformed product.

    ``doubled_order`` is twice the eps exponent so that square roots stay
    integral.  The canonical zero is ``(0, ZERO)``.
    """

    doubled_order: int = 0
    coeff: PhasedSurd = ZERO

    def __post_init__(self):
        if self.coeff.is_zero and self.doubled_order != 0:
            object.__setattr__(self, "doubled_order", 0)

    @property
    def is_zero(self) -> bool:
        return self.coeff.is_zero


EPS_ZERO = EpsLeading()


def eps_scalar(value, doubled_order: int = 0) -> EpsLeading:
    """Wrap an exact scalar as an EpsLeading of the given order."""
    s = value if isinstance(value, PhasedSurd) else PhasedSurd(Fraction(value))
    return EpsLeading(doubled_order, s)


def gamma_eps(x: int) -> EpsLeading:
    """Leading behaviour of Gamma(x + eps) as eps -> 0+.

    For x >= 1 this is (x-1)! at order eps^0; at a nonpositive integer
    x = -N the pole contributes (-1)^N / N! at order eps^-1.
    """
    if x >= 1:
        return EpsLeading(0, PhasedSurd(Fraction(factorial(x - 1))))
    n = -x
    return EpsLeading(-2, PhasedSurd(Fraction((-1) ** n, factorial(n))))


def eps_mul(xs: Sequence[EpsLeading]) -> EpsLeading:
    """Product: doubled orders add, coefficients multiply."""
    order = 0
    coeff = ONE
    for x in xs:
        if x.is_zero:
            return EPS_ZERO
        order += x.doubled_order
        coeff = coeff * x.coeff
    return EpsLeading(order, coeff)


def eps_inv(x: EpsLeading) -> EpsLeading:
    """Reciprocal at leading order."""
    if x.is_zero:
        raise ZeroDivisionError("reciprocal of the zero EpsLeading")
    return EpsLeading(-x.doubled_order, x.coeff.inverse())


def eps_sum(xs: Iterable[EpsLeading]) -> EpsLeading:
    """Sum at leading order.

    Terms of higher order than the minimal order present are dropped (they
    vanish relative to the leading term).  If the leading terms cancel
    exactly the next coefficient is unknown, so a CancellationError is
    raised for escalation to the numeric oracle.
    """
    terms = [x for x in xs if not x.is_zero]
    if not terms:
        return EPS_ZERO
    order = min(t.doubled_order for t in terms)
    acc = ZERO
    for t in terms:
        if t.doubled_order == order:
            acc = acc + t.coeff
    if acc.is_zero:
        raise CancellationError(
            f"exact cancellation at leading order eps^({order}/2); "
            "escalate to the numeric extrapolation oracle"
        )
    return EpsLeading(order, acc)


def eps_sqrt(x: EpsLeading) -> EpsLeading:
    """Principal square root; halves the eps exponent and takes surd_sqrt of
    the (rational-valued) coefficient, acquiring phase i when negative."""
    if x.is_zero:
        return EPS_ZERO
    if x.doubled_order % 2:
        raise DomainError(
            f"cannot take sqrt at doubled order {x.doubled_order}: the result "
            "would leave the half-integral order lattice"
        )
    return EpsLeading(x.doubled_order // 2, surd_sqrt(x.coeff.as_fraction()))


def eps_limit(x: EpsLeading) -> PhasedSurd:
    """eps -> 0+ limit: zero for positive order, the coefficient at order
    zero, DivergenceError at a pole."""
    if x.is_zero or x.doubled_order > 0:
        return ZERO
    if x.doubled_order == 0:
        return x.coeff
    raise DivergenceError(x.doubled_order)


def neg_factorial_ratio(a: int, b: int) -> Fraction:
    """lim_{eps->0} Gamma(-a+1+eps) / Gamma(-b+1+eps) for a, b >= 1,
    i.e. (-1)^(b-a) * (b-1)! / (a-1)! by the Gamma reflection limit."""
    if a < 1 or b < 1:
        raise DomainError(f"neg_factorial_ratio needs positive integers, got ({a}, {b})")
    value = eps_limit(eps_mul([gamma_eps(-a + 1), eps_inv(gamma_eps(-b + 1))]))
    return value.as_fraction()


# --------------------------------------------------------------------------
# exact rendering grammar
# --------------------------------------------------------------------------

_VALUE_RE = re.compile(
    r"^(?P<sign>-?)(?P<num>\d+)(?:/(?P<den>\d+))?(?P<sqrt>\*sqrt\((?P<rad>\d+)\))?(?P<imag>\*i)?$"
)


def render_value(v: PhasedSurd) -> str:
    """Canonical rendering: VALUE := ["-"] COEF ["*sqrt(" NAT ")"] ["*i"]."""
    if v.is_zero:
        return "0"
    mag = abs(v.coef)
    out = str(mag.numerator)
    if mag.denominator != 1:
        out += f"/{mag.denominator}"
    if v.radicand != 1:
        out += f"*sqrt({v.radicand})"
    if v.imaginary:
        out += "*i"
    return ("-" if v.coef < 0 else "") + out


def parse_value(text: str) -> PhasedSurd:
    """Parse the exact grammar; rejects any non-canonical spelling so that
    rendering round-trips bit-exactly."""
    m = _VALUE_RE.match(text)
    if not m:
        raise ValueError(f"not a value in the exact grammar: {text!r}")
    num = int(m.group("num"))
    den = int(m.group("den")) if m.group("den") else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    coef = Fraction(num, den)
    if m.group("sign"):
        coef = -coef
    radicand = int(m.group("rad")) if m.group("sqrt") else 1
    if radicand == 0:
        raise ValueError(f"zero radicand in {text!r}")
    value = PhasedSurd(coef, radicand, bool(m.group("imag")))
    if render_value(value) != text:
        raise ValueError(f"non-canonical value spelling: {text!r}")
    return value
