"""Wigner 3j and Clebsch-Gordan coefficients in exact arithmetic.

The physical coefficients come from the Racah single sum over exact
rationals.  Beyond the physical domain -- projections n exceeding the
momenta -- the symbol (l' K l; -n 0 n) is defined by three mutually
checking realizations:

* ``regularized_three_j``: the eps -> 0+ limit of the Racah sum with the
  projections deformed to (-n + eps, 0, n - eps), every factorial realized
  through ``gamma_eps`` and the assembly finished by ``eps_sqrt`` /
  ``eps_sum`` / ``eps_limit``;
* ``stretched_three_j_poly``: literal continuation in the projection of the
  closed forms available for K <= 2;
* ``numeric_eps_oracle``: high-precision evaluation of the same deformed sum
  at small finite eps, Richardson-extrapolated to eps = 0.

The continuation phase is pinned so that the stretched symbol continues the
physical closed forms literally; the bare deformed limit differs from that
continuation by (-1)^(n - min(l, l') - 1), which is folded into the sum
phase below and applied identically in the numeric oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .exactnum import (
    DomainError,
    EpsLeading,
    PhasedSurd,
    ZERO,
    eps_inv,
    eps_limit,
    eps_mul,
    eps_scalar,
    eps_sqrt,
    eps_sum,
    factorial,
    gamma_eps,
    surd,
    surd_sqrt,
)
from .hypergeom import vk_f

__all__ = [
    "AngMomentum",
    "ThreeJArgs",
    "StretchedArgs",
    "triangle_ok",
    "three_j",
    "clebsch_gordan",
    "stretched_three_j_poly",
    "regularized_three_j",
    "continued_cg",
    "regularized_cg_product",
    "OracleResult",
    "numeric_eps_oracle",
    "DEFAULT_EPSILONS",
]


@dataclass(frozen=True)
class AngMomentum:
    """An angular momentum j stored as doubled = 2j, permitting half-integers."""

    doubled: int

    def __post_init__(self):
        if self.doubled < 0:
            raise DomainError(f"angular momentum must be nonnegative, got doubled = {self.doubled}")

    @classmethod
    def parse(cls, text: str) -> "AngMomentum":
        """Accepts integers and half-integers written like '2' or '3/2'."""
        value = Fraction(text)
        doubled = 2 * value
        if doubled.denominator != 1:
            raise ValueError(f"not an integer or half-integer: {text!r}")
        return cls(int(doubled))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)


@dataclass(frozen=True)
class ThreeJArgs:
    """Arguments of a 3jm symbol; projections are doubled like the momenta."""

    j1: AngMomentum
    j2: AngMomentum
    j3: AngMomentum
    m1: int
    m2: int
    m3: int

    def __post_init__(self):
        for j, m, tag in (
            (self.j1, self.m1, "1"),
            (self.j2, self.m2, "2"),
            (self.j3, self.m3, "3"),
        ):
            if (j.doubled + m) % 2:
                raise ValueError(
                    f"projection m{tag} = {Fraction(m, 2)} has different parity than j{tag} = {j.value}"
                )


@dataclass(frozen=True)
class StretchedArgs:
    """Arguments of the continued coefficient C with both projections at the
    principal quantum number n."""

    l: int
    lp: int
    n: int
    k: int

    def __post_init__(self):
        if self.l < 0 or self.lp < 0:
            raise DomainError(f"orbital numbers must be nonnegative, got l = {self.l}, l' = {self.lp}")
        if self.n < self.l + 1 or self.n < self.lp + 1:
            raise DomainError(
                f"both states must exist in shell n: need n >= max(l, l') + 1, "
                f"got n = {self.n}, l = {self.l}, l' = {self.lp}"
            )


def triangle_ok(j1: AngMomentum, j2: AngMomentum, j3: AngMomentum) -> bool:
    """|j1-j2| <= j3 <= j1+j2 with integer perimeter."""
    a, b, c = j1.doubled, j2.doubled, j3.doubled
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _triangle_ok_int(a: int, b: int, c: int) -> bool:
    return abs(a - b) <= c <= a + b


def _triangle_delta(a: int, b: int, c: int) -> Fraction:
    """(a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)! for an integer triad."""
    return Fraction(
        factorial(a + b - c) * factorial(a - b + c) * factorial(-a + b + c),
        factorial(a + b + c + 1),
    )


# --------------------------------------------------------------------------
# physical domain
# --------------------------------------------------------------------------


def three_j(args: ThreeJArgs) -> PhasedSurd:
    """Exact physical 3jm symbol via the Racah single sum."""
    tj1, tj2, tj3 = args.j1.doubled, args.j2.doubled, args.j3.doubled
    tm1, tm2, tm3 = args.m1, args.m2, args.m3
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if abs(tm) > tj:
            raise DomainError(
                "projection exceeds its momentum: outside the physical domain; "
                "use regularized_three_j for the continued symbol"
            )
    if tm1 + tm2 + tm3 != 0:
        return ZERO
    if not triangle_ok(args.j1, args.j2, args.j3):
        return ZERO

    # integer building blocks (halved doubled sums are integral here)
    t_abc = (tj1 + tj2 - tj3) // 2
    a1m = (tj1 - tm1) // 2  # j1 - m1
    a2p = (tj2 + tm2) // 2  # j2 + m2
    c2m1 = (tj3 - tj2 + tm1) // 2  # j3 - j2 + m1
    c1m2 = (tj3 - tj1 - tm2) // 2  # j3 - j1 - m2

    z_lo = max(0, -c2m1, -c1m2)
    z_hi = min(t_abc, a1m, a2p)
    if z_lo > z_hi:
        return ZERO
    zsum = Fraction(0)
    for z in range(z_lo, z_hi + 1):
        term = Fraction(
            1,
            factorial(z)
            * factorial(t_abc - z)
            * factorial(a1m - z)
            * factorial(a2p - z)
            * factorial(c2m1 + z)
            * factorial(c1m2 + z),
        )
        zsum += -term if z % 2 else term
    if zsum == 0:
        return ZERO

    pref = _triangle_delta_doubled(tj1, tj2, tj3)
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        pref *= factorial((tj + tm) // 2) * factorial((tj - tm) // 2)
    phase_exp = (tj1 - tj2 - tm3) // 2
    value = surd(zsum) * surd_sqrt(pref)
    return -value if phase_exp % 2 else value


def _triangle_delta_doubled(tj1: int, tj2: int, tj3: int) -> Fraction:
    return Fraction(
        factorial((tj1 + tj2 - tj3) // 2)
        * factorial((tj1 - tj2 + tj3) // 2)
        * factorial((-tj1 + tj2 + tj3) // 2),
        factorial((tj1 + tj2 + tj3) // 2 + 1),
    )


def clebsch_gordan(
    j1: AngMomentum,
    m1: int,
    j2: AngMomentum,
    m2: int,
    j: AngMomentum,
    m: int,
) -> PhasedSurd:
    """C^{j m}_{j1 m1, j2 m2} = (-1)^(j1-j2+m) sqrt(2j+1) (j1 j2 j; m1 m2 -m)."""
    if m1 + m2 != m:
        return ZERO
    if not triangle_ok(j1, j2, j):
        return ZERO
    symbol = three_j(ThreeJArgs(j1, j2, j, m1, m2, -m))
    value = symbol * surd_sqrt(j.doubled + 1)
    phase_exp = (j1.doubled - j2.doubled + m) // 2
    return -value if phase_exp % 2 else value


# --------------------------------------------------------------------------
# stretched region: literal continuation of K <= 2 closed forms
# --------------------------------------------------------------------------


def _sqrt_linear_factors(scale: int, factors: Sequence[int], denom: int) -> PhasedSurd:
    """sqrt(scale * f1 * ... * fk / denom) with each linear factor continued
    through its own principal branch: every negative factor contributes a
    phase i, so a stretched symbol with d negative factors carries i^d."""
    if any(f == 0 for f in factors):
        return ZERO
    negatives = sum(1 for f in factors if f < 0)
    magnitude = scale
    for f in factors:
        magnitude *= abs(f)
    value = surd_sqrt(Fraction(magnitude, denom))
    for _ in range(negatives):
        value = value * surd(1, 1, True)
    return value


def stretched_three_j_poly(j: int, K: int, jp: int, n: int) -> PhasedSurd:
    """Closed form of (j K jp; -m 0 m) with m replaced by n beyond its
    physical range: the projection polynomial, the (-1)^(j-m) phase, and
    every square-root factor are continued literally (factor by factor, so
    each momentum-exceeding factor contributes a phase i).

    Supports K in {0, 1, 2}; returns zero when the triad fails the triangle
    condition.
    """
    if K not in (0, 1, 2):
        raise DomainError(f"polynomial continuation is available for K <= 2 only, got K = {K}")
    if j < 0 or jp < 0:
        raise DomainError("momenta must be nonnegative")
    if not _triangle_ok_int(j, K, jp):
        return ZERO

    sign = -1 if (j - n) % 2 else 1
    if K == 0:
        return sign * surd_sqrt(Fraction(1, 2 * j + 1))
    if K == 1:
        if jp == j:
            d = (2 * j + 2) * (2 * j + 1) * (2 * j)
            return sign * surd(2 * n) * surd_sqrt(Fraction(1, d))
        if jp == j - 1:
            d = (2 * j + 1) * (2 * j) * (2 * j - 1)
            return sign * _sqrt_linear_factors(2, (j - n, j + n), d)
        # jp == j + 1
        d = (2 * j + 3) * (2 * j + 2) * (2 * j + 1)
        return -sign * _sqrt_linear_factors(2, (j + 1 - n, j + 1 + n), d)
    # K == 2
    if jp == j:
        d = (2 * j + 3) * (2 * j + 2) * (2 * j + 1) * (2 * j) * (2 * j - 1)
        return sign * surd(2 * (3 * n * n - j * (j + 1))) * surd_sqrt(Fraction(1, d))
    if jp == j - 1:
        d = (2 * j + 2) * (2 * j + 1) * (2 * j) * (2 * j - 1) * (2 * j - 2)
        return sign * surd(2 * n) * _sqrt_linear_factors(6, (j - n, j + n), d)
    if jp == j - 2:
        d = (2 * j + 1) * (2 * j) * (2 * j - 1) * (2 * j - 2) * (2 * j - 3)
        return sign * _sqrt_linear_factors(6, (j + n, j + n - 1, j - n, j - n - 1), d)
    if jp == j + 1:
        d = (2 * j + 4) * (2 * j + 3) * (2 * j + 2) * (2 * j + 1) * (2 * j)
        return -sign * surd(2 * n) * _sqrt_linear_factors(6, (j + 1 - n, j + 1 + n), d)
    # jp == j + 2
    d = (2 * j + 5) * (2 * j + 4) * (2 * j + 3) * (2 * j + 2) * (2 * j + 1)
    return sign * _sqrt_linear_factors(6, (j + 2 + n, j + 1 + n, j + 2 - n, j + 1 - n), d)


# --------------------------------------------------------------------------
# stretched region: exact eps-limit of the deformed Racah sum
# --------------------------------------------------------------------------


def _z_range(lp: int, K: int, l: int) -> tuple[int, int]:
    """Summation range of the deformed Racah sum: every z whose undeformed
    denominator factorials stay nonnegative."""
    return max(0, lp - l), min(lp + K - l, K)


def regularized_three_j(lp: int, K: int, l: int, n: int) -> PhasedSurd:
    """The continued symbol (l' K l; -n 0 n) for n >= max(l, l') + 1 via the
    eps-deformed Racah sum; zero when the triangle condition fails."""
    if K < 0:
        raise DomainError(f"second momentum must be nonnegative, got K = {K}")
    if l < 0 or lp < 0:
        raise DomainError("momenta must be nonnegative")
    if n < max(l, lp) + 1:
        raise DomainError(
            f"continuation domain is n >= max(l, l') + 1; got n = {n} for (l' = {lp}, K = {K}, l = {l}). "
            "Use three_j for physical projections."
        )
    if not _triangle_ok_int(lp, K, l):
        return ZERO

    # prefactor under the square root: triangle delta times the six deformed
    # factorials; Gamma(x - eps) and Gamma(x + eps) agree at leading order
    # for x >= 1, so gamma_eps realizes every factor
    pref = eps_mul(
        [
            eps_scalar(_triangle_delta(lp, K, l)),
            gamma_eps(lp - n + 1),  # (j1 + m1)! at a pole
            gamma_eps(lp + n + 1),  # (j1 - m1)!
            gamma_eps(K + 1),
            gamma_eps(K + 1),
            gamma_eps(l + n + 1),  # (j3 + m3)!
            gamma_eps(l - n + 1),  # (j3 - m3)! at a pole
        ]
    )
    root = eps_sqrt(pref)

    z_lo, z_hi = _z_range(lp, K, l)
    terms: list[EpsLeading] = []
    for z in range(z_lo, z_hi + 1):
        denom = eps_mul(
            [
                eps_scalar(
                    factorial(z)
                    * factorial(lp + K - l - z)
                    * factorial(K - z)
                    * factorial(l - lp + z)
                ),
                gamma_eps(lp + n + 1 - z),  # (j1 - m1 - z)!
                gamma_eps(l - K - n + 1 + z),  # (j3 - j2 + m1 + z)! at a pole
            ]
        )
        term = eps_inv(denom)
        if z % 2:
            term = EpsLeading(term.doubled_order, -term.coeff)
        terms.append(term)
    zsum = eps_sum(terms)
    value = eps_limit(eps_mul([root, zsum]))

    # deformed-sum phase (j1 - j2 - m3), the continuation alignment
    # (-1)^(n - min(l, l') - 1), and the factor-wise branch convention
    # (-1)^floor(|l - l'| / 2) which turns the single principal i of the
    # square root into one i per momentum-exceeding linear factor; the total
    # is n-independent
    return -value if _continuation_phase_exp(lp, K, l) else value


def _continuation_phase_exp(lp: int, K: int, l: int) -> int:
    return (lp - K - min(l, lp) - 1 + abs(l - lp) // 2) % 2


def continued_cg(l: int, lp: int, K: int, n: int) -> PhasedSurd:
    """Continued C^{l n}_{l' n, K 0}: the Clebsch-Gordan phase convention and
    the projection-negation symmetry applied to the continued 3jm symbol."""
    symbol = regularized_three_j(lp, K, l, n)
    value = symbol * surd_sqrt(2 * l + 1)
    # (-1)^(l'-K+n) from the CG conversion and (-1)^(l'+K+l) from negating
    # all projections combine to (-1)^(l+n)
    return -value if (l + n) % 2 else value


def regularized_cg_product(args: StretchedArgs) -> PhasedSurd:
    """The product f^k * C of the factorial surd and the continued
    coefficient; for k <= -2 the transformed pair (f^(-k), (-1)^(l-l') C
    with second momentum -(k+2)) is evaluated."""
    l, lp, n, k = args.l, args.lp, args.n, args.k
    if l - lp < 0:
        raise DomainError(f"requires l >= l', got l = {l}, l' = {lp}")
    if k >= 0:
        kk = k + 1
        extra_sign = 1
    elif k <= -2:
        kk = -(k + 2)
        extra_sign = -1 if (l - lp) % 2 else 1
    else:
        raise DomainError("no transformation is defined for power k = -1")
    if not _triangle_ok_int(lp, kk, l):
        raise DomainError(
            f"triad (l' = {lp}, {kk}, l = {l}) violates the triangle condition"
        )
    f = vk_f(l, lp, k)
    c = continued_cg(l, lp, kk, n)
    value = f * c
    return -value if extra_sign < 0 else value


# --------------------------------------------------------------------------
# numeric extrapolation oracle
# --------------------------------------------------------------------------

DEFAULT_EPSILONS: tuple[Fraction, ...] = tuple(Fraction(1, 2**p) for p in range(6, 14))


@dataclass(frozen=True)
class OracleResult:
    estimate: complex
    bound: float
    ok: bool
    note: str = ""


def numeric_eps_oracle(
    lp: int,
    K: int,
    l: int,
    n: int,
    epsilons: Sequence[Fraction],
) -> OracleResult:
    """Evaluate the deformed sum at the given finite epsilons with
    high-precision floats and Richardson-extrapolate to eps = 0.

    Independent of the exact machinery: Gamma is evaluated numerically (via
    the reflection formula for negative arguments) instead of through
    leading Laurent terms.  Non-convergent extrapolation is reported, not
    raised.
    """
    eps_list = [Fraction(e) for e in epsilons]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise DomainError("epsilons must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("epsilons must be strictly decreasing")
    if not _triangle_ok_int(lp, K, l):
        return OracleResult(0j, 0.0, True, "triangle violated; symbol is identically zero")
    if n < max(l, lp) + 1:
        raise DomainError("continuation domain is n >= max(l, l') + 1")

    sign = -1 if _continuation_phase_exp(lp, K, l) else 1
    with mp.workdps(60):
        xs = [mp.mpf(e.numerator) / e.denominator for e in eps_list]
        ys = [_deformed_value_numeric(lp, K, l, n, x) * sign for x in xs]
        if len(ys) == 1:
            est = ys[0]
            return OracleResult(complex(est), float("inf"), False, "single node: no extrapolation")
        diag = _neville_to_zero(xs, ys)
        estimate = diag[-1]
        bound = abs(diag[-1] - diag[-2])
        # converged if the tail is still shrinking or has already reached
        # rounding level relative to the estimate
        tail_shrinks = len(diag) < 3 or abs(diag[-1] - diag[-2]) <= abs(diag[-2] - diag[-3])
        negligible = bound <= mp.mpf("1e-10") * max(mp.mpf(1), abs(estimate))
        ok = bool(
            (tail_shrinks or negligible)
            and mp.isfinite(mp.re(estimate))
            and mp.isfinite(mp.im(estimate))
        )
        note = "" if ok else "extrapolation tail not shrinking"
        return OracleResult(complex(estimate), float(bound), ok, note)


def _deformed_value_numeric(lp: int, K: int, l: int, n: int, eps):
    """The deformed Racah expression at one finite eps (without the pinned
    continuation sign, which the caller applies)."""
    pref = mp.mpf(1)
    pref *= mp.gamma(lp + K - l + 1) * mp.gamma(lp - K + l + 1) * mp.gamma(-lp + K + l + 1)
    pref /= mp.gamma(lp + K + l + 2)
    for arg in (lp - n + 1 + eps, lp + n + 1 - eps, K + 1, K + 1, l + n + 1 - eps, l - n + 1 + eps):
        pref *= mp.gamma(arg)
    root = mp.sqrt(mp.mpc(pref))

    z_lo, z_hi = _z_range(lp, K, l)
    zsum = mp.mpf(0)
    for z in range(z_lo, z_hi + 1):
        denom = (
            mp.gamma(z + 1)
            * mp.gamma(lp + K - l - z + 1)
            * mp.gamma(K - z + 1)
            * mp.gamma(l - lp + z + 1)
            * mp.gamma(lp + n + 1 - z - eps)
            * mp.gamma(l - K - n + 1 + z + eps)
        )
        term = 1 / denom
        zsum += -term if z % 2 else term
    return root * zsum


def _neville_to_zero(xs, ys):
    """Neville extrapolation of the polynomial through (xs, ys) to x = 0;
    returns the diagonal of successive estimates."""
    table = list(ys)
    diag = [table[0]]
    for k in range(1, len(table)):
        for i in range(len(table) - k):
            table[i] = (xs[i + k] * table[i] - xs[i] * table[i + 1]) / (xs[i + k] - xs[i])
        diag.append(table[0])
    return diag


def surd_to_mpc(v: PhasedSurd):
    """High-precision complex value of an exact surd (for oracle comparisons)."""
    mag = mp.mpf(v.coef.numerator) / v.coef.denominator * mp.sqrt(v.radicand)
    return mp.mpc(0, mag) if v.imaginary else mp.mpc(mag, 0)
