"""Terminating 3F2 series at unit argument and the factorial surd linking
radial matrix elements to continued coupling coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    DomainError,
    PhasedSurd,
    eps_inv,
    eps_limit,
    eps_mul,
    eps_sqrt,
    factorial,
    gamma_eps,
    pochhammer,
)

__all__ = ["F32Params", "f3f2_terminating", "vk_parameters", "vk_f"]


def _is_nonpositive_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class F32Params:
    """Parameters of 3F2(a1, a2, a3; b1, b2; 1).

    At least one numerator parameter must be a nonpositive integer so the
    series terminates after T = min(-a_i) + 1 terms, and no denominator
    parameter may hit zero before termination.
    """

    a1: Fraction
    a2: Fraction
    a3: Fraction
    b1: Fraction
    b2: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "b1", "b2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        t = self.termination_index  # validates the numerator side
        for name in ("b1", "b2"):
            b = getattr(self, name)
            if _is_nonpositive_int(b) and -b < t:
                raise DomainError(
                    f"denominator parameter {name} = {b} vanishes at term {-b + 1}, "
                    f"before termination at index {t}"
                )

    @property
    def termination_index(self) -> int:
        """T: the series has terms j = 0..T."""
        tops = [a for a in (self.a1, self.a2, self.a3) if _is_nonpositive_int(a)]
        if not tops:
            raise DomainError(
                "no numerator parameter is a nonpositive integer; the series does not terminate"
            )
        return int(-max(tops))


def f3f2_terminating(p: F32Params) -> Fraction:
    """Exact sum of the terminating 3F2 at unit argument."""
    total = Fraction(0)
    for j in range(p.termination_index + 1):
        total += (
            pochhammer(p.a1, j)
            * pochhammer(p.a2, j)
            * pochhammer(p.a3, j)
        ) / (pochhammer(p.b1, j) * pochhammer(p.b2, j) * factorial(j))
    return total


def vk_parameters(n: int, l: int, lp: int, k: int) -> F32Params:
    """The 3F2 parameter block attached to <n l| r^k |n l'>."""
    return F32Params(
        Fraction(l + lp - k),
        Fraction(l - lp - k - 1),
        Fraction(-k - 1),
        Fraction(n + l - k),
        Fraction(-2 * k - 2),
    )


def vk_f(l: int, lp: int, k: int) -> PhasedSurd:
    """The factorial surd f^k converting between <n l| r^k |n l'> and the
    continued coupling coefficient.

    For k >= 0 in the finite regime (l + l' - k - 1 >= 0) this is
    sqrt[(k+1-D)! (k+1+D)! (l+l'+k+2)! / ((k+1)!)^2 (l+l'-k-1)!] with
    D = l - l' >= 0.  For k <= -2 the transformed coefficient f^(-k) is
    evaluated instead, with any factorials at negative integers resolved by
    the deformed-Gamma limit.  k = -1 has no prescription.
    """
    delta = l - lp
    if delta < 0:
        raise DomainError(f"requires l >= l', got l = {l}, l' = {lp}")
    if k == -1:
        raise DomainError("no transformation is defined for power k = -1")
    keff = k if k >= 0 else -k
    if k >= 0 and l + lp - k - 1 < 0:
        raise DomainError(
            f"(l + l' - k - 1)! = ({l + lp - k - 1})! leaves the finite regime; "
            "only the product with the continued coefficient is meaningful there"
        )
    radicand = eps_mul(
        [
            gamma_eps(keff + 2 - delta),
            gamma_eps(keff + 2 + delta),
            gamma_eps(l + lp + keff + 3),
            eps_inv(
                eps_mul(
                    [
                        gamma_eps(keff + 2),
                        gamma_eps(keff + 2),
                        gamma_eps(l + lp - keff),
                    ]
                )
            ),
        ]
    )
    return eps_limit(eps_sqrt(radicand))
