"""Command-line front door: single-value computations, verification suites,
and exact / decimal / JSON rendering.

Exit codes: 0 success, 1 verification failure, 2 usage, 3 domain error,
4 cancellation escalation, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .exactnum import (
    CancellationError,
    DivergenceError,
    DomainError,
    PhasedSurd,
)
from .hydrogenic import me_power
from .hypergeom import F32Params, f3f2_terminating, vk_f
from .verify import ALL_SUITES, GridSpec, run_suite
from .wigner import (
    AngMomentum,
    StretchedArgs,
    ThreeJArgs,
    clebsch_gordan,
    continued_cg,
    regularized_three_j,
    regularized_cg_product,
    three_j,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CANCELLATION = 4
EXIT_IO = 5


# --------------------------------------------------------------------------
# decimal rendering: 15 significant digits, round half to even, computed with
# integer square roots so the decimal column can never contradict the exact one
# --------------------------------------------------------------------------

SIG_DIGITS = 15


def _decimal_exponent(A: int, B: int) -> int:
    """floor(log10 v) for v = sqrt(A/B), A, B positive integers."""
    # initial guess from the integer part, then correct by exact comparison
    if A >= B:
        e = (len(str(math.isqrt(A // B))) - 1) if A // B > 0 else 0
    else:
        e = -1
    while B * 10 ** (2 * (e + 1)) <= A:
        e += 1
    while B * 10 ** (2 * e) > A:
        e -= 1
    return e


def _round_sqrt_scaled(A: int, B: int, m: int) -> int:
    """round(sqrt(A/B) * 10^m) for irrational sqrt(A/B); ties cannot occur."""
    if m >= 0:
        A2, B2 = A * 10 ** (2 * m), B
    else:
        A2, B2 = A, B * 10 ** (-2 * m)
    N = A2 * B2  # sqrt(A2/B2) = sqrt(N)/B2
    X = math.isqrt(N) // B2
    # round up iff sqrt(N)/B2 - X > 1/2, i.e. 4N > ((2X+1) B2)^2
    if 4 * N > ((2 * X + 1) * B2) ** 2:
        X += 1
    return X


def _round_fraction_scaled(p: int, q: int, m: int) -> int:
    """round(p/q * 10^m) half to even; p, q positive."""
    if m >= 0:
        num, den = p * 10**m, q
    else:
        num, den = p, q * 10 ** (-m)
    X, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and X % 2):
        X += 1
    return X


def render_decimal(v: PhasedSurd) -> str:
    """15 significant digits of the value; imaginary values carry a trailing
    'i'."""
    if v.is_zero:
        return "0"
    p, q, d = abs(v.coef.numerator), v.coef.denominator, v.radicand
    A, B = p * p * d, q * q
    e = _decimal_exponent(A, B)
    m = SIG_DIGITS - 1 - e
    if d == 1:
        X = _round_fraction_scaled(p, q, m)
    else:
        X = _round_sqrt_scaled(A, B, m)
    if X == 10**SIG_DIGITS:
        X //= 10
        e += 1
    digits = str(X)
    if -4 <= e < SIG_DIGITS:
        if e >= 0:
            text = digits[: e + 1] + ("." + digits[e + 1 :] if e + 1 < len(digits) else "")
        else:
            text = "0." + "0" * (-e - 1) + digits
    else:
        text = f"{digits[0]}.{digits[1:]}e{'+' if e >= 0 else '-'}{abs(e):02d}"
    if v.coef < 0:
        text = "-" + text
    if v.imaginary:
        text += "i"
    return text


def _emit(op: str, params: dict, value: PhasedSurd, fmt: str, extra: dict | None = None):
    if fmt == "exact":
        print(value.render())
    elif fmt == "decimal":
        print(render_decimal(value))
    else:
        payload = {"op": op, "params": params, "exact": value.render(), "decimal": render_decimal(value)}
        if extra:
            payload.update({k: s.render() for k, s in extra.items()})
        print(json.dumps(payload, sort_keys=True))
    if fmt != "json" and extra:
        for name, s in extra.items():
            print(f"{name} = {s.render()}")


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------


def _fraction_flag(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _am_list(text: str, count: int) -> list[AngMomentum]:
    parts = text.split(",")
    if len(parts) != count:
        raise ValueError(f"expected {count} comma-separated entries, got {len(parts)}")
    return [AngMomentum.parse(p) for p in parts]


def _doubled_list(text: str, count: int) -> list[int]:
    parts = text.split(",")
    if len(parts) != count:
        raise ValueError(f"expected {count} comma-separated entries, got {len(parts)}")
    out = []
    for p in parts:
        value = Fraction(p) * 2
        if value.denominator != 1:
            raise ValueError(f"not an integer or half-integer: {p!r}")
        out.append(int(value))
    return out


def _rational_list(text: str) -> list[Fraction]:
    return [Fraction(p) for p in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hywig",
        description="Exact hydrogenic radial matrix elements and coupling coefficients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_kwargs = dict(choices=("exact", "decimal", "json"), default="exact")

    p_me = sub.add_parser("me", help="matrix element <n l| r^k |n l'>")
    p_me.add_argument("--n", type=int, required=True)
    p_me.add_argument("--l", type=int, required=True)
    p_me.add_argument("--lp", type=int, required=True)
    p_me.add_argument("--k", type=int, required=True)
    p_me.add_argument("--Z", type=_fraction_flag, default=Fraction(1))
    p_me.add_argument("--format", **fmt_kwargs)

    p_3j = sub.add_parser("3j", help="physical 3jm symbol")
    p_3j.add_argument("--j", required=True, help="three momenta, e.g. 1,1/2,3/2")
    p_3j.add_argument("--m", required=True, help="three projections")
    p_3j.add_argument("--format", **fmt_kwargs)

    p_cg = sub.add_parser("cg", help="physical Clebsch-Gordan coefficient")
    for flag in ("--j1", "--m1", "--j2", "--m2", "--j", "--m"):
        p_cg.add_argument(flag, required=True)
    p_cg.add_argument("--format", **fmt_kwargs)

    p_3jx = sub.add_parser("3jx", help="continued symbol (l' K l; -n 0 n)")
    p_3jx.add_argument("--lp", type=int, required=True)
    p_3jx.add_argument("--K", type=int, required=True)
    p_3jx.add_argument("--l", type=int, required=True)
    p_3jx.add_argument("--n", type=int, required=True)
    p_3jx.add_argument("--format", **fmt_kwargs)

    p_cgx = sub.add_parser("cgx", help="continued product f^k x C")
    p_cgx.add_argument("--l", type=int, required=True)
    p_cgx.add_argument("--lp", type=int, required=True)
    p_cgx.add_argument("--n", type=int, required=True)
    p_cgx.add_argument("--k", type=int, required=True)
    p_cgx.add_argument("--parts", action="store_true", help="also print the f and C factors")
    p_cgx.add_argument("--format", **fmt_kwargs)

    p_f32 = sub.add_parser("f3f2", help="terminating 3F2 at unit argument")
    p_f32.add_argument("--a", required=True, help="three numerator parameters")
    p_f32.add_argument("--b", required=True, help="two denominator parameters")
    p_f32.add_argument("--format", **fmt_kwargs)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", choices=ALL_SUITES + ("all",), default="all")
    p_verify.add_argument("--n-max", type=int, default=8, dest="n_max")
    p_verify.add_argument("--l-max", type=int, default=None, dest="l_max")
    p_verify.add_argument("--k-max", type=int, default=8, dest="k_max")
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--report", default=None, help="write the JSONL report here")

    return parser


# --------------------------------------------------------------------------
# command implementations
# --------------------------------------------------------------------------


def _cmd_me(args) -> int:
    value = me_power(args.n, args.l, args.lp, args.k, args.Z)
    _emit("me", {"n": args.n, "l": args.l, "lp": args.lp, "k": args.k, "Z": str(args.Z)}, value, args.format)
    return EXIT_OK


def _cmd_3j(args) -> int:
    js = _am_list(args.j, 3)
    ms = _doubled_list(args.m, 3)
    value = three_j(ThreeJArgs(js[0], js[1], js[2], ms[0], ms[1], ms[2]))
    _emit("3j", {"j": args.j, "m": args.m}, value, args.format)
    return EXIT_OK


def _cmd_cg(args) -> int:
    j1, j2, j = (AngMomentum.parse(t) for t in (args.j1, args.j2, args.j))
    m1, m2, m = (_doubled_list(t, 1)[0] for t in (args.m1, args.m2, args.m))
    value = clebsch_gordan(j1, m1, j2, m2, j, m)
    _emit(
        "cg",
        {"j1": args.j1, "m1": args.m1, "j2": args.j2, "m2": args.m2, "j": args.j, "m": args.m},
        value,
        args.format,
    )
    return EXIT_OK


def _cmd_3jx(args) -> int:
    value = regularized_three_j(args.lp, args.K, args.l, args.n)
    _emit("3jx", {"lp": args.lp, "K": args.K, "l": args.l, "n": args.n}, value, args.format)
    return EXIT_OK


def _cmd_cgx(args) -> int:
    stretched = StretchedArgs(args.l, args.lp, args.n, args.k)
    value = regularized_cg_product(stretched)
    extra = None
    if args.parts:
        kk = args.k + 1 if args.k >= 0 else -(args.k + 2)
        extra = {"f": vk_f(args.l, args.lp, args.k), "C": continued_cg(args.l, args.lp, kk, args.n)}
    _emit("cgx", {"l": args.l, "lp": args.lp, "n": args.n, "k": args.k}, value, args.format, extra)
    return EXIT_OK


def _cmd_f3f2(args) -> int:
    a = _rational_list(args.a)
    b = _rational_list(args.b)
    if len(a) != 3 or len(b) != 2:
        raise ValueError("expected three numerator and two denominator parameters")
    params = F32Params(a[0], a[1], a[2], b[0], b[1])
    value = PhasedSurd(f3f2_terminating(params))
    _emit("f3f2", {"a": args.a, "b": args.b}, value, args.format)
    return EXIT_OK


def _cmd_verify(args) -> int:
    suites = frozenset(ALL_SUITES) if args.suite == "all" else frozenset({args.suite})
    grid = GridSpec(n_max=args.n_max, l_max=args.l_max, k_max=args.k_max, suites=suites)
    report = run_suite(grid, jobs=max(1, args.jobs))
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(report.to_jsonl())
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    for line in report.summary_lines():
        print(line)
    return EXIT_OK if report.all_passed else EXIT_VERIFY_FAILED


_HANDLERS = {
    "me": _cmd_me,
    "3j": _cmd_3j,
    "cg": _cmd_cg,
    "3jx": _cmd_3jx,
    "cgx": _cmd_cgx,
    "f3f2": _cmd_f3f2,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except CancellationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: run `hywig verify --suite oracle` for the numeric fallback", file=sys.stderr)
        return EXIT_CANCELLATION
    except (DomainError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
