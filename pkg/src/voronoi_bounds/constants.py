"""Explicit constants: gamma and s bounds, A, B, c, f, h, k, v, and the
inequality checks that bound log log k(m) and log log v(n).

Integer-valued constants are exact. The tower constants h, k, v are far too
large to materialise, so they are carried as ``multiplier * ln(base)`` with
an exact integer multiplier and a logarithm certified to a requested number
of significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt

import mpmath

DEFAULT_DIGITS = 30
MIN_DIGITS = 20
EXACT_DIGIT_BUDGET = 4_000  # stays under Python's int->str conversion limit


class PrecisionError(ArithmeticError):
    """A logarithm or comparison could not be certified at the requested precision."""


# --- elementary bounds ------------------------------------------------------


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")


def gamma_bound(n: int) -> Fraction:
    """Upper bound 1 + N/4 for the Hermite constant."""
    _check_n(n)
    return 1 + Fraction(n, 4)


def s_bound(n: int) -> int:
    """Upper bound 2^N - 1 for half the kissing number."""
    _check_n(n)
    return 2**n - 1


def _ceil_sqrt_fraction(r: Fraction) -> int:
    """Least integer m with m^2 >= r, for rational r >= 0."""
    p, q = r.numerator, r.denominator
    m = isqrt(p // q)
    while m * m * q < p:
        m += 1
    return m


def a_exact_squared(n: int) -> Fraction:
    """A(N)^2 = N^(2(N-1)) * (1 + N/4)^N, exactly."""
    _check_n(n)
    return Fraction(n) ** (2 * (n - 1)) * gamma_bound(n) ** n


@lru_cache(maxsize=None)
def a_const(n: int) -> int:
    """Least integer >= N^(N-1) (1 + N/4)^(N/2)."""
    return _ceil_sqrt_fraction(a_exact_squared(n))


def a_real(n: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """The unrounded A(N), for comparisons against the ceiling."""
    with mpmath.workdps(digits + 10):
        return mpmath.sqrt(mpmath.mpf(a_exact_squared(n).numerator) / a_exact_squared(n).denominator)


@lru_cache(maxsize=None)
def b_const(n: int) -> Fraction:
    """(2 A(N) + 1)^N / 2 with the integer ceiling of A(N)."""
    return Fraction((2 * a_const(n) + 1) ** n, 2)


def _falling_product(b: Fraction, count: int) -> Fraction:
    """prod_{j<count} (b - j), exactly, by a balanced product tree."""
    num, den = b.numerator, b.denominator
    terms = [num - j * den for j in range(count)]
    if not terms:
        return Fraction(1)
    while len(terms) > 1:
        nxt = [terms[i] * terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return Fraction(terms[0], den**count)


@lru_cache(maxsize=64)
def c_const(k: int, n: int, b_mode: str = "exact") -> int:
    """Upper bound binom(B(N), k+1) on the number of k-cell classes, rounded up.

    ``b_mode="exact"`` takes the falling-factorial binomial of the rational
    B(N) and rounds up; ``b_mode="ceil"`` rounds B(N) up first and takes an
    ordinary binomial. If B(N) <= k the product formula is used as is (it
    can be zero or negative).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    b = b_const(n)
    if b_mode == "ceil":
        top = -(-b.numerator // b.denominator)
        return comb(top, k + 1)
    if b_mode != "exact":
        raise ValueError(f"unknown b_mode {b_mode!r}")
    val = _falling_product(b, k + 1) / factorial(k + 1)
    return -(-val.numerator // val.denominator)


def f_const(k: int, n: int) -> int:
    """binom(s(N), k), the face-count bound; 0 when k > s(N)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return comb(s_bound(n), k)


def ell(k: int, n: int) -> int:
    return n * (n + 1) // 2 - 1 - k


def decimal_digits(x: int) -> int:
    """Number of decimal digits of |x| without a full string conversion."""
    x = abs(x)
    if x < 10:
        return 1
    d = int((x.bit_length() - 1) * 0.30102999566398120)
    while 10 ** (d + 1) <= x:
        d += 1
    while 10**d > x:
        d -= 1
    return d + 1


# --- certified logarithms ------------------------------------------------------


def _lead(x: mpmath.mpf, digits: int) -> str:
    return mpmath.nstr(x, digits, min_fixed=-digits, max_fixed=digits, strip_zeros=False)


def certified(fn, digits: int, guard: int = 10, max_tries: int = 4) -> mpmath.mpf:
    """Evaluate ``fn()`` so that doubling the working precision leaves the
    leading ``digits`` significant digits unchanged.

    Returns the value computed at the higher precision.
    """
    if digits < MIN_DIGITS:
        raise PrecisionError(f"at least {MIN_DIGITS} digits are required, got {digits}")
    for attempt in range(max_tries):
        g = guard * (attempt + 1)
        with mpmath.workdps(digits + g):
            lo = fn()
            lo_s = _lead(lo, digits)
        with mpmath.workdps(2 * (digits + g)):
            hi = fn()
            hi_s = _lead(hi, digits)
        if lo_s == hi_s:
            return hi
    raise PrecisionError(f"could not stabilise {digits} digits")


def certified_ln(x: int, digits: int) -> mpmath.mpf:
    """Natural log of a positive integer (of any size) to ``digits`` digits."""
    if x <= 0:
        raise ValueError("log of non-positive integer")
    return certified(lambda: mpmath.log(mpmath.mpf(x)), digits)


# --- the tower constants ----------------------------------------------------------


@dataclass(frozen=True)
class BigBound:
    """An explicit bound, exact or as ``multiplier * ln(base)``.

    For ``log_scale`` values ``ln`` and ``lnln`` are decimal strings with
    ``precision`` certified significant digits.
    """

    kind: str  # exact_integer | exact_rational | log_scale
    value: int | Fraction | None = None
    multiplier: int | None = None
    base: int | None = None
    ln: str | None = None
    log10: str | None = None
    lnln: str | None = None
    precision: int | None = None
    degenerate: str | None = None
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def exact_digits(self) -> int | None:
        if isinstance(self.value, int):
            return decimal_digits(self.value)
        return None

    def ln_mpf(self) -> mpmath.mpf:
        with mpmath.workdps((self.precision or DEFAULT_DIGITS) + 10):
            return mpmath.mpf(self.ln)

    def lnln_mpf(self) -> mpmath.mpf:
        with mpmath.workdps((self.precision or DEFAULT_DIGITS) + 10):
            return mpmath.mpf(self.lnln)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        if self.value is not None:
            out["value"] = str(self.value)
            out["exact_digits"] = self.exact_digits
        for key in ("ln", "log10", "lnln", "precision", "degenerate"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.multiplier is not None:
            out["multiplier_digits"] = decimal_digits(self.multiplier)
            out["base"] = self.base
        out.update(self.extra)
        out["provenance"] = "exact" if self.kind != "log_scale" else "certified-precision"
        return out


def _pow_log(multiplier: int, base: int, digits: int, label: str, extra: dict) -> BigBound:
    """base ** multiplier as a BigBound."""
    if base == 0:
        return BigBound("exact_integer", 0, degenerate="base is zero (face bound vanishes)", label=label, extra=extra)
    if base == 1 or multiplier == 0:
        return BigBound("exact_integer", 1, ln="0", log10="0", label=label, extra=extra)

    def ln_fn():
        return mpmath.mpf(multiplier) * mpmath.log(mpmath.mpf(base))

    def lnln_fn():
        return mpmath.log(mpmath.mpf(multiplier)) + mpmath.log(mpmath.log(mpmath.mpf(base)))

    ln = certified(ln_fn, digits)
    lnln = certified(lnln_fn, digits)
    with mpmath.workdps(digits + 10):
        log10 = ln / mpmath.log(10)
    value = None
    if log10 < EXACT_DIGIT_BUDGET:
        value = base**multiplier
    return BigBound(
        "log_scale",
        value=value,
        multiplier=multiplier,
        base=base,
        ln=_lead(ln, digits),
        log10=_lead(log10, digits),
        lnln=_lead(lnln, digits),
        precision=digits,
        label=label,
        extra=extra,
    )


def h_const(k: int, n: int, digits: int = DEFAULT_DIGITS, b_mode: str = "exact") -> BigBound:
    """h(k, N) = f(l, N) ** c(l, N) with l = N(N+1)/2 - 1 - k."""
    if k < 1 or k > n * (n - 1) // 2:
        raise ValueError(f"need 1 <= k <= N(N-1)/2, got k={k}, N={n}")
    l_ = ell(k, n)
    if l_ < 0:
        raise ValueError(f"l = {l_} < 0")
    c = c_const(l_, n, b_mode)
    f = f_const(l_, n)
    extra = {"k": k, "N": n, "l": l_, "f": str(f) if f < 10**60 else f"<{decimal_digits(f)} digits>"}
    return _pow_log(c, f, digits, f"h({k},{n})", extra)


def k_const(m: int, digits: int = DEFAULT_DIGITS, b_mode: str = "exact") -> BigBound:
    """k(m) = h(m, 2m+1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = h_const(m, 2 * m + 1, digits, b_mode)
    return _relabel(out, f"k({m})")


def v_const(n: int, digits: int = DEFAULT_DIGITS, b_mode: str = "exact") -> BigBound:
    """v(n) = k(2n - 2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _relabel(k_const(2 * n - 2, digits, b_mode), f"v({n})")


def _relabel(b: BigBound, label: str) -> BigBound:
    from dataclasses import replace

    return replace(b, label=label)


# --- the epsilon polynomial and the inequality checks -------------------------------------


def epsilon_poly(m: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """The lower-order correction epsilon(m) in the log log k(m) bound."""
    if m < 1:
        raise ValueError("m must be >= 1")

    def fn():
        L = mpmath.log(m)
        l2 = mpmath.log(2)
        m_ = mpmath.mpf(m)
        return (
            4 * l2 * m_**4
            + (20 * L + 14 + 8 * l2) * m_**3
            + (15 * L + 22 + 7 * l2) * m_**2
            + (5 * L + mpmath.mpf(31) / 2 + 3 * l2) * m_
            + 7 * L / 2
            + 7 * l2 / 2
            + 5
        )

    return certified(fn, digits)


def _poly_log(coef: int, m: int, digits: int) -> mpmath.mpf:
    return certified(lambda: coef * mpmath.mpf(m) ** 4 * mpmath.log(m), digits)


def _leq(lhs: mpmath.mpf, rhs: mpmath.mpf, digits: int) -> bool:
    """lhs <= rhs, refusing to decide when the gap is below the certified precision."""
    with mpmath.workdps(digits + 10):
        scale = max(abs(lhs), abs(rhs), mpmath.mpf(1))
        if abs(rhs - lhs) <= scale * mpmath.mpf(10) ** (-(digits - 2)):
            raise PrecisionError("inequality too tight to decide at this precision")
        return lhs <= rhs


def _s(x: mpmath.mpf, digits: int) -> str:
    return _lead(x, digits)


def lemma2_check(m: int, digits: int = DEFAULT_DIGITS) -> dict:
    """Check log log k(m) <= 12 m^4 log m + eps(m), eps(m) <= 8 m^4 log m,
    and log log k(m) <= 20 m^4 log m, for m >= 6."""
    if m < 6:
        raise ValueError("the inequalities are stated for m >= 6")
    kb = k_const(m, digits)
    lhs = kb.lnln_mpf()
    eps = epsilon_poly(m, digits)
    rhs30 = _poly_log(12, m, digits) + eps
    eps_cap = _poly_log(8, m, digits)
    rhs_lemma = _poly_log(20, m, digits)
    checks = {
        "lnln_k_le_12m4lnm_plus_eps": _leq(lhs, rhs30, digits),
        "eps_le_8m4lnm": _leq(eps, eps_cap, digits),
        "lnln_k_le_20m4lnm": _leq(lhs, rhs_lemma, digits),
    }
    return {
        "m": m,
        "lnln_k": _s(lhs, digits),
        "rhs_12m4lnm_plus_eps": _s(rhs30, digits),
        "eps": _s(eps, digits),
        "eps_cap_8m4lnm": _s(eps_cap, digits),
        "rhs_20m4lnm": _s(rhs_lemma, digits),
        "checks": checks,
        "ok": all(checks.values()),
        "provenance": "certified-precision",
    }


def vandiver_bound_check(n: int, digits: int = DEFAULT_DIGITS) -> dict:
    """Check log log v(n) <= 192 n^4 log n + eps(n) and log v(n) <= n^(224 n^4)."""
    if n < 5:
        raise ValueError("the bound is stated for n >= 5")
    vb = v_const(n, digits)
    lhs = vb.lnln_mpf()
    eps = epsilon_poly(n, digits)
    rhs = _poly_log(192, n, digits) + eps
    rhs_224 = _poly_log(224, n, digits)
    eps_cap = _poly_log(32, n, digits)
    checks = {
        "lnln_v_le_192n4lnn_plus_eps": _leq(lhs, rhs, digits),
        "lnln_v_le_224n4lnn": _leq(lhs, rhs_224, digits),
        "eps_le_32n4lnn": _leq(eps, eps_cap, digits),
    }
    return {
        "n": n,
        "lnln_v": _s(lhs, digits),
        "rhs_192n4lnn_plus_eps": _s(rhs, digits),
        "rhs_224n4lnn": _s(rhs_224, digits),
        "eps": _s(eps, digits),
        "checks": checks,
        "ok": all(checks.values()),
        "provenance": "certified-precision",
    }


HERMITE_EXACT = {
    # gamma_N^N for N <= 8 (classical values); not used by default
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}


def hermite_power(n: int, exact: bool = False) -> Fraction:
    """gamma(N)^N: the classical exact value (N <= 8, opt-in) or the (1 + N/4)^N bound."""
    if exact:
        if n not in HERMITE_EXACT:
            raise ValueError("exact Hermite constants are tabulated for N <= 8 only")
        return HERMITE_EXACT[n]
    return gamma_bound(n) ** n
