"""Exact and high-precision evaluation of sunflower-threshold bounds.

Integer-valued bounds (factorial/multinomial forms) are computed in exact
big-integer arithmetic.  Real-valued bounds carry an irrational exponent
or a logarithm and are evaluated with outward-rounded interval arithmetic
at a requested number of significant digits; comparisons between bounds
are only reported once the enclosing intervals are disjoint (or equality
is certified to 1e-30 relative), widening precision as needed.

Logarithms default to base e; the base is configurable and echoed in
reports, since the free constant C absorbs base changes anyway.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

import mpmath as mp
from mpmath import iv

Rational = Union[int, float, str, Fraction]

#: Relative tolerance at which an undecided comparison is certified equal.
EQUALITY_REL_TOL = Fraction(1, 10**30)

_MAX_COMPARE_DIGITS = 4096


def as_fraction(value: Rational) -> Fraction:
    """Exact rational from int/str/Fraction; floats go via repr (0.1 -> 1/10)."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@contextmanager
def _ivdps(dps: int):
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def _raw_to_fraction(raw) -> Fraction:
    # raw is a libmp mantissa/exponent tuple; conversion is exact and does
    # not depend on any mpmath context precision
    sign, man, exp, _ = raw
    if not isinstance(exp, int):
        raise ArithmeticError(f"non-finite interval endpoint {raw!r}")
    if man == 0:
        return Fraction(0)
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def _iv_endpoints(x) -> tuple[Fraction, Fraction]:
    lo_raw, hi_raw = x._mpi_
    return _raw_to_fraction(lo_raw), _raw_to_fraction(hi_raw)


def _iv_fraction(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _iv_log(value, log_base: Rational = "e"):
    ln = iv.log(value)
    if log_base == "e":
        return ln
    base = as_fraction(log_base)
    if base <= 1:
        raise ValueError(f"log base must exceed 1, got {log_base}")
    return ln / iv.log(_iv_fraction(base))


FracInterval = tuple[Fraction, Fraction]


def certified_compare(
    make_a: Callable[[int], FracInterval],
    make_b: Callable[[int], FracInterval],
    digits: int = 50,
) -> str:
    """Compare two interval-valued quantities: '<', '>', or '=' (certified).

    Each maker returns an enclosing rational interval at the requested
    precision.  Precision doubles until the intervals are disjoint or
    their joint span is below EQUALITY_REL_TOL relative.
    """
    d = digits
    while True:
        a_lo, a_hi = make_a(d)
        b_lo, b_hi = make_b(d)
        if a_hi < b_lo:
            return "<"
        if b_hi < a_lo:
            return ">"
        span = max(a_hi, b_hi) - min(a_lo, b_lo)
        scale = max(abs(a_lo), abs(a_hi), abs(b_lo), abs(b_hi))
        if scale > 0 and span <= EQUALITY_REL_TOL * scale:
            return "="
        if d >= _MAX_COMPARE_DIGITS:
            raise ArithmeticError("bound comparison undecided at maximum precision")
        d *= 2


@dataclass(frozen=True)
class RealBoundValue:
    """An interval-certified real bound value.

    `decimal` is the interval midpoint displayed to `digits` significant
    digits; `lower`/`upper` are the certified enclosure endpoints (display
    rounded; the exact rational endpoints drive all comparisons) and
    `error` bounds the enclosure width.
    """

    decimal: str
    lower: str
    upper: str
    error: str
    digits: int

    def __float__(self) -> float:
        return float(mp.mpf(self.decimal))


def _real_value(interval: FracInterval, digits: int) -> RealBoundValue:
    lo, hi = interval
    mid = (lo + hi) / 2
    with mp.workdps(digits + 10):
        decimal = mp.nstr(mp.mpf(mid.numerator) / mp.mpf(mid.denominator), digits)
        lower = mp.nstr(mp.mpf(lo.numerator) / mp.mpf(lo.denominator), digits)
        upper = mp.nstr(mp.mpf(hi.numerator) / mp.mpf(hi.denominator), digits)
        err = hi - lo
        error = mp.nstr(mp.mpf(err.numerator) / mp.mpf(err.denominator), 3)
    return RealBoundValue(decimal=decimal, lower=lower, upper=upper, error=error, digits=digits)


# ---------------------------------------------------------------------------
# Exact integer bounds
# ---------------------------------------------------------------------------

def erdos_rado_bound(n: int, r: int) -> int:
    """n! * (r-1)^n, the classical factorial sunflower threshold."""
    if n < 1 or r < 2:
        raise ValueError(f"need n >= 1 and r >= 2, got n={n}, r={r}")
    return math.factorial(n) * (r - 1) ** n


def pigeonhole_limit(n: int, r: int) -> int:
    """max(r-1, n^2-n+1): the branching limit of the restricted extractor.

    A single-intersection-size n-uniform family larger than this is
    necessarily a sunflower with at least r sets, so it caps both the
    pigeonhole divisor and the pairwise-equal subfamily size.
    """
    if n < 1 or r < 2:
        raise ValueError(f"need n >= 1 and r >= 2, got n={n}, r={r}")
    return max(r - 1, n * n - n + 1)


def l_intersecting_bound(n: int, s: int, r: int) -> int:
    """(s+1)^n * m^s with m = pigeonhole_limit(n, r).

    Exact power form of the threshold for families whose pairwise
    intersection sizes take at most s values.
    """
    if n < 1 or s < 1 or r < 2:
        raise ValueError(f"need n >= 1, s >= 1, r >= 2, got n={n}, s={s}, r={r}")
    return (s + 1) ** n * pigeonhole_limit(n, r) ** s


def _validated_l(n: int, L: Iterable[int]) -> tuple[int, ...]:
    ls = tuple(sorted(set(int(e) for e in L)))
    if not ls:
        raise ValueError("L must be nonempty")
    if ls[0] < 0:
        raise ValueError(f"intersection sizes must be >= 0, got {ls[0]}")
    if ls[-1] >= n:
        raise ValueError(f"largest intersection size {ls[-1]} must be < n = {n}")
    return ls


def l_multinomial_bound(n: int, L: Iterable[int], r: int) -> int:
    """n! * m^s divided by the gap factorials of L = {l1 < ... < ls}.

    The denominator is (l1+1)! * (l2-l1)! * ... * (ls-l_{s-1})! * (n-ls-1)!,
    whose arguments sum to n, so the quotient is an exact multinomial
    coefficient times m^s.  Always at most l_intersecting_bound(n, |L|, r).
    """
    if n < 1 or r < 2:
        raise ValueError(f"need n >= 1 and r >= 2, got n={n}, r={r}")
    ls = _validated_l(n, L)
    parts = [ls[0] + 1]
    parts += [b - a for a, b in zip(ls, ls[1:])]
    parts.append(n - ls[-1] - 1)
    assert sum(parts) == n
    denom = math.prod(math.factorial(p) for p in parts)
    multinomial, rem = divmod(math.factorial(n), denom)
    assert rem == 0
    value = multinomial * pigeonhole_limit(n, r) ** len(ls)
    assert value <= l_intersecting_bound(n, len(ls), r)
    return value


def falling_factorial_bound(n: int, d: int, r: int) -> int:
    """(r-1)^(d+1) * n!/(n-d)!: the factorial threshold specialized to
    families whose pairwise intersections have size at most d."""
    if d < 0 or r < 2 or n < d:
        raise ValueError(f"need 0 <= d <= n and r >= 2, got n={n}, d={d}, r={r}")
    return (r - 1) ** (d + 1) * math.factorial(n) // math.factorial(n - d)


# ---------------------------------------------------------------------------
# Interval-valued bounds
# ---------------------------------------------------------------------------

def _three_sunflower_interval(n: int, s: int, dps: int) -> FracInterval:
    exact = (n * n - n + 1) * 8 ** (s - 1)
    with _ivdps(dps):
        exponent = (iv.mpf(1) + iv.sqrt(iv.mpf(5)) / iv.mpf(5)) * iv.mpf(n * (s - 1))
        lo, hi = _iv_endpoints(iv.exp(exponent * iv.log(iv.mpf(2))))
    return exact * lo, exact * hi


def three_sunflower_bound(n: int, s: int, digits: int = 50) -> RealBoundValue:
    """(n^2-n+1) * 8^(s-1) * 2^((1+sqrt(5)/5)*n*(s-1)).

    The previously known threshold above which an n-uniform family with s
    distinct pairwise intersection sizes contains a 3-sunflower.  Exact
    when s = 1 (both exponential factors collapse to 1).
    """
    if n < 1 or s < 1:
        raise ValueError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    return _real_value(_three_sunflower_interval(n, s, digits + 15), digits)


def _rlogn_interval(n: int, r: int, C: Fraction, dps: int, log_base: Rational) -> FracInterval:
    with _ivdps(dps):
        base = _iv_fraction(C) * iv.mpf(r) * _iv_log(iv.mpf(n), log_base)
        return _iv_endpoints(base ** n)


def rlogn_bound(n: int, r: int, C: Rational = 1, digits: int = 50, log_base: Rational = "e") -> RealBoundValue:
    """(C * r * log n)^n, the improved unrestricted sunflower threshold form."""
    if n < 2 or r < 2:
        raise ValueError(f"need n >= 2 (so log n > 0) and r >= 2, got n={n}, r={r}")
    c = as_fraction(C)
    if c <= 0:
        raise ValueError(f"C must be positive, got {C}")
    return _real_value(_rlogn_interval(n, r, c, digits + 15, log_base), digits)


def _d_intersecting_interval(
    n: int, d: int, r: int, C: Fraction, dps: int, log_base: Rational
) -> FracInterval:
    exact = (4 * r) ** n
    with _ivdps(dps):
        base = _iv_fraction(C) * iv.mpf(r) * _iv_log(iv.mpf(r * d), log_base)
        lo, hi = _iv_endpoints(base ** d)
    # exact > 0, so scaling preserves the enclosure ordering
    return exact * lo, exact * hi


def d_intersecting_bound(
    n: int, d: int, r: int, C: Rational = 1, digits: int = 50, log_base: Rational = "e"
) -> RealBoundValue:
    """(4r)^n * (C * r * log(rd))^d, the threshold for families whose
    pairwise intersections have size at most d; the (4r)^n factor is exact."""
    if n < 1 or d < 1 or r < 2:
        raise ValueError(f"need n >= 1, d >= 1, r >= 2, got n={n}, d={d}, r={r}")
    if r * d < 2:
        raise ValueError(f"need r*d >= 2 so log(rd) is positive, got r*d={r * d}")
    c = as_fraction(C)
    if c <= 0:
        raise ValueError(f"C must be positive, got {C}")
    return _real_value(_d_intersecting_interval(n, d, r, c, digits + 15, log_base), digits)


# ---------------------------------------------------------------------------
# Crossover comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossoverRow:
    d: int
    d_intersecting: str
    falling_factorial: str
    smaller: str  # "d-intersecting" | "falling-factorial" | "equal"


@dataclass(frozen=True)
class CrossoverReport:
    n: int
    r: int
    C: str
    log_base: str
    digits: int
    rows: tuple[CrossoverRow, ...]
    first_improvement: Optional[int]  # smallest d with d_intersecting < falling_factorial


def crossover_report(
    n: int, r: int, C: Rational = 1, digits: int = 50, log_base: Rational = "e"
) -> CrossoverReport:
    """Row-by-row certified comparison of the two d-restricted thresholds
    for d = 1..n, reporting the first d (if any) where the log-form bound
    drops below the factorial one."""
    if n < 2 or r < 2:
        raise ValueError(f"need n >= 2 and r >= 2, got n={n}, r={r}")
    c = as_fraction(C)
    if c <= 0:
        raise ValueError(f"C must be positive, got {C}")
    rows = []
    first = None
    for d in range(1, n + 1):
        trivial = falling_factorial_bound(n, d, r)
        verdict = certified_compare(
            lambda dps, d=d: _d_intersecting_interval(n, d, r, c, dps + 15, log_base),
            lambda dps: (Fraction(trivial), Fraction(trivial)),
            digits=digits,
        )
        smaller = {"<": "d-intersecting", ">": "falling-factorial", "=": "equal"}[verdict]
        if verdict == "<" and first is None:
            first = d
        rows.append(
            CrossoverRow(
                d=d,
                d_intersecting=d_intersecting_bound(n, d, r, c, digits, log_base).decimal,
                falling_factorial=str(trivial),
                smaller=smaller,
            )
        )
    return CrossoverReport(
        n=n,
        r=r,
        C=str(c),
        log_base=str(log_base),
        digits=digits,
        rows=tuple(rows),
        first_improvement=first,
    )


# ---------------------------------------------------------------------------
# Named reports (CLI surface)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: exact values as decimal-integer strings,
    interval-certified reals with explicit precision and error bound."""

    name: str
    params: dict
    value: str
    exact: bool
    digits: Optional[int] = None
    lower: Optional[str] = None
    upper: Optional[str] = None
    error: Optional[str] = None


def _report_exact(name: str, params: dict, value: int) -> BoundReport:
    return BoundReport(name=name, params=params, value=str(value), exact=True)


def _report_real(name: str, params: dict, rv: RealBoundValue) -> BoundReport:
    return BoundReport(
        name=name,
        params=params,
        value=rv.decimal,
        exact=False,
        digits=rv.digits,
        lower=rv.lower,
        upper=rv.upper,
        error=rv.error,
    )


def bound_report(
    which: str,
    n: Optional[int] = None,
    r: Optional[int] = None,
    s: Optional[int] = None,
    L: Optional[Iterable[int]] = None,
    d: Optional[int] = None,
    C: Rational = 1,
    digits: int = 50,
    log_base: Rational = "e",
) -> BoundReport:
    """Evaluate one named bound, echoing its parameters."""
    c = as_fraction(C)

    def need(**kw):
        missing = [k for k, v in kw.items() if v is None]
        if missing:
            raise ValueError(f"bound '{which}' needs parameters: {', '.join(missing)}")

    if which == "erdos-rado":
        need(n=n, r=r)
        return _report_exact(which, {"n": n, "r": r}, erdos_rado_bound(n, r))
    if which == "pigeonhole-limit":
        need(n=n, r=r)
        return _report_exact(which, {"n": n, "r": r}, pigeonhole_limit(n, r))
    if which == "l-intersecting":
        if s is None and L is not None:
            s = len(set(L))
        need(n=n, s=s, r=r)
        return _report_exact(which, {"n": n, "s": s, "r": r}, l_intersecting_bound(n, s, r))
    if which == "l-multinomial":
        need(n=n, L=L, r=r)
        ls = sorted(set(L))
        return _report_exact(which, {"n": n, "L": ls, "r": r}, l_multinomial_bound(n, ls, r))
    if which == "three-sunflower":
        if s is None and L is not None:
            s = len(set(L))
        need(n=n, s=s)
        return _report_real(which, {"n": n, "s": s}, three_sunflower_bound(n, s, digits))
    if which == "rlogn":
        need(n=n, r=r)
        params = {"n": n, "r": r, "C": str(c), "log_base": str(log_base)}
        return _report_real(which, params, rlogn_bound(n, r, c, digits, log_base))
    if which == "d-intersecting":
        need(n=n, d=d, r=r)
        params = {"n": n, "d": d, "r": r, "C": str(c), "log_base": str(log_base)}
        return _report_real(which, params, d_intersecting_bound(n, d, r, c, digits, log_base))
    if which == "falling-factorial":
        need(n=n, d=d, r=r)
        return _report_exact(which, {"n": n, "d": d, "r": r}, falling_factorial_bound(n, d, r))
    raise ValueError(f"unknown bound {which!r}")


BOUND_NAMES = (
    "erdos-rado",
    "pigeonhole-limit",
    "l-intersecting",
    "l-multinomial",
    "three-sunflower",
    "rlogn",
    "d-intersecting",
    "falling-factorial",
)
