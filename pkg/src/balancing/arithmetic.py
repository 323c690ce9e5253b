"""Exact rational and arbitrary-precision real arithmetic.

Exact coordinates are ``gmpy2.mpq`` values (always in lowest terms with a
positive denominator). Real quantities are ``mpmath.mpf`` values computed
inside a local ``mpmath.workdps`` block, so the caller states the number of
decimal digits it wants and gets that many back (plus ``GUARD_DIGITS``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

#: extra working digits used internally by every real computation
GUARD_DIGITS = 10
#: default precision for periods, logarithms and heights
DEFAULT_PRECISION = 120
#: default precision for the lattice-reduction stage
REDUCTION_PRECISION = 450

Rational = mpq
RationalLike = Union[int, str, Fraction, mpq, mpz]


def rational(value: RationalLike, den: int = 1) -> mpq:
    """Build an exact rational from an int, ``"a/b"`` string or Fraction."""
    if isinstance(value, Fraction):
        value = mpq(value.numerator, value.denominator)
    q = mpq(value)
    if den != 1:
        q = q / den
    return q


def to_fraction(q: mpq) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def to_real(q: RationalLike, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Convert an exact rational to an mpf carrying ``precision`` digits."""
    q = rational(q)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def check_precision(precision: int) -> int:
    precision = int(precision)
    if precision < 10:
        raise ValueError(f"precision must be at least 10 digits, got {precision}")
    return precision


def real_cbrt2(precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Real cube root of 2 to ``precision`` digits."""
    precision = check_precision(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return mpmath.cbrt(2)


def agm(a, b, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Arithmetic-geometric mean of two positive reals.

    Iterates ``(a, b) -> ((a + b)/2, sqrt(a b))`` until the two means agree to
    the working precision; convergence is quadratic.
    """
    precision = check_precision(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        a = mpmath.mpf(a)
        b = mpmath.mpf(b)
        if a <= 0 or b <= 0:
            raise ValueError("agm requires positive arguments")
        tol = mpmath.mpf(10) ** (-(precision + GUARD_DIGITS // 2))
        while abs(a - b) > tol * a:
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        return (a + b) / 2


def is_perfect_square(n: int) -> Optional[int]:
    """Return ``r >= 0`` with ``r*r == n``, or None."""
    n = mpz(n)
    if n < 0 or not gmpy2.is_square(n):
        return None
    return int(gmpy2.isqrt(n))


def solve_consecutive_product(v: int) -> Optional[int]:
    """Return ``y >= 2`` with ``(y - 1)(y - 2) == v``, or None.

    ``(y-1)(y-2) = v`` gives ``(2y - 3)^2 = 4v + 1``.
    """
    r = is_perfect_square(4 * mpz(v) + 1)
    if r is None or (r + 3) % 2:
        return None
    y = (r + 3) // 2
    return y if y >= 2 else None


def rational_sqrt(q: mpq) -> Optional[mpq]:
    """Exact square root of a non-negative rational, or None."""
    q = rational(q)
    if q < 0:
        return None
    num = is_perfect_square(q.numerator)
    den = is_perfect_square(q.denominator)
    if num is None or den is None:
        return None
    return mpq(num, den)


def _eval_cubic(c, t):
    return ((c[0] * t + c[1]) * t + c[2]) * t + c[3]


def _cauchy_bound(c3, c2, c1, c0) -> int:
    # every real root satisfies |t| <= 1 + max|c_i / c3|
    return 1 + max(abs(c2), abs(c1), abs(c0)) // abs(c3) + 1


def _monotone_integer_root(coeffs, lo: int, hi: int) -> Optional[int]:
    """Integer root of a cubic that is monotone on the integer range [lo, hi]."""
    if lo > hi:
        return None
    flo = _eval_cubic(coeffs, lo)
    fhi = _eval_cubic(coeffs, hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        return None
    increasing = fhi > flo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        fm = _eval_cubic(coeffs, mid)
        if fm == 0:
            return mid
        if (fm < 0) == increasing:
            lo = mid
        else:
            hi = mid
    return None


def integer_cubic_roots(c3: int, c2: int, c1: int, c0: int) -> list[int]:
    """All integer roots of ``c3 t^3 + c2 t^2 + c1 t + c0``, found exactly.

    The real line is cut at integer brackets of the critical points into
    pieces on which the cubic is monotone, and each piece is searched by
    integer bisection. No floating point is involved.
    """
    if c3 == 0:
        raise ValueError("leading coefficient must be non-zero")
    coeffs = tuple(mpz(c) for c in (c3, c2, c1, c0))
    if coeffs[3] == 0:
        # t = 0 is a root; the rest come from the quadratic factor
        roots = {0}
        a, b, c = coeffs[0], coeffs[1], coeffs[2]
        disc = b * b - 4 * a * c
        r = is_perfect_square(disc)
        if r is not None:
            for s in (r, -r):
                num = -b + s
                if num % (2 * a) == 0:
                    roots.add(int(num // (2 * a)))
        return sorted(roots)

    bound = _cauchy_bound(*coeffs)
    # critical points: roots of 3 c3 t^2 + 2 c2 t + c1
    disc = 4 * coeffs[1] ** 2 - 12 * coeffs[0] * coeffs[2]
    cuts = [-bound]
    if disc > 0:
        s = gmpy2.isqrt(disc)
        den = 6 * coeffs[0]
        crit = sorted(
            (-2 * coeffs[1] + sign * s) / mpq(den) for sign in (-1, 1)
        )
        for t in crit:
            if -bound < t < bound:
                cuts.append(int(gmpy2.floor(t)))
                cuts.append(int(gmpy2.ceil(t)) + 1)
    cuts.append(bound)
    cuts = sorted(set(cuts))

    roots = set()
    # the integers adjacent to critical points are checked directly
    for t in cuts:
        if _eval_cubic(coeffs, t) == 0:
            roots.add(t)
        if _eval_cubic(coeffs, t - 1) == 0:
            roots.add(t - 1)
    for lo, hi in zip(cuts, cuts[1:]):
        r = _monotone_integer_root(coeffs, lo, hi)
        if r is not None:
            roots.add(r)
    return sorted(int(r) for r in roots)


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``|n|`` by trial division (small n only)."""
    n = abs(int(n))
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


def padic_valuation(q: RationalLike, p: int) -> Optional[int]:
    """``ord_p`` of a rational; None for zero (infinite valuation)."""
    q = rational(q)
    if q == 0:
        return None
    num = gmpy2.remove(q.numerator, p)[1] if q.numerator % p == 0 else 0
    den = gmpy2.remove(q.denominator, p)[1] if q.denominator % p == 0 else 0
    return int(num) - int(den)
