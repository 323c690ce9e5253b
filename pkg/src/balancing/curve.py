"""Short Weierstrass curves over Q: group law, naive and canonical heights.

Curves are ``Y^2 = X^3 + a2 X^2 + a4 X + a6`` with integer coefficients.
Points carry exact ``mpq`` coordinates.

Canonical heights use the *full* normalization, ``hhat(P) = lim 4^-n h(2^n P)``
with ``h`` the log of the larger of numerator and denominator of ``X``. In this
normalization ``hhat(P) - h(P)`` is bounded, and that is the quantity
compared against the height-difference constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from .arithmetic import (
    DEFAULT_PRECISION,
    GUARD_DIGITS,
    check_precision,
    padic_valuation,
    prime_factors,
    rational,
    to_real,
)


@dataclass(frozen=True)
class CurvePoint:
    """Affine rational point, or the point at infinity when ``x`` is None."""

    x: Optional[mpq] = None
    y: Optional[mpq] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither must be given")
        if self.x is not None:
            object.__setattr__(self, "x", rational(self.x))
            object.__setattr__(self, "y", rational(self.y))

    @classmethod
    def of(cls, x, y) -> "CurvePoint":
        return cls(rational(x), rational(y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "CurvePoint":
        if self.is_infinity:
            return self
        return CurvePoint(self.x, -self.y)

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()


@dataclass(frozen=True)
class Curve:
    a2: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a2", "a4", "a6"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.discriminant == 0:
            raise ValueError(f"singular curve {self}")

    # invariants -----------------------------------------------------------

    @property
    def b2(self) -> int:
        return 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4

    @property
    def b6(self) -> int:
        return 4 * self.a6

    @property
    def b8(self) -> int:
        return 4 * self.a2 * self.a6 - self.a4 ** 2

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = 4 * self.a2, 2 * self.a4, 4 * self.a6, 4 * self.a2 * self.a6 - self.a4 ** 2
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def bad_primes(self) -> tuple[int, ...]:
        return tuple(prime_factors(self.discriminant))

    def rhs(self, x):
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def rhs_derivative(self, x):
        return (3 * x + 2 * self.a2) * x + self.a4

    def real_roots(self, precision: int = DEFAULT_PRECISION) -> list:
        """Real roots of the cubic, ascending."""
        precision = check_precision(precision)
        with mpmath.workdps(precision + GUARD_DIGITS):
            roots = mpmath.polyroots([1, self.a2, self.a4, self.a6], maxsteps=200,
                                     extraprec=2 * precision)
            tol = mpmath.mpf(10) ** (-precision // 2)
            real = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < tol)
            # polish on the real line
            return [mpmath.findroot(self.rhs, r) for r in real]

    def real_root(self, precision: int = DEFAULT_PRECISION):
        """The unique real root ``e1``; only for curves with one real component."""
        if self.discriminant > 0:
            raise ValueError("curve has two real components; not supported")
        (e1,) = self.real_roots(precision)
        return e1

    @cached_property
    def _positive_shift(self) -> int:
        # integer r with X + r > 0 on all real points
        return int(mpmath.floor(-self.real_roots(15)[-1])) + 1

    # group law -----------------------------------------------------------

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == self.rhs(P.x)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            lam = self.rhs_derivative(P.x) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - self.a2 - P.x - Q.x
        y3 = -(P.y + lam * (x3 - P.x))
        return CurvePoint(x3, y3)

    def double(self, P: CurvePoint) -> CurvePoint:
        return self.add(P, P)

    def multiply(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            n, P = -n, -P
        result = INFINITY
        while n:
            if n & 1:
                result = self.add(result, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return result

    def lincomb(self, coeffs: Sequence[int], points: Sequence[CurvePoint]) -> CurvePoint:
        result = INFINITY
        for m, P in zip(coeffs, points):
            if m:
                result = self.add(result, self.multiply(m, P))
        return result

    # heights -------------------------------------------------------------

    def _good_reduction_everywhere(self, P: CurvePoint) -> bool:
        """True if P reduces to a non-singular point at every bad prime."""
        for p in self.bad_primes:
            vx = padic_valuation(P.x, p)
            if vx is not None and vx < 0:
                continue
            dx = padic_valuation(self.rhs_derivative(P.x), p)
            dy = padic_valuation(2 * P.y, p)
            if (dx is None or dx > 0) and (dy is None or dy > 0):
                return False
        return True

    def _archimedean_height(self, x: mpq, precision: int):
        """Tate's series for the archimedean local height.

        The model is shifted by an integer so that every real point has
        ``X > 0``; the series then converges like ``4^-n``. Normalized so that
        (for points with everywhere good reduction) ``lambda + log d`` is half
        the full canonical height, where ``X = a/d^2``.
        """
        with mpmath.workdps(precision + GUARD_DIGITS):
            r = self._positive_shift
            a2 = self.a2 - 3 * r
            a4 = self.a4 - 2 * self.a2 * r + 3 * r * r
            a6 = self.a6 - self.a4 * r + self.a2 * r * r - r ** 3
            b2, b4, b6, b8 = 4 * a2, 2 * a4, 4 * a6, 4 * a2 * a6 - a4 * a4
            t = to_real(x, precision) + r
            total = mpmath.log(t) / 2
            weight = mpmath.mpf(1) / 8
            eps = mpmath.mpf(10) ** (-(precision + GUARD_DIGITS))
            while weight > eps:
                z = 1 - b4 / t ** 2 - 2 * b6 / t ** 3 - b8 / t ** 4
                total += weight * mpmath.log(z)
                t = (t ** 4 - b4 * t * t - 2 * b6 * t - b8) / (4 * t ** 3 + b2 * t * t + 2 * b4 * t + b6)
                weight /= 4
            return total

    def good_reduction_multiple(self, P: CurvePoint, max_multiple: int = 120) -> tuple[int, CurvePoint]:
        """Smallest k with kP reducing to non-singular points at all bad primes."""
        for p in self.bad_primes:
            if padic_valuation(self.discriminant, p) >= 12:
                raise ValueError(f"model is not minimal at {p}")
        Q = P
        for k in range(1, max_multiple + 1):
            if Q.is_infinity:
                return k, Q
            if self._good_reduction_everywhere(Q):
                return k, Q
            Q = self.add(Q, P)
        raise ArithmeticError(f"no good-reduction multiple of {P} up to {max_multiple}")

    def canonical_height(self, P: CurvePoint, precision: int = DEFAULT_PRECISION):
        """Neron-Tate height (full normalization) by local decomposition."""
        precision = check_precision(precision)
        if P.is_infinity:
            return mpmath.mpf(0)
        k, Q = self.good_reduction_multiple(P)
        if Q.is_infinity:
            return mpmath.mpf(0)
        with mpmath.workdps(precision + GUARD_DIGITS):
            d = gmpy2.isqrt(Q.x.denominator)
            local = mpmath.log(int(d)) + self._archimedean_height(Q.x, precision)
            return 2 * local / (k * k)


def on_curve(E: Curve, P: CurvePoint) -> bool:
    return E.contains(P)


def add(E: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return E.add(P, Q)


def lincomb(E: Curve, basis: Sequence[CurvePoint], m1: int, m2: int, m3: int) -> CurvePoint:
    return E.lincomb((m1, m2, m3), basis)


def naive_height(P: CurvePoint, precision: int = DEFAULT_PRECISION):
    """Logarithmic Weil height of X; zero at infinity."""
    if P.is_infinity:
        return mpmath.mpf(0)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return mpmath.log(int(max(abs(P.x.numerator), P.x.denominator)))


def canonical_height(E: Curve, P: CurvePoint, precision: int = DEFAULT_PRECISION):
    return E.canonical_height(P, precision)


def doubling_height(E: Curve, P: CurvePoint, doublings: int, precision: int = 30):
    """``4^-n h(2^n P)``: slow exact-arithmetic approximation of the canonical height."""
    Q = P
    for _ in range(doublings):
        Q = E.double(Q)
        if Q.is_infinity:
            return mpmath.mpf(0)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return naive_height(Q, precision) / mpmath.mpf(4) ** doublings


def pairing_matrix(E: Curve, basis: Sequence[CurvePoint], precision: int = DEFAULT_PRECISION):
    """Gram matrix of the canonical height pairing on ``basis``."""
    heights = [E.canonical_height(P, precision) for P in basis]
    n = len(basis)
    with mpmath.workdps(precision + GUARD_DIGITS):
        H = mpmath.matrix(n, n)
        for i in range(n):
            H[i, i] = heights[i]
            for j in range(i + 1, n):
                s = E.canonical_height(E.add(basis[i], basis[j]), precision)
                H[i, j] = H[j, i] = (s - heights[i] - heights[j]) / 2
        return H


def quadratic_form(H, coeffs: Iterable[int]):
    m = list(coeffs)
    return mpmath.fsum(H[i, j] * m[i] * m[j] for i in range(len(m)) for j in range(len(m)))


def least_eigenvalue(H, precision: int = DEFAULT_PRECISION):
    """Smallest eigenvalue of a real symmetric 3x3 matrix.

    Uses the trigonometric closed form for the roots of the characteristic
    cubic; all three roots are real for a symmetric matrix.
    """
    with mpmath.workdps(precision + GUARD_DIGITS):
        H = mpmath.matrix(H)
        if H.rows != 3 or H.cols != 3:
            raise ValueError("expected a 3x3 matrix")
        if max(abs(H[i, j] - H[j, i]) for i in range(3) for j in range(3)) > mpmath.mpf(10) ** (-precision // 2):
            raise ValueError("matrix is not symmetric")
        off = H[0, 1] ** 2 + H[0, 2] ** 2 + H[1, 2] ** 2
        q = (H[0, 0] + H[1, 1] + H[2, 2]) / 3
        if off == 0:
            return min(H[0, 0], H[1, 1], H[2, 2])
        p = mpmath.sqrt(((H[0, 0] - q) ** 2 + (H[1, 1] - q) ** 2 + (H[2, 2] - q) ** 2 + 2 * off) / 6)
        Bm = (H - q * mpmath.eye(3)) / p
        r = mpmath.det(Bm) / 2
        r = max(min(r, mpmath.mpf(1)), mpmath.mpf(-1))
        angle = mpmath.acos(r) / 3
        return q + 2 * p * mpmath.cos(angle + 2 * mpmath.pi / 3)


BALANCING_CURVE = Curve(-1, -30, 81)
BALANCING_GENERATORS = (CurvePoint.of(3, -3), CurvePoint.of(-6, 3), CurvePoint.of(11, 31))
