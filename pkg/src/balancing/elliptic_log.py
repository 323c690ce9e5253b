"""Real period, elliptic logarithms and the linear form in elliptic logarithms.

The elliptic logarithm of a real point P is ``omega * phi(P)`` where
``phi: E(R) -> [0, 1)`` is the group isomorphism fixed by

    integral_{X(P)}^{inf} dX / Y = omega * phi(P)      for Y(P) > 0,

so points in the upper half have ``phi`` in ``(0, 1/2)`` and ``phi(-P) =
1 - phi(P)``. Only curves with a single real component are handled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import mpmath

from .arithmetic import (
    DEFAULT_PRECISION,
    GUARD_DIGITS,
    agm,
    check_precision,
    real_cbrt2,
    to_real,
)
from .curve import Curve, CurvePoint


class ConvergenceError(ArithmeticError):
    """A numerical procedure did not reach the requested accuracy."""


class RealPoint(NamedTuple):
    x: mpmath.mpf
    y: mpmath.mpf


def _as_real_point(P, precision: int):
    if isinstance(P, CurvePoint):
        if P.is_infinity:
            return None
        return RealPoint(to_real(P.x, precision), to_real(P.y, precision))
    return RealPoint(mpmath.mpf(P[0]), mpmath.mpf(P[1]))


def _reduced_cubic(E: Curve, precision: int):
    """``e1`` and ``(b, c)`` with ``f(e1 + s) = s (s^2 + b s + c)``."""
    e1 = E.real_root(precision)
    b = 3 * e1 + E.a2
    c = E.rhs_derivative(e1)
    return e1, b, c


def real_period(E: Curve, precision: int = DEFAULT_PRECISION):
    """``omega = 2 * integral_{e1}^{inf} dX / sqrt(f(X))`` via the AGM."""
    precision = check_precision(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        e1, b, c = _reduced_cubic(E, precision)
        m = mpmath.sqrt(c)
        return 4 * mpmath.pi / agm(2 * mpmath.sqrt(m), mpmath.sqrt(2 * m + b), precision)


def _breakpoints(start):
    # geometric subdivision keeps tanh-sinh accurate on the 1/t^2 tail
    return [start] + [start + mpmath.mpf(2) ** k for k in range(-1, 10)] + [mpmath.inf]


def real_period_quadrature(E: Curve, precision: int = 20):
    """Independent check of ``real_period`` by numerical integration.

    With ``X = e1 + t^2`` the period integral becomes
    ``4 * integral_0^inf dt / sqrt(t^4 + b t^2 + c)``, which is smooth.
    """
    with mpmath.workdps(precision + GUARD_DIGITS):
        e1, b, c = _reduced_cubic(E, precision)
        integrand = lambda t: 1 / mpmath.sqrt(t ** 4 + b * t * t + c)
        return 4 * mpmath.quad(integrand, _breakpoints(0))


def upper_half_log_quadrature(E: Curve, x, precision: int = 20):
    """``integral_x^inf dX / sqrt(f(X))`` by quadrature (test oracle)."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        e1, b, c = _reduced_cubic(E, precision)
        start = mpmath.sqrt(mpmath.mpf(x) - e1)
        integrand = lambda t: 1 / mpmath.sqrt(t ** 4 + b * t * t + c)
        return 2 * mpmath.quad(integrand, _breakpoints(start))


def zagier_phi(E: Curve, P, precision: int = DEFAULT_PRECISION):
    """``phi(P)`` in ``[0, 1)`` from the binary expansion produced by doubling.

    Bit n is 1 exactly when ``2^(n-1) P`` lies in the lower half ``Y < 0``,
    since ``phi(2Q) = 2 phi(Q) mod 1`` and the lower half is ``phi >= 1/2``.
    Real-arithmetic errors are not amplified in the reconstructed value, so
    ``precision`` plus guard digits suffice.
    """
    precision = check_precision(precision)
    R = _as_real_point(P, precision)
    if R is None:
        return mpmath.mpf(0)
    nbits = math.ceil(precision * math.log(10) / math.log(2)) + 20
    with mpmath.workdps(precision + GUARD_DIGITS):
        x, y = mpmath.mpf(R.x), mpmath.mpf(R.y)
        phi = mpmath.mpf(0)
        weight = mpmath.mpf(1) / 2
        for _ in range(nbits):
            if y < 0:
                phi += weight
            if y == 0:
                # 2-torsion: the remaining expansion is exactly zero
                return phi
            lam = E.rhs_derivative(x) / (2 * y)
            x_new = lam * lam - E.a2 - 2 * x
            y = -(y + lam * (x_new - x))
            x = x_new
            weight /= 2
        # remaining tail lies in [0, 2 * weight); take the midpoint
        return phi + weight


def elliptic_log(E: Curve, P, precision: int = DEFAULT_PRECISION, omega=None):
    """``omega * phi(P)`` in ``[0, omega)``."""
    precision = check_precision(precision)
    if isinstance(P, CurvePoint) and P.is_infinity:
        return mpmath.mpf(0)
    if omega is None:
        omega = real_period(E, precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return omega * zagier_phi(E, P, precision)


def elliptic_log_quadrature(E: Curve, P, precision: int = 20):
    """Slow oracle for ``elliptic_log`` built on ``upper_half_log_quadrature``."""
    R = _as_real_point(P, precision)
    if R is None:
        return mpmath.mpf(0)
    with mpmath.workdps(precision + GUARD_DIGITS):
        value = upper_half_log_quadrature(E, R.x, precision)
        if R.y > 0:
            return value
        return real_period_quadrature(E, precision) - value


def q0_point(precision: int = DEFAULT_PRECISION) -> RealPoint:
    """Image on the Weierstrass model of the point at infinity of the (u, v) cubic.

    ``X0 = 7 + 2a + 3a^2``, ``Y0 = -17 - 15a - 8a^2`` with ``a`` the real cube
    root of 2.
    """
    precision = check_precision(precision)
    alpha = real_cbrt2(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        return RealPoint(7 + 2 * alpha + 3 * alpha ** 2, -17 - 15 * alpha - 8 * alpha ** 2)


def polynomial_point(x_coeffs: Sequence, y_coeffs: Sequence, precision: int = DEFAULT_PRECISION) -> RealPoint:
    """Real point whose coordinates are polynomials in the real cube root of 2."""
    alpha = real_cbrt2(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        x = mpmath.fsum(mpmath.mpf(c) * alpha ** k for k, c in enumerate(x_coeffs))
        y = mpmath.fsum(mpmath.mpf(c) * alpha ** k for k, c in enumerate(y_coeffs))
        return RealPoint(x, y)


@dataclass(frozen=True)
class LinearFormContext:
    """Period and elliptic logarithms entering ``L = u0 - m0 w - sum m_i u_i``."""

    omega: mpmath.mpf
    u0: mpmath.mpf
    logs: tuple
    precision: int

    @property
    def u1(self):
        return self.logs[0]

    @property
    def u2(self):
        return self.logs[1]

    @property
    def u3(self):
        return self.logs[2]

    @classmethod
    def build(cls, E: Curve, basis: Sequence[CurvePoint], base_point=None,
              precision: int = DEFAULT_PRECISION) -> "LinearFormContext":
        precision = check_precision(precision)
        if base_point is None:
            base_point = q0_point(precision)
        omega = real_period(E, precision)
        u0 = elliptic_log(E, base_point, precision, omega)
        logs = tuple(elliptic_log(E, P, precision, omega) for P in basis)
        return cls(omega, u0, logs, precision)

    def linear_form(self, m0: int, *ms: int):
        with mpmath.workdps(self.precision + GUARD_DIGITS):
            value = self.u0 - m0 * self.omega
            for m, u in zip(ms, self.logs):
                value -= m * u
            return value


def linear_form(ctx: LinearFormContext, m0: int, m1: int, m2: int, m3: int):
    return ctx.linear_form(m0, m1, m2, m3)


def decompose(ctx: LinearFormContext, E: Curve, basis: Sequence[CurvePoint],
              P: CurvePoint, max_coeff: int = 12) -> tuple[int, ...]:
    """Coefficients ``(m0, m1, ..., mr)`` with ``P = sum m_i P_i`` and
    ``elliptic_log(P) = sum m_i u_i + m0 omega``.

    The ``m_i`` are located by a search on elliptic logarithms (candidates
    are confirmed with exact group arithmetic).
    """
    import itertools

    target = elliptic_log(E, P, ctx.precision, ctx.omega)
    with mpmath.workdps(ctx.precision + GUARD_DIGITS):
        tol = mpmath.mpf(10) ** (-ctx.precision // 2)
        rng = range(-max_coeff, max_coeff + 1)
        candidates = []
        for ms in itertools.product(rng, repeat=len(basis)):
            s = mpmath.fsum(m * u for m, u in zip(ms, ctx.logs))
            m0 = mpmath.nint((target - s) / ctx.omega)
            if abs(target - s - m0 * ctx.omega) < tol:
                candidates.append((sum(abs(m) for m in ms), int(m0), ms))
        for _, m0, ms in sorted(candidates):
            if E.lincomb(ms, basis) == P:
                return (m0, *ms)
    raise ValueError(f"{P} is not a combination with coefficients up to {max_coeff}")


def u_of_v(v, precision: int = 30):
    """The increasing real branch ``u(v)`` of ``2u^3 - 10u^2 + 8u = v^3 - 8v^2 + 12v``."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        v = mpmath.mpf(v)
        rhs = v ** 3 - 8 * v ** 2 + 12 * v
        g = lambda u: 2 * u ** 3 - 10 * u ** 2 + 8 * u - rhs
        dg = lambda u: 6 * u ** 2 - 20 * u + 8
        alpha = mpmath.cbrt(2)
        u = (v - (8 - 5 * alpha) / 3) / alpha
        eps = mpmath.mpf(10) ** (-(precision + GUARD_DIGITS // 2))
        for _ in range(200):
            step = g(u) / dg(u)
            u -= step
            if abs(step) <= eps * abs(u):
                return u
        raise ConvergenceError(f"Newton iteration for u({v}) did not converge")


def tail_integral(v, precision: int = 30, tol_digits: int = 15):
    """``integral_v^inf dv / (6u^2 - 20u + 8)`` along the increasing branch.

    Computed with the substitution ``t = 1/v`` so that the integration
    interval is finite.
    """
    with mpmath.workdps(precision + GUARD_DIGITS):
        v = mpmath.mpf(v)

        def integrand(t):
            if t == 0:
                # u ~ v / alpha at infinity: 6u^2 ~ 6 v^2 / alpha^2
                return mpmath.cbrt(2) ** 2 / 6
            w = 1 / t
            u = u_of_v(w, precision)
            return 1 / ((6 * u * u - 20 * u + 8) * t * t)

        value, err = mpmath.quad(integrand, [0, 1 / v], error=True)
        if err > mpmath.mpf(10) ** (-tol_digits):
            raise ConvergenceError(f"quadrature error estimate {err}")
        return value


def verify_integral_identity(ctx: LinearFormContext, E: Curve, basis, P: CurvePoint,
                             uv: tuple[int, int], precision: int = 30):
    """Residual ``| 4 * tail_integral(v) - |L(P)| |`` for an integral solution.

    ``L(P)`` is evaluated from the decomposition of ``P`` on ``basis``.
    Returns ``(residual, |L(P)|)``.
    """
    u, v = uv
    if v < 30:
        raise ValueError("identity is only claimed for v >= 30")
    m0, *ms = decompose(ctx, E, basis, P)
    L = abs(ctx.linear_form(m0, *ms))
    with mpmath.workdps(precision + GUARD_DIGITS):
        integral = 4 * tail_integral(v, precision)
        return abs(integral - L), L
