"""Lower and upper bounds for the linear form, kept in the log domain.

The lower bound has the shape ``exp(-c4 (log 3M + c5)(log log 3M + c6)^6)``
and reaches magnitudes near ``10^-(10^171)``, so only exponents are ever
handled. All logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import mpmath

from .arithmetic import DEFAULT_PRECISION, GUARD_DIGITS

SLOPE_CONVENTIONS = ("published", "consistent")


@dataclass(frozen=True)
class BoundConstants:
    """Constants of the bound chain.

    ``slope_convention="published"`` uses ``B = 2 c1``; ``"consistent"`` uses
    ``B = c1``, which is what the chain gives when ``c1`` and the
    height-difference constant refer to the same height normalization.
    """

    c1: mpmath.mpf
    c4: mpmath.mpf = "7e160"
    c5: mpmath.mpf = "2.1"
    c6: mpmath.mpf = "21.2"
    silverman: mpmath.mpf = "7.846685"
    height_log_coeff: mpmath.mpf = "3.044523"
    slope_convention: str = "published"

    def __post_init__(self):
        if self.slope_convention not in SLOPE_CONVENTIONS:
            raise ValueError(f"unknown slope convention {self.slope_convention!r}")
        # decimal strings are parsed at working precision, not at 53 bits
        with mpmath.workdps(DEFAULT_PRECISION + GUARD_DIGITS):
            for name in ("c1", "c4", "c5", "c6", "silverman", "height_log_coeff"):
                object.__setattr__(self, name, mpmath.mpf(getattr(self, name)))
        if self.c1 <= 0 or self.c4 <= 0:
            raise ValueError("c1 and c4 must be positive")

    @property
    def A(self):
        return derive_upper_constants(self.c1, self.silverman, self.height_log_coeff,
                                      self.slope_convention)[0]

    @property
    def B(self):
        return derive_upper_constants(self.c1, self.silverman, self.height_log_coeff,
                                      self.slope_convention)[1]

    def with_(self, **changes) -> "BoundConstants":
        return replace(self, **changes)


def derive_upper_constants(c1, silverman, height_log_coeff, slope_convention="published",
                           precision: int = DEFAULT_PRECISION):
    """``(A, B)`` with ``|L| < exp(A - B M^2)``.

    From ``|L| <= 4/(3v)``, ``log v > h(P) - height_log_coeff`` and
    ``h(P) > (height-difference) - silverman`` with the canonical height
    bounded below by ``c1 M^2``.
    """
    if slope_convention not in SLOPE_CONVENTIONS:
        raise ValueError(f"unknown slope convention {slope_convention!r}")
    with mpmath.workdps(precision + GUARD_DIGITS):
        c1, silverman, height_log_coeff = (mpmath.mpf(c) for c in (c1, silverman, height_log_coeff))
        if min(c1, silverman, height_log_coeff) <= 0:
            raise ValueError("constants must be positive")
        A = mpmath.log(mpmath.mpf(4) / 3) + height_log_coeff + silverman
        B = 2 * c1 if slope_convention == "published" else c1
        return A, B


def log_lower_bound(M, k: BoundConstants, precision: int = DEFAULT_PRECISION):
    """Exponent ``-c4 (ln 3M + c5)(ln ln 3M + c6)^6`` of the lower bound."""
    if M < 2:
        raise ValueError("the lower bound needs M >= 2")
    with mpmath.workdps(precision + GUARD_DIGITS):
        ell = mpmath.log(3 * mpmath.mpf(M))
        return -k.c4 * (ell + k.c5) * (mpmath.log(ell) + k.c6) ** 6


def log_upper_bound(M, k: BoundConstants, precision: int = DEFAULT_PRECISION):
    """Exponent ``A - B M^2`` of the upper bound."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        M = mpmath.mpf(M)
        return k.A - k.B * M * M


def _log10_crossing(k: BoundConstants, precision: int) -> mpmath.mpf:
    """``log10`` of the crossing point, by bisection on ``log10 M``."""

    def contradiction(t):
        M = mpmath.mpf(10) ** t
        return log_upper_bound(M, k, precision) < log_lower_bound(M, k, precision)

    lo, hi = mpmath.mpf(1), mpmath.mpf(200)
    if not contradiction(hi):
        raise ArithmeticError("no crossing below 10^200; check the bound constants")
    if contradiction(lo):
        return lo
    for _ in range(80):
        mid = (lo + hi) / 2
        if contradiction(mid):
            hi = mid
        else:
            lo = mid
    return hi


def initial_bound(k: BoundConstants, precision: int = DEFAULT_PRECISION) -> int:
    """Smallest integer M with ``log_upper_bound(M) < log_lower_bound(M)``.

    The difference ``lower - upper`` is increasing in M past the crossing, so
    the inequality then holds for every larger M as well.
    """
    with mpmath.workdps(precision + GUARD_DIGITS):
        t = _log10_crossing(k, precision)
        hi = int(mpmath.ceil(mpmath.mpf(10) ** t)) + 1

        def contradiction(M):
            return log_upper_bound(M, k, precision) < log_lower_bound(M, k, precision)

        lo = max(2, int(mpmath.floor(mpmath.mpf(10) ** (t - mpmath.mpf(10) ** -6))))
        while contradiction(lo) and lo > 2:
            lo //= 2
        while not contradiction(hi):
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if contradiction(mid):
                hi = mid
            else:
                lo = mid
        return hi


def round_bound(M: int, digits: int = 2) -> str:
    """Human style ``1.4e+86`` rounding (upward) of a large bound."""
    with mpmath.workdps(30):
        e = int(mpmath.floor(mpmath.log10(M)))
        scale = mpmath.mpf(10) ** (e - digits + 1)
        mant = int(mpmath.ceil(mpmath.mpf(M) / scale))
        if mant >= 10 ** digits:
            mant //= 10
            e += 1
        s = str(mant)
        return f"{s[0]}.{s[1:]}e+{e}" if len(s) > 1 else f"{s}e+{e}"


def verify_height_log_coeff(v_samples, height_log_coeff="3.044523", precision: int = 30) -> bool:
    """Check ``4u + 17v - 58 < e^coeff * v`` and ``6u^2 - 20u + 8 > 3v^2``.

    ``u = u(v)`` is taken on the increasing real branch.
    """
    from .elliptic_log import u_of_v

    with mpmath.workdps(precision + GUARD_DIGITS):
        factor = mpmath.exp(mpmath.mpf(height_log_coeff))
        for v in v_samples:
            if v < 30:
                raise ValueError("the estimate is only claimed for v >= 30")
            u = u_of_v(v, precision)
            v = mpmath.mpf(v)
            if not 4 * u + 17 * v - 58 < factor * v:
                return False
            if not 6 * u * u - 20 * u + 8 > 3 * v * v:
                return False
        return True
