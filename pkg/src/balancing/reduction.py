"""Exact integral LLL and the inhomogeneous bound-reduction step.

``lll_reduce`` is the all-integer variant of LLL: Gram-Schmidt data are kept
as the integers ``d_i`` (leading Gram minors) and ``lambda_ij = d_j mu_ij``,
so no rational or floating arithmetic happens inside the loop.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .arithmetic import GUARD_DIGITS, REDUCTION_PRECISION
from .bounds import BoundConstants, log_upper_bound
from .elliptic_log import LinearFormContext

logger = logging.getLogger(__name__)

Matrix = list[list[int]]


class DependentVectorsError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """Working precision is too low for the requested operation."""


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4),
               return_transform: bool = False):
    """LLL-reduce the rows of an integer matrix.

    Returns the reduced rows, and with ``return_transform`` also the
    unimodular matrix ``U`` with ``reduced = U * basis``.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    p, q = delta.numerator, delta.denominator
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return (b, H) if return_transform else b

    # 1-based bookkeeping: d[0] = 1, d[i] = Gram determinant of b_1..b_i
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            r = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - r * y for x, y in zip(b[k], b[l])]
            H[k] = [x - r * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= r * d[l + 1]
            for i in range(l):
                lam[k][i] -= r * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        l = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + l * l) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - l * t) // d[k]
            lam[i][k - 1] = (B * t + l * lam[i][k]) // d[k + 1]
        d[k] = B

    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise DependentVectorsError("zero vector in basis")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
            if d[k + 1] == 0:
                raise DependentVectorsError("basis vectors are linearly dependent")
        red(k, k - 1)
        if q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return (b, H) if return_transform else b


def gram_schmidt(basis: Sequence[Sequence[int]]):
    """Exact Gram-Schmidt: returns ``(mu, norms)`` with ``norms[i] = |b_i*|^2``."""
    n = len(basis)
    star = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = []
    for i, row in enumerate(basis):
        v = [Fraction(x) for x in row]
        for j in range(i):
            mu[i][j] = _dot(row, star[j]) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
    return mu, norms


def is_lll_reduced(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> bool:
    """Check size reduction and the Lovasz condition from exact GS data."""
    mu, norms = gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def solve_rational(rows: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction]:
    """Coordinates ``s`` with ``target = sum s_i rows[i]`` (exact)."""
    n = len(rows)
    # transpose system: columns are the basis rows
    A = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def distance_lower_bound_sq(basis: Sequence[Sequence[int]], target: Sequence[int]) -> Fraction:
    """Exact lower bound for ``dist(target, lattice)^2``.

    Writing ``target = sum s_i b_i``, any lattice vector differs from the
    target by ``sum (z_i - s_i) b_i``; its component along ``b_i*`` for the
    largest index with ``z_i != s_i`` has length ``|z_i - s_i| |b_i*|``.
    Walking down from the last index gives the bound.
    """
    s = solve_rational(basis, target)
    _, norms = gram_schmidt(basis)
    best = None
    for i in reversed(range(len(basis))):
        frac = s[i] - math.floor(s[i])
        if frac == 0:
            # z_i = s_i is possible; z_i != s_i costs at least |b_i*|
            best = norms[i] if best is None else min(best, norms[i])
            continue
        dist = min(frac, 1 - frac)
        cand = dist * dist * norms[i]
        return cand if best is None else min(best, cand)
    return Fraction(0)


@dataclass(frozen=True)
class ReductionStep:
    C: int
    M_in: int
    M_out: int
    shortest_norm: mpmath.mpf
    distance_sq_bound: Fraction
    retries: int = 0

    @property
    def improved(self) -> bool:
        return self.M_out < self.M_in


def _round_scaled(x, C: int, precision: int) -> int:
    with mpmath.workdps(precision + GUARD_DIGITS):
        y = x * C
        r = int(mpmath.nint(y))
        slack = mpmath.mpf(10) ** (len(str(C)) - precision + 5)
        if abs(abs(y - r) - mpmath.mpf(1) / 2) < slack:
            raise PrecisionError("cannot round C*x unambiguously; raise precision")
        return r


def build_reduction_lattice(ctx: LinearFormContext, C: int):
    """Lattice rows ``(e_i | round(C u_i))`` and ``(0 | round(C omega))``; target
    ``(0, ..., 0, round(C u0))``."""
    digits = len(str(C))
    if ctx.precision < digits + 60:
        raise PrecisionError(f"precision {ctx.precision} too low for C with {digits} digits")
    r = len(ctx.logs)
    rows = []
    for i, u in enumerate(ctx.logs):
        row = [0] * (r + 1)
        row[i] = 1
        row[r] = _round_scaled(u, C, ctx.precision)
        rows.append(row)
    rows.append([0] * r + [_round_scaled(ctx.omega, C, ctx.precision)])
    target = [0] * r + [_round_scaled(ctx.u0, C, ctx.precision)]
    return rows, target


def reduce_bound(ctx: LinearFormContext, k: BoundConstants, M_in: int,
                 max_retries: int = 20, initial_C: Optional[int] = None) -> ReductionStep:
    """One inhomogeneous reduction step.

    For ``M <= M_in`` and ``|m0| <= 3M + 1`` the lattice point given by the
    ``m_i`` differs from the target by ``(m_1, .., m_r, -C L + e)`` with
    ``|e| <= 3 M_in + 1``. So a lower bound ``l`` on the target distance gives
    ``C |L| >= sqrt(l^2 - r M_in^2) - (3 M_in + 1) = T``, and the upper bound
    ``|L| < exp(A - B M^2)`` turns into ``M^2 < (A + ln C - ln T) / B``.
    """
    M_in = int(M_in)
    r = len(ctx.logs)
    C = initial_C if initial_C is not None else M_in ** 4 * 100
    err = 3 * M_in + 1
    for attempt in range(max_retries + 1):
        rows, target = build_reduction_lattice(ctx, C)
        reduced = lll_reduce(rows)
        l_sq = distance_lower_bound_sq(reduced, target)
        excess = l_sq - r * M_in * M_in
        if excess > err * err:
            with mpmath.workdps(ctx.precision + GUARD_DIGITS):
                T = mpmath.sqrt(mpmath.mpf(excess.numerator) / excess.denominator) - err
                m_sq = (k.A + mpmath.log(C) - mpmath.log(T)) / k.B
                M_out = int(mpmath.floor(mpmath.sqrt(m_sq))) if m_sq > 0 else 0
                shortest = mpmath.sqrt(_dot(reduced[0], reduced[0]))
            logger.debug("C=10^%d  M_in=%d -> M_out=%d", len(str(C)) - 1, M_in, M_out)
            return ReductionStep(C, M_in, min(M_out, M_in), shortest, l_sq, attempt)
        C *= 100
    raise PrecisionError(f"distance stayed too small after {max_retries} retries (M_in={M_in})")


def reduce_to_fixpoint(ctx: LinearFormContext, k: BoundConstants, M0: int,
                       max_iterations: int = 10) -> list[ReductionStep]:
    """Repeat ``reduce_bound`` until the bound stops decreasing."""
    steps = []
    M = int(M0)
    for _ in range(max_iterations):
        step = reduce_bound(ctx, k, M)
        steps.append(step)
        if not step.improved:
            break
        M = step.M_out
    return steps


def check_reduction_soundness(ctx: LinearFormContext, k: BoundConstants, M_final: int,
                              M_cap: int) -> list[tuple[int, ...]]:
    """Brute-force check of a reduced bound.

    Returns every ``(m0, m1, .., mr)`` with ``M_final < max|m_i| <= M_cap``
    and ``|L| < exp(A - B M^2)``; a sound reduction yields an empty list.
    For each ``(m_1, .., m_r)`` only the best ``m0`` matters. Candidates are
    screened in double precision and confirmed at full precision.
    """
    import numpy as np

    r = len(ctx.logs)
    logs = np.array([float(u) for u in ctx.logs])
    omega, u0 = float(ctx.omega), float(ctx.u0)
    rng = np.arange(-M_cap, M_cap + 1)
    grids = np.meshgrid(*([rng] * (r - 1)), indexing="ij")
    rest = sum(g.astype(float) * u for g, u in zip(grids, logs[1:]))
    rest_M = np.maximum.reduce([np.abs(g) for g in grids]) if r > 1 else np.zeros(())
    hits = []
    for m1 in rng:
        s = u0 - m1 * logs[0] - rest
        m0 = np.rint(s / omega)
        L = np.abs(s - m0 * omega)
        M = np.maximum(rest_M, abs(m1))
        with np.errstate(under="ignore"):
            threshold = np.exp(np.minimum(float(k.A) - float(k.B) * M.astype(float) ** 2, 0.0))
        # double-precision error of L is far below 1e-9 here
        suspect = (M > M_final) & (L < threshold + 1e-9)
        for idx in zip(*np.nonzero(suspect)):
            ms = (int(m1),) + tuple(int(g[idx]) for g in grids)
            Mv = max(abs(m) for m in ms)
            best_m0 = int(m0[idx])
            with mpmath.workdps(ctx.precision + GUARD_DIGITS):
                for cand in (best_m0 - 1, best_m0, best_m0 + 1):
                    val = abs(ctx.linear_form(cand, *ms))
                    if abs(cand) <= 3 * Mv + 1 and val < mpmath.exp(log_upper_bound(Mv, k)):
                        hits.append((cand, *ms))
    return hits
