"""The balancing equation and its transforms.

    C(1,5) + ... + C(x-1,5) = C(x+1,5) + ... + C(y,5),      y > x > 5

By the hockey-stick identity this is ``C(x,6) + C(x+1,6) = C(y+1,6)``, and
with ``u = (x-2)^2``, ``v = (y-1)(y-2)`` it becomes the cubic

    2u^3 - 10u^2 + 8u = v^3 - 8v^2 + 12v,

which is birational to ``Y^2 = X^3 - X^2 - 30X + 81``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from math import comb
from typing import Iterable, NamedTuple, Sequence

from gmpy2 import mpq

from .arithmetic import (
    integer_cubic_roots,
    is_perfect_square,
    rational_sqrt,
    solve_consecutive_product,
)
from .curve import BALANCING_CURVE, BALANCING_GENERATORS, Curve, CurvePoint

logger = logging.getLogger(__name__)


class UVPair(NamedTuple):
    u: int
    v: int


class XYSolution(NamedTuple):
    x: int
    y: int


class DegenerateMapError(ValueError):
    """The (u, v) pair lies on the line 2u = 3v, where the curve map is undefined."""


INTEGRAL_PAIRS = frozenset(UVPair(u, v) for u, v in [
    (0, 0), (0, 2), (0, 6),
    (1, 0), (1, 2), (1, 6),
    (4, 0), (4, 2), (4, 6),
    (9, 12), (144, 182), (-56, -70),
])


def _check_domain(x: int, y: int):
    if not y > x > 5:
        raise ValueError(f"need y > x > 5, got x={x}, y={y}")


def balance_sides(x: int, y: int) -> tuple[int, int]:
    """Both sides of the balancing equation as exact binomial sums."""
    _check_domain(x, y)
    lhs = sum(comb(i, 5) for i in range(1, x))
    rhs = sum(comb(i, 5) for i in range(x + 1, y + 1))
    return lhs, rhs


def check_hockey_stick(x: int, y: int) -> bool:
    _check_domain(x, y)
    return comb(x, 6) + comb(x + 1, 6) == comb(y + 1, 6)


def to_uv(x: int, y: int) -> UVPair:
    return UVPair((x - 2) ** 2, (y - 1) * (y - 2))


def cubic_sides(u: int, v: int) -> tuple[int, int]:
    return 2 * u ** 3 - 10 * u ** 2 + 8 * u, v ** 3 - 8 * v ** 2 + 12 * v


def check_cubic(p: UVPair) -> bool:
    lhs, rhs = cubic_sides(*p)
    return lhs == rhs


def uv_to_point(p) -> CurvePoint:
    u, v = mpq(p[0]), mpq(p[1])
    w = 2 * u - 3 * v
    if w == 0:
        raise DegenerateMapError(f"2u - 3v = 0 at {tuple(p)}")
    X = (-4 * u - 17 * v + 58) / w
    Y = (-146 * u * u - 5 * v * v + 686 * u - 188 * v) / (w * w)
    return CurvePoint(X, Y)


def _rational_quadratic_roots(a, b, c) -> list:
    if a == 0:
        return [] if b == 0 else [-c / b]
    root = rational_sqrt(b * b - 4 * a * c)
    if root is None:
        return []
    return sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)})


def point_to_uv(P: CurvePoint, integral_only: bool = False) -> list[tuple]:
    """Rational (u, v) pairs mapping to P.

    The X-equation is the line ``(2X + 4) u + (17 - 3X) v = 58`` through the
    base point ``(87/23, 58/23)``; substituting it into the Y-equation leaves
    a quadratic. Every returned pair round-trips through ``uv_to_point``.
    """
    if P.is_infinity:
        raise ValueError("point at infinity has no (u, v) preimage")
    X, Y = P.x, P.y
    p, q = 2 * X + 4, 17 - 3 * X
    # parametrize the line by the free coordinate t: u = a0 + a1 t, v = b0 + b1 t
    if p != 0:
        a0, a1, b0, b1 = 58 / p, -q / p, mpq(0), mpq(1)
    else:
        a0, a1, b0, b1 = mpq(0), mpq(1), 58 / q, mpq(0)
    g0, g1 = 2 * a0 - 3 * b0, 2 * a1 - 3 * b1
    # Y (g0 + g1 t)^2 + 146 u^2 + 5 v^2 - 686 u + 188 v = 0
    A = Y * g1 * g1 + 146 * a1 * a1 + 5 * b1 * b1
    B = 2 * Y * g0 * g1 + 292 * a0 * a1 + 10 * b0 * b1 - 686 * a1 + 188 * b1
    C = Y * g0 * g0 + 146 * a0 * a0 + 5 * b0 * b0 - 686 * a0 + 188 * b0
    out = []
    for t in _rational_quadratic_roots(A, B, C):
        u, v = a0 + a1 * t, b0 + b1 * t
        if 2 * u - 3 * v == 0:
            continue
        if integral_only and (u.denominator != 1 or v.denominator != 1):
            continue
        if uv_to_point((u, v)) == P:
            out.append((u, v))
    return out


def integral_preimages(P: CurvePoint) -> list[UVPair]:
    out = []
    for u, v in point_to_uv(P, integral_only=True):
        pair = UVPair(int(u), int(v))
        if check_cubic(pair):
            out.append(pair)
    return out


def degenerate_line_solutions() -> set[UVPair]:
    """Solutions with ``2u = 3v``.

    With ``u = 3v/2`` the cubic becomes ``v^2 (23 v - 58) = 0`` after
    clearing 4; ``v = 58/23`` is the base point of the pencil, leaving (0, 0).
    """
    sols = set()
    for v in integer_cubic_roots(23, -58, 0, 0):
        if (3 * v) % 2 == 0:
            pair = UVPair(3 * v // 2, v)
            if check_cubic(pair):
                sols.add(pair)
    return sols


def _scan_slice(args) -> set[UVPair]:
    E, basis, M, first = args
    found = set()
    rank = len(basis)
    # walk the last coordinate incrementally from -M (or 0/1 for leading zeros)
    for head in _heads(first, M, rank):
        leading = not any(head)
        start = 1 if leading else -M
        P = E.lincomb(head + (start,), basis)
        for m_last in range(start, M + 1):
            for Q in (P, -P):
                if not Q.is_infinity:
                    found.update(integral_preimages(Q))
            P = E.add(P, basis[-1])
    return found


def _heads(first: int, M: int, rank: int):
    """Prefixes (all but the last coordinate) starting with ``first``."""
    if rank == 1:
        yield ()
        return
    import itertools

    inner = range(-M, M + 1)
    for rest in itertools.product(inner, repeat=rank - 2):
        head = (first,) + rest
        if first == 0 and rest and any(rest):
            lead = next(m for m in rest if m)
            if lead < 0:
                continue
        yield head


def enumerate_solutions(E: Curve = BALANCING_CURVE, basis: Sequence[CurvePoint] = BALANCING_GENERATORS,
                        M: int = 11, threads: int = 1) -> set[UVPair]:
    """All integral solutions coming from ``sum m_i P_i`` with ``max |m_i| <= M``.

    Each +- pair of coefficient vectors is visited once and both ``P`` and
    ``-P`` are pulled back. The degenerate line ``2u = 3v`` is added
    separately.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    firsts = range(0, M + 1) if len(basis) > 1 else [0]
    jobs = [(E, basis, M, f) for f in firsts]
    found = set()
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_scan_slice, jobs):
                found |= part
    else:
        for job in jobs:
            found |= _scan_slice(job)
    found |= degenerate_line_solutions()
    return found


def extract_xy(solutions: Iterable) -> set[XYSolution]:
    """Solutions of the balancing equation hidden in a set of (u, v) pairs."""
    out = set()
    for u, v in solutions:
        r = is_perfect_square(u)
        y = solve_consecutive_product(v)
        if r is None or y is None:
            continue
        x = r + 2
        if y > x > 5:
            lhs, rhs = balance_sides(x, y)
            if lhs == rhs:
                out.add(XYSolution(x, y))
    return out


def _oracle_cubic(v: int) -> list[int]:
    lhs_target = v ** 3 - 8 * v ** 2 + 12 * v
    return integer_cubic_roots(2, -10, 8, -lhs_target)


def brute_force_oracle(v_min: int, v_max: int, method: str = "sweep") -> set[UVPair]:
    """Integral solutions with ``v_min <= v <= v_max``, without any curve machinery.

    ``method="cubic"`` solves one cubic per v with ``integer_cubic_roots``.
    ``method="sweep"`` gives the same answer faster: outside ``-3 <= v <= 7``
    the right side is monotone in v and has a single real root u on a branch
    where the left side is monotone, so a pointer moving with v finds it.
    """
    if v_min > v_max:
        raise ValueError("empty range")
    if method == "cubic":
        return {UVPair(u, v) for v in range(v_min, v_max + 1) for u in _oracle_cubic(v)}
    if method != "sweep":
        raise ValueError(f"unknown method {method!r}")

    found = set()
    lo_win, hi_win = -3, 7
    for v in range(max(v_min, lo_win), min(v_max, hi_win) + 1):
        found.update(UVPair(u, v) for u in _oracle_cubic(v))

    g = lambda u: 2 * u ** 3 - 10 * u ** 2 + 8 * u
    # v > 7: rhs >= 35 > max of g on u <= 4, so the root is on u > 4
    if v_max > hi_win:
        start = max(v_min, hi_win + 1)
        u = max(4, _branch_start(start))
        for v in range(start, v_max + 1):
            target = v * (v - 2) * (v - 6)
            while g(u) < target:
                u += 1
            if g(u) == target:
                found.add(UVPair(u, v))
    # v < -3: rhs <= -135 < min of g on u >= 0, so the root is on u < 0
    if v_min < lo_win:
        start = min(v_max, lo_win - 1)
        u = 0
        for v in range(start, v_min - 1, -1):
            target = v * (v - 2) * (v - 6)
            while g(u) > target:
                u -= 1
            if g(u) == target:
                found.add(UVPair(u, v))
    return found


def _branch_start(v: int) -> int:
    # u(v) > v/2 on the increasing branch once v >= 8
    return max(4, v // 2)
