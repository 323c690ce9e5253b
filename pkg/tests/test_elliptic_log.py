import mpmath
import pytest

from balancing.curve import CurvePoint
from balancing.diophantine import uv_to_point
from balancing.elliptic_log import (
    ConvergenceError,
    LinearFormContext,
    decompose,
    elliptic_log,
    elliptic_log_quadrature,
    linear_form,
    polynomial_point,
    q0_point,
    real_period,
    real_period_quadrature,
    tail_integral,
    u_of_v,
    verify_integral_identity,
    zagier_phi,
)

# frozen 120-digit values (doubling algorithm), cross-checked by quadrature below
OMEGA = "5.8329487870064860613381918561027"
U0 = "5.289657954742113637500063129116"
LOGS = ("4.1580746823286142768222153313865", "2.8516051213363652007889686332215",
        "0.62753882476316995521561263540108")


def test_period_frozen(ctx120):
    with mpmath.workdps(40):
        assert abs(ctx120.omega - mpmath.mpf(OMEGA)) < mpmath.mpf(10) ** -30


def test_period_direct_integral(E):
    # oracle written out here: omega = 2 * int_{e1}^inf dx / sqrt(f(x))
    with mpmath.workdps(40):
        e1 = E.real_root(40)
        pts = [e1] + [e1 + mpmath.mpf(2) ** k for k in range(-4, 10)] + [mpmath.inf]
        direct = 2 * mpmath.quad(lambda x: 1 / mpmath.sqrt(E.rhs(x)), pts)
        assert abs(direct - real_period(E, 40)) < mpmath.mpf(10) ** -20


def test_period_agm_vs_quadrature(E):
    with mpmath.workdps(30):
        assert abs(real_period(E, 30) - real_period_quadrature(E, 25)) < mpmath.mpf(10) ** -20


def test_logs_frozen(ctx120):
    with mpmath.workdps(40):
        assert abs(ctx120.u0 - mpmath.mpf(U0)) < mpmath.mpf(10) ** -29
        for u, ref in zip((ctx120.u1, ctx120.u2, ctx120.u3), LOGS):
            assert abs(u - mpmath.mpf(ref)) < mpmath.mpf(10) ** -29


def test_logs_against_quadrature(E, gens, ctx120):
    with mpmath.workdps(30):
        for P, u in zip(gens, ctx120.logs):
            assert abs(elliptic_log_quadrature(E, P, 25) - u) < mpmath.mpf(10) ** -20
        assert abs(elliptic_log_quadrature(E, q0_point(30), 25) - ctx120.u0) < mpmath.mpf(10) ** -20


def test_phi_symmetry_and_additivity(E, gens):
    with mpmath.workdps(70):
        tol = mpmath.mpf(10) ** -55
        for P in gens:
            assert abs(zagier_phi(E, P, 60) + zagier_phi(E, -P, 60) - 1) < tol
            d = (2 * zagier_phi(E, P, 60) - zagier_phi(E, E.double(P), 60)) % 1
            assert min(d, 1 - d) < tol
        s = zagier_phi(E, E.add(gens[0], gens[2]), 60)
        d = (zagier_phi(E, gens[0], 60) + zagier_phi(E, gens[2], 60) - s) % 1
        assert min(d, 1 - d) < tol


def test_upper_half_convention(E, gens):
    # Y > 0 maps into (0, 1/2)
    for P in gens:
        phi = zagier_phi(E, P, 30)
        assert (P.y > 0) == (phi < 0.5)


def test_log_of_infinity(E):
    assert elliptic_log(E, CurvePoint(None, None), 30) == 0


def test_q0_on_curve(E):
    with mpmath.workdps(110):
        Q = q0_point(100)
        assert abs(Q.y ** 2 - E.rhs(Q.x)) < mpmath.mpf(10) ** -95
        assert abs(Q.x - mpmath.mpf("14.2820453")) < 1e-6 and Q.y < 0
        R = polynomial_point((7, 2, 3), (-17, -15, -8), 100)
        assert abs(R.x - Q.x) + abs(R.y - Q.y) < mpmath.mpf(10) ** -100


def test_q0_is_limit_of_uv_map(E):
    # the (u, v) -> (X, Y) map sends points running off to infinity on the cubic to Q0
    with mpmath.workdps(40):
        Q = q0_point(30)
        v = mpmath.mpf(10) ** 12
        u = u_of_v(v, 30)
        w = 2 * u - 3 * v
        X = (-4 * u - 17 * v + 58) / w
        Y = (-146 * u * u - 5 * v * v + 686 * u - 188 * v) / (w * w)
        assert abs(X - Q.x) < 1e-9 and abs(Y - Q.y) < 1e-9


def test_decompose_solution_point(E, gens, ctx120):
    P = uv_to_point((144, 182))
    assert P == CurvePoint.of(14, -47)
    m = decompose(ctx120, E, gens, P)
    assert m == (2, -1, -1, 1)
    assert E.lincomb(m[1:], gens) == P
    L = linear_form(ctx120, *m)
    assert abs(L - mpmath.mpf("0.0059013596")) < 1e-9


def test_decompose_rejects_far_point(E, gens, ctx120):
    with pytest.raises(ValueError):
        decompose(ctx120, E, gens, E.lincomb((13, 0, 0), gens), max_coeff=3)


def test_u_of_v_branch():
    with mpmath.workdps(40):
        for v in (30, 182, 10 ** 6, 10 ** 40):
            u = u_of_v(v, 30)
            v = mpmath.mpf(v)
            rel = abs(2 * u ** 3 - 10 * u ** 2 + 8 * u - (v ** 3 - 8 * v ** 2 + 12 * v)) / v ** 3
            assert rel < mpmath.mpf(10) ** -28
        assert abs(u_of_v(182, 30) - 144) < mpmath.mpf(10) ** -25


def test_tail_integral_asymptotics():
    # integrand ~ alpha^2 / (6 v^2), so v * tail -> alpha^2 / 6
    with mpmath.workdps(30):
        v = 10 ** 8
        assert abs(v * tail_integral(v) - mpmath.cbrt(2) ** 2 / 6) < 1e-7


def test_integral_identity(E, gens, ctx120):
    residual, L = verify_integral_identity(ctx120, E, gens, uv_to_point((144, 182)), (144, 182))
    assert residual < 1e-8
    assert L <= mpmath.mpf(4) / (3 * 182)
    with pytest.raises(ValueError):
        verify_integral_identity(ctx120, E, gens, uv_to_point((9, 12)), (9, 12))


def test_context_linear_form(ctx120):
    with mpmath.workdps(130):
        val = ctx120.linear_form(1, 0, 0, 0)
        assert val == ctx120.u0 - ctx120.omega
    assert isinstance(ctx120, LinearFormContext)


def test_convergence_error_is_arithmetic():
    assert issubclass(ConvergenceError, ArithmeticError)
