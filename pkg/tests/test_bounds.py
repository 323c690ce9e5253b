import mpmath
import pytest
from hypothesis import given, strategies as st

from balancing.bounds import (
    BoundConstants,
    derive_upper_constants,
    initial_bound,
    log_lower_bound,
    log_upper_bound,
    round_bound,
    verify_height_log_coeff,
)

# frozen integer crossings for the two slope conventions (120 digits)
M0_PUBLISHED = 139390204936302102177394084192646410100679397723373553569429661993290600653996432299214
M0_CONSISTENT = 197336349190937825656736548874156880449393952563816416107053254920660370620927763523435


def test_upper_constants(heights):
    c1 = heights[1]
    A, B = derive_upper_constants(c1, "7.846685", "3.044523")
    with mpmath.workdps(30):
        assert abs(A - (mpmath.log(mpmath.mpf(4) / 3) + mpmath.mpf("3.044523") + mpmath.mpf("7.846685"))) < 1e-25
        assert abs(A - 11.1789) < 1e-3 and abs(B - 0.251224) < 1e-3
        assert abs(B - 2 * c1) < 1e-25
        A2, B2 = derive_upper_constants(c1, "7.846685", "3.044523", "consistent")
        assert A2 == A and abs(B2 - c1) < 1e-25
    with pytest.raises(ValueError):
        derive_upper_constants(c1, 1, 1, "other")


def test_lower_bound_values(constants):
    k = constants["published"]
    # by hand: -7e160 * (ln 6 + 2.1) * (ln ln 6 + 21.2)^6
    with mpmath.workdps(30):
        hand = -mpmath.mpf("7e160") * (mpmath.log(6) + mpmath.mpf("2.1")) * (mpmath.log(mpmath.log(6)) + mpmath.mpf("21.2")) ** 6
        assert abs(log_lower_bound(2, k) / hand - 1) < 1e-20
        assert abs(log_lower_bound(2, k) / mpmath.mpf("-2.91e169") - 1) < 1e-2
        assert abs(log_lower_bound(mpmath.mpf("1.4e86"), k) / mpmath.mpf("-4.88e171") - 1) < 1e-2
    with pytest.raises(ValueError):
        log_lower_bound(1, k)


def test_upper_bound_value(constants):
    k = constants["published"]
    with mpmath.workdps(130):
        assert abs(log_upper_bound(10, k) - (k.A - 100 * k.B)) < mpmath.mpf(10) ** -100


@given(st.integers(2, 10 ** 6))
def test_lower_bound_monotone(M):
    k = BoundConstants(c1="0.125612")
    assert log_lower_bound(M + 1, k) < log_lower_bound(M, k)


def test_initial_bound(constants):
    for conv, frozen in (("published", M0_PUBLISHED), ("consistent", M0_CONSISTENT)):
        k = constants[conv]
        M0 = initial_bound(k)
        assert M0 == frozen
        assert 7 * 10 ** 85 <= M0 <= 28 * 10 ** 85
        # M0 is the first M where the upper bound falls below the lower one
        with mpmath.workdps(130):
            assert log_upper_bound(M0 - 1, k) - log_lower_bound(M0 - 1, k) >= 0
            assert log_upper_bound(M0, k) - log_lower_bound(M0, k) < 0
    assert round_bound(M0_PUBLISHED) == "1.4e+86"


def test_initial_bound_scales_with_c4(constants):
    k = constants["published"]
    ratio = initial_bound(k.with_(c4="7e161")) / initial_bound(k)
    assert 3.0 < ratio < 3.3


def test_round_bound():
    assert round_bound(10 ** 5) == "1.0e+5"
    assert round_bound(99_950) == "1.0e+5"
    assert round_bound(123) == "1.3e+2"


def test_constants_validation(heights):
    with pytest.raises(ValueError):
        BoundConstants(c1=heights[1], slope_convention="x")
    with pytest.raises(ValueError):
        BoundConstants(c1=-1)
    k = BoundConstants(c1=heights[1])
    with mpmath.workdps(200):
        assert abs(k.c4 / (7 * mpmath.mpf(10) ** 160) - 1) < mpmath.mpf(10) ** -120


def test_height_log_coeff():
    assert verify_height_log_coeff([30, 31, 100, 182, 10 ** 4, 10 ** 9, 10 ** 30])
    # far below e^3.0445 = 21.0 the estimate must fail somewhere
    assert not verify_height_log_coeff([30, 10 ** 6], height_log_coeff="1.0")
    with pytest.raises(ValueError):
        verify_height_log_coeff([29])
