import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from balancing.bounds import BoundConstants, initial_bound
from balancing.reduction import (
    DependentVectorsError,
    PrecisionError,
    build_reduction_lattice,
    check_reduction_soundness,
    determinant,
    distance_lower_bound_sq,
    gram_schmidt,
    is_lll_reduced,
    lll_reduce,
    reduce_bound,
    reduce_to_fixpoint,
    solve_rational,
)

# (M_out, log10 C, retries) per step, 450 digits
CHAIN = {
    "published": [(49, 350, 2), (11, 12, 2), (10, 10, 2), (10, 10, 2)],
    "consistent": [(70, 349, 1), (16, 13, 2), (14, 8, 1), (14, 8, 1)],
}


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _certify(rows, delta=Fraction(3, 4)):
    """Size reduction and Lovasz condition, from scratch with Fractions."""
    star, mu = [], []
    for i, b in enumerate(rows):
        v = [Fraction(x) for x in b]
        mu.append([])
        for s in star:
            m = Fraction(_dot(b, s)) / _dot(s, s)
            mu[i].append(m)
            v = [x - m * y for x, y in zip(v, s)]
        star.append(v)
    for i in range(1, len(rows)):
        assert all(abs(m) <= Fraction(1, 2) for m in mu[i])
        lhs = _dot(star[i], star[i])
        assert lhs >= (delta - mu[i][i - 1] ** 2) * _dot(star[i - 1], star[i - 1])


def _random_basis(rng, n, size=50):
    while True:
        B = [[rng.randint(-size, size) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(B).det() != 0:
            return B


@pytest.mark.parametrize("n", [3, 4])
def test_lll_random_lattices(n):
    rng = random.Random(1000 + n)
    for _ in range(100):
        B = _random_basis(rng, n)
        R, U = lll_reduce(B, return_transform=True)
        _certify(R)
        assert is_lll_reduced(R)
        assert abs(sympy.Matrix(U).det()) == 1
        assert (sympy.Matrix(U) * sympy.Matrix(B)).tolist() == R
        assert abs(determinant(R)) == abs(sympy.Matrix(B).det())


def _shortest_brute(B):
    # |c_i| <= |v| * |column i of B^-1| for any lattice vector v = c B
    inv = sympy.Matrix(B).inv()
    bound = min(_dot(b, b) for b in B)
    K = [math.isqrt(int(bound * sum(x * x for x in inv.col(i)))) + 1 for i in range(len(B))]
    best = None
    for c in itertools.product(*(range(-k, k + 1) for k in K)):
        if any(c):
            v = [sum(ci * B[i][j] for i, ci in enumerate(c)) for j in range(len(B))]
            n2 = _dot(v, v)
            best = n2 if best is None else min(best, n2)
    return best


def test_lll_2d_shortest_vector():
    rng = random.Random(7)
    for _ in range(100):
        B = _random_basis(rng, 2, 100)
        lam = _shortest_brute(B)
        # integer norms below 10^5 make this delta equivalent to Gauss reduction
        R = lll_reduce(B, delta=Fraction(99999, 100000))
        assert _dot(R[0], R[0]) == lam
        R = lll_reduce(B)
        assert _dot(R[0], R[0]) <= 2 * lam


def test_lll_dependent_and_bad_delta():
    with pytest.raises(DependentVectorsError):
        lll_reduce([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        lll_reduce([[1, 0], [0, 1]], delta=Fraction(1, 5))
    assert lll_reduce([]) == []


def test_lll_known_example():
    # textbook example: rows (1,1,1), (-1,0,2), (3,5,6)
    R = lll_reduce([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
    assert R == [[0, 1, 0], [1, 0, 1], [-1, 0, 2]]


def test_gram_schmidt_orthogonal():
    B = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    mu, norms = gram_schmidt(B)
    assert math.prod(norms) == sympy.Matrix(B).det() ** 2
    assert mu[1][0] == Fraction(_dot(B[1], B[0]), _dot(B[0], B[0]))
    assert all(mu[i][j] == 0 for i in range(3) for j in range(i, 3))


def test_determinant_and_solve():
    rng = random.Random(3)
    for _ in range(30):
        B = _random_basis(rng, 4, 30)
        assert determinant(B) == sympy.Matrix(B).det()
        t = [rng.randint(-99, 99) for _ in range(4)]
        x = solve_rational(B, t)
        assert [sum(x[i] * B[i][j] for i in range(4)) for j in range(4)] == t


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9), st.lists(st.integers(-40, 40), min_size=3, max_size=3))
def test_distance_bound_against_brute_force(entries, target):
    B = [entries[0:3], entries[3:6], entries[6:9]]
    if sympy.Matrix(B).det() == 0:
        return
    R = lll_reduce(B)
    bound = distance_lower_bound_sq(R, target)
    # brute-force closest vector over a coefficient box that contains it
    x = solve_rational(R, target)
    inv = sympy.Matrix(R).inv()
    K = [math.isqrt(int(bound * sum(v * v for v in inv.col(i)) + 1)) + 2 for i in range(3)]
    best = min(
        _dot(d, d)
        for c in itertools.product(*(range(math.floor(x[i]) - K[i], math.floor(x[i]) + K[i] + 2) for i in range(3)))
        for d in [[sum(ci * R[i][j] for i, ci in enumerate(c)) - target[j] for j in range(3)]]
    )
    assert bound <= best


def test_lattice_shape(ctx450):
    rows, target = build_reduction_lattice(ctx450, 10 ** 20)
    assert len(rows) == 4 and all(len(r) == 4 for r in rows)
    assert rows[0][:3] == [1, 0, 0] and rows[3][:3] == [0, 0, 0]
    assert target[:3] == [0, 0, 0]
    assert abs(rows[3][3] - 583294878700648606134) <= 1
    with pytest.raises(PrecisionError):
        build_reduction_lattice(ctx450, 10 ** 400)


@pytest.mark.parametrize("conv", ["published", "consistent"])
def test_reduction_chain_frozen(ctx450, constants, conv):
    k = constants[conv]
    steps = reduce_to_fixpoint(ctx450, k, initial_bound(k))
    assert [(s.M_out, len(str(s.C)) - 1, s.retries) for s in steps] == CHAIN[conv]
    assert not steps[-1].improved
    assert check_reduction_soundness(ctx450, k, steps[-1].M_out, 200) == []


def test_reduction_step_is_monotone(ctx450, constants):
    k = constants["consistent"]
    for M in (10 ** 30, 10 ** 6, 500, 40):
        step = reduce_bound(ctx450, k, M)
        assert step.M_out <= M


def test_soundness_check_detects_a_planted_hit(ctx450, heights):
    # with a huge A every coefficient vector passes the exponent test
    k = BoundConstants(c1=heights[1], silverman="1e6")
    assert len(check_reduction_soundness(ctx450, k, 2, 3)) > 0
