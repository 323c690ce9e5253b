import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from balancing import BalancingTransformer, IntegralPointSolver, INTEGRAL_PAIRS
from balancing.config import RunConfig


def test_transformer_round_trip():
    X = np.array([[14, 15], [7, 9], [2, 2]])
    tr = BalancingTransformer().fit(X)
    uv = tr.transform(X)
    assert uv.tolist() == [[144, 182], [25, 56], [0, 0]]
    assert tr.inverse_transform(uv).tolist() == X.tolist()


def test_transformer_big_integers():
    x = 10 ** 30
    uv = BalancingTransformer().fit_transform([(x, x + 1)])
    assert uv[0, 0] == (x - 2) ** 2


def test_transformer_validation():
    tr = BalancingTransformer()
    with pytest.raises(ValueError):
        tr.fit([[1, 2, 3]])
    with pytest.raises(ValueError):
        tr.fit([[1.5, 2]])
    with pytest.raises(ValueError):
        tr.fit(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        tr.inverse_transform([[3, 2]])
    with pytest.raises(ValueError):
        tr.fit(5)


def test_params_and_clone():
    est = IntegralPointSolver(precision=60, max_bound=4)
    params = est.get_params()
    assert params["precision"] == 60 and params["max_bound"] == 4
    assert clone(est).get_params() == params
    est.set_params(threads=2)
    assert est.threads == 2


def test_from_config():
    est = IntegralPointSolver.from_config(RunConfig(precision=77))
    assert est.precision == 77


def test_not_fitted():
    with pytest.raises(NotFittedError):
        IntegralPointSolver().predict([[0, 0]])


def test_invalid_params():
    with pytest.raises(ValueError):
        IntegralPointSolver(precision=5).fit_heights()
    with pytest.raises(ValueError):
        IntegralPointSolver(generators=(("3", "-2"),)).fit_heights()


def test_fit_with_small_bound(caplog):
    est = IntegralPointSolver(max_bound=3).fit()
    assert est.reduced_bound_ == 14
    assert not est.complete_
    assert "incomplete" in caplog.text
    assert set(est.timings_) == {"logs", "heights", "initial_bound", "reduction", "enumeration"}
    assert est.predict([[144, 182], [145, 182]]).tolist() == [True, False]
    assert est.solutions_ <= INTEGRAL_PAIRS
