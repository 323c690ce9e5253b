"""scikit-learn style front end for the whole pipeline.

``IntegralPointSolver.fit()`` runs period and logarithms, heights, the
initial bound, lattice reduction and enumeration, and stores each result as
a fitted attribute. ``BalancingTransformer`` maps ``(x, y)`` rows to the
``(u, v)`` coordinates of the cubic and back.
"""

from __future__ import annotations

import logging
import time

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_integer_pairs, check_positive_int
from .arithmetic import is_perfect_square, solve_consecutive_product
from .bounds import BoundConstants, initial_bound
from .config import RunConfig
from .curve import Curve, CurvePoint, least_eigenvalue, pairing_matrix
from .diophantine import enumerate_solutions, extract_xy, to_uv
from .elliptic_log import LinearFormContext, polynomial_point
from .reduction import reduce_to_fixpoint

logger = logging.getLogger(__name__)


class BalancingTransformer(TransformerMixin, BaseEstimator):
    """``(x, y) -> (u, v) = ((x - 2)^2, (y - 1)(y - 2))``.

    Stateless; ``fit`` only validates. ``inverse_transform`` returns the
    preimage with ``x >= 2`` and ``y >= 2``, or raises if there is none.
    """

    def fit(self, X, y=None):
        check_integer_pairs(X)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        pairs = check_integer_pairs(X)
        return np.array([to_uv(a, b) for a, b in pairs], dtype=object).reshape(-1, 2)

    def inverse_transform(self, X):
        out = []
        for u, v in check_integer_pairs(X):
            r = is_perfect_square(u)
            y = solve_consecutive_product(v)
            if r is None or y is None:
                raise ValueError(f"({u}, {v}) has no integral (x, y) preimage")
            out.append((r + 2, y))
        return np.array(out, dtype=object).reshape(-1, 2)


class IntegralPointSolver(BaseEstimator):
    """Find every integral solution of the balancing cubic.

    Parameters mirror ``RunConfig``. After ``fit`` the estimator exposes
    ``omega_``, ``u0_``, ``elliptic_logs_``, ``pairing_matrix_``, ``c1_``,
    ``constants_``, ``initial_bound_``, ``reduction_steps_``,
    ``reduced_bound_``, ``search_bound_``, ``solutions_`` (the (u, v) set),
    ``xy_solutions_`` and ``timings_``.
    """

    def __init__(self, curve=(-1, -30, 81), generators=(("3", "-3"), ("-6", "3"), ("11", "31")),
                 base_x=(7, 2, 3), base_y=(-17, -15, -8), c4="7e160", c5="2.1", c6="21.2",
                 silverman="7.846685", height_log_coeff="3.044523",
                 slope_convention="consistent", precision=120, reduction_precision=450,
                 max_bound=None, threads=1):
        self.curve = curve
        self.generators = generators
        self.base_x = base_x
        self.base_y = base_y
        self.c4 = c4
        self.c5 = c5
        self.c6 = c6
        self.silverman = silverman
        self.height_log_coeff = height_log_coeff
        self.slope_convention = slope_convention
        self.precision = precision
        self.reduction_precision = reduction_precision
        self.max_bound = max_bound
        self.threads = threads

    @classmethod
    def from_config(cls, cfg: RunConfig) -> "IntegralPointSolver":
        names = cls._get_param_names()
        return cls(**{name: getattr(cfg, name) for name in names})

    # pieces of fit, usable on their own ---------------------------------

    def _setup(self):
        check_positive_int(self.precision, "precision", 10)
        check_positive_int(self.reduction_precision, "reduction_precision", 10)
        check_positive_int(self.threads, "threads")
        self.curve_ = Curve(*self.curve)
        self.basis_ = tuple(CurvePoint.of(x, y) for x, y in self.generators)
        bad = [P for P in self.basis_ if not self.curve_.contains(P)]
        if bad:
            raise ValueError(f"generators not on the curve: {bad}")

    def _record(self, stage, start):
        self.__dict__.setdefault("timings_", {})[stage] = time.perf_counter() - start

    def _base_point(self, precision):
        return polynomial_point(self.base_x, self.base_y, precision)

    def fit_heights(self):
        self._setup()
        t = time.perf_counter()
        self.pairing_matrix_ = pairing_matrix(self.curve_, self.basis_, self.precision)
        self.c1_ = least_eigenvalue(self.pairing_matrix_, self.precision)
        if self.c1_ <= 0:
            raise ValueError("height pairing matrix is not positive definite")
        self.constants_ = BoundConstants(
            c1=self.c1_, c4=str(self.c4), c5=str(self.c5), c6=str(self.c6),
            silverman=str(self.silverman), height_log_coeff=str(self.height_log_coeff),
            slope_convention=self.slope_convention,
        )
        self._record("heights", t)
        return self

    def fit_logs(self, precision=None):
        self._setup()
        t = time.perf_counter()
        precision = precision or self.precision
        ctx = LinearFormContext.build(self.curve_, self.basis_, self._base_point(precision), precision)
        self.omega_ = ctx.omega
        self.u0_ = ctx.u0
        self.elliptic_logs_ = ctx.logs
        self._record("logs", t)
        return ctx

    def fit_bounds(self):
        t = time.perf_counter()
        self.initial_bound_ = initial_bound(self.constants_, self.precision)
        self._record("initial_bound", t)
        return self

    def fit_reduction(self):
        t = time.perf_counter()
        ctx = LinearFormContext.build(self.curve_, self.basis_,
                                      self._base_point(self.reduction_precision),
                                      self.reduction_precision)
        self.reduction_steps_ = reduce_to_fixpoint(ctx, self.constants_, self.initial_bound_)
        self.reduced_bound_ = self.reduction_steps_[-1].M_out
        self._record("reduction", t)
        return self

    def fit_enumeration(self):
        t = time.perf_counter()
        self.search_bound_ = self.max_bound if self.max_bound is not None else self.reduced_bound_
        self.complete_ = self.search_bound_ >= self.reduced_bound_
        if not self.complete_:
            logger.warning("search bound %d is below the reduced bound %d; the result may be incomplete",
                           self.search_bound_, self.reduced_bound_)
        self.solutions_ = enumerate_solutions(self.curve_, self.basis_, self.search_bound_, self.threads)
        self.xy_solutions_ = extract_xy(self.solutions_)
        self._record("enumeration", t)
        return self

    def fit(self, X=None, y=None):
        """Run the full pipeline. ``X`` and ``y`` are ignored."""
        self.timings_ = {}
        self._setup()
        self.fit_logs()
        self.fit_heights()
        self.fit_bounds()
        self.fit_reduction()
        self.fit_enumeration()
        return self

    def predict(self, X):
        """For each ``(u, v)`` row, whether it is one of the solutions found."""
        check_is_fitted(self, "solutions_")
        pairs = check_integer_pairs(X)
        return np.array([p in self.solutions_ for p in pairs], dtype=bool)

    def __sklearn_is_fitted__(self):
        return hasattr(self, "solutions_")
