"""Integral solutions of the k = l = 5 binomial balancing equation via
linear forms in elliptic logarithms."""

__version__ = "0.1.0"

from .curve import BALANCING_CURVE, BALANCING_GENERATORS, Curve, CurvePoint
from .diophantine import INTEGRAL_PAIRS, UVPair, XYSolution
from .estimator import BalancingTransformer, IntegralPointSolver

__all__ = [
    "BALANCING_CURVE",
    "BALANCING_GENERATORS",
    "Curve",
    "CurvePoint",
    "INTEGRAL_PAIRS",
    "UVPair",
    "XYSolution",
    "BalancingTransformer",
    "IntegralPointSolver",
]
