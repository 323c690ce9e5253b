"""Input checks shared by the estimator classes."""

from __future__ import annotations

import numbers

import numpy as np


def check_integer_pairs(X, name: str = "X") -> list[tuple[int, int]]:
    """Coerce ``X`` to a list of ``(int, int)`` pairs.

    Accepts any array-like of shape ``(n, 2)`` holding integral values.
    Python ints are kept as they are so that values beyond 64 bits survive.
    """
    if isinstance(X, np.ndarray):
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError(f"{name} must have shape (n_samples, 2), got {X.shape}")
        rows = X.tolist()
    else:
        try:
            rows = [tuple(row) for row in X]
        except TypeError as exc:
            raise ValueError(f"{name} must be a sequence of pairs") from exc
    pairs = []
    for row in rows:
        if len(row) != 2:
            raise ValueError(f"{name} rows must have length 2, got {row!r}")
        out = []
        for value in row:
            if isinstance(value, bool) or not isinstance(value, (numbers.Integral, float)):
                raise ValueError(f"{name} must hold integers, got {value!r}")
            if isinstance(value, float):
                if not value.is_integer():
                    raise ValueError(f"{name} must hold integers, got {value!r}")
                value = int(value)
            out.append(int(value))
        pairs.append((out[0], out[1]))
    return pairs


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
