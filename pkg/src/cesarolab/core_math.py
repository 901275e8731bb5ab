"""Deterministic Cesaro arithmetic: plain, scaled and block running means.

Sequences are finite 1-D arrays of real numbers; anything convertible to a
float64 numpy array is accepted.  All sums use compensated (Kahan)
accumulation so that very long prefixes (up to 1e8 terms) keep relative
error at the few-ulp level instead of degrading linearly with length.
Every function is pure and never mutates its input.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _kahan_sum_py(values):
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _kahan_cumsum_py(values):
    out = np.empty_like(values)
    total = 0.0
    comp = 0.0
    for i in range(values.shape[0]):
        y = values[i] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


if _HAVE_NUMBA:
    # fastmath must stay off: it would license dropping the compensation term.
    _kahan_sum = _njit(cache=True)(_kahan_sum_py)
    _kahan_cumsum = _njit(cache=True)(_kahan_cumsum_py)
else:  # pragma: no cover
    _kahan_sum = _kahan_sum_py
    _kahan_cumsum = _kahan_cumsum_py


def as_sequence(xs) -> np.ndarray:
    """Validate and convert ``xs`` to a finite, nonempty 1-D float64 array."""
    arr = np.asarray(xs, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"sequence must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("sequence must be nonempty")
    if not np.isfinite(arr).all():
        raise ValueError("sequence entries must be finite (no NaN or infinities)")
    return arr


def check_rate(beta: float) -> float:
    """Validate a scaling exponent: finite and non-negative."""
    b = float(beta)
    if not np.isfinite(b) or b < 0.0:
        raise ValueError(f"rate exponent must be finite and >= 0, got {beta}")
    return b


def cesaro_mean(xs) -> float:
    """Mean (1/n) * sum(xs) of a nonempty sequence, compensated summation."""
    arr = as_sequence(xs)
    return float(_kahan_sum(arr)) / arr.size


def scaled_cesaro(xs, beta: float) -> np.ndarray:
    """Running scaled means ``(k**beta * mean(xs[:k]))`` for k = 1..len(xs).

    Computed in one pass: a compensated running sum, divided by the index,
    then scaled.  With ``beta == 0`` the final entry equals
    ``cesaro_mean(xs)`` bitwise, because both use the same accumulation.
    """
    arr = as_sequence(xs)
    b = check_rate(beta)
    idx = np.arange(1, arr.size + 1, dtype=np.float64)
    means = _kahan_cumsum(arr) / idx
    if b == 0.0:
        return means
    return idx**b * means


def block_mean(xs, n1: int, n2: int) -> float:
    """Mean of the inclusive 1-based block ``xs[n1..n2]``.

    Raises ValueError if the indices fall outside ``1 <= n1 <= n2 <= len(xs)``.
    """
    arr = as_sequence(xs)
    if not (isinstance(n1, (int, np.integer)) and isinstance(n2, (int, np.integer))):
        raise ValueError("block indices must be integers")
    if n1 < 1 or n2 > arr.size or n1 > n2:
        raise ValueError(
            f"block indices must satisfy 1 <= n1 <= n2 <= {arr.size}, got ({n1}, {n2})"
        )
    block = arr[n1 - 1 : n2]
    return float(_kahan_sum(block)) / block.size
