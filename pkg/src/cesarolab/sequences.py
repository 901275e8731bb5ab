"""Seedable generators for the random-sequence families under study.

Five families:

* ``counterexample`` -- independent scaled Bernoulli draws whose success
  probability is constant on dyadic blocks, ``p_i = (2**floor(log2 i))**-alpha``.
* ``exp_tail``       -- ``X_i = c0*i**-beta + E_i`` with ``E_i ~ Exp(rate c2*i)``,
  so the per-term exponential tail premise holds with equality (gamma=1, c1=1).
* ``power_law``      -- ``X_i = i**-r * U_i`` with ``U_i ~ Uniform[0, spread]``.
* ``supermartingale``-- multiplicative chain ``X_{n+1} = X_n * V_n`` with
  ``V_n ~ Uniform[0, 2*contraction*(1+1/n)**-beta]``, so
  ``(1+1/n)**beta * E(X_{n+1} | past) = contraction * X_n <= X_n``.
* ``borel_cantelli`` -- ``X_i = i**-beta * Z_i`` with a clamped Pareto tail
  ``pr(Z_i > x) = min(1, i**-(1+a) * x**-s)``.

Path sampling is a pure function of (spec, n, seed).  Streams use the
counter-based Philox generator keyed by ``(seed.value, seed.stream_id)``,
so a draw is a pure function of (seed, stream_id, index) no matter how work
is scheduled; distinct stream ids give statistically independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .bounds import TailBoundParams, validate_params

__all__ = [
    "Seed",
    "UnsupportedFamilyError",
    "CounterexampleSpec",
    "PowerLawParams",
    "SupermartingaleParams",
    "BorelCantelliParams",
    "SequenceSpec",
    "block_bernoulli_prob",
    "sample_counterexample",
    "sample_exp_tail",
    "sample_power_law",
    "sample_supermartingale",
    "sample_borel_cantelli",
    "sample_path",
]

_MASK64 = (1 << 64) - 1


class UnsupportedFamilyError(ValueError):
    """Raised when an operation is asked for a family it cannot serve."""


@dataclass(frozen=True)
class Seed:
    """A reproducibility key: 64-bit seed value plus a 64-bit stream id."""

    value: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("value", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def child(self, offset: int) -> "Seed":
        """Seed for a derived stream (e.g. one Monte Carlo replication)."""
        return replace(self, stream_id=(self.stream_id + offset) & _MASK64)


def make_rng(seed: Seed) -> np.random.Generator:
    """Philox generator keyed by ``value + 2**64 * stream_id`` (counter-based)."""
    key = (seed.value & _MASK64) | ((seed.stream_id & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class CounterexampleSpec:
    """Dyadic block-Bernoulli family: requires 0 < alpha < beta < 1, bound_b > 0."""

    alpha: float
    beta: float
    bound_b: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if not self.alpha < self.beta:
            raise ValueError("alpha must be < beta")
        if not self.bound_b > 0:
            raise ValueError("bound_b must be > 0")


@dataclass(frozen=True)
class PowerLawParams:
    """Uniform-amplitude power-law family; spread = 0 degenerates to zeros."""

    r: float
    spread: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be > 0")
        if self.spread < 0:
            raise ValueError("spread must be >= 0")


@dataclass(frozen=True)
class SupermartingaleParams:
    """Multiplicative-shock chain; contraction in (0, 1], x0 >= 0."""

    beta: float
    contraction: float
    x0: float = 1.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.contraction > 1.0:
            raise ValueError("contraction must be <= 1 (the condition fails otherwise)")
        if not self.contraction > 0:
            raise ValueError("contraction must be > 0")
        if self.x0 < 0:
            raise ValueError("x0 must be >= 0")


@dataclass(frozen=True)
class BorelCantelliParams:
    """Clamped-Pareto family with per-index tail i**-(1+a) * x**-s."""

    beta: float
    a: float
    s: float

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if not self.a > 0:
            raise ValueError("a must be > 0")
        if not self.s > 0:
            raise ValueError("s must be > 0")


_FamilyParams = Union[
    CounterexampleSpec,
    TailBoundParams,
    PowerLawParams,
    SupermartingaleParams,
    BorelCantelliParams,
]

_FAMILY_TYPES = {
    "counterexample": CounterexampleSpec,
    "exp_tail": TailBoundParams,
    "power_law": PowerLawParams,
    "supermartingale": SupermartingaleParams,
    "borel_cantelli": BorelCantelliParams,
}


@dataclass(frozen=True)
class SequenceSpec:
    """A tagged family description: (family name, family-specific params)."""

    family: str
    params: _FamilyParams

    def __post_init__(self):
        expected = _FAMILY_TYPES.get(self.family)
        if expected is None:
            raise UnsupportedFamilyError(
                f"unknown family {self.family!r}; one of {sorted(_FAMILY_TYPES)}"
            )
        if not isinstance(self.params, expected):
            raise ValueError(
                f"family {self.family!r} takes {expected.__name__} params, "
                f"got {type(self.params).__name__}"
            )
        if self.family == "exp_tail":
            _check_exp_tail_params(self.params)

    @classmethod
    def counterexample(cls, alpha, beta, bound_b=1.0):
        return cls("counterexample", CounterexampleSpec(alpha, beta, bound_b))

    @classmethod
    def exp_tail(cls, params: TailBoundParams):
        return cls("exp_tail", params)

    @classmethod
    def power_law(cls, r, spread):
        return cls("power_law", PowerLawParams(r, spread))

    @classmethod
    def supermartingale(cls, beta, contraction, x0=1.0):
        return cls("supermartingale", SupermartingaleParams(beta, contraction, x0))

    @classmethod
    def borel_cantelli(cls, beta, a, s):
        return cls("borel_cantelli", BorelCantelliParams(beta, a, s))


def _check_exp_tail_params(p: TailBoundParams) -> TailBoundParams:
    validate_params(p)
    if p.gamma != 1.0 or p.c1 != 1.0:
        raise UnsupportedFamilyError(
            "exp_tail family realizes the premise with equality only for "
            f"gamma = 1 and c1 = 1, got gamma={p.gamma}, c1={p.c1}"
        )
    return p


def _floor_log2(idx: np.ndarray) -> np.ndarray:
    # frexp is exact: i = m * 2**e with m in [0.5, 1), so floor(log2 i) = e - 1
    _, e = np.frexp(idx.astype(np.float64))
    return e - 1


def block_bernoulli_prob(n, alpha: float):
    """Success probability ``(2**floor(log2 n))**-alpha``; constant on dyadic blocks.

    Accepts a scalar index or an integer array; indices must be >= 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    arr = np.asarray(n)
    if arr.size == 0 or np.any(arr < 1):
        raise ValueError("indices must be >= 1")
    p = np.exp2(-alpha * _floor_log2(arr))
    if np.isscalar(n) or arr.ndim == 0:
        return float(p)
    return p


def sample_counterexample(spec: CounterexampleSpec, n: int, seed: Seed) -> np.ndarray:
    """Independent draws X_i = bound_b with probability p_{i,alpha}, else 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    idx = np.arange(1, n + 1)
    p = np.exp2(-spec.alpha * _floor_log2(idx))
    return np.where(rng.random(n) < p, spec.bound_b, 0.0)


def sample_exp_tail(p: TailBoundParams, n_max: int, seed: Seed) -> np.ndarray:
    """X_i = c0*i**-beta + E_i with E_i ~ Exp(rate c2*i); exact premise tails.

    Requires gamma = 1 and c1 = 1 in ``p``: then
    ``pr(X_i >= c0*i**-beta + x) = exp(-c2*i*x)`` exactly for all x > 0.
    """
    _check_exp_tail_params(p)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = make_rng(seed)
    idx = np.arange(1, n_max + 1, dtype=np.float64)
    return p.c0 * idx**-p.beta + rng.exponential(scale=1.0 / (p.c2 * idx))


def sample_power_law(r: float, spread: float, n_max: int, seed: Seed) -> np.ndarray:
    """X_i = i**-r * U_i with U_i i.i.d. Uniform[0, spread]; E|X_i| = i**-r * spread/2."""
    PowerLawParams(r, spread)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = make_rng(seed)
    idx = np.arange(1, n_max + 1, dtype=np.float64)
    return idx**-r * (spread * rng.random(n_max))


def sample_supermartingale(
    beta: float, contraction: float, x0: float, n_max: int, seed: Seed
) -> np.ndarray:
    """Nonnegative chain X_1 = x0, X_{n+1} = X_n * V_n with uniform shocks.

    V_n ~ Uniform[0, 2*contraction*(1+1/n)**-beta], so the conditional mean
    contracts by exactly ``contraction * (1+1/n)**-beta`` at every step.
    """
    SupermartingaleParams(beta, contraction, x0)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = make_rng(seed)
    path = np.empty(n_max, dtype=np.float64)
    path[0] = x0
    if n_max > 1:
        steps = np.arange(1, n_max, dtype=np.float64)
        high = 2.0 * contraction * (1.0 + 1.0 / steps) ** -beta
        shocks = rng.random(n_max - 1) * high
        path[1:] = x0 * np.cumprod(shocks)
    return path


def sample_borel_cantelli(
    beta: float, a: float, s: float, n_max: int, seed: Seed
) -> np.ndarray:
    """X_i = i**-beta * Z_i with pr(Z_i > x) = min(1, i**-(1+a) * x**-s).

    Z_i is a Pareto draw re-anchored at its support edge i**-(1+a)/s, so the
    scaled tail ``pr(i**beta * X_i > x)`` equals ``i**-(1+a) * x**-s`` exactly
    for x at or above the edge.
    """
    BorelCantelliParams(beta, a, s)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = make_rng(seed)
    idx = np.arange(1, n_max + 1, dtype=np.float64)
    edge = idx ** (-(1.0 + a) / s)
    u = 1.0 - rng.random(n_max)  # in (0, 1]: keeps Z finite
    return idx**-beta * edge * u ** (-1.0 / s)


def sample_path(spec: SequenceSpec, n: int, seed: Seed) -> np.ndarray:
    """Sample a length-n path of the family described by ``spec``."""
    p = spec.params
    if spec.family == "counterexample":
        return sample_counterexample(p, n, seed)
    if spec.family == "exp_tail":
        return sample_exp_tail(p, n, seed)
    if spec.family == "power_law":
        return sample_power_law(p.r, p.spread, n, seed)
    if spec.family == "supermartingale":
        return sample_supermartingale(p.beta, p.contraction, p.x0, n, seed)
    if spec.family == "borel_cantelli":
        return sample_borel_cantelli(p.beta, p.a, p.s, n, seed)
    raise UnsupportedFamilyError(f"unknown family {spec.family!r}")
