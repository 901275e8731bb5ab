"""Reproducible, parallel Monte Carlo estimation for scaled running means.

Every experiment samples independent paths (one Philox stream per
replication, derived from the master seed and the replication index), turns
each path into a fixed-length vector of per-replication statistics, and
reduces the stacked matrix in replication order.  Results are therefore
bitwise identical for any worker count and any scheduling.

Tail probabilities carry Wilson score intervals (well behaved near 0 and 1,
which is where the interesting cells live); mean-type statistics carry
normal-approximation intervals with the configured confidence.

Experiments never materialize more than one path at a time per worker, and
paths are capped at 2**20 entries.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from . import __version__ as _VERSION
from .bounds import TailBoundParams, berry_esseen_margin, cesaro_tail_bound
from .core_math import cesaro_mean, check_rate, scaled_cesaro
from .sequences import (
    CounterexampleSpec,
    Seed,
    SequenceSpec,
    UnsupportedFamilyError,
    sample_path,
)

__all__ = [
    "ConfigError",
    "EngineError",
    "MonteCarloConfig",
    "TailEstimate",
    "ResultRow",
    "ExperimentResult",
    "CSV_COLUMNS",
    "wilson_interval",
    "estimate_tail_prob",
    "estimate_scaled_l1",
    "path_sup_diagnostic",
    "aui_tail_diagnostic",
    "supermartingale_condition_check",
    "bound_vs_empirical",
    "counterexample_sweep",
]

_MAX_PATH_LEN = 1 << 20


class ConfigError(ValueError):
    """Invalid Monte Carlo configuration or experiment parameters."""


class EngineError(RuntimeError):
    """A replication batch failed while running."""


@dataclass(frozen=True)
class MonteCarloConfig:
    """Replication plan: counts, seed, index grids, confidence, workers."""

    replications: int
    seed: Seed
    n_grid: tuple[int, ...] = ()
    threshold_grid: tuple[float, ...] = ()
    confidence: float = 0.95
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        grid = tuple(int(n) for n in self.n_grid)
        if any(n < 1 for n in grid):
            raise ConfigError("n_grid entries must be >= 1")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(
            self, "threshold_grid", tuple(float(t) for t in self.threshold_grid)
        )
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError("confidence must lie in (0, 1)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass(frozen=True)
class TailEstimate:
    """An estimated probability with its Wilson interval."""

    p_hat: float
    successes: int
    replications: int
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    family: str
    n: int
    threshold: float | None
    statistic: str
    value: float
    ci_low: float | None
    ci_high: float | None
    replications: int
    seed: int


CSV_COLUMNS = (
    "experiment",
    "family",
    "n",
    "threshold",
    "statistic",
    "value",
    "ci_low",
    "ci_high",
    "replications",
    "seed",
)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


@dataclass
class ExperimentResult:
    """Tabular record set: one row per (n, threshold, statistic)."""

    rows: list[ResultRow]
    metadata: dict = field(default_factory=dict)

    def to_csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows:
            lines.append(
                ",".join(_cell(getattr(r, col)) for col in CSV_COLUMNS)
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv_text())

    def to_json_obj(self) -> dict:
        return {
            "metadata": self.metadata,
            "rows": [
                {col: getattr(r, col) for col in CSV_COLUMNS} for r in self.rows
            ],
        }

    def write_json(self, path) -> None:
        import json

        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    margin = (z / denom) * math.sqrt(
        p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)
    )
    # the score interval contains p_hat in exact arithmetic; keep that true
    # under floating-point rounding at the endpoints
    lo = min(max(0.0, center - margin), p_hat)
    hi = max(min(1.0, center + margin), p_hat)
    return lo, hi


def _z_value(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + confidence / 2.0)


def _tail_estimate(successes: int, cfg: MonteCarloConfig) -> TailEstimate:
    lo, hi = wilson_interval(successes, cfg.replications, cfg.confidence)
    return TailEstimate(
        p_hat=successes / cfg.replications,
        successes=successes,
        replications=cfg.replications,
        ci_low=lo,
        ci_high=hi,
    )


def _require_ci_replications(cfg: MonteCarloConfig) -> None:
    if cfg.replications < 30:
        raise ConfigError(
            f"interval-reporting runs need replications >= 30, got {cfg.replications}"
        )


def _check_path_len(n: int) -> int:
    if n > _MAX_PATH_LEN:
        raise ConfigError(
            f"path length {n} exceeds {_MAX_PATH_LEN}; keep prefixes below 2**20"
        )
    return int(n)


# ---------------------------------------------------------------------------
# Replication kernels.  Each maps (payload, master seed, rep range) to a
# (range length, L) float matrix; they are module level so worker processes
# can unpickle them.
# ---------------------------------------------------------------------------


def _tail_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, beta, n, M = payload
    out = np.empty((hi - lo, 1))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n, seed.child(rep))
        out[j, 0] = 1.0 if n**beta * cesaro_mean(path) >= M else 0.0
    return out


def _l1_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, beta, n_grid = payload
    n_max = n_grid[-1]
    cols = [n - 1 for n in n_grid]
    out = np.empty((hi - lo, len(n_grid)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n_max, seed.child(rep))
        scaled = scaled_cesaro(path, beta)
        out[j] = np.abs(scaled[cols])
    return out


def _pathsup_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, beta, m_grid, n_cap, epsilon = payload
    out = np.empty((hi - lo, len(m_grid)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n_cap, seed.child(rep))
        scaled = np.abs(scaled_cesaro(path, beta))
        suffix_max = np.maximum.accumulate(scaled[::-1])[::-1]
        out[j] = [1.0 if suffix_max[m - 1] > epsilon else 0.0 for m in m_grid]
    return out


def _aui_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, beta, n_grid, x_grid = payload
    n_max = n_grid[-1]
    out = np.empty((hi - lo, len(n_grid) * len(x_grid)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n_max, seed.child(rep))
        col = 0
        for n in n_grid:
            scaled_term = n**beta * abs(path[n - 1])
            for x in x_grid:
                out[j, col] = 1.0 if scaled_term > x else 0.0
                col += 1
    return out


def _supermart_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, n_grid = payload
    n_max = n_grid[-1] + 1
    out = np.empty((hi - lo, len(n_grid)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n_max, seed.child(rep))
        out[j] = [path[n] / path[n - 1] for n in n_grid]
    return out


def _expbound_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, n_grid, thresholds = payload
    n_max = n_grid[-1]
    out = np.empty((hi - lo, len(thresholds)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(spec, n_max, seed.child(rep))
        means = scaled_cesaro(path, 0.0)
        out[j] = [
            1.0 if means[n - 1] >= thr else 0.0 for (n, thr) in thresholds
        ]
    return out


def _sweep_kernel(payload, seed: Seed, lo: int, hi: int) -> np.ndarray:
    spec, M, k_grid = payload
    n_max = 2 ** k_grid[-1] - 1
    out = np.empty((hi - lo, len(k_grid)))
    for j, rep in enumerate(range(lo, hi)):
        path = sample_path(SequenceSpec("counterexample", spec), n_max, seed.child(rep))
        means = scaled_cesaro(path, 0.0)
        out[j] = [
            1.0 if means[2**k - 2] >= M * 2.0 ** (-k * spec.beta) else 0.0
            for k in k_grid
        ]
    return out


_KERNELS = {
    "tail": _tail_kernel,
    "l1": _l1_kernel,
    "pathsup": _pathsup_kernel,
    "aui": _aui_kernel,
    "supermart": _supermart_kernel,
    "expbound": _expbound_kernel,
    "sweep": _sweep_kernel,
}


def _kernel_entry(name, payload, seed, lo, hi):
    return _KERNELS[name](payload, seed, lo, hi)


def _map_replications(name: str, payload, cfg: MonteCarloConfig) -> np.ndarray:
    """Run a kernel over all replications; output ordered by replication index."""
    total = cfg.replications
    if cfg.workers == 1:
        return _kernel_entry(name, payload, cfg.seed, 0, total)
    n_chunks = min(total, cfg.workers * 4)
    bounds = np.linspace(0, total, n_chunks + 1, dtype=int)
    ranges = [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]
    parts: dict[int, np.ndarray] = {}
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = {
            pool.submit(_kernel_entry, name, payload, cfg.seed, lo, hi): (lo, hi)
            for lo, hi in ranges
        }
        for fut in as_completed(futures):
            lo, hi = futures[fut]
            try:
                parts[lo] = fut.result()
            except Exception as exc:
                raise EngineError(
                    f"replications [{lo}, {hi}) failed: {exc}"
                ) from exc
    return np.vstack([parts[lo] for lo, _ in ranges])


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _base_metadata(experiment: str, family: str, cfg: MonteCarloConfig) -> dict:
    return {
        "artifact_version": _VERSION,
        "experiment": experiment,
        "family": family,
        "replications": cfg.replications,
        "confidence": cfg.confidence,
        "seed": {"value": cfg.seed.value, "stream_id": cfg.seed.stream_id},
        "workers": cfg.workers,
    }


def estimate_tail_prob(
    spec: SequenceSpec,
    beta: float,
    n: int,
    M: float,
    cfg: MonteCarloConfig,
) -> TailEstimate:
    """Estimate ``pr(n**beta * mean(X_1..X_n) >= M)`` from independent paths.

    Parameters
    ----------
    spec : SequenceSpec
        Family to sample.
    beta : float
        Scaling exponent (>= 0).
    n : int
        Prefix length; must appear in ``cfg.n_grid``.
    M : float
        Exceedance level (> 0).
    cfg : MonteCarloConfig
        Replication plan; needs replications >= 30.
    """
    _require_ci_replications(cfg)
    check_rate(beta)
    if n not in cfg.n_grid:
        raise ConfigError(f"n={n} is not in the configured n_grid {cfg.n_grid}")
    if not M > 0:
        raise ValueError("M must be > 0")
    _check_path_len(n)
    vals = _map_replications("tail", (spec, float(beta), int(n), float(M)), cfg)
    return _tail_estimate(int(vals[:, 0].sum()), cfg)


def estimate_scaled_l1(
    spec: SequenceSpec, beta: float, cfg: MonteCarloConfig
) -> ExperimentResult:
    """Estimate ``n**beta * E|mean(X_1..X_n)|`` over ``cfg.n_grid``.

    One path sweep of length max(n_grid) serves every n via running means.
    Rows carry normal-approximation intervals at the configured confidence,
    plus a ``scaled_l1_se`` row with the standard error.
    """
    _require_ci_replications(cfg)
    check_rate(beta)
    if not cfg.n_grid:
        raise ConfigError("estimate_scaled_l1 needs a nonempty n_grid")
    _check_path_len(cfg.n_grid[-1])
    vals = _map_replications("l1", (spec, float(beta), cfg.n_grid), cfg)
    z = _z_value(cfg.confidence)
    rows = []
    for col, n in enumerate(cfg.n_grid):
        mean = float(np.mean(vals[:, col]))
        se = float(np.std(vals[:, col], ddof=1) / math.sqrt(cfg.replications))
        for stat, value, lo, hi in (
            ("scaled_l1", mean, mean - z * se, mean + z * se),
            ("scaled_l1_se", se, None, None),
        ):
            rows.append(
                ResultRow(
                    experiment="l1",
                    family=spec.family,
                    n=n,
                    threshold=None,
                    statistic=stat,
                    value=value,
                    ci_low=lo,
                    ci_high=hi,
                    replications=cfg.replications,
                    seed=cfg.seed.value,
                )
            )
    meta = _base_metadata("l1", spec.family, cfg)
    meta["beta"] = float(beta)
    meta["n_grid"] = list(cfg.n_grid)
    return ExperimentResult(rows=rows, metadata=meta)


def path_sup_diagnostic(
    spec: SequenceSpec,
    beta: float,
    m_grid: tuple[int, ...],
    n_cap: int,
    epsilon: float,
    cfg: MonteCarloConfig,
) -> ExperimentResult:
    """Estimate ``pr(max_{m <= k <= n_cap} k**beta |mean_k| > epsilon)`` per m.

    A finite-horizon stand-in for almost sure convergence: families whose
    scaled means converge almost surely drive this profile toward zero as the
    window start m grows; non-tight families keep it bounded away from zero.
    All m share each replication's path, so the profile is monotone in m
    path by path.
    """
    _require_ci_replications(cfg)
    check_rate(beta)
    m_grid = tuple(int(m) for m in m_grid)
    if not m_grid or any(b <= a for a, b in zip(m_grid, m_grid[1:])):
        raise ConfigError("m_grid must be nonempty and strictly increasing")
    if m_grid[0] < 1 or m_grid[-1] >= n_cap:
        raise ConfigError("need 1 <= m < n_cap for every m in m_grid")
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    _check_path_len(n_cap)
    vals = _map_replications(
        "pathsup", (spec, float(beta), m_grid, int(n_cap), float(epsilon)), cfg
    )
    rows = []
    for col, m in enumerate(m_grid):
        est = _tail_estimate(int(vals[:, col].sum()), cfg)
        rows.append(
            ResultRow(
                experiment="as_diag",
                family=spec.family,
                n=m,
                threshold=float(epsilon),
                statistic="sup_exceedance",
                value=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                replications=cfg.replications,
                seed=cfg.seed.value,
            )
        )
    meta = _base_metadata("as_diag", spec.family, cfg)
    meta.update(beta=float(beta), m_grid=list(m_grid), n_cap=int(n_cap), epsilon=float(epsilon))
    return ExperimentResult(rows=rows, metadata=meta)


def aui_tail_diagnostic(
    spec: SequenceSpec,
    beta: float,
    q: float,
    x_grid: tuple[float, ...],
    cfg: MonteCarloConfig,
) -> ExperimentResult:
    """Estimate ``n**(beta*q) * pr(n**beta |X_n| > x)`` on n_grid x x_grid.

    ``q`` is the conjugate exponent pairing a moment bound with this tail
    condition; the diagnostic must vanish (in n, then x) for scaled means to
    converge in mean.  Wilson intervals are scaled by the same ``n**(beta*q)``
    factor as the point estimate.
    """
    _require_ci_replications(cfg)
    check_rate(beta)
    if q < 1.0:
        raise ValueError("q must be >= 1")
    x_grid = tuple(float(x) for x in x_grid)
    if not x_grid or any(x <= 0 for x in x_grid):
        raise ConfigError("x_grid must be nonempty with positive entries")
    if not cfg.n_grid:
        raise ConfigError("aui_tail_diagnostic needs a nonempty n_grid")
    _check_path_len(cfg.n_grid[-1])
    vals = _map_replications("aui", (spec, float(beta), cfg.n_grid, x_grid), cfg)
    rows = []
    col = 0
    for n in cfg.n_grid:
        scale = float(n) ** (beta * q)
        for x in x_grid:
            est = _tail_estimate(int(vals[:, col].sum()), cfg)
            rows.append(
                ResultRow(
                    experiment="aui",
                    family=spec.family,
                    n=n,
                    threshold=x,
                    statistic="aui_diagnostic",
                    value=scale * est.p_hat,
                    ci_low=scale * est.ci_low,
                    ci_high=scale * est.ci_high,
                    replications=cfg.replications,
                    seed=cfg.seed.value,
                )
            )
            col += 1
    meta = _base_metadata("aui", spec.family, cfg)
    meta.update(beta=float(beta), q=float(q), n_grid=list(cfg.n_grid), x_grid=list(x_grid))
    return ExperimentResult(rows=rows, metadata=meta)


def supermartingale_condition_check(
    spec: SequenceSpec, beta: float, cfg: MonteCarloConfig
) -> ExperimentResult:
    """Check the marginal contraction ``(1+1/n)**beta E|X_{n+1}| <= E|X_n|``.

    Implemented for the multiplicative-shock family only, whose conditional
    structure is known: the per-path ratio ``X_{n+1}/X_n`` is an independent
    uniform shock, so its sample mean estimates the marginal ratio
    ``(1+1/n)**beta E|X_{n+1}| / E|X_n|`` without the weight degeneracy a
    ratio of sample means would suffer on geometrically decaying paths.
    Cells with ratio above ``1 + 3 SE`` are flagged in the metadata and in a
    ``condition_violated`` row.
    """
    _require_ci_replications(cfg)
    check_rate(beta)
    if spec.family != "supermartingale":
        raise UnsupportedFamilyError(
            "condition check needs the supermartingale family (known conditional structure)"
        )
    if spec.params.x0 <= 0:
        raise UnsupportedFamilyError("condition check needs x0 > 0 (nonzero paths)")
    if not cfg.n_grid:
        raise ConfigError("supermartingale_condition_check needs a nonempty n_grid")
    _check_path_len(cfg.n_grid[-1] + 1)
    vals = _map_replications("supermart", (spec, cfg.n_grid), cfg)
    z = _z_value(cfg.confidence)
    rows = []
    flagged = []
    for col, n in enumerate(cfg.n_grid):
        factor = (1.0 + 1.0 / n) ** beta
        ratio = factor * float(np.mean(vals[:, col]))
        se = factor * float(np.std(vals[:, col], ddof=1) / math.sqrt(cfg.replications))
        violated = ratio > 1.0 + 3.0 * se
        if violated:
            flagged.append(n)
        rows.append(
            ResultRow(
                experiment="supermart",
                family=spec.family,
                n=n,
                threshold=None,
                statistic="contraction_ratio",
                value=ratio,
                ci_low=ratio - z * se,
                ci_high=ratio + z * se,
                replications=cfg.replications,
                seed=cfg.seed.value,
            )
        )
        rows.append(
            ResultRow(
                experiment="supermart",
                family=spec.family,
                n=n,
                threshold=None,
                statistic="condition_violated",
                value=1.0 if violated else 0.0,
                ci_low=None,
                ci_high=None,
                replications=cfg.replications,
                seed=cfg.seed.value,
            )
        )
    meta = _base_metadata("supermart", spec.family, cfg)
    meta.update(beta=float(beta), n_grid=list(cfg.n_grid), violations=flagged)
    return ExperimentResult(rows=rows, metadata=meta)


def bound_vs_empirical(
    p: TailBoundParams,
    spec: SequenceSpec,
    y_grid: tuple[float, ...],
    cfg: MonteCarloConfig,
) -> ExperimentResult:
    """Empirical exceedance of the analytic running-mean threshold vs its bound.

    For each (n, y) the analytic threshold and tail bound come from
    :func:`cesarolab.bounds.cesaro_tail_bound`; the empirical side counts
    paths whose running mean at n exceeds the threshold.  A cell is flagged
    when its Wilson lower bound exceeds an analytic bound that is active
    (below 1); vacuous cells are never flagged.
    """
    _require_ci_replications(cfg)
    if spec.family != "exp_tail":
        raise UnsupportedFamilyError("bound_vs_empirical expects the exp_tail family")
    y_grid = tuple(float(y) for y in y_grid)
    if not y_grid or any(y < 1.0 for y in y_grid):
        raise ValueError("y_grid entries must be >= 1")
    if not cfg.n_grid:
        raise ConfigError("bound_vs_empirical needs a nonempty n_grid")
    _check_path_len(cfg.n_grid[-1])
    cells = []
    for n in cfg.n_grid:
        for y in y_grid:
            thr, prob = cesaro_tail_bound(p, n, y)
            cells.append((n, y, thr, prob))
    thresholds = tuple((n, thr) for (n, y, thr, prob) in cells)
    vals = _map_replications("expbound", (spec, cfg.n_grid, thresholds), cfg)
    rows = []
    violations = []
    for col, (n, y, thr, prob) in enumerate(cells):
        est = _tail_estimate(int(vals[:, col].sum()), cfg)
        violated = prob < 1.0 and est.ci_low > prob
        if violated:
            violations.append({"n": n, "y": y})
        common = dict(
            experiment="expbound",
            family=spec.family,
            n=n,
            threshold=y,
            replications=cfg.replications,
            seed=cfg.seed.value,
        )
        rows.append(
            ResultRow(
                statistic="empirical_exceedance",
                value=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                **common,
            )
        )
        rows.append(
            ResultRow(
                statistic="analytic_bound", value=prob, ci_low=None, ci_high=None, **common
            )
        )
        rows.append(
            ResultRow(
                statistic="exceedance_threshold",
                value=thr,
                ci_low=None,
                ci_high=None,
                **common,
            )
        )
        rows.append(
            ResultRow(
                statistic="bound_violated",
                value=1.0 if violated else 0.0,
                ci_low=None,
                ci_high=None,
                **common,
            )
        )
    meta = _base_metadata("expbound", spec.family, cfg)
    meta.update(
        bound_params=vars(p),
        y_grid=list(y_grid),
        n_grid=list(cfg.n_grid),
        violations=violations,
    )
    return ExperimentResult(rows=rows, metadata=meta)


def counterexample_sweep(
    spec: CounterexampleSpec,
    M: float,
    k_grid: tuple[int, ...],
    cfg: MonteCarloConfig,
) -> ExperimentResult:
    """Estimate ``pr((2**k)**beta * mean(X_1..X_{2**k - 1}) >= M)`` along k.

    Each replication samples one path of length ``2**max(k) - 1``; every k is
    read off the same running means, so estimates along k share paths.  Rows
    pair each estimate with the analytic normal-approximation lower margin
    (``be_margin``) for side-by-side reporting.
    """
    _require_ci_replications(cfg)
    k_grid = tuple(int(k) for k in k_grid)
    if not k_grid or any(b <= a for a, b in zip(k_grid, k_grid[1:])):
        raise ConfigError("k_grid must be nonempty and strictly increasing")
    if k_grid[0] < 2:
        raise ConfigError("k_grid entries must be >= 2")
    if not M > 0:
        raise ValueError("M must be > 0")
    _check_path_len(2 ** k_grid[-1] - 1)
    vals = _map_replications("sweep", (spec, float(M), k_grid), cfg)
    rows = []
    for col, k in enumerate(k_grid):
        est = _tail_estimate(int(vals[:, col].sum()), cfg)
        margin = berry_esseen_margin(2**k, spec.alpha, spec.beta, M)
        common = dict(
            experiment="counterexample",
            family="counterexample",
            n=2**k - 1,
            threshold=float(M),
            replications=cfg.replications,
            seed=cfg.seed.value,
        )
        rows.append(
            ResultRow(
                statistic="tail_prob",
                value=est.p_hat,
                ci_low=est.ci_low,
                ci_high=est.ci_high,
                **common,
            )
        )
        rows.append(
            ResultRow(
                statistic="be_margin", value=margin, ci_low=None, ci_high=None, **common
            )
        )
    meta = _base_metadata("counterexample", "counterexample", cfg)
    meta.update(
        alpha=spec.alpha, beta=spec.beta, bound_b=spec.bound_b, M=float(M), k_grid=list(k_grid)
    )
    return ExperimentResult(rows=rows, metadata=meta)
