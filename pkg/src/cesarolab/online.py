"""Online one-step estimators on synthetic data with known truth.

Two estimators whose error decomposes into a martingale average plus a
Cesaro average of deterministic per-step remainders:

* a sequential estimate of the best achievable misclassification rate,
  built from a stream of classifiers that approach the optimal one, and
* a sequential augmented inverse-probability-weighted (one-step) estimate of
  a mean outcome observed under missingness at random.

Estimator sequences are truth-plus-decaying-perturbation schedules, not
fitted learners: the perturbation at step j has amplitude
``perturb_scale * j**-rate`` and a fixed smooth profile ``cos(2*pi*x + j)``,
which makes every per-step conditional quantity computable by deterministic
quadrature and the decomposition identity checkable to float precision.

Covariates are uniform on [0, 1]^d.  Conditional risks use exact piecewise
Gauss-Legendre integration after locating the decision boundary (d = 1);
smooth integrands use composite Simpson on a 2**12-panel grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .sequences import Seed, make_rng

__all__ = [
    "BayesRiskDGP",
    "EstimatorSchedule",
    "BayesRiskRun",
    "BayesRiskExperiment",
    "run_bayes_risk",
    "azuma_bound",
    "MarDGP",
    "NuisanceSchedule",
    "MarMeanRun",
    "MarMeanExperiment",
    "run_mar_mean",
    "sine_bayes_dgp",
    "smooth_mar_dgp",
]

_PANELS_1D = 4096  # Simpson panels per axis in d=1 (4097 nodes)
_PANELS_2D = 256


def _simpson_nodes(panels: int) -> tuple[np.ndarray, np.ndarray]:
    if panels % 2:
        raise ValueError("panel count must be even")
    x = np.linspace(0.0, 1.0, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (x[1] - x[0]) / 3.0
    return x, w


_X1, _W1 = _simpson_nodes(_PANELS_1D)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _integrate_unit(fn: Callable, dim: int) -> float:
    """Integrate a smooth function over [0,1]^dim by composite Simpson."""
    if dim == 1:
        return float(_W1 @ np.asarray(fn(_X1), dtype=np.float64))
    x, w = _simpson_nodes(_PANELS_2D)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    vals = np.asarray(fn(pts), dtype=np.float64).reshape(len(x), len(x))
    return float(w @ vals @ w)


def _profile(j: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Fixed smooth perturbation profile at step j: cos(2*pi*x + j)."""
    return np.cos(2.0 * np.pi * x + j)


def _coord(x: np.ndarray) -> np.ndarray:
    """Scalar coordinate the perturbation profile acts through."""
    x = np.asarray(x, dtype=np.float64)
    return x if x.ndim == 1 else x.mean(axis=-1)


def _dyadic_prefixes(n: int) -> np.ndarray:
    ns = []
    k = 1
    while k < n:
        ns.append(k)
        k *= 2
    ns.append(n)
    return np.array(ns, dtype=np.int64)


# ---------------------------------------------------------------------------
# Sequential estimation of the optimal misclassification rate
# ---------------------------------------------------------------------------


@dataclass
class BayesRiskDGP:
    """Binary-label data source: X ~ Uniform[0,1]^dim, pr(Y=1 | X=x) = eta(x).

    ``bayes_risk`` is the risk of the optimal classifier,
    ``E[min(eta, 1 - eta)]``, computed by quadrature at construction unless
    supplied.
    """

    eta: Callable[[np.ndarray], np.ndarray]
    dim: int = 1
    bayes_risk: float | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        probe = _X1 if self.dim == 1 else np.random.default_rng(0).random((256, 2))
        vals = np.asarray(self.eta(probe), dtype=np.float64)
        if vals.min() < 0.0 or vals.max() > 1.0:
            raise ValueError("eta must map into [0, 1]")
        if self.bayes_risk is None:
            self.bayes_risk = _integrate_unit(
                lambda x: np.minimum(self.eta(x), 1.0 - self.eta(x)), self.dim
            )
        if not 0.0 <= self.bayes_risk <= 0.5 + 1e-12:
            raise ValueError("bayes_risk must lie in [0, 0.5]")


@dataclass(frozen=True)
class EstimatorSchedule:
    """Classifier stream: eta_hat_j = clip(eta + j**-rate_r * scale * profile_j, 0, 1).

    Step 0 is the fixed initial classifier that predicts +1 everywhere
    (the sign of a constant zero score, with sign(0) = +1).
    """

    rate_r: float
    perturb_scale: float = 0.0

    def __post_init__(self):
        if not self.rate_r > 0:
            raise ValueError("rate_r must be > 0")
        if self.perturb_scale < 0:
            raise ValueError("perturb_scale must be >= 0")

    def amplitude(self, j) -> np.ndarray:
        j = np.asarray(j, dtype=np.float64)
        return self.perturb_scale * j**-self.rate_r

    def eta_hat(self, dgp: BayesRiskDGP, j, x) -> np.ndarray:
        """Estimated regression at step j >= 1 evaluated at covariates x."""
        j = np.asarray(j, dtype=np.float64)
        return np.clip(
            dgp.eta(x) + self.amplitude(j) * _profile(j, _coord(x)), 0.0, 1.0
        )


def _risk_table_1d(dgp: BayesRiskDGP, sched: EstimatorSchedule, n: int) -> np.ndarray:
    """R(f_hat_j) for j = 0..n-1 with the decision boundary located exactly.

    The score 2*eta_hat_j - 1 is scanned on the Simpson grid, each sign change
    is refined by bisection, and eta is integrated piecewise with 24-point
    Gauss-Legendre, so jump discontinuities of the loss integrand cost nothing.
    """
    xs, w = _X1, _W1
    eta_s = np.asarray(dgp.eta(xs), dtype=np.float64)
    risks = np.empty(n)
    risks[0] = float(w @ (1.0 - eta_s))  # constant +1 classifier

    if n == 1:
        return risks

    js = np.arange(1, n, dtype=np.float64)

    def scores(jv: np.ndarray, xv: np.ndarray) -> np.ndarray:
        amp = sched.amplitude(jv)
        return 2.0 * np.clip(dgp.eta(xv) + amp * _profile(jv, xv), 0.0, 1.0) - 1.0

    # scan for sign changes, blockwise over steps
    br_j: list[np.ndarray] = []
    br_a: list[np.ndarray] = []
    br_b: list[np.ndarray] = []
    br_left: list[np.ndarray] = []
    first_pos = np.empty(n - 1, dtype=bool)
    for lo in range(0, n - 1, 256):
        block = js[lo : lo + 256]
        s = 2.0 * np.clip(
            eta_s[None, :]
            + sched.amplitude(block)[:, None] * _profile(block[:, None], xs[None, :]),
            0.0,
            1.0,
        ) - 1.0
        pos = s >= 0.0
        first_pos[lo : lo + len(block)] = pos[:, 0]
        rows, cols = np.nonzero(pos[:, 1:] != pos[:, :-1])
        br_j.append(block[rows])
        br_a.append(xs[cols])
        br_b.append(xs[cols + 1])
        br_left.append(pos[rows, cols])
    bj = np.concatenate(br_j)
    ba = np.concatenate(br_a)
    bb = np.concatenate(br_b)
    bleft = np.concatenate(br_left)

    for _ in range(48):  # brackets shrink from 2**-12 to ~1e-18
        mid = 0.5 * (ba + bb)
        same = (scores(bj, mid) >= 0.0) == bleft
        ba = np.where(same, mid, ba)
        bb = np.where(same, bb, mid)
    cuts = 0.5 * (ba + bb)

    # assemble pieces: cut points per step, alternating signs from the left
    order = np.lexsort((cuts, bj))
    bj_s, cuts_s = bj[order], cuts[order]
    counts = np.zeros(n - 1, dtype=np.int64)
    idx = (bj_s - 1.0).astype(np.int64)
    np.add.at(counts, idx, 1)
    offsets = np.concatenate([[0], np.cumsum(counts)])

    piece_a, piece_b, piece_pos, piece_step = [], [], [], []
    for t in range(n - 1):
        c = cuts_s[offsets[t] : offsets[t + 1]]
        bndry = np.concatenate([[0.0], c, [1.0]])
        pos = first_pos[t]
        for a, b in zip(bndry[:-1], bndry[1:]):
            piece_a.append(a)
            piece_b.append(b)
            piece_pos.append(pos)
            piece_step.append(t)
            pos = not pos
    pa = np.array(piece_a)
    pb = np.array(piece_b)
    ppos = np.array(piece_pos, dtype=bool)
    pstep = np.array(piece_step, dtype=np.int64)

    half = 0.5 * (pb - pa)
    midp = 0.5 * (pa + pb)
    xq = midp[:, None] + half[:, None] * _GL_NODES[None, :]
    eq = np.asarray(dgp.eta(xq.ravel()), dtype=np.float64).reshape(xq.shape)
    integrand = np.where(ppos[:, None], 1.0 - eq, eq)
    piece_int = half * (integrand @ _GL_WEIGHTS)
    acc = np.zeros(n - 1)
    np.add.at(acc, pstep, piece_int)
    risks[1:] = acc
    return risks


def _risk_table_2d(dgp: BayesRiskDGP, sched: EstimatorSchedule, n: int) -> np.ndarray:
    # tensor Simpson on the discontinuous loss integrand; accuracy ~1e-4 near
    # the boundary, adequate for decay diagnostics (identity checks are exact
    # by construction regardless of this table's accuracy)
    x, w = _simpson_nodes(_PANELS_2D)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    eta_s = np.asarray(dgp.eta(pts), dtype=np.float64)
    coord = _coord(pts)
    risks = np.empty(n)
    w2 = np.outer(w, w).ravel()
    risks[0] = float(w2 @ (1.0 - eta_s))
    for j in range(1, n):
        etah = np.clip(eta_s + float(sched.amplitude(j)) * _profile(float(j), coord), 0.0, 1.0)
        integrand = np.where(etah >= 0.5, 1.0 - eta_s, eta_s)
        risks[j] = float(w2 @ integrand)
    return risks


@dataclass
class BayesRiskRun:
    """Decomposition of the sequential risk estimate along dyadic prefixes."""

    prefix_ns: np.ndarray
    r_hat: np.ndarray
    martingale_part: np.ndarray
    remainder_avg: np.ndarray
    remainder_step: np.ndarray  # per-step excess risk at each prefix step
    r_star: float
    identity_residual: float


class BayesRiskExperiment:
    """Precomputed schedule table + sampler for the sequential risk estimator.

    Building the table costs one quadrature per step; reuse the instance when
    running many replications of the same (dgp, schedule, n).
    """

    def __init__(self, dgp: BayesRiskDGP, schedule: EstimatorSchedule, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.dgp = dgp
        self.schedule = schedule
        self.n = int(n)
        if dgp.dim == 1:
            self.risks = _risk_table_1d(dgp, schedule, self.n)
        else:
            self.risks = _risk_table_2d(dgp, schedule, self.n)
        self.excess = self.risks - dgp.bayes_risk

    def run(self, seed: Seed) -> BayesRiskRun:
        n, dgp, sched = self.n, self.dgp, self.schedule
        rng = make_rng(seed)
        X = rng.random(n) if dgp.dim == 1 else rng.random((n, dgp.dim))
        eta_x = np.asarray(dgp.eta(X), dtype=np.float64)
        Y = np.where(rng.random(n) < eta_x, 1.0, -1.0)

        pred = np.ones(n)
        if n > 1:
            j = np.arange(1, n, dtype=np.float64)
            etah = np.clip(
                eta_x[1:] + sched.amplitude(j) * _profile(j, _coord(X)[1:]), 0.0, 1.0
            )
            pred[1:] = np.where(2.0 * etah - 1.0 >= 0.0, 1.0, -1.0)
        loss = (Y != pred).astype(np.float64)

        ns = _dyadic_prefixes(n)
        csum_loss = np.cumsum(loss)
        csum_mart = np.cumsum(loss - self.risks)
        csum_rem = np.cumsum(self.excess)
        r_hat = csum_loss[ns - 1] / ns
        mart = csum_mart[ns - 1] / ns
        rem = csum_rem[ns - 1] / ns
        residual = float(np.max(np.abs(r_hat - dgp.bayes_risk - mart - rem)))
        return BayesRiskRun(
            prefix_ns=ns,
            r_hat=r_hat,
            martingale_part=mart,
            remainder_avg=rem,
            remainder_step=self.excess[ns - 1],
            r_star=float(dgp.bayes_risk),
            identity_residual=residual,
        )


def run_bayes_risk(
    dgp: BayesRiskDGP, sched: EstimatorSchedule, n: int, seed: Seed
) -> BayesRiskRun:
    """One run of the sequential risk estimator; see :class:`BayesRiskExperiment`."""
    return BayesRiskExperiment(dgp, sched, n).run(seed)


def azuma_bound(n: int, diff_bound: float, conf: float) -> float:
    """Two-sided bounded-differences deviation level for a martingale mean.

    For a mean of n martingale increments each bounded by ``diff_bound`` in
    absolute value, ``pr(|mean| > diff_bound * sqrt(2*ln(2/conf)/n)) <= conf``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not diff_bound > 0:
        raise ValueError("diff_bound must be > 0")
    if not 0.0 < conf < 1.0:
        raise ValueError("conf must lie in (0, 1)")
    return diff_bound * math.sqrt(2.0 * math.log(2.0 / conf) / n)


# ---------------------------------------------------------------------------
# Sequential one-step estimation of a mean outcome under missingness at random
# ---------------------------------------------------------------------------


@dataclass
class MarDGP:
    """Missing-at-random data source on X ~ Uniform[0,1]^dim.

    ``g(x)`` is pr(R=1 | X=x), bounded below by ``g_floor``; ``q_bar(x)`` is
    E(Y | R=1, X=x) with Y drawn Bernoulli(q_bar(x)) independently of R given
    X.  ``psi_true = E[q_bar(X)]`` is computed by quadrature at construction
    unless supplied.
    """

    g: Callable[[np.ndarray], np.ndarray]
    q_bar: Callable[[np.ndarray], np.ndarray]
    g_floor: float
    dim: int = 1
    psi_true: float | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if not 0.0 < self.g_floor <= 1.0:
            raise ValueError("g_floor must lie in (0, 1]")
        probe = _X1 if self.dim == 1 else np.random.default_rng(0).random((256, 2))
        gv = np.asarray(self.g(probe), dtype=np.float64)
        if gv.min() < self.g_floor - 1e-12 or gv.max() > 1.0 + 1e-12:
            raise ValueError("g must map into [g_floor, 1]")
        qv = np.asarray(self.q_bar(probe), dtype=np.float64)
        if qv.min() < 0.0 or qv.max() > 1.0:
            raise ValueError("q_bar must map into [0, 1]")
        if self.psi_true is None:
            self.psi_true = _integrate_unit(self.q_bar, self.dim)


@dataclass(frozen=True)
class NuisanceSchedule:
    """Nuisance streams: truth plus clipped decaying cosine perturbations.

    At step j the amplitudes are ``perturb_scale_* * max(j, 1)**-rate_*``;
    estimated propensities stay in [g_floor/2, 1] and estimated regressions
    in [0, 1] via clipping.
    """

    rate_g: float
    rate_q: float
    perturb_scale_g: float = 0.0
    perturb_scale_q: float = 0.0

    def __post_init__(self):
        if not (self.rate_g > 0 and self.rate_q > 0):
            raise ValueError("rates must be > 0")
        if self.perturb_scale_g < 0 or self.perturb_scale_q < 0:
            raise ValueError("perturbation scales must be >= 0")

    def amp_g(self, j) -> np.ndarray:
        j = np.maximum(np.asarray(j, dtype=np.float64), 1.0)
        return self.perturb_scale_g * j**-self.rate_g

    def amp_q(self, j) -> np.ndarray:
        j = np.maximum(np.asarray(j, dtype=np.float64), 1.0)
        return self.perturb_scale_q * j**-self.rate_q


@dataclass
class MarMeanRun:
    """Decomposition of the sequential one-step estimate along dyadic prefixes."""

    prefix_ns: np.ndarray
    psi_hat: np.ndarray
    martingale_part: np.ndarray
    remainder_avg: np.ndarray
    remainder_step: np.ndarray
    psi_true: float
    identity_residual: float


class MarMeanExperiment:
    """Precomputed nuisance-schedule tables + sampler for the one-step estimator.

    Per step j the table holds the plug-in mean, the conditional mean of the
    correction term, the exact first-order remainder

        rem_j = plug_in_j + E[D_j(Z)] - psi_true
              = integral of (qhat_j - q_bar) * (ghat_j - g) / ghat_j,

    and the L2 nuisance errors used by the product (Cauchy-Schwarz) bound.
    """

    def __init__(self, dgp: MarDGP, schedule: NuisanceSchedule, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        if dgp.dim != 1:
            raise ValueError("schedule tables are implemented for dim = 1")
        self.dgp = dgp
        self.schedule = schedule
        self.n = int(n)

        xs, w = _X1, _W1
        g_s = np.asarray(dgp.g(xs), dtype=np.float64)
        q_s = np.asarray(dgp.q_bar(xs), dtype=np.float64)
        plug_in = np.empty(n)
        e_d = np.empty(n)
        rem = np.empty(n)
        l2_g = np.empty(n)
        l2_q = np.empty(n)
        for lo in range(0, n, 256):
            block = np.arange(lo, min(lo + 256, n), dtype=np.float64)
            prof = _profile(block[:, None], xs[None, :])
            ghat = np.clip(
                g_s[None, :] + schedule.amp_g(block)[:, None] * prof,
                dgp.g_floor / 2.0,
                1.0,
            )
            qhat = np.clip(
                q_s[None, :] + schedule.amp_q(block)[:, None] * prof, 0.0, 1.0
            )
            sl = slice(lo, lo + len(block))
            plug_in[sl] = qhat @ w
            e_d[sl] = (g_s[None, :] * (q_s[None, :] - qhat) / ghat) @ w
            rem[sl] = ((qhat - q_s[None, :]) * (ghat - g_s[None, :]) / ghat) @ w
            l2_g[sl] = np.sqrt((ghat - g_s[None, :]) ** 2 @ w)
            l2_q[sl] = np.sqrt((qhat - q_s[None, :]) ** 2 @ w)
        self.plug_in = plug_in
        self.cond_mean_correction = e_d
        self.remainders = rem
        self.l2_g = l2_g
        self.l2_q = l2_q

    def cauchy_schwarz_bound(self) -> np.ndarray:
        """Per-step product bound ``g_floor**-1 * ||ghat - g||_2 * ||qhat - q_bar||_2``."""
        return self.l2_g * self.l2_q / self.dgp.g_floor

    def run(self, seed: Seed) -> MarMeanRun:
        n, dgp, sched = self.n, self.dgp, self.schedule
        rng = make_rng(seed)
        X = rng.random(n)
        g_x = np.asarray(dgp.g(X), dtype=np.float64)
        q_x = np.asarray(dgp.q_bar(X), dtype=np.float64)
        R = (rng.random(n) < g_x).astype(np.float64)
        Y = (rng.random(n) < q_x).astype(np.float64)  # drawn for all, observed as R*Y

        j = np.arange(n, dtype=np.float64)
        prof = _profile(j, X)
        ghat_x = np.clip(g_x + sched.amp_g(j) * prof, dgp.g_floor / 2.0, 1.0)
        qhat_x = np.clip(q_x + sched.amp_q(j) * prof, 0.0, 1.0)
        correction = R * (Y - qhat_x) / ghat_x + qhat_x - self.plug_in

        ns = _dyadic_prefixes(n)
        csum_est = np.cumsum(self.plug_in + correction)
        csum_mart = np.cumsum(correction - self.cond_mean_correction)
        csum_rem = np.cumsum(self.remainders)
        psi_hat = csum_est[ns - 1] / ns
        mart = csum_mart[ns - 1] / ns
        rem = csum_rem[ns - 1] / ns
        residual = float(np.max(np.abs(psi_hat - dgp.psi_true - mart - rem)))
        return MarMeanRun(
            prefix_ns=ns,
            psi_hat=psi_hat,
            martingale_part=mart,
            remainder_avg=rem,
            remainder_step=self.remainders[ns - 1],
            psi_true=float(dgp.psi_true),
            identity_residual=residual,
        )


def run_mar_mean(
    dgp: MarDGP, sched: NuisanceSchedule, n: int, seed: Seed
) -> MarMeanRun:
    """One run of the sequential one-step estimator; see :class:`MarMeanExperiment`."""
    return MarMeanExperiment(dgp, sched, n).run(seed)


# ---------------------------------------------------------------------------
# Canonical smooth data sources used across demos and tests
# ---------------------------------------------------------------------------


def sine_bayes_dgp(amplitude: float = 0.4) -> BayesRiskDGP:
    """eta(x) = 0.5 + amplitude * sin(2*pi*x); optimal risk 0.5 - 2*amplitude/pi."""
    if not 0.0 < amplitude <= 0.5:
        raise ValueError("amplitude must lie in (0, 0.5]")
    return BayesRiskDGP(
        eta=lambda x: 0.5 + amplitude * np.sin(2.0 * np.pi * np.asarray(x)), dim=1
    )


def smooth_mar_dgp() -> MarDGP:
    """g(x) = 0.6 + 0.2*cos(2*pi*x) >= 0.4, q_bar(x) = 0.5 + 0.3*sin(2*pi*x).

    The declared floor 0.25 leaves room for perturbations up to 0.15 while
    keeping every estimated propensity at or above the floor, so the product
    bound with constant 1/g_floor is rigorous for the canonical schedules.
    """
    return MarDGP(
        g=lambda x: 0.6 + 0.2 * np.cos(2.0 * np.pi * np.asarray(x)),
        q_bar=lambda x: 0.5 + 0.3 * np.sin(2.0 * np.pi * np.asarray(x)),
        g_floor=0.25,
        dim=1,
    )
