"""Projected minibatch SGD over the Donsker-Varadhan loss.

One loop serves both parameterizations: sample a minibatch from each sample
set, take a gradient ascent step on the divergence estimate (equivalently a
descent step on the penalized loss), rescale back into the norm-budget ball,
and stop once a window-smoothed sequence of divergence values stalls.

The stopping rule compares successive values of a moving average over
``convergence_window`` minibatch evaluations and requires the difference to
stay below ``gamma`` for a full window of consecutive steps; in the
full-batch limit this reduces to comparing successive exact values.  The
tracked value is the incoming iterate's divergence on the fresh minibatch
(available for free from the gradient computation); the returned scalar is
the mean over the final window rather than the last iterate, which damps
minibatch noise.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from .errors import InvalidInputError, NumericalFailureError
from .objective import DualWeights, PrimalWeights, log_mean_exp

DEFAULT_NORM_BUDGET = 10.0


@dataclass(frozen=True)
class OptimizerConfig:
    step_size: float = 0.5
    max_iter: int = 500
    gamma: float = 1e-5
    minibatch: int = 512
    penalty_weight: float = 1e-3
    norm_budget: float = DEFAULT_NORM_BUDGET
    seed: int = 0
    convergence_window: int = 10
    full_data_eval: bool = False  # evaluate the tracked divergence on all samples each step

    def __post_init__(self):
        if self.step_size <= 0 or self.max_iter <= 0 or self.gamma <= 0:
            raise InvalidInputError("step_size, max_iter, and gamma must be positive")
        if self.minibatch <= 0 or self.convergence_window <= 0 or self.norm_budget <= 0:
            raise InvalidInputError("minibatch, convergence_window, and norm_budget must be positive")
        if self.penalty_weight < 0:
            raise InvalidInputError("penalty_weight must be nonnegative")

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass(frozen=True)
class OptimizationTrace:
    """Per-iteration divergence values plus how and when the loop exited."""

    kl_values: np.ndarray
    converged: bool
    iterations: int
    estimate: float = field(default=float("nan"))


def project_dual(alpha, K, norm_budget):
    """Rescale alpha radially so alpha' K alpha <= norm_budget^2.

    Radial rescaling, not the exact metric projection; feasible inputs pass
    through unchanged.
    """
    q = float(alpha @ (K.entries @ alpha))
    if q > norm_budget**2:
        alpha = alpha * (norm_budget / np.sqrt(q))
    return alpha


def project_primal(beta, norm_budget):
    """Rescale beta radially so ||beta|| <= norm_budget."""
    nrm = float(np.linalg.norm(beta))
    if nrm > norm_budget:
        beta = beta * (norm_budget / nrm)
    return beta


class _Loop:
    """Shared SGD loop; subclasses supply the per-minibatch update step.

    Minibatches are sampled with replacement (O(k) per draw); the full-batch
    path reuses the whole arrays without copying.
    """

    def __init__(self, n, m, cfg):
        self.n = n
        self.m = m
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.batch = min(cfg.minibatch, n, m)
        self.full_batch = self.batch >= n and self.batch >= m

    def sample_batch(self):
        if self.full_batch:
            return None, None
        ix = self.rng.integers(0, self.n, size=self.batch)
        iy = self.rng.integers(0, self.m, size=self.batch)
        return ix, iy

    def run(self, weights):
        cfg = self.cfg
        window = cfg.convergence_window
        kl_values = []
        smoothed = []
        stall = 0
        converged = False
        it = 0
        for it in range(1, cfg.max_iter + 1):
            ix, iy = self.sample_batch()
            weights, kl = self.minibatch_step(weights, ix, iy)
            if cfg.full_data_eval:
                kl = self.full_evaluate(weights)
            if not np.isfinite(kl):
                raise NumericalFailureError(f"non-finite objective at iteration {it}", iteration=it)
            kl_values.append(kl)
            smoothed.append(float(np.mean(kl_values[-window:])))
            if len(smoothed) >= 2 and abs(smoothed[-1] - smoothed[-2]) <= cfg.gamma:
                stall += 1
            else:
                stall = 0
            if stall >= window:
                converged = True
                break
        kl_values = np.asarray(kl_values)
        estimate = float(np.mean(kl_values[-window:]))
        trace = OptimizationTrace(kl_values=kl_values, converged=converged, iterations=it, estimate=estimate)
        return weights, trace


def _softmax_and_log_mean_exp(scores):
    """One exp pass yields both the softmax weights and log-mean-exp of scores."""
    mx = float(np.max(scores))
    e = np.exp(scores - mx)
    total = float(e.sum())
    return e / total, mx + float(np.log(total / scores.size))


class _DualLoop(_Loop):
    def __init__(self, K, cfg):
        super().__init__(K.n, K.m, cfg)
        self.K = K

    def minibatch_step(self, alpha, ix, iy):
        Kx = self.K.entries[: self.K.n] if ix is None else self.K.entries[ix]
        Ky = self.K.entries[self.K.n :] if iy is None else self.K.entries[self.K.n + iy]
        w, lme = _softmax_and_log_mean_exp(Ky @ alpha)
        mean_kx = Kx.mean(axis=0)
        # divergence of the incoming iterate on this minibatch, from quantities
        # the gradient needs anyway (the update itself is unchanged)
        kl = float(mean_kx @ alpha) - lme
        grad = Ky.T @ w - mean_kx
        if self.cfg.penalty_weight:
            grad = grad + 2.0 * self.cfg.penalty_weight * (self.K.entries @ alpha)
        alpha = project_dual(alpha - self.cfg.step_size * grad, self.K, self.cfg.norm_budget)
        return alpha, kl

    def full_evaluate(self, alpha):
        scores = self.K.entries @ alpha
        return float(np.mean(scores[: self.K.n])) - log_mean_exp(scores[self.K.n :])


class _PrimalLoop(_Loop):
    def __init__(self, PhiX, PhiY, cfg):
        super().__init__(PhiX.shape[0], PhiY.shape[0], cfg)
        self.PhiX = PhiX
        self.PhiY = PhiY

    def minibatch_step(self, beta, ix, iy):
        Px = self.PhiX if ix is None else self.PhiX[ix]
        Py = self.PhiY if iy is None else self.PhiY[iy]
        w, lme = _softmax_and_log_mean_exp(Py @ beta)
        mean_px = Px.mean(axis=0)
        kl = float(mean_px @ beta) - lme
        grad = Py.T @ w - mean_px
        if self.cfg.penalty_weight:
            grad = grad + 2.0 * self.cfg.penalty_weight * beta
        beta = project_primal(beta - self.cfg.step_size * grad, self.cfg.norm_budget)
        return beta, kl

    def full_evaluate(self, beta):
        return float(np.mean(self.PhiX @ beta)) - log_mean_exp(self.PhiY @ beta)


def run_dual(K, cfg):
    """Optimize the Gram parameterization; returns (DualWeights, OptimizationTrace).

    Initialization is alpha = 0 (feasible, divergence 0); deterministic given
    cfg.seed.
    """
    alpha0 = np.zeros(K.size)
    loop = _DualLoop(K, cfg)
    alpha, trace = loop.run(alpha0)
    return DualWeights(alpha=alpha, norm_budget=cfg.norm_budget), trace


def run_primal(PhiX, PhiY, cfg):
    """Optimize the feature parameterization; per-step cost is O(minibatch * d)."""
    PhiX = np.asarray(PhiX)
    PhiY = np.asarray(PhiY)
    if PhiX.ndim != 2 or PhiY.ndim != 2 or PhiX.shape[1] != PhiY.shape[1]:
        raise InvalidInputError("feature matrices must share one feature dimension")
    # beta matches the feature dtype so float32 inputs avoid per-step upcasts
    beta0 = np.zeros(PhiX.shape[1], dtype=np.result_type(PhiX.dtype, np.float32))
    loop = _PrimalLoop(PhiX, PhiY, cfg)
    beta, trace = loop.run(beta0)
    return PrimalWeights(beta=beta, norm_budget=cfg.norm_budget), trace
