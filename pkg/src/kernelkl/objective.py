"""Donsker-Varadhan loss in dual (Gram-row) and primal (feature) form.

Both parameterizations score a witness function T against samples from P and
Q through the same functional

    g = log( mean_j exp(T(y_j)) ) - mean_i T(x_i)

whose negative is the KL lower bound being maximized.  In the dual form
T(z) = alpha . K[z, :]; in the primal form T(z) = beta . phi(z).  All
exponentials are routed through a max-shifted log-mean-exp so large scores
never overflow.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import softmax

from .errors import InvalidInputError


@dataclass(frozen=True)
class DualWeights:
    """Coefficients over the pooled Gram rows, with alpha' K alpha <= norm_budget^2."""

    alpha: np.ndarray
    norm_budget: float


@dataclass(frozen=True)
class PrimalWeights:
    """Coefficients over feature coordinates, with ||beta|| <= norm_budget."""

    beta: np.ndarray
    norm_budget: float


@dataclass(frozen=True)
class ObjectiveValue:
    """Loss g to minimize and the divergence estimate -g it implies."""

    g: float

    @property
    def kl_estimate(self):
        return -self.g


def log_mean_exp(values):
    """log((1/m) sum exp(v_i)) via max-shift; exact for constant vectors."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise InvalidInputError("log_mean_exp of an empty vector")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("log_mean_exp requires finite values")
    mx = float(np.max(values))
    return mx + float(np.log(np.mean(np.exp(values - mx))))


def _check_dual_dims(alpha, K):
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (K.size,):
        raise InvalidInputError(f"alpha has shape {alpha.shape}, expected ({K.size},)")
    return alpha


def dual_objective(alpha, K):
    """Evaluate g at alpha for the Gram parameterization T(z) = alpha . K[z, :]."""
    alpha = _check_dual_dims(alpha, K)
    scores = K.entries @ alpha
    g = log_mean_exp(scores[K.n :]) - float(np.mean(scores[: K.n]))
    return ObjectiveValue(g=g)


def dual_gradient(alpha, K, penalty_weight=0.0):
    """Gradient of g(alpha) + penalty_weight * alpha' K alpha.

    Written in softmax form: the log-mean-exp term differentiates to a
    softmax-weighted average of the Q-rows of K, which is algebraically equal
    to the per-coordinate quotient form but immune to overflow.
    """
    alpha = _check_dual_dims(alpha, K)
    Kalpha = K.entries @ alpha
    w = softmax(Kalpha[K.n :])
    grad = K.entries[K.n :].T @ w - np.mean(K.entries[: K.n], axis=0)
    if penalty_weight:
        grad = grad + 2.0 * penalty_weight * Kalpha
    return grad


def _check_primal_dims(beta, PhiX, PhiY):
    beta = np.asarray(beta, dtype=float)
    if PhiX.ndim != 2 or PhiY.ndim != 2 or PhiX.shape[1] != PhiY.shape[1]:
        raise InvalidInputError("feature matrices must share one feature dimension")
    if beta.shape != (PhiX.shape[1],):
        raise InvalidInputError(f"beta has shape {beta.shape}, expected ({PhiX.shape[1]},)")
    return beta


def primal_objective(beta, PhiX, PhiY):
    """Evaluate g at beta for the feature parameterization T(z) = beta . phi(z)."""
    beta = _check_primal_dims(beta, PhiX, PhiY)
    g = log_mean_exp(PhiY @ beta) - float(np.mean(PhiX @ beta))
    return ObjectiveValue(g=g)


def primal_gradient(beta, PhiX, PhiY, penalty_weight=0.0):
    """Gradient of g(beta) + penalty_weight * ||beta||^2 in softmax form."""
    beta = _check_primal_dims(beta, PhiX, PhiY)
    w = softmax(PhiY @ beta)
    grad = PhiY.T @ w - np.mean(PhiX, axis=0)
    if penalty_weight:
        grad = grad + 2.0 * penalty_weight * beta
    return grad
