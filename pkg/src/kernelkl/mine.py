"""Neural baseline: a one-hidden-layer network trained on the same bound.

The witness T is parameterized as t(z) = v . tanh(W z + b) + c and trained by
minibatch SGD to maximize mean_P[t] - log mean_Q[exp(t)], with manual
backpropagation (the softmax over Q-scores doubles as the gradient weights of
the log-mean-exp term).  Parameters are unconstrained; a run that produces
non-finite values raises instead of clamping.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import softmax

from .errors import InvalidInputError
from .estimator import EstimateResult, derive_seed
from .optimize import OptimizerConfig, _Loop

_INIT_TAG = 11
_LOOP_TAG = 12


@dataclass(frozen=True)
class MlpParams:
    """Weights of the affine -> tanh -> affine scalar map."""

    W: np.ndarray  # (hidden, input_dim)
    b: np.ndarray  # (hidden,)
    v: np.ndarray  # (hidden,)
    c: float

    @property
    def hidden_width(self):
        return self.W.shape[0]

    @property
    def input_dim(self):
        return self.W.shape[1]


@dataclass(frozen=True)
class MineConfig:
    hidden_width: int = 64
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig(step_size=0.2, penalty_weight=0.0))

    def __post_init__(self):
        if self.hidden_width < 1:
            raise InvalidInputError("hidden_width must be >= 1")


def init_params(input_dim, hidden_width, seed=0):
    """Seeded uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer."""
    rng = np.random.default_rng(seed)
    lim1 = 1.0 / np.sqrt(input_dim)
    lim2 = 1.0 / np.sqrt(hidden_width)
    return MlpParams(
        W=rng.uniform(-lim1, lim1, size=(hidden_width, input_dim)),
        b=rng.uniform(-lim1, lim1, size=hidden_width),
        v=rng.uniform(-lim2, lim2, size=hidden_width),
        c=float(rng.uniform(-lim2, lim2)),
    )


def pack_params(params):
    return np.concatenate([params.W.ravel(), params.b, params.v, [params.c]])


def unpack_params(vec, input_dim, hidden_width):
    h, d = hidden_width, input_dim
    W = vec[: h * d].reshape(h, d)
    b = vec[h * d : h * d + h]
    v = vec[h * d + h : h * d + 2 * h]
    return MlpParams(W=W, b=b, v=v, c=float(vec[-1]))


def mine_forward(params, z):
    """Evaluate t(z) for one D-vector or row-wise for an n x D matrix."""
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    if single:
        z = z[None, :]
    if z.shape[1] != params.input_dim:
        raise InvalidInputError(f"input dimension {z.shape[1]} does not match network ({params.input_dim})")
    out = np.tanh(z @ params.W.T + params.b) @ params.v + params.c
    return float(out[0]) if single else out


def _weighted_score_gradient(params, Z, u):
    """Gradient of sum_i u_i t(z_i) with respect to the packed parameters."""
    A = np.tanh(Z @ params.W.T + params.b)
    S = (u[:, None] * (1.0 - A**2)) * params.v
    gW = S.T @ Z
    gb = S.sum(axis=0)
    gv = A.T @ u
    gc = float(u.sum())
    return np.concatenate([gW.ravel(), gb, gv, [gc]])


def dv_objective_and_gradient(params, Xb, Yb):
    """Bound value mean_P[t] - log mean_Q[exp(t)] and its parameter gradient."""
    tx = mine_forward(params, Xb)
    ty = mine_forward(params, Yb)
    mx = float(np.max(ty))
    value = float(np.mean(tx)) - (mx + float(np.log(np.mean(np.exp(ty - mx)))))
    w = softmax(ty)
    grad = _weighted_score_gradient(params, Xb, np.full(Xb.shape[0], 1.0 / Xb.shape[0]))
    grad -= _weighted_score_gradient(params, Yb, w)
    return value, grad


class _MineLoop(_Loop):
    def __init__(self, X, Y, input_dim, hidden_width, cfg):
        super().__init__(X.shape[0], Y.shape[0], cfg)
        self.X = X
        self.Y = Y
        self.input_dim = input_dim
        self.hidden_width = hidden_width

    def _unpack(self, vec):
        return unpack_params(vec, self.input_dim, self.hidden_width)

    def minibatch_step(self, vec, ix, iy):
        Xb = self.X if ix is None else self.X[ix]
        Yb = self.Y if iy is None else self.Y[iy]
        # ascent on the bound; the tracked value is the incoming iterate's,
        # which the gradient computation produces for free
        value, grad = dv_objective_and_gradient(self._unpack(vec), Xb, Yb)
        vec = vec + self.cfg.step_size * grad
        return vec, value

    def full_evaluate(self, vec):
        value, _ = dv_objective_and_gradient(self._unpack(vec), self.X, self.Y)
        return value


def mine_estimate(X, Y, cfg=None):
    """Estimate KL(P || Q) with the neural witness; same stopping rule as the kernel path."""
    cfg = cfg or MineConfig()
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[0] < 2 or Y.shape[0] < 2:
        raise InvalidInputError("need at least 2 samples on each side")
    if X.shape[1] != Y.shape[1]:
        raise InvalidInputError(f"X has dimension {X.shape[1]} but Y has dimension {Y.shape[1]}")
    seed = cfg.optimizer.seed
    params0 = init_params(X.shape[1], cfg.hidden_width, seed=derive_seed(seed, _INIT_TAG))
    loop = _MineLoop(X, Y, X.shape[1], cfg.hidden_width, cfg.optimizer.with_seed(derive_seed(seed, _LOOP_TAG)))
    _, trace = loop.run(pack_params(params0))
    return EstimateResult(
        kl_estimate=trace.estimate,
        trace=trace,
        config=cfg,
        sample_sizes=(X.shape[0], Y.shape[0]),
        bandwidth=float("nan"),
    )
