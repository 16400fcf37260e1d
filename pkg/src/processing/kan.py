"""Forward pass, regularised loss and analytic gradients of a one-layer KAN."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import expit

from ..config.constants import INIT_BASE_WEIGHT, INIT_COEF_SCALE
from ..exceptions import ModelError
from ..models.kan import KanModel, SplineActivation, TrainConfig
from .bspline import basis_matrix


def silu(x: np.ndarray) -> np.ndarray:
    """Reference nonlinearity x / (1 + exp(-x))."""
    x = np.asarray(x, dtype=float)
    return x * expit(x)


def eval_activation(activation: SplineActivation, x):
    """psi(x) = sum_i c_i B_i(x) + base_weight * silu(x); scalar in, scalar out."""
    values = np.asarray(x, dtype=float)
    flat = np.atleast_1d(values).ravel()
    out = basis_matrix(flat, activation.grid, activation.degree) @ activation.coefficients
    out = out + activation.base_weight * silu(flat)
    if values.ndim == 0:
        return float(out[0])
    return out.reshape(values.shape)


@dataclass
class Design:
    """Basis matrices per activation and silu values for a fixed input batch."""

    bases: List[np.ndarray]  # each (n, n_coefficients)
    silu: np.ndarray  # (n, D)

    @property
    def n(self) -> int:
        return int(self.silu.shape[0])


@dataclass
class KanGradients:
    """Gradient structure mirroring the model parameters."""

    coefficients: List[np.ndarray]
    base_weights: np.ndarray
    bias: float


def _check_features(model: KanModel, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[None, :]
    if features.ndim != 2 or features.shape[1] != len(model.activations):
        raise ModelError(
            f"Model expects {len(model.activations)} features, got input of shape {features.shape}"
        )
    if not np.all(np.isfinite(features)):
        raise ModelError("Model inputs must be finite")
    return features


def build_design(model: KanModel, features: np.ndarray) -> Design:
    features = _check_features(model, features)
    bases = [
        basis_matrix(features[:, q], act.grid, act.degree)
        for q, act in enumerate(model.activations)
    ]
    return Design(bases=bases, silu=silu(features))


def activation_outputs(
    coefficients: Sequence[np.ndarray], base_weights: np.ndarray, design: Design
) -> np.ndarray:
    """psi_q(u_nq) for every sample and activation: (n, D)."""
    if not coefficients:
        return np.zeros((design.n, 0))
    spline = np.column_stack([B @ c for B, c in zip(design.bases, coefficients)])
    return spline + design.silu * base_weights


def _unpack(model: KanModel) -> Tuple[List[np.ndarray], np.ndarray, float]:
    coefficients = [a.coefficients for a in model.activations]
    base_weights = np.array([a.base_weight for a in model.activations], dtype=float)
    return coefficients, base_weights, float(model.output_bias)


def forward_batch(model: KanModel, features: np.ndarray) -> np.ndarray:
    """y_hat = bias + sum_q psi_q(u_q) for each row."""
    design = build_design(model, features)
    coefficients, base_weights, bias = _unpack(model)
    return bias + activation_outputs(coefficients, base_weights, design).sum(axis=1)


def forward(model: KanModel, features: np.ndarray) -> float:
    """Prediction for one feature vector."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 1:
        raise ModelError(f"forward takes one feature vector, got shape {features.shape}")
    return float(forward_batch(model, features)[0])


def _second_difference_penalty(coefficients: Sequence[np.ndarray]) -> Tuple[float, List[np.ndarray]]:
    """sum of squared second differences and its gradient D2^T (2 D2 c)."""
    total = 0.0
    grads = []
    for c in coefficients:
        d2 = np.diff(c, n=2)
        total += float(d2 @ d2)
        grads.append(2.0 * np.convolve(d2, [1.0, -2.0, 1.0]) if d2.size else np.zeros_like(c))
    return total, grads


def objective(
    coefficients: Sequence[np.ndarray],
    base_weights: np.ndarray,
    bias: float,
    design: Design,
    targets: np.ndarray,
    cfg: TrainConfig,
    with_gradients: bool = True,
) -> Tuple[float, KanGradients | None]:
    """
    MSE + smoothness * sum (second differences)^2 + sparsity * sum_q mean_n |psi_q|.

    Spline-coefficient gradients reuse the forward basis matrices.
    """
    n = design.n
    if n == 0:
        raise ModelError("Loss needs a non-empty batch")
    psi = activation_outputs(coefficients, base_weights, design)
    residual = bias + psi.sum(axis=1) - targets
    mse = float(residual @ residual) / n
    smooth, smooth_grads = _second_difference_penalty(coefficients)
    sparse = float(np.abs(psi).mean(axis=0).sum()) if psi.size else 0.0
    value = mse + cfg.smoothness_weight * smooth + cfg.sparsity_weight * sparse
    if not with_gradients:
        return value, None

    # d loss / d psi_nq: MSE part is shared across q, sparsity part is per q
    d_psi = (2.0 / n) * residual[:, None] + (cfg.sparsity_weight / n) * np.sign(psi)
    coef_grads = [
        B.T @ d_psi[:, q] + cfg.smoothness_weight * smooth_grads[q]
        for q, B in enumerate(design.bases)
    ]
    base_grads = (design.silu * d_psi).sum(axis=0)
    bias_grad = 2.0 * float(residual.mean())
    return value, KanGradients(coefficients=coef_grads, base_weights=base_grads, bias=bias_grad)


def loss(model: KanModel, features: np.ndarray, targets: np.ndarray, cfg: TrainConfig) -> float:
    """Regularised training loss of a model on a batch."""
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        raise ModelError("Loss needs a non-empty batch")
    design = build_design(model, features)
    value, _ = objective(*_unpack(model), design, targets, cfg, with_gradients=False)
    return value


def gradients(model: KanModel, features: np.ndarray, targets: np.ndarray, cfg: TrainConfig) -> KanGradients:
    """Analytic partial derivatives of `loss` for every parameter."""
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        raise ModelError("Gradients need a non-empty batch")
    design = build_design(model, features)
    _, grads = objective(*_unpack(model), design, targets, cfg)
    return grads


def count_parameters(model: KanModel) -> int:
    """Trainable parameters: per activation (coefficients + base weight), plus the bias."""
    return sum(a.parameter_count for a in model.activations) + 1


def headline_parameter_count(model: KanModel) -> int:
    """Parameter count without the output bias (10 cubic activations on 8 intervals -> 120)."""
    return count_parameters(model) - 1


def grid_for_feature(column: np.ndarray, cfg: TrainConfig) -> Tuple[np.ndarray, Tuple[float, float]]:
    """Uniform grid over the quantile range of a scaled training column, widened by the margin."""
    q_lo, q_hi = np.quantile(column, cfg.grid_range_quantiles)
    lo, hi = float(q_lo), float(q_hi)
    width = hi - lo
    if width < 1e-12:
        # constant column: unit half-width around its value
        g_lo, g_hi = lo - 1.0, hi + 1.0
    else:
        g_lo, g_hi = lo - cfg.grid_margin * width, hi + cfg.grid_margin * width
    return np.linspace(g_lo, g_hi, cfg.grid_size + 1), (lo, hi)


def init_model(
    feature_names: Sequence[str], features: np.ndarray, targets: np.ndarray, cfg: TrainConfig
) -> KanModel:
    """
    Fresh model: small uniform spline coefficients, base weight 1, bias = mean target.

    Grids come from the training columns; deterministic under cfg.seed.
    """
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != len(feature_names):
        raise ModelError(
            f"init_model got {len(feature_names)} names for features of shape {features.shape}"
        )
    if features.shape[0] == 0:
        raise ModelError("init_model needs training rows to place grids")
    rng = np.random.default_rng(cfg.seed)
    activations = []
    for q, name in enumerate(feature_names):
        grid, data_range = grid_for_feature(features[:, q], cfg)
        coefficients = rng.uniform(-INIT_COEF_SCALE, INIT_COEF_SCALE, cfg.grid_size + cfg.degree)
        activations.append(
            SplineActivation(
                input_name=name,
                grid=grid,
                degree=cfg.degree,
                coefficients=coefficients,
                base_weight=INIT_BASE_WEIGHT,
                data_range=data_range,
            )
        )
    return KanModel(activations=activations, output_bias=float(np.mean(targets)))
