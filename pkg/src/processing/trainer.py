"""Full-batch Adam training with early stopping on validation RMSE."""

from typing import Callable, Optional, Tuple

import numpy as np
from loguru import logger

from ..config.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPS, LOG_EVERY
from ..exceptions import ModelError, TrainingError
from ..models.kan import KanModel, TrainConfig, TrainHistory
from .kan import activation_outputs, build_design, objective

ProgressCallback = Callable[[int, float, float], None]


class _Adam:
    """Adam state over a flat parameter vector."""

    def __init__(self, size: int, learning_rate: float) -> None:
        self.learning_rate = learning_rate
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.t += 1
        self.m = ADAM_BETA1 * self.m + (1.0 - ADAM_BETA1) * grad
        self.v = ADAM_BETA2 * self.v + (1.0 - ADAM_BETA2) * grad * grad
        m_hat = self.m / (1.0 - ADAM_BETA1 ** self.t)
        v_hat = self.v / (1.0 - ADAM_BETA2 ** self.t)
        return params - self.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


class _ParameterLayout:
    """Packs coefficients, base weights and bias into one vector and back."""

    def __init__(self, model: KanModel) -> None:
        self.sizes = [a.coefficients.size for a in model.activations]
        self.offsets = np.cumsum([0] + self.sizes)
        self.n_activations = len(self.sizes)

    @property
    def size(self) -> int:
        return int(self.offsets[-1]) + self.n_activations + 1

    def pack(self, coefficients, base_weights, bias) -> np.ndarray:
        parts = list(coefficients) + [np.asarray(base_weights, dtype=float), np.array([bias])]
        return np.concatenate(parts)

    def unpack(self, flat: np.ndarray):
        coefficients = [flat[self.offsets[q]:self.offsets[q + 1]] for q in range(self.n_activations)]
        start = int(self.offsets[-1])
        base_weights = flat[start:start + self.n_activations]
        return coefficients, base_weights, float(flat[-1])


def _rmse(residual: np.ndarray) -> float:
    return float(np.sqrt(np.mean(residual * residual)))


def train(
    model: KanModel,
    train_set: Tuple[np.ndarray, np.ndarray],
    val_set: Tuple[np.ndarray, np.ndarray],
    cfg: TrainConfig,
    progress: Optional[ProgressCallback] = None,
) -> Tuple[KanModel, TrainHistory]:
    """
    Optimise all model parameters with full-batch Adam.

    Each epoch records the training loss and validation RMSE of the current
    parameters, then takes one step. Training stops after cfg.epochs or when
    validation RMSE has not improved for cfg.early_stop_patience epochs; the
    parameters of the best validation epoch are returned.

    Args:
        model: Initial model (not modified)
        train_set: (features, targets) used for the loss
        val_set: (features, targets) used for early stopping
        cfg: Training configuration
        progress: Optional callback(epoch, train_loss, val_rmse)

    Returns:
        Tuple of (best model, history)

    Raises:
        TrainingError: Loss or parameters become non-finite
        ModelError: Empty train or validation set
    """
    x_train, y_train = (np.asarray(a, dtype=float) for a in train_set)
    x_val, y_val = (np.asarray(a, dtype=float) for a in val_set)
    if y_train.size == 0 or y_val.size == 0:
        raise ModelError("Training needs non-empty train and validation sets")

    design_train = build_design(model, x_train)
    design_val = build_design(model, x_val)
    layout = _ParameterLayout(model)
    params = layout.pack(
        [a.coefficients for a in model.activations],
        [a.base_weight for a in model.activations],
        model.output_bias,
    )
    optimizer = _Adam(layout.size, cfg.learning_rate)
    history = TrainHistory()
    best_params, best_rmse = params.copy(), np.inf

    logger.info(
        f"Training {len(model.activations)} activations on {y_train.size} samples "
        f"(epochs={cfg.epochs}, lr={cfg.learning_rate}, seed={cfg.seed})"
    )
    for epoch in range(cfg.epochs):
        coefficients, base_weights, bias = layout.unpack(params)
        value, grads = objective(coefficients, base_weights, bias, design_train, y_train, cfg)
        if not np.isfinite(value):
            raise TrainingError(f"Training diverged at epoch {epoch}: loss is {value}", epoch=epoch)

        val_pred = bias + activation_outputs(coefficients, base_weights, design_val).sum(axis=1)
        val_rmse = _rmse(val_pred - y_val)
        history.train_loss.append(value)
        history.val_rmse.append(val_rmse)
        if val_rmse < best_rmse:
            best_rmse, best_params = val_rmse, params.copy()
            history.best_epoch = epoch

        if progress is not None:
            progress(epoch, value, val_rmse)
        if epoch % LOG_EVERY == 0:
            logger.debug(f"epoch {epoch}: loss={value:.6f} val_rmse={val_rmse:.6f}")
        if epoch - history.best_epoch >= cfg.early_stop_patience:
            history.stopped_early = True
            logger.info(f"Early stop at epoch {epoch}; best epoch {history.best_epoch}")
            break

        grad = layout.pack(grads.coefficients, grads.base_weights, grads.bias)
        params = optimizer.step(params, grad)
        if not np.all(np.isfinite(params)):
            raise TrainingError(f"Training diverged at epoch {epoch}: non-finite parameters", epoch=epoch)

    coefficients, base_weights, bias = layout.unpack(best_params)
    trained = model.copy()
    for act, coef, weight in zip(trained.activations, coefficients, base_weights):
        act.coefficients = coef.copy()
        act.base_weight = float(weight)
    trained.output_bias = bias
    logger.info(f"Best validation RMSE {best_rmse:.6f} at epoch {history.best_epoch}")
    return trained, history
