"""Deterministic fixture trainer: full-batch gradient descent.

The relevance pipeline analyses whatever trained model it is handed; this
trainer exists to produce reproducible subject models, not to compete
with second-order optimizers.  Training is seeded, single-threaded and
bit-deterministic for a given (config, dataset) pair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, InvalidInterval, NonFiniteLoss
from .network import Activation, Layer, MlpModel

LOSS_MSE = "mse"
LOSS_CROSS_ENTROPY = "cross_entropy"


@dataclass(frozen=True)
class TrainConfig:
    hidden_units: int = 2
    hidden_activation: Activation = Activation.TANH
    output_activation: Activation = Activation.LOGISTIC
    loss: str = LOSS_MSE
    learning_rate: float = 0.5
    max_epochs: int = 20_000
    goal_loss: float = 1e-3
    seed: int = 0
    init_scale: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "hidden_activation", Activation(self.hidden_activation))
        object.__setattr__(self, "output_activation", Activation(self.output_activation))
        if self.loss not in (LOSS_MSE, LOSS_CROSS_ENTROPY):
            raise InvalidInterval(f"unknown loss {self.loss!r}")
        if self.loss == LOSS_CROSS_ENTROPY and self.output_activation is not Activation.SOFTMAX:
            raise InvalidInterval("cross-entropy training requires a softmax output layer")
        if self.loss == LOSS_MSE and self.output_activation is not Activation.LOGISTIC:
            raise InvalidInterval("mse training pairs with a logistic output layer")
        if self.hidden_units < 1:
            raise InvalidInterval("hidden_units must be >= 1")


@dataclass(frozen=True)
class TrainResult:
    model: MlpModel
    final_loss: float
    epochs_used: int
    goal_loss: float
    loss_history: tuple[float, ...]

    @property
    def reached_goal(self) -> bool:
        return self.final_loss <= self.goal_loss


def _batch_activation(activation: Activation, z: np.ndarray) -> np.ndarray:
    if activation is Activation.TANH:
        return np.tanh(z)
    if activation is Activation.LOGISTIC:
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        e = np.exp(z[~pos])
        out[~pos] = e / (1.0 + e)
        return out
    if activation is Activation.SOFTMAX:
        e = np.exp(z - z.max(axis=1, keepdims=True))
        return e / e.sum(axis=1, keepdims=True)
    return z


def forward_batch(model: MlpModel, X: np.ndarray) -> np.ndarray:
    """Batched point forward pass (rows are patterns); training/eval path."""
    A = np.asarray(X, dtype=np.float64)
    if A.ndim != 2 or A.shape[1] != model.input_dim:
        raise DimensionMismatch(
            f"batch shape {A.shape} incompatible with input_dim {model.input_dim}"
        )
    for layer in model.layers:
        A = _batch_activation(layer.activation, A @ layer.weights.T + layer.biases)
    return A


def _loss_value(loss: str, outputs: np.ndarray, targets: np.ndarray) -> float:
    if loss == LOSS_MSE:
        return float(np.mean((outputs - targets) ** 2))
    with np.errstate(divide="ignore"):
        logp = np.log(outputs[targets > 0.5])
    return float(-np.sum(logp) / outputs.shape[0])


def _forward_params(params, X):
    """Forward over (weights, biases, activation) triples, keeping activations."""
    acts = [np.asarray(X, dtype=np.float64)]
    for w, b, act in params:
        acts.append(_batch_activation(act, acts[-1] @ w.T + b))
    return acts


def _loss_and_grads(params, X, T, loss):
    """Loss plus analytic gradients for every layer's weights and biases."""
    acts = _forward_params(params, X)
    out = acts[-1]
    value = _loss_value(loss, out, T)

    n, m = T.shape
    if loss == LOSS_MSE:
        dz = (2.0 / (n * m)) * (out - T) * out * (1.0 - out)
    else:
        dz = (out - T) / n
    grads = []
    for i in reversed(range(len(params))):
        grads.append((dz.T @ acts[i], dz.sum(axis=0)))
        if i > 0:
            da = dz @ params[i][0]
            h = acts[i]
            kind = params[i - 1][2]
            if kind is Activation.TANH:
                dz = da * (1.0 - h * h)
            elif kind is Activation.LOGISTIC:
                dz = da * h * (1.0 - h)
            elif kind is Activation.IDENTITY:
                dz = da
            else:
                raise InvalidInterval(f"unsupported hidden activation {kind}")
    grads.reverse()
    return value, grads


def one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    T = np.zeros((len(labels), n_classes))
    T[np.arange(len(labels)), labels] = 1.0
    return T


def train(config: TrainConfig, dataset) -> TrainResult:
    """Full-batch gradient descent to goal_loss or max_epochs.

    Raises NonFiniteLoss (with the offending epoch) if the loss diverges.
    """
    X = dataset.patterns
    if X.shape[0] == 0:
        raise InvalidInterval("dataset is empty")
    n_classes = len(dataset.class_names)
    T = one_hot(dataset.labels, n_classes)

    rng = np.random.default_rng(config.seed)
    s = config.init_scale
    acts = (config.hidden_activation, config.output_activation)
    dims = ((config.hidden_units, X.shape[1]), (n_classes, config.hidden_units))
    weights = [rng.uniform(-s, s, d) for d in dims]
    biases = [np.zeros(d[0]) for d in dims]

    history = []
    epochs_used = 0
    loss_value = float("inf")
    for epoch in range(config.max_epochs + 1):
        params = list(zip(weights, biases, acts))
        loss_value, grads = _loss_and_grads(params, X, T, config.loss)
        if not np.isfinite(loss_value):
            raise NonFiniteLoss(epoch, loss_value)
        history.append(loss_value)
        epochs_used = epoch
        if loss_value <= config.goal_loss or epoch == config.max_epochs:
            break
        for i, (dw, db) in enumerate(grads):
            weights[i] = weights[i] - config.learning_rate * dw
            biases[i] = biases[i] - config.learning_rate * db

    model = MlpModel(
        layers=tuple(
            Layer(weights=w, biases=b, activation=a)
            for w, b, a in zip(weights, biases, acts)
        ),
        class_coding=dataset.class_names,
    )
    return TrainResult(
        model=model,
        final_loss=loss_value,
        epochs_used=epochs_used,
        goal_loss=config.goal_loss,
        loss_history=tuple(history),
    )


def evaluate(model: MlpModel, dataset) -> tuple[float, np.ndarray]:
    """Accuracy plus per-pattern predicted class (argmax, lowest index wins ties)."""
    outputs = forward_batch(model, dataset.patterns)
    predictions = np.argmax(outputs, axis=1)
    accuracy = float(np.mean(predictions == dataset.labels)) if len(predictions) else 0.0
    return accuracy, predictions


def gradient_check(model: MlpModel, X, T, loss: str = LOSS_MSE, step: float = 1e-5) -> float:
    """Max deviation between analytic and central-difference gradients.

    Deviation is |analytic - numeric| / max(1, |analytic|, |numeric|).
    """
    X = np.asarray(X, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    params = [(l.weights.copy(), l.biases.copy(), l.activation) for l in model.layers]
    _, grads = _loss_and_grads(params, X, T, loss)

    worst = 0.0
    for li, (w, b, act) in enumerate(params):
        for slot, analytic in ((0, grads[li][0]), (1, grads[li][1])):
            base = params[li][slot]
            it = np.nditer(base, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index

                def loss_at(delta):
                    probe = base.copy()
                    probe[idx] += delta
                    trial = [
                        (
                            probe if (j == li and slot == 0) else pw,
                            probe if (j == li and slot == 1) else pb,
                            pa,
                        )
                        for j, (pw, pb, pa) in enumerate(params)
                    ]
                    return _loss_value(loss, _forward_params(trial, X)[-1], T)

                numeric = (loss_at(step) - loss_at(-step)) / (2.0 * step)
                a = float(analytic[idx])
                dev = abs(a - numeric) / max(1.0, abs(a), abs(numeric))
                worst = max(worst, dev)
    return worst


DEFAULT_IRIS_SEEDS: tuple[int, ...] = (0, 1, 2, 3, 4, 5, 6, 7)

# Shipped fixture for the 2-hidden-unit iris classifier.  Seed 0 lands on
# 149/150 training accuracy with the lone error on dataset pattern 84, and
# the descent is loss-monotone at this learning rate.
IRIS_MLP2_CONFIG = TrainConfig(
    hidden_units=2,
    learning_rate=2.0,
    max_epochs=60_000,
    goal_loss=1e-3,
    seed=0,
    init_scale=0.5,
)


def train_first_converging(base: TrainConfig, dataset, seeds) -> TrainResult:
    """Train with each seed in turn; return the first run reaching goal_loss."""
    best = None
    for seed in seeds:
        result = train(replace(base, seed=seed), dataset)
        if result.reached_goal:
            return result
        if best is None or result.final_loss < best.final_loss:
            best = result
    raise ConvergenceFailure(
        f"no seed in {tuple(seeds)} reached goal {base.goal_loss}; "
        f"best final loss {best.final_loss if best else float('nan'):.3g}"
    )
