"""Trainer: gradient correctness, determinism, convergence, divergence."""

from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import make_random_model, make_zero_model
from intrel.datasets import load_iris
from intrel.errors import ConvergenceFailure, InvalidInterval, NonFiniteLoss
from intrel.network import Activation, Layer, MlpModel
from intrel.training import (
    LOSS_CROSS_ENTROPY,
    LOSS_MSE,
    TrainConfig,
    evaluate,
    gradient_check,
    one_hot,
    train,
    train_first_converging,
)

IRIS = Path(__file__).parents[1] / "data" / "iris.csv"


def toy_dataset():
    """Four linearly separable points, two classes."""
    return SimpleNamespace(
        patterns=np.array([[-1.0, -1.0], [-0.8, -0.9], [0.9, 1.0], [1.0, 0.8]]),
        labels=np.array([0, 0, 1, 1]),
        class_names=("a", "b"),
    )


class TestConfigValidation:
    def test_cross_entropy_needs_softmax(self):
        with pytest.raises(InvalidInterval):
            TrainConfig(loss=LOSS_CROSS_ENTROPY, output_activation=Activation.LOGISTIC)

    def test_mse_needs_logistic(self):
        with pytest.raises(InvalidInterval):
            TrainConfig(loss=LOSS_MSE, output_activation=Activation.SOFTMAX)

    def test_unknown_loss(self):
        with pytest.raises(InvalidInterval):
            TrainConfig(loss="hinge")


class TestGradientCheck:
    def test_random_mse_model(self):
        rng = np.random.default_rng(0)
        model = make_random_model((4, 2, 3), seed=21)
        X = rng.uniform(-1, 1, (8, 4))
        T = one_hot(rng.integers(0, 3, 8), 3)
        assert gradient_check(model, X, T, LOSS_MSE) < 1e-5

    def test_zero_weight_model(self):
        model = make_zero_model((4, 2, 3))
        X = np.linspace(-1, 1, 12).reshape(3, 4)
        T = one_hot(np.array([0, 1, 2]), 3)
        assert gradient_check(model, X, T, LOSS_MSE) < 1e-7

    def test_softmax_cross_entropy(self):
        rng = np.random.default_rng(1)
        model = make_random_model((4, 3, 3), seed=22, output=Activation.SOFTMAX)
        X = rng.uniform(-1, 1, (8, 4))
        T = one_hot(rng.integers(0, 3, 8), 3)
        assert gradient_check(model, X, T, LOSS_CROSS_ENTROPY) < 1e-5

    def test_logistic_hidden_layer(self):
        rng = np.random.default_rng(2)
        model = make_random_model((3, 4, 2), seed=23, hidden=Activation.LOGISTIC)
        X = rng.uniform(-1, 1, (6, 3))
        T = one_hot(rng.integers(0, 2, 6), 2)
        assert gradient_check(model, X, T, LOSS_MSE) < 1e-5


class TestTrain:
    def test_separable_toy_reaches_goal(self):
        res = train(
            TrainConfig(hidden_units=2, learning_rate=1.0, max_epochs=50_000, goal_loss=1e-3),
            toy_dataset(),
        )
        assert res.reached_goal
        acc, _ = evaluate(res.model, toy_dataset())
        assert acc == 1.0

    def test_zero_learning_rate_changes_nothing(self):
        res = train(
            TrainConfig(hidden_units=2, learning_rate=0.0, max_epochs=50, goal_loss=1e-12),
            toy_dataset(),
        )
        assert len(set(res.loss_history)) == 1

    def test_deterministic(self):
        cfg = TrainConfig(hidden_units=3, learning_rate=0.7, max_epochs=500, goal_loss=1e-9, seed=5)
        a = train(cfg, toy_dataset())
        b = train(cfg, toy_dataset())
        assert a.final_loss == b.final_loss
        for la, lb in zip(a.model.layers, b.model.layers):
            np.testing.assert_array_equal(la.weights, lb.weights)
            np.testing.assert_array_equal(la.biases, lb.biases)

    def test_loss_monotone_for_small_lr(self):
        res = train(
            TrainConfig(hidden_units=2, learning_rate=0.05, max_epochs=2_000, goal_loss=0.0),
            toy_dataset(),
        )
        hist = np.array(res.loss_history)
        assert (np.diff(hist) <= 1e-14).all()

    def test_divergence_raises_with_epoch(self):
        ds = load_iris(IRIS)
        cfg = TrainConfig(
            hidden_units=2,
            output_activation=Activation.SOFTMAX,
            loss=LOSS_CROSS_ENTROPY,
            learning_rate=1000.0,
            max_epochs=2_000,
            goal_loss=1e-9,
        )
        with pytest.raises(NonFiniteLoss) as err:
            train(cfg, ds)
        assert err.value.epoch >= 1


class TestEvaluate:
    def test_uniform_outputs_tie_break(self):
        model = make_zero_model((4, 2, 3))  # every output 0.5
        ds = SimpleNamespace(
            patterns=np.zeros((9, 4)),
            labels=np.array([0, 0, 0, 1, 1, 1, 2, 2, 2]),
            class_names=("x", "y", "z"),
        )
        acc, preds = evaluate(model, ds)
        assert (preds == 0).all()
        assert acc == pytest.approx(3 / 9)

    def test_perfect_one_hot(self):
        model = MlpModel(
            layers=(Layer(np.eye(3) * 10.0, np.zeros(3), Activation.LOGISTIC),),
        )
        ds = SimpleNamespace(
            patterns=np.eye(3),
            labels=np.array([0, 1, 2]),
            class_names=("a", "b", "c"),
        )
        acc, _ = evaluate(model, ds)
        assert acc == 1.0


class TestIrisFixture:
    def test_accuracy_at_least_098(self, iris_fixture):
        ds, res = iris_fixture
        acc, _ = evaluate(res.model, ds)
        assert acc >= 0.98

    def test_loss_monotone_on_fixture(self, iris_fixture):
        _, res = iris_fixture
        hist = np.array(res.loss_history)
        assert (np.diff(hist) <= 1e-12).all()

    def test_first_converging_raises_when_unreachable(self):
        with pytest.raises(ConvergenceFailure):
            train_first_converging(
                TrainConfig(hidden_units=1, learning_rate=0.5, max_epochs=5, goal_loss=1e-12),
                toy_dataset(),
                seeds=(0, 1),
            )
