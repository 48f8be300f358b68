from pathlib import Path

import numpy as np
import pytest

from intrel.datasets import load_iris
from intrel.network import Activation, Layer, MlpModel
from intrel.training import IRIS_MLP2_CONFIG, train

IRIS_CSV = Path(__file__).parents[1] / "data" / "iris.csv"


def make_random_model(sizes, seed, hidden=Activation.TANH, output=Activation.LOGISTIC, scale=1.0):
    """Random dense model with the given layer sizes, e.g. (4, 2, 3)."""
    rng = np.random.default_rng(seed)
    layers = []
    for i, (n_in, n_out) in enumerate(zip(sizes, sizes[1:])):
        act = output if i == len(sizes) - 2 else hidden
        layers.append(
            Layer(
                weights=rng.uniform(-scale, scale, (n_out, n_in)),
                biases=rng.uniform(-scale, scale, n_out),
                activation=act,
            )
        )
    return MlpModel(layers=tuple(layers))


def make_zero_model(sizes, output=Activation.LOGISTIC):
    layers = []
    for i, (n_in, n_out) in enumerate(zip(sizes, sizes[1:])):
        act = output if i == len(sizes) - 2 else Activation.TANH
        layers.append(Layer(np.zeros((n_out, n_in)), np.zeros(n_out), act))
    return MlpModel(layers=tuple(layers))


@pytest.fixture(scope="session")
def small_random_model():
    return make_random_model((4, 2, 3), seed=42)


@pytest.fixture(scope="session")
def iris_fixture():
    """The shipped iris dataset and trained 2-hidden-unit model."""
    ds = load_iris(IRIS_CSV)
    return ds, train(IRIS_MLP2_CONFIG, ds)
