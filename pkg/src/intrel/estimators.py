"""Scikit-learn style front ends for training and relevance analysis.

MlpClassifier wraps the deterministic gradient-descent trainer behind the
usual fit/predict surface; FeatureRelevance turns patterns into guaranteed
per-feature relevance scores.  Both cooperate with sklearn tooling
(get_params, clone, pipelines) without requiring it anywhere else in the
package.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import DimensionMismatch
from .intervals import Interval
from .network import MlpModel
from .relevance import (
    FeaturePartition,
    OutputSpec,
    TargetMode,
    analyze_rows,
    query_feature,
    relevance_score,
)
from .relevance import FeatureQuery
from .training import TrainConfig, forward_batch, train


class MlpClassifier(BaseEstimator, ClassifierMixin):
    """Shallow 1-of-M MLP classifier trained by full-batch gradient descent.

    Features are expected pre-scaled (the project convention is [-1, 1]);
    training is bit-deterministic for fixed hyperparameters.

    Attributes set by fit: classes_, model_ (the resulting MlpModel),
    final_loss_, epochs_, loss_curve_, n_features_in_.
    """

    def __init__(
        self,
        hidden_units=2,
        hidden_activation="tanh",
        output_activation="logistic",
        loss="mse",
        learning_rate=0.5,
        max_epochs=20_000,
        goal_loss=1e-3,
        seed=0,
        init_scale=0.5,
    ):
        self.hidden_units = hidden_units
        self.hidden_activation = hidden_activation
        self.output_activation = output_activation
        self.loss = loss
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.goal_loss = goal_loss
        self.seed = seed
        self.init_scale = init_scale

    def _config(self) -> TrainConfig:
        return TrainConfig(
            hidden_units=self.hidden_units,
            hidden_activation=self.hidden_activation,
            output_activation=self.output_activation,
            loss=self.loss,
            learning_rate=self.learning_rate,
            max_epochs=self.max_epochs,
            goal_loss=self.goal_loss,
            seed=self.seed,
            init_scale=self.init_scale,
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_, labels = np.unique(y, return_inverse=True)
        shim = SimpleNamespace(
            patterns=np.asarray(X, dtype=np.float64),
            labels=labels,
            class_names=tuple(str(c) for c in self.classes_),
        )
        result = train(self._config(), shim)
        self.model_ = result.model
        self.final_loss_ = result.final_loss
        self.epochs_ = result.epochs_used
        self.loss_curve_ = np.array(result.loss_history)
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        X = check_array(X)
        return forward_batch(self.model_, X)

    def predict(self, X):
        outputs = self.decision_function(X)
        return self.classes_[np.argmax(outputs, axis=1)]


class FeatureRelevance(BaseEstimator, TransformerMixin):
    """Guaranteed per-feature relevance of a trained classifier's outputs.

    transform(X) returns an (n_patterns, n_features) matrix of relevance
    values in [0, 1], computed by inverting each feature's range through
    the network and measuring which values keep the analysed output inside
    [center - beta, center + beta] (clamped to the activation's range).

    Parameters
    ----------
    model : fitted MlpClassifier or MlpModel
    beta : target-interval radius
    eps : set-inversion resolution on the feature axis
    mode : "as_predicted" (band around `center`) or "desired" ([1-beta, 1])
    node : fixed output node to analyse; None analyses each pattern's
        predicted class
    feature_range : (lo, hi) swept for every feature
    workers : per-pattern process parallelism
    """

    def __init__(
        self,
        model=None,
        beta=0.2,
        eps=1e-3,
        mode="as_predicted",
        node=None,
        center=1.0,
        feature_range=(-1.0, 1.0),
        workers=1,
    ):
        self.model = model
        self.beta = beta
        self.eps = eps
        self.mode = mode
        self.node = node
        self.center = center
        self.feature_range = feature_range
        self.workers = workers

    def _resolve_model(self) -> MlpModel:
        model = self.model
        if isinstance(model, MlpClassifier):
            check_is_fitted(model, "model_")
            return model.model_
        if isinstance(model, MlpModel):
            return model
        raise TypeError("model must be a fitted MlpClassifier or an MlpModel")

    def fit(self, X=None, y=None):
        self.model_ = self._resolve_model()
        self.range_ = Interval(*self.feature_range)
        return self

    def _spec_for(self, x, model: MlpModel) -> OutputSpec:
        if self.node is not None:
            node = int(self.node)
        else:
            outputs = forward_batch(model, x[None, :])
            node = int(np.argmax(outputs[0]))
        return OutputSpec(
            node=node, center=self.center, radius=self.beta, mode=TargetMode(self.mode)
        )

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        X = check_array(X)
        model = self.model_
        if X.shape[1] != model.input_dim:
            raise DimensionMismatch(
                f"X has {X.shape[1]} features, model expects {model.input_dim}"
            )
        rows = [(x, self._spec_for(x, model)) for x in X]
        analyzed = analyze_rows(model, rows, self.eps, self.range_, workers=self.workers)
        return np.array([[s.value for s in scores] for _, scores in analyzed])

    def partition(self, x, k: int, node: int | None = None) -> FeaturePartition:
        """Full A/I/U partition for one pattern and feature."""
        check_is_fitted(self, "model_")
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        model = self.model_
        spec = (
            self._spec_for(x, model)
            if node is None and self.node is None
            else OutputSpec(
                node=int(node if node is not None else self.node),
                center=self.center,
                radius=self.beta,
                mode=TargetMode(self.mode),
            )
        )
        query = FeatureQuery(
            pattern=x, feature=k, spec=spec, eps=self.eps, feature_range=self.range_
        )
        return query_feature(model, query)

    def score_feature(self, x, k: int, node: int | None = None):
        """Relevance score for one pattern and feature."""
        return relevance_score(self.partition(x, k, node))
