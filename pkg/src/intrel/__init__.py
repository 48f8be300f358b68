"""Guaranteed feature-relevance estimation for shallow MLP classifiers.

Built on rigorous interval arithmetic: a trained network is evaluated on
boxes instead of points, set inversion recovers the feature values that
drive an output into a target interval, and the recovered set reduces to
a scalar relevance score per feature.
"""

from .datasets import Dataset, augment_random_features, load_dataset_csv, load_iris, load_mnist
from .estimators import FeatureRelevance, MlpClassifier
from .intervals import Box, Interval, box_bisect, box_set_ops, iv_add, iv_div, iv_monotone_unary, iv_mul, iv_sub
from .model_io import load_model, save_model
from .network import Activation, Layer, MlpModel, forward, forward_box, softmax_box
from .relevance import (
    FeaturePartition,
    FeatureQuery,
    OutputSpec,
    RelevanceMap,
    RelevanceScore,
    TargetMode,
    build_query,
    inactive_output_analysis,
    query_feature,
    relevance_map,
    relevance_score,
)
from .sivia import BoxLabel, Paving, SiviaStats, classify_box, sivia
from .training import TrainConfig, TrainResult, evaluate, gradient_check, train

__all__ = [
    "Activation",
    "Box",
    "BoxLabel",
    "Dataset",
    "FeaturePartition",
    "FeatureQuery",
    "FeatureRelevance",
    "Interval",
    "Layer",
    "MlpClassifier",
    "MlpModel",
    "OutputSpec",
    "Paving",
    "RelevanceMap",
    "RelevanceScore",
    "SiviaStats",
    "TargetMode",
    "TrainConfig",
    "TrainResult",
    "augment_random_features",
    "box_bisect",
    "box_set_ops",
    "build_query",
    "classify_box",
    "evaluate",
    "forward",
    "forward_box",
    "gradient_check",
    "inactive_output_analysis",
    "iv_add",
    "iv_div",
    "iv_monotone_unary",
    "iv_mul",
    "iv_sub",
    "load_dataset_csv",
    "load_iris",
    "load_mnist",
    "load_model",
    "query_feature",
    "relevance_map",
    "relevance_score",
    "save_model",
    "sivia",
    "softmax_box",
    "train",
]
