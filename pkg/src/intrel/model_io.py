"""Model persistence: a small JSON schema with exact float round-trips."""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError, SchemaVersionMismatch
from .network import Activation, Layer, MlpModel

FORMAT_NAME = "intrel-model"
SCHEMA_VERSION = 1


def save_model(model: MlpModel, path) -> None:
    """Write a model as UTF-8 JSON; floats use shortest exact decimals."""
    doc = {
        "format": FORMAT_NAME,
        "version": SCHEMA_VERSION,
        "input_dim": model.input_dim,
        "layers": [
            {
                "rows": layer.out_dim,
                "cols": layer.in_dim,
                "weights": [float(v) for v in layer.weights.reshape(-1)],
                "biases": [float(v) for v in layer.biases],
                "activation": layer.activation.value,
            }
            for layer in model.layers
        ],
        "class_coding": list(model.class_coding),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _field(doc, key, kind, where):
    try:
        value = doc[key]
    except (KeyError, TypeError):
        raise ParseError(f"{where}: missing field {key!r}") from None
    if not isinstance(value, kind):
        raise ParseError(f"{where}: field {key!r} has type {type(value).__name__}")
    return value


def load_model(path) -> MlpModel:
    """Read a model file back; bit-identical to what save_model wrote."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise SchemaVersionMismatch(f"{path}: not an {FORMAT_NAME} file")
    if doc.get("version") != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"{path}: schema version {doc.get('version')!r}, expected {SCHEMA_VERSION}"
        )
    input_dim = _field(doc, "input_dim", int, path)
    raw_layers = _field(doc, "layers", list, path)
    if not raw_layers:
        raise ParseError(f"{path}: model has no layers")
    layers = []
    expected_in = input_dim
    for idx, raw in enumerate(raw_layers):
        where = f"{path}: layers[{idx}]"
        rows = _field(raw, "rows", int, where)
        cols = _field(raw, "cols", int, where)
        weights = _field(raw, "weights", list, where)
        biases = _field(raw, "biases", list, where)
        act_name = _field(raw, "activation", str, where)
        if len(weights) != rows * cols:
            raise ParseError(f"{where}: {len(weights)} weights for a {rows}x{cols} matrix")
        if len(biases) != rows:
            raise ParseError(f"{where}: {len(biases)} biases for {rows} rows")
        if cols != expected_in:
            raise ParseError(f"{where}: {cols} columns, previous layer provides {expected_in}")
        try:
            activation = Activation(act_name)
        except ValueError:
            raise SchemaVersionMismatch(f"{where}: unknown activation {act_name!r}") from None
        try:
            w = np.array(weights, dtype=np.float64).reshape(rows, cols)
            b = np.array(biases, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from None
        layers.append(Layer(weights=w, biases=b, activation=activation))
        expected_in = rows
    coding = tuple(str(c) for c in _field(doc, "class_coding", list, path))
    return MlpModel(layers=tuple(layers), class_coding=coding)
