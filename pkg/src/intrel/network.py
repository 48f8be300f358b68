"""Feed-forward MLP models, evaluable on points and on boxes.

The box evaluation is the natural inclusion function of the network: each
affine term and activation is replaced by its guaranteed interval
counterpart, so the output box is certain to contain the image of every
point in the input box.  Softmax is enclosed through the difference form
1 / (1 + sum_{i != j} exp(z_i - z_j)), which avoids one layer of the
dependency problem and keeps enclosures tight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidInterval, SchemaVersionMismatch
from .intervals import (
    Box,
    Interval,
    _down,
    _sum_hi,
    _sum_lo,
    _up,
    iv_monotone_unary,
    vadd_down,
    vadd_up,
    vmonotone_bounds,
    vmul_bounds,
    vsum_bounds_fast,
)


class Activation(str, Enum):
    TANH = "tanh"
    LOGISTIC = "logistic"
    SOFTMAX = "softmax"
    IDENTITY = "identity"

    def output_range(self) -> tuple[float, float] | None:
        """Codomain of the activation, or None when unbounded."""
        if self in (Activation.LOGISTIC, Activation.SOFTMAX):
            return (0.0, 1.0)
        if self is Activation.TANH:
            return (-1.0, 1.0)
        return None


@dataclass(frozen=True)
class Layer:
    """One dense layer: out_dim x in_dim weights, biases, activation."""

    weights: np.ndarray
    biases: np.ndarray
    activation: Activation

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise DimensionMismatch(
                f"weights {w.shape} and biases {b.shape} are inconsistent"
            )
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise InvalidInterval("layer parameters must be finite")
        w = w.copy()
        b = b.copy()
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)
        object.__setattr__(self, "activation", Activation(self.activation))

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class MlpModel:
    """A trained MLP plus the 1-of-M coding of its output nodes.

    Immutable after construction; safe to share across workers.
    """

    layers: tuple[Layer, ...]
    class_coding: tuple[str, ...] = field(default=())

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise SchemaVersionMismatch("model must have at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.out_dim != b.in_dim:
                raise DimensionMismatch(
                    f"layer chain breaks: {a.out_dim} outputs feed {b.in_dim} inputs"
                )
        for layer in layers[:-1]:
            if layer.activation is Activation.SOFTMAX:
                raise SchemaVersionMismatch("softmax is only legal on the output layer")
        coding = tuple(str(c) for c in self.class_coding)
        if not coding:
            coding = tuple(str(i) for i in range(layers[-1].out_dim))
        if len(coding) != layers[-1].out_dim:
            raise SchemaVersionMismatch(
                f"{len(coding)} class labels for {layers[-1].out_dim} output nodes"
            )
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "class_coding", coding)

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def output_activation(self) -> Activation:
        return self.layers[-1].activation


def _softmax_point(z: np.ndarray) -> np.ndarray:
    # Same difference form and summation order as the box path, so point
    # values land inside box enclosures exactly, not just approximately.
    m = z.size
    out = np.empty(m)
    zs = z.tolist()
    for j in range(m):
        s = 0.0
        for i in range(m):
            if i != j:
                s += math.exp(zs[i] - zs[j])
        out[j] = 1.0 / (1.0 + s)
    return out


def _apply_point(activation: Activation, z: np.ndarray) -> np.ndarray:
    if activation is Activation.TANH:
        return np.tanh(z)
    if activation is Activation.LOGISTIC:
        out = np.empty_like(z)
        pos = z >= 0.0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        e = np.exp(z[~pos])
        out[~pos] = e / (1.0 + e)
        return out
    if activation is Activation.SOFTMAX:
        return _softmax_point(z)
    return z


def forward(model: MlpModel, x) -> np.ndarray:
    """Point forward pass: one input vector to one output vector.

    The affine error envelope of forward_box covers any float summation
    order, so this value is inside forward_box([x, x]) by construction.
    """
    a = np.asarray(x, dtype=np.float64).reshape(-1)
    if a.size != model.input_dim:
        raise DimensionMismatch(f"input has {a.size} features, model expects {model.input_dim}")
    for layer in model.layers:
        a = _apply_point(layer.activation, layer.weights @ a + layer.biases)
    return a


def _affine_bounds(
    w: np.ndarray, b: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Guaranteed bounds of w @ [lo, hi] + b."""
    plo, phi = vmul_bounds(w, lo, hi)
    s_lo, s_hi = vsum_bounds_fast(plo, phi)
    return vadd_down(s_lo, b), vadd_up(s_hi, b)


def _softmax_node_bounds(z_lo: np.ndarray, z_hi: np.ndarray, node: int) -> tuple[float, float]:
    # 1 / (1 + sum_{i != node} exp([z_i] - [z_node])), every step directed.
    # Output layers are narrow, so plain-float loops beat array dispatch;
    # the sequential order matches _softmax_point exactly.
    m = z_lo.size
    if m == 1:
        return 1.0, 1.0
    zlo = z_lo.tolist()
    zhi = z_hi.tolist()
    node_lo = zlo[node]
    node_hi = zhi[node]
    s_lo = 0.0
    s_hi = 0.0
    for i in range(m):
        if i == node:
            continue
        d_lo = _sum_lo(zlo[i], -node_hi)
        d_hi = _sum_hi(zhi[i], -node_lo)
        e_lo = 1.0 if d_lo == 0.0 else max(_down(math.exp(d_lo)), 0.0)
        e_hi = 1.0 if d_hi == 0.0 else _up(math.exp(d_hi))
        s_lo = _sum_lo(s_lo, e_lo)
        s_hi = _sum_hi(s_hi, e_hi)
    den_lo = _sum_lo(1.0, s_lo)
    den_hi = _sum_hi(1.0, s_hi)
    lo = _down(1.0 / den_hi)
    hi = _up(1.0 / den_lo)
    return max(lo, 0.0), min(hi, 1.0)


def softmax_box(preacts: Box, node: int) -> Interval:
    """Enclosure of one softmax output over a box of pre-activations."""
    if not 0 <= node < len(preacts):
        raise DimensionMismatch(f"node {node} out of range for {len(preacts)} pre-activations")
    lo, hi = _softmax_node_bounds(preacts.lo, preacts.hi, node)
    return Interval(lo, hi)


def _activation_bounds(
    activation: Activation, z_lo: np.ndarray, z_hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if activation in (Activation.TANH, Activation.LOGISTIC):
        return vmonotone_bounds(activation.value, z_lo, z_hi)
    if activation is Activation.SOFTMAX:
        out = np.array(
            [_softmax_node_bounds(z_lo, z_hi, j) for j in range(z_lo.size)]
        )
        return out[:, 0], out[:, 1]
    return z_lo, z_hi


def forward_box(model: MlpModel, bx: Box) -> Box:
    """Natural inclusion function: box in, guaranteed output enclosure out."""
    if len(bx) != model.input_dim:
        raise DimensionMismatch(f"box has {len(bx)} dims, model expects {model.input_dim}")
    lo, hi = bx.lo, bx.hi
    for layer in model.layers:
        z_lo, z_hi = _affine_bounds(layer.weights, layer.biases, lo, hi)
        lo, hi = _activation_bounds(layer.activation, z_lo, z_hi)
    return Box._trusted(lo, hi)


def feature_inclusion(model: MlpModel, x, k: int, node: int):
    """1-D inclusion of output `node` as feature `k` sweeps an interval.

    Semantically this is forward_box on the box whose components are all
    frozen at the pattern's values except component k; the frozen first
    layer contributions are enclosed once here and reused for every box,
    which is what makes per-pixel queries on wide inputs tractable.  Only
    the requested output component is computed.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != model.input_dim:
        raise DimensionMismatch(f"pattern has {x.size} features, model expects {model.input_dim}")
    if not 0 <= k < model.input_dim:
        raise IndexOutOfRange(f"feature {k} out of range for {model.input_dim} inputs")
    if not 0 <= node < model.output_dim:
        raise IndexOutOfRange(f"node {node} out of range for {model.output_dim} outputs")
    if not np.isfinite(x).all():
        raise InvalidInterval("pattern values must be finite")

    first = model.layers[0]
    others = np.arange(model.input_dim) != k
    xo = x[others]
    plo, phi = vmul_bounds(first.weights[:, others], xo, xo)
    c_lo, c_hi = vsum_bounds_fast(plo, phi)
    c_lo = vadd_down(c_lo, first.biases)
    c_hi = vadd_up(c_hi, first.biases)
    wk = first.weights[:, k].copy()
    rest = model.layers[1:]

    def inclusion(tbox: Box) -> Box:
        if len(tbox) != 1:
            raise DimensionMismatch(f"feature slice expects a 1-D box, got {len(tbox)}-D")
        p_lo, p_hi = vmul_bounds(wk, tbox.lo[0], tbox.hi[0])
        lo = vadd_down(c_lo, p_lo)
        hi = vadd_up(c_hi, p_hi)
        lo, hi = _activation_bounds(first.activation, lo, hi)
        if not rest:
            return Box._trusted(np.array([lo[node]]), np.array([hi[node]]))
        for layer in rest[:-1]:
            z_lo, z_hi = _affine_bounds(layer.weights, layer.biases, lo, hi)
            lo, hi = _activation_bounds(layer.activation, z_lo, z_hi)
        last = rest[-1]
        if last.activation is Activation.SOFTMAX:
            z_lo, z_hi = _affine_bounds(last.weights, last.biases, lo, hi)
            o_lo, o_hi = _softmax_node_bounds(z_lo, z_hi, node)
        else:
            r_lo, r_hi = vmul_bounds(last.weights[node], lo, hi)
            s_lo, s_hi = vsum_bounds_fast(r_lo, r_hi)
            z = Interval(
                _sum_lo(float(s_lo), float(last.biases[node])),
                _sum_hi(float(s_hi), float(last.biases[node])),
            )
            if last.activation is Activation.IDENTITY:
                o_lo, o_hi = z.lo, z.hi
            else:
                out = iv_monotone_unary(last.activation.value, z)
                o_lo, o_hi = out.lo, out.hi
        return Box._trusted(np.array([o_lo]), np.array([o_hi]))

    return inclusion
