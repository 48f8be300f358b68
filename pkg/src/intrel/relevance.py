"""Per-feature set-membership queries and relevance scores.

For one pattern and one feature, set inversion over the feature's range
recovers which values drive a chosen classifier output into a target
interval.  The resulting 1-D paving partitions the range into active (A),
inactive (I) and undefined (U) segments; the relevance score is
1 - mu_A / mu_k when any active mass exists, and otherwise the Heaviside
step of the undefined mass (rules R1 / R2).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import IndexOutOfRange, InvalidInterval
from .intervals import Box, Interval
from .network import MlpModel, feature_inclusion
from .sivia import sivia

FAMILY_ACTIVE = "A"
FAMILY_INACTIVE = "I"
FAMILY_UNDEFINED = "U"

DEFAULT_FEATURE_RANGE = Interval(-1.0, 1.0)


class TargetMode(str, Enum):
    AS_PREDICTED = "as_predicted"
    DESIRED = "desired"


@dataclass(frozen=True)
class OutputSpec:
    """Which output node to constrain and the interval to drive it into.

    AS_PREDICTED builds [center - radius, center + radius] clamped to the
    output activation's range; DESIRED ignores the center and asks for the
    ideal active band [1 - radius, 1] regardless of the actual output.
    """

    node: int
    center: float = 1.0
    radius: float = 0.2
    mode: TargetMode = TargetMode.AS_PREDICTED

    def __post_init__(self):
        if self.node < 0:
            raise IndexOutOfRange(f"output node must be >= 0, got {self.node}")
        if not self.radius >= 0.0:
            raise InvalidInterval(f"radius must be >= 0, got {self.radius}")
        object.__setattr__(self, "mode", TargetMode(self.mode))

    def target_interval(self, output_range: tuple[float, float] | None = (0.0, 1.0)) -> Interval:
        if self.mode is TargetMode.DESIRED:
            iv = Interval(1.0 - self.radius, 1.0)
        else:
            iv = Interval(self.center - self.radius, self.center + self.radius)
        if output_range is not None:
            iv = iv.clip(*output_range)
        return iv


@dataclass(frozen=True)
class FeatureQuery:
    """One (pattern, feature) slice of the input space to invert."""

    pattern: np.ndarray
    feature: int
    spec: OutputSpec
    eps: float
    feature_range: Interval = DEFAULT_FEATURE_RANGE

    def __post_init__(self):
        x = np.asarray(self.pattern, dtype=np.float64).reshape(-1).copy()
        if not np.isfinite(x).all():
            raise InvalidInterval("pattern values must be finite")
        if not 0 <= self.feature < x.size:
            raise IndexOutOfRange(f"feature {self.feature} out of range for {x.size} features")
        if not self.eps > 0.0:
            raise InvalidInterval(f"eps must be positive, got {self.eps}")
        if self.feature_range.width <= 0.0:
            raise InvalidInterval("feature_range must have positive width")
        x.flags.writeable = False
        object.__setattr__(self, "pattern", x)


@dataclass(frozen=True)
class FeaturePartition:
    """Disjoint, sorted segments tiling the feature range, each labelled A/I/U."""

    segments: tuple[tuple[Interval, str], ...]
    query: FeatureQuery

    def _mass(self, family: str) -> float:
        return sum(iv.width for iv, fam in self.segments if fam == family)

    @property
    def mu_A(self) -> float:
        return self._mass(FAMILY_ACTIVE)

    @property
    def mu_I(self) -> float:
        return self._mass(FAMILY_INACTIVE)

    @property
    def mu_U(self) -> float:
        return self._mass(FAMILY_UNDEFINED)

    @property
    def mu_k(self) -> float:
        return self.query.feature_range.width

    def family_at(self, t: float) -> str:
        """Family of the segment covering t (ties go to the earlier segment)."""
        for iv, fam in self.segments:
            if iv.lo <= t <= iv.hi:
                return fam
        raise IndexOutOfRange(f"{t} outside the partitioned range")


@dataclass(frozen=True)
class RelevanceScore:
    value: float
    mu_A: float
    mu_U: float
    mu_k: float
    rule_applied: str  # "formula", "R1" or "R2"


@dataclass(frozen=True)
class MapRow:
    pattern_id: int
    partitions: tuple[FeaturePartition, ...]
    scores: tuple[RelevanceScore, ...]


@dataclass(frozen=True)
class RelevanceMap:
    """Per-pattern, per-feature partitions and scores for one class."""

    class_index: int
    class_label: str
    rows: tuple[MapRow, ...]
    spec: OutputSpec
    eps: float

    @property
    def n_features(self) -> int:
        return len(self.rows[0].partitions) if self.rows else 0

    def mean_scores(self) -> np.ndarray:
        """Mean relevance per feature over all rows."""
        return np.array(
            [[s.value for s in row.scores] for row in self.rows]
        ).mean(axis=0)


def build_query(
    model: MlpModel,
    x,
    k: int,
    spec: OutputSpec,
    eps: float,
    feature_range: Interval = DEFAULT_FEATURE_RANGE,
):
    """Assemble a FeatureQuery and its derived 1-D inclusion function.

    The inclusion maps t in [x_k] to the enclosure of the spec'd output
    node over the input box whose other components are frozen at the
    pattern's values.
    """
    if not 0 <= spec.node < model.output_dim:
        raise IndexOutOfRange(f"node {spec.node} out of range for {model.output_dim} outputs")
    query = FeatureQuery(pattern=x, feature=k, spec=spec, eps=eps, feature_range=feature_range)
    inclusion = feature_inclusion(model, query.pattern, k, spec.node)
    return query, inclusion


def _paving_to_segments(paving) -> tuple[tuple[Interval, str], ...]:
    tagged = []
    for fam, boxes in (
        (FAMILY_ACTIVE, paving.feasible),
        (FAMILY_INACTIVE, paving.infeasible),
        (FAMILY_UNDEFINED, paving.boundary),
    ):
        for b in boxes:
            lo, hi = float(b.lo[0]), float(b.hi[0])
            if hi > lo:  # zero-width traces carry no measure; drop them
                tagged.append((lo, hi, fam))
    tagged.sort(key=lambda s: (s[0], s[1]))
    merged: list[tuple[float, float, str]] = []
    for lo, hi, fam in tagged:
        if merged and merged[-1][2] == fam and merged[-1][1] == lo:
            merged[-1] = (merged[-1][0], hi, fam)
        else:
            merged.append((lo, hi, fam))
    return tuple((Interval(lo, hi), fam) for lo, hi, fam in merged)


def query_feature(model: MlpModel, query: FeatureQuery) -> FeaturePartition:
    """Run set inversion on the 1-D feature slice and label the range."""
    inclusion = feature_inclusion(model, query.pattern, query.feature, query.spec.node)
    target = query.spec.target_interval(model.output_activation.output_range())
    x0 = Box([query.feature_range.lo], [query.feature_range.hi])
    paving, _ = sivia(inclusion, Box([target.lo], [target.hi]), query.eps, x0)
    return FeaturePartition(segments=_paving_to_segments(paving), query=query)


def relevance_score(p: FeaturePartition) -> RelevanceScore:
    """Reduce a partition to the scalar relevance of its feature."""
    mu_a, mu_u, mu_k = p.mu_A, p.mu_U, p.mu_k
    if mu_a > 0.0:
        value, rule = 1.0 - mu_a / mu_k, "formula"
    elif mu_u > 0.0:
        value, rule = 1.0, "R1"
    else:
        value, rule = 0.0, "R2"
    return RelevanceScore(value=value, mu_A=mu_a, mu_U=mu_u, mu_k=mu_k, rule_applied=rule)


def _analyze_pattern(
    model: MlpModel,
    x,
    spec: OutputSpec,
    eps: float,
    feature_range: Interval,
) -> tuple[tuple[FeaturePartition, ...], tuple[RelevanceScore, ...]]:
    partitions = []
    scores = []
    for k in range(model.input_dim):
        query = FeatureQuery(
            pattern=x, feature=k, spec=spec, eps=eps, feature_range=feature_range
        )
        part = query_feature(model, query)
        partitions.append(part)
        scores.append(relevance_score(part))
    return tuple(partitions), tuple(scores)


_POOL_STATE: dict = {}


def _pool_init(model, eps, feature_range):
    _POOL_STATE["args"] = (model, eps, feature_range)


def _pool_task(item):
    x, spec = item
    model, eps, feature_range = _POOL_STATE["args"]
    return _analyze_pattern(model, x, spec, eps, feature_range)


def _feature_pool_init(model, x, spec, eps, feature_range):
    _POOL_STATE["feature_args"] = (model, x, spec, eps, feature_range)


def _feature_pool_task(k):
    model, x, spec, eps, feature_range = _POOL_STATE["feature_args"]
    query = FeatureQuery(pattern=x, feature=k, spec=spec, eps=eps, feature_range=feature_range)
    return query_feature(model, query)


def analyze_features(
    model: MlpModel,
    x,
    spec: OutputSpec,
    eps: float,
    feature_range: Interval = DEFAULT_FEATURE_RANGE,
    workers: int = 1,
) -> tuple[FeaturePartition, ...]:
    """Partition every feature of one pattern, optionally in parallel.

    Feature order is preserved regardless of worker scheduling.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if workers > 1 and model.input_dim > 1:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_feature_pool_init,
            initargs=(model, x, spec, eps, feature_range),
        ) as pool:
            chunk = max(1, model.input_dim // (4 * workers))
            return tuple(pool.map(_feature_pool_task, range(model.input_dim), chunksize=chunk))
    return tuple(
        query_feature(
            model,
            FeatureQuery(pattern=x, feature=k, spec=spec, eps=eps, feature_range=feature_range),
        )
        for k in range(model.input_dim)
    )


def analyze_rows(
    model: MlpModel,
    rows,
    eps: float,
    feature_range: Interval = DEFAULT_FEATURE_RANGE,
    workers: int = 1,
) -> list[tuple[tuple[FeaturePartition, ...], tuple[RelevanceScore, ...]]]:
    """Partition and score every (pattern, spec) pair, preserving row order.

    Rows are independent; with workers > 1 they are spread over a process
    pool and reassembled in input order, so results never depend on
    scheduling.
    """
    rows = list(rows)
    if workers > 1 and len(rows) > 1:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_pool_init,
            initargs=(model, eps, feature_range),
        ) as pool:
            return list(pool.map(_pool_task, rows, chunksize=max(1, len(rows) // (4 * workers))))
    return [_analyze_pattern(model, x, spec, eps, feature_range) for x, spec in rows]


def relevance_map(
    model: MlpModel,
    dataset,
    class_index: int,
    *,
    beta: float = 0.2,
    eps: float = 1e-3,
    mode: TargetMode = TargetMode.AS_PREDICTED,
    center: float = 1.0,
    feature_range: Interval = DEFAULT_FEATURE_RANGE,
    workers: int = 1,
) -> RelevanceMap:
    """Partitions and scores for every pattern of one class, in dataset order.

    Per-pattern work is independent; with workers > 1 it is spread over a
    process pool and reassembled in dataset order, so results do not
    depend on scheduling.
    """
    if not 0 <= class_index < model.output_dim:
        raise IndexOutOfRange(f"class {class_index} out of range for {model.output_dim} outputs")
    spec = OutputSpec(node=class_index, center=center, radius=beta, mode=mode)
    ids = [
        int(i)
        for i in range(dataset.patterns.shape[0])
        if int(dataset.labels[i]) == class_index
    ]
    analyzed = analyze_rows(
        model,
        [(dataset.patterns[i], spec) for i in ids],
        eps,
        feature_range,
        workers,
    )
    rows = tuple(
        MapRow(pattern_id=i, partitions=parts, scores=scores)
        for i, (parts, scores) in zip(ids, analyzed)
    )
    return RelevanceMap(
        class_index=class_index,
        class_label=model.class_coding[class_index],
        rows=rows,
        spec=spec,
        eps=eps,
    )


def inactive_output_analysis(
    model: MlpModel,
    pattern,
    class_index: int,
    beta: float,
    eps: float = 1e-3,
    feature_range: Interval = DEFAULT_FEATURE_RANGE,
) -> dict[int, tuple[FeaturePartition, ...]]:
    """Partitions for every output other than the class, target [0, beta].

    Shows which feature values keep the non-predicted outputs inactive.
    """
    if not 0 <= class_index < model.output_dim:
        raise IndexOutOfRange(f"class {class_index} out of range for {model.output_dim} outputs")
    out: dict[int, tuple[FeaturePartition, ...]] = {}
    for node in range(model.output_dim):
        if node == class_index:
            continue
        spec = OutputSpec(node=node, center=0.0, radius=beta)
        partitions, _ = _analyze_pattern(model, pattern, spec, eps, feature_range)
        out[node] = partitions
    return out


def default_workers() -> int:
    """Worker-pool size when none is requested: available parallelism."""
    return os.cpu_count() or 1


def write_scores_csv(rmap: RelevanceMap, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pattern_id", "feature", "mu_A", "mu_U", "mu_k", "R", "rule"])
        for row in rmap.rows:
            for k, score in enumerate(row.scores):
                writer.writerow(
                    [
                        row.pattern_id,
                        k,
                        f"{score.mu_A:.17g}",
                        f"{score.mu_U:.17g}",
                        f"{score.mu_k:.17g}",
                        f"{score.value:.17g}",
                        score.rule_applied,
                    ]
                )


def write_segments_csv(rmap: RelevanceMap, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pattern_id", "feature", "lo", "hi", "family"])
        for row in rmap.rows:
            for k, part in enumerate(row.partitions):
                for iv, fam in part.segments:
                    writer.writerow(
                        [row.pattern_id, k, f"{iv.lo:.17g}", f"{iv.hi:.17g}", fam]
                    )
