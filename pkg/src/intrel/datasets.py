"""Dataset loading and scaling: labelled CSV, IDX image files, augmentation.

All loaders produce patterns scaled per feature into [-1, 1] and remember
the (min, max) used, so values can be mapped back.  The artificial-feature
augmentation uses a self-contained xorshift64* generator, making the
experiment bit-reproducible across platforms and numpy versions.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import BadMagic, CountMismatch, InvalidInterval, ParseError, WrongColumnCount

IRIS_FEATURE_NAMES = ("sepal_length", "sepal_width", "petal_length", "petal_width")

_SCALED_MARKER = "# intrel-dataset scaled"


@dataclass(frozen=True)
class Dataset:
    """Scaled patterns, integer class labels, and the scaling that was applied."""

    patterns: np.ndarray  # (n_patterns, n_features), in [-1, 1]
    labels: np.ndarray  # (n_patterns,), indices into class_names
    class_names: tuple[str, ...]
    scaling: tuple[np.ndarray, np.ndarray]  # per-feature (min, max) before scaling
    feature_names: tuple[str, ...] = ()
    metadata: tuple[str, ...] = field(default=())

    def __post_init__(self):
        patterns = np.asarray(self.patterns, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if patterns.ndim != 2 or labels.shape != (patterns.shape[0],):
            raise InvalidInterval("patterns must be 2-D with one label per row")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_names)):
            raise ParseError("labels outside the class range")
        patterns = patterns.copy()
        labels = labels.copy()
        patterns.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "patterns", patterns)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "metadata", tuple(self.metadata))

    @property
    def n_patterns(self) -> int:
        return self.patterns.shape[0]

    @property
    def n_features(self) -> int:
        return self.patterns.shape[1]

    def class_sizes(self) -> list[int]:
        return [int(np.sum(self.labels == c)) for c in range(len(self.class_names))]

    def unscale(self, scaled: np.ndarray) -> np.ndarray:
        """Map scaled values back to the original feature units."""
        mins, maxs = self.scaling
        return mins + (np.asarray(scaled) + 1.0) * (maxs - mins) / 2.0


def scale_minmax(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-feature min-max map onto [-1, 1]; constant features map to 0."""
    values = np.asarray(values, dtype=np.float64)
    mins = values.min(axis=0)
    maxs = values.max(axis=0)
    span = maxs - mins
    safe = np.where(span == 0.0, 1.0, span)
    scaled = -1.0 + 2.0 * (values - mins) / safe
    scaled[:, span == 0.0] = 0.0
    return scaled, mins, maxs


def _read_labelled_rows(path) -> tuple[list[list[float]], list[str], list[str]]:
    rows: list[list[float]] = []
    names: list[str] = []
    meta: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta.append(line)
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) < 2:
                raise WrongColumnCount(f"{path}:{lineno}: expected features plus a label")
            if rows and len(parts) != len(rows[0]) + 1:
                raise WrongColumnCount(
                    f"{path}:{lineno}: {len(parts)} columns, expected {len(rows[0]) + 1}"
                )
            try:
                rows.append([float(v) for v in parts[:-1]])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            names.append(parts[-1])
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return rows, names, meta


def load_dataset_csv(path, feature_names: tuple[str, ...] = ()) -> Dataset:
    """Load a comma-separated dataset: numeric feature columns, label last.

    Features are min-max scaled onto [-1, 1] unless the file carries the
    already-scaled marker that save_dataset_csv writes.
    """
    rows, names, meta = _read_labelled_rows(path)
    values = np.array(rows, dtype=np.float64)
    class_names: list[str] = []
    labels = []
    for name in names:
        if name not in class_names:
            class_names.append(name)
        labels.append(class_names.index(name))
    already_scaled = any(m.startswith(_SCALED_MARKER) for m in meta)
    if already_scaled:
        scaled = values
        mins = np.full(values.shape[1], -1.0)
        maxs = np.full(values.shape[1], 1.0)
    else:
        scaled, mins, maxs = scale_minmax(values)
    return Dataset(
        patterns=scaled,
        labels=np.array(labels),
        class_names=tuple(class_names),
        scaling=(mins, maxs),
        feature_names=feature_names,
        metadata=tuple(m.lstrip("# ") for m in meta),
    )


def save_dataset_csv(ds: Dataset, path) -> None:
    """Write a dataset's scaled values; loadable again without re-scaling."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_SCALED_MARKER}\n")
        for note in ds.metadata:
            fh.write(f"# {note}\n")
        for row, label in zip(ds.patterns, ds.labels):
            cells = [f"{v:.17g}" for v in row]
            cells.append(ds.class_names[int(label)])
            fh.write(",".join(cells) + "\n")


def load_iris(path) -> Dataset:
    """Load the Fisher iris file: four numeric columns plus the class name."""
    ds = load_dataset_csv(path, feature_names=IRIS_FEATURE_NAMES)
    if ds.n_features != 4:
        raise WrongColumnCount(f"{path}: iris needs 4 feature columns, found {ds.n_features}")
    if ds.n_patterns != 150 or len(ds.class_names) != 3:
        raise ParseError(
            f"{path}: expected 150 patterns in 3 classes, "
            f"found {ds.n_patterns} in {len(ds.class_names)}"
        )
    return ds


def _read_idx(path, expect_magic: int, expect_dims: int) -> tuple[tuple[int, ...], np.ndarray]:
    with open(path, "rb") as fh:
        head = fh.read(4)
        if len(head) != 4:
            raise ParseError(f"{path}: truncated IDX header")
        (magic,) = struct.unpack(">I", head)
        if magic != expect_magic:
            raise BadMagic(f"{path}: magic 0x{magic:08x}, expected 0x{expect_magic:08x}")
        raw_dims = fh.read(4 * expect_dims)
        if len(raw_dims) != 4 * expect_dims:
            raise ParseError(f"{path}: truncated IDX dimension header")
        dims = struct.unpack(f">{expect_dims}I", raw_dims)
        count = int(np.prod(dims))
        data = fh.read(count)
        if len(data) != count:
            raise ParseError(f"{path}: expected {count} data bytes, found {len(data)}")
    return dims, np.frombuffer(data, dtype=np.uint8)


MNIST_IMAGES_MAGIC = 0x00000803
MNIST_LABELS_MAGIC = 0x00000801


def load_mnist(images_path, labels_path) -> Dataset:
    """Load IDX image/label files into a scaled 784-feature dataset.

    Pixels map through 2 * (p / 255) - 1; the digit 0 is coded as class
    "10" on the last output node, digits 1-9 keep their natural order.
    """
    (n_img, rows, cols), pixels = _read_idx(images_path, MNIST_IMAGES_MAGIC, 3)
    (n_lab,), raw_labels = _read_idx(labels_path, MNIST_LABELS_MAGIC, 1)
    if n_img != n_lab:
        raise CountMismatch(f"{n_img} images but {n_lab} labels")
    patterns = 2.0 * (pixels.astype(np.float64).reshape(n_img, rows * cols) / 255.0) - 1.0
    class_names = tuple(str(d) for d in range(1, 11))  # "1".."9", "10" for digit 0
    labels = np.where(raw_labels == 0, 9, raw_labels.astype(np.int64) - 1)
    mins = np.zeros(rows * cols)
    maxs = np.full(rows * cols, 255.0)
    return Dataset(
        patterns=patterns,
        labels=labels,
        class_names=class_names,
        scaling=(mins, maxs),
        metadata=(f"idx source {rows}x{cols}",),
    )


class Xorshift64Star:
    """Deterministic 64-bit xorshift* generator (pure integer arithmetic)."""

    MASK = (1 << 64) - 1
    MULT = 2685821657736338717

    def __init__(self, seed: int):
        self.state = (int(seed) & self.MASK) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & self.MASK
        x ^= x >> 27
        self.state = x
        return (x * self.MULT) & self.MASK

    def uniform(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_pm1(self) -> float:
        """Uniform in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0


AUGMENT_GENERATOR_NAME = "xorshift64star"


def augment_random_features(ds: Dataset, count: int, seed: int) -> Dataset:
    """Append `count` uniformly random features in [-1, 1], labels preserved."""
    if count < 1:
        raise InvalidInterval(f"count must be >= 1, got {count}")
    rng = Xorshift64Star(seed)
    extra = np.array(
        [[rng.uniform_pm1() for _ in range(count)] for _ in range(ds.n_patterns)]
    )
    mins, maxs = ds.scaling
    note = f"augmented generator={AUGMENT_GENERATOR_NAME} seed={seed} count={count}"
    names = ds.feature_names
    if names:
        names = names + tuple(f"random_{i}" for i in range(count))
    return Dataset(
        patterns=np.hstack([ds.patterns, extra]),
        labels=ds.labels,
        class_names=ds.class_names,
        scaling=(
            np.concatenate([mins, np.full(count, -1.0)]),
            np.concatenate([maxs, np.full(count, 1.0)]),
        ),
        feature_names=names,
        metadata=ds.metadata + (note,),
    )
