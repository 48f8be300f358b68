"""Bit-exact raster output: PPM images, the A/I/U palette, heat colormap.

Everything here is pure and deterministic, so identical inputs always
produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError
from .relevance import FAMILY_ACTIVE, FAMILY_INACTIVE, FAMILY_UNDEFINED, FeaturePartition

ACTIVE_RGB = (255, 0, 0)
INACTIVE_RGB = (0, 0, 255)
UNDEFINED_RGB = (255, 255, 0)

FAMILY_RGB = {
    FAMILY_ACTIVE: ACTIVE_RGB,
    FAMILY_INACTIVE: INACTIVE_RGB,
    FAMILY_UNDEFINED: UNDEFINED_RGB,
}

MAP_WIDTH = 1000


def heat_rgb(t) -> np.ndarray:
    """Heat colormap: black through red and yellow to white on [0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    r = np.rint(255.0 * np.clip(3.0 * t, 0.0, 1.0))
    g = np.rint(255.0 * np.clip(3.0 * t - 1.0, 0.0, 1.0))
    b = np.rint(255.0 * np.clip(3.0 * t - 2.0, 0.0, 1.0))
    return np.stack([r, g, b], axis=-1).astype(np.uint8)


def write_ppm(path, pixels: np.ndarray) -> None:
    """Write binary P6 with max value 255; pixels are (H, W, 3) uint8."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ParseError(f"pixels must be (H, W, 3), got {pixels.shape}")
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def read_ppm(path) -> np.ndarray:
    """Read back a binary P6 file written by write_ppm."""
    raw = open(path, "rb").read()
    parts = raw.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ParseError(f"{path}: not a P6/255 file written by this package")
    try:
        w, h = (int(v) for v in parts[1].split())
    except ValueError:
        raise ParseError(f"{path}: malformed dimensions {parts[1]!r}") from None
    data = parts[3]
    if len(data) != w * h * 3:
        raise ParseError(f"{path}: expected {w * h * 3} pixel bytes, found {len(data)}")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w, 3)


def partition_row(part: FeaturePartition, width: int = MAP_WIDTH) -> np.ndarray:
    """One raster row: each pixel takes the family covering its midpoint."""
    rng = part.query.feature_range
    mids = rng.lo + (np.arange(width) + 0.5) * (rng.width / width)
    uppers = np.array([iv.hi for iv, _ in part.segments])
    idx = np.minimum(np.searchsorted(uppers, mids, side="left"), len(uppers) - 1)
    colors = np.array([FAMILY_RGB[fam] for _, fam in part.segments], dtype=np.uint8)
    return colors[idx]


def partition_image(parts, width: int = MAP_WIDTH) -> np.ndarray:
    """Stacked rows, first partition at the bottom of the image."""
    rows = [partition_row(p, width) for p in parts]
    return np.stack(rows[::-1], axis=0)


def heat_image(values: np.ndarray, side: int) -> np.ndarray:
    """Map per-pixel relevance values (row-major) onto a side x side image."""
    values = np.asarray(values, dtype=np.float64).reshape(side, side)
    return heat_rgb(values)
