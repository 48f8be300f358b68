"""Set inversion via interval analysis.

Given an inclusion function [f], a target box [y], a resolution eps and a
search box [x], partition [x] into boxes proven to map inside [y]
(feasible), boxes proven to miss [y] (infeasible), and sub-resolution
boxes left undefined (boundary).  The feasible union is an inner
enclosure of the true preimage; feasible plus boundary is an outer one.

The classic recursive traversal is replaced by an explicit LIFO work
stack (deep bisection chains must not hit the interpreter's recursion
limit); the left half is processed first, so pavings are deterministic
and bit-identical across runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import DegenerateDimension, NoBisectableDimension, ParseError
from .intervals import Box

InclusionFn = Callable[[Box], Box]


class BoxLabel(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNDEFINED = "undefined"


@dataclass
class SiviaStats:
    boxes_examined: int = 0
    inclusion_evals: int = 0
    max_depth: int = 0


@dataclass
class Paving:
    """Labelled partition of the initial box produced by one sivia run."""

    feasible: list[Box]
    boundary: list[Box]
    infeasible: list[Box]
    eps: float
    initial_box: Box
    target: Box

    def feasible_measure(self) -> float:
        return sum(b.volume() for b in self.feasible)

    def boundary_measure(self) -> float:
        return sum(b.volume() for b in self.boundary)

    def infeasible_measure(self) -> float:
        return sum(b.volume() for b in self.infeasible)

    def outer(self) -> list[Box]:
        """The outer enclosure: feasible plus boundary boxes."""
        return self.feasible + self.boundary

    def all_boxes(self):
        for label, boxes in (
            (BoxLabel.FEASIBLE, self.feasible),
            (BoxLabel.UNDEFINED, self.boundary),
            (BoxLabel.INFEASIBLE, self.infeasible),
        ):
            for b in boxes:
                yield label, b


def classify_box(inclusion: InclusionFn, bx: Box, target: Box) -> BoxLabel:
    """Label one box: image inside target, disjoint from it, or neither."""
    out = inclusion(bx)
    if out.is_subset_of(target):
        return BoxLabel.FEASIBLE
    if not out.intersects(target):
        return BoxLabel.INFEASIBLE
    return BoxLabel.UNDEFINED


def sivia(
    inclusion: InclusionFn, target: Box, eps: float, x0: Box
) -> tuple[Paving, SiviaStats]:
    """Run set inversion over x0 down to resolution eps."""
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    paving = Paving(
        feasible=[], boundary=[], infeasible=[], eps=eps, initial_box=x0, target=target
    )
    stats = SiviaStats()
    stack: list[tuple[Box, int]] = [(x0, 0)]
    while stack:
        bx, depth = stack.pop()
        stats.boxes_examined += 1
        stats.inclusion_evals += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        out = inclusion(bx)
        if out.is_subset_of(target):
            paving.feasible.append(bx)
            continue
        if not out.intersects(target):
            paving.infeasible.append(bx)
            continue
        if bx.width < eps:
            paving.boundary.append(bx)
            continue
        # Widest dimension is non-degenerate here since width >= eps > 0.
        try:
            left, right = bx.bisect(bx.widest_dim)
        except DegenerateDimension as exc:
            raise NoBisectableDimension(
                f"undefined box {bx!r} cannot be split further (eps={eps})"
            ) from exc
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))
    return paving, stats


def write_paving_csv(paving: Paving, path) -> None:
    """One row per box: label then lo/hi per dimension, 17 significant digits."""
    n = len(paving.initial_box)
    header = ["label"]
    for d in range(n):
        header += [f"lo{d}", f"hi{d}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for label, b in paving.all_boxes():
            row = [label.value]
            for d in range(n):
                row += [f"{b.lo[d]:.17g}", f"{b.hi[d]:.17g}"]
            writer.writerow(row)


def read_paving_boxes(path) -> dict[BoxLabel, list[Box]]:
    """Read back a paving CSV; float endpoints round-trip exactly."""
    out: dict[BoxLabel, list[Box]] = {label: [] for label in BoxLabel}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty paving file") from None
        if not header or header[0] != "label" or len(header) % 2 == 0:
            raise ParseError(f"{path}: malformed paving header {header!r}")
        n = (len(header) - 1) // 2
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 1 + 2 * n:
                raise ParseError(f"{path}:{lineno}: expected {1 + 2 * n} fields, got {len(row)}")
            try:
                label = BoxLabel(row[0])
                lo = [float(row[1 + 2 * d]) for d in range(n)]
                hi = [float(row[2 + 2 * d]) for d in range(n)]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            out[label].append(Box(lo, hi))
    return out
