"""Parametric signature-like strokes and their anti-aliased rasterization."""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..utils import get_random_generator

# Stroke widths are given in pixels on a canvas of this side and scale with
# the render size.
REFERENCE_SIZE = 64
GENUINE_JITTER = 0.01


@dataclass(frozen=True)
class IdentitySpec:
    """
    Skeleton of one synthetic signer.

    Parameters
    ----------
    * `seed` [int]:
        Seed the spec was generated from.

    * `control_points` [tuple of (k, 2) arrays]:
        Per-stroke control points `(x, y)` in the unit square.

    * `stroke_width` [float]:
        Pen width in pixels on a 64-pixel canvas.
    """

    seed: int
    control_points: Tuple[np.ndarray, ...]
    stroke_width: float

    def __post_init__(self):
        if len(self.control_points) < 1:
            raise ValueError("An identity needs at least one stroke")
        for points in self.control_points:
            if np.any(points < 0.0) or np.any(points > 1.0):
                raise ValueError("Control points must lie in the unit square")

    @property
    def n_strokes(self) -> int:
        return len(self.control_points)

    def __eq__(self, other):
        if not isinstance(other, IdentitySpec):
            return False
        return (
            self.seed == other.seed
            and self.stroke_width == other.stroke_width
            and self.n_strokes == other.n_strokes
            and all(
                np.array_equal(a, b)
                for a, b in zip(self.control_points, other.control_points)
            )
        )

    __hash__ = None


def gen_identity(seed: int) -> IdentitySpec:
    """Generate a signer: 2 to 5 strokes written left to right."""
    rng = get_random_generator(int(seed))
    n_strokes = int(rng.integers(2, 6))
    edges = np.linspace(0.1, 0.9, n_strokes + 1)
    strokes = []
    for s in range(n_strokes):
        n_points = int(rng.integers(3, 6))
        # neighbouring strokes overlap a little, like joined letters
        lo = max(0.05, edges[s] - 0.05)
        hi = min(0.95, edges[s + 1] + 0.05)
        xs = np.sort(rng.uniform(lo, hi, n_points))
        ys = rng.uniform(0.15, 0.85, n_points)
        strokes.append(np.column_stack([xs, ys]))
    width = float(rng.uniform(2.0, 3.0))
    return IdentitySpec(int(seed), tuple(strokes), width)


def stroke_curve(points: np.ndarray, samples_per_segment: int) -> np.ndarray:
    """Smooth piecewise-quadratic curve through a stroke's control points.

    Interior control points act as Bezier controls between the midpoints of
    their neighbouring edges; the curve starts at the first point and ends at
    the last one.
    """
    points = np.asarray(points, dtype=float)
    t = np.linspace(0.0, 1.0, samples_per_segment)[:, None]
    if len(points) == 2:
        return points[0] + t * (points[1] - points[0])
    pieces = []
    start = points[0]
    last = len(points) - 2
    for i in range(1, len(points) - 1):
        control = points[i]
        end = points[i + 1] if i == last else 0.5 * (points[i] + points[i + 1])
        pieces.append(
            (1 - t) ** 2 * start + 2 * (1 - t) * t * control + t**2 * end
        )
        start = end
    return np.vstack(pieces)


def render(spec: IdentitySpec, jitter: float, rng, size: int = 64) -> np.ndarray:
    """Rasterize `spec` on a white `size` x `size` canvas.

    Every control point is perturbed by N(0, jitter^2) first. Ink coverage
    falls off linearly over one pixel at the stroke edge.
    """
    if jitter < 0:
        raise ValueError("Expected `jitter` >= 0, got %r" % jitter)
    if size < 1:
        raise ValueError("Expected `size` >= 1, got %d" % size)
    rng = get_random_generator(rng)
    samples_per_segment = max(16, 3 * size)
    curves = []
    for points in spec.control_points:
        if jitter > 0:
            points = points + rng.normal(0.0, jitter, points.shape)
        curves.append(stroke_curve(points, samples_per_segment))
    samples = np.vstack(curves) * size

    centers = (np.arange(size) + 0.5)
    grid_x, grid_y = np.meshgrid(centers, centers)
    distance, _ = cKDTree(samples).query(
        np.column_stack([grid_x.ravel(), grid_y.ravel()])
    )
    half_width = 0.5 * spec.stroke_width * size / REFERENCE_SIZE
    coverage = np.clip(half_width + 0.5 - distance, 0.0, 1.0)
    return (1.0 - coverage).reshape(size, size)
