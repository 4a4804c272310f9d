"""Label-preserving random transforms that expand a signature set.

Geometric transforms resample with bilinear interpolation and treat
everything outside the image as white background.
"""
import logging
import os
from dataclasses import dataclass, asdict
from typing import List

import numpy as np
from joblib import Parallel, delayed
from scipy import ndimage

from .manifest import Manifest, ManifestRow
from .netpbm import check_image, save_image
from ..utils import spawn_generator, get_n_jobs

BACKGROUND = 1.0
# interpolation leaves pure background a few ulps below white
WHITE_TOL = 1e-9

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AugmentConfig:
    """
    Ranges the random transforms draw their parameters from.

    Parameters
    ----------
    * `max_rotation_deg` [float, default=45]:
        Angles are drawn from [-max, max] degrees.

    * `intensity_shift_max` [float, default=0.2]:
        Ink intensity offsets are drawn from [-max, max].

    * `width_shift_frac`, `height_shift_frac` [float, default=0.1]:
        Translations are drawn from [-frac, frac] of the image size.

    * `zoom_low`, `zoom_high` [float, default=0.9, 1.1]:
        Zoom factors are drawn from [low, high].

    * `copies_per_image` [int, default=16]:
        Number of augmented copies made of every original.
    """

    max_rotation_deg: float = 45.0
    intensity_shift_max: float = 0.2
    width_shift_frac: float = 0.1
    height_shift_frac: float = 0.1
    zoom_low: float = 0.9
    zoom_high: float = 1.1
    copies_per_image: int = 16

    def __post_init__(self):
        if not 0.0 <= self.max_rotation_deg <= 180.0:
            raise ValueError(
                "Expected `max_rotation_deg` in [0, 180], got %r"
                % self.max_rotation_deg
            )
        if not 0.0 <= self.intensity_shift_max <= 1.0:
            raise ValueError(
                "Expected `intensity_shift_max` in [0, 1], got %r"
                % self.intensity_shift_max
            )
        for name in ("width_shift_frac", "height_shift_frac"):
            if not 0.0 <= getattr(self, name) <= 0.5:
                raise ValueError(
                    "Expected `%s` in [0, 0.5], got %r" % (name, getattr(self, name))
                )
        if not 0.0 < self.zoom_low <= self.zoom_high:
            raise ValueError(
                "Expected 0 < `zoom_low` <= `zoom_high`, got (%r, %r)"
                % (self.zoom_low, self.zoom_high)
            )
        if self.zoom_low < 0.5 or self.zoom_high > 2.0:
            raise ValueError("Zoom range must lie within [0.5, 2]")
        if self.copies_per_image < 1:
            raise ValueError(
                "Expected `copies_per_image` >= 1, got %d" % self.copies_per_image
            )

    def to_dict(self):
        return asdict(self)


def _warp(img, rows, cols):
    out = ndimage.map_coordinates(
        img,
        [rows, cols],
        order=1,
        mode="grid-constant",
        cval=BACKGROUND,
        prefilter=False,
    )
    out[out > BACKGROUND - WHITE_TOL] = BACKGROUND
    return np.clip(out, 0.0, 1.0)


def _grid(img):
    height, width = img.shape
    rows, cols = np.meshgrid(
        np.arange(height, dtype=float), np.arange(width, dtype=float), indexing="ij"
    )
    center = ((height - 1) / 2.0, (width - 1) / 2.0)
    return rows, cols, center


def rotate(img: np.ndarray, angle: float) -> np.ndarray:
    """Rotate counter-clockwise by `angle` degrees about the image center."""
    img = check_image(img)
    rows, cols, (cr, cc) = _grid(img)
    theta = np.deg2rad(angle)
    cos, sin = np.cos(theta), np.sin(theta)
    # inverse mapping: output pixel -> source location
    dr = rows - cr
    dc = cols - cc
    src_r = cr + cos * dr - sin * dc
    src_c = cc + sin * dr + cos * dc
    return _warp(img, src_r, src_c)


def zoom(img: np.ndarray, factor: float) -> np.ndarray:
    """Scale content by `factor` about the center, keeping the image size."""
    img = check_image(img)
    if not 0.5 <= factor <= 2.0:
        raise ValueError("Expected `factor` in [0.5, 2], got %r" % factor)
    rows, cols, (cr, cc) = _grid(img)
    src_r = cr + (rows - cr) / factor
    src_c = cc + (cols - cc) / factor
    return _warp(img, src_r, src_c)


def shift_translate(img: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Move content right by `dx * width` and down by `dy * height` pixels."""
    img = check_image(img)
    if abs(dx) > 0.5 or abs(dy) > 0.5:
        raise ValueError("Expected |dx|, |dy| <= 0.5, got (%r, %r)" % (dx, dy))
    height, width = img.shape
    rows, cols, _ = _grid(img)
    return _warp(img, rows - dy * height, cols - dx * width)


def shift_intensity(img: np.ndarray, delta: float) -> np.ndarray:
    """Add `delta` to ink pixels (value < 1); pure background stays white."""
    img = check_image(img)
    if abs(delta) > 1.0:
        raise ValueError("Expected |delta| <= 1, got %r" % delta)
    ink = img < BACKGROUND - WHITE_TOL
    out = img.copy()
    out[ink] = np.clip(img[ink] + delta, 0.0, 1.0)
    return out


def random_transform(img: np.ndarray, cfg: AugmentConfig, rng) -> np.ndarray:
    """One augmented copy: rotate -> zoom -> translate -> intensity."""
    angle = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg)
    factor = rng.uniform(cfg.zoom_low, cfg.zoom_high)
    dx = rng.uniform(-cfg.width_shift_frac, cfg.width_shift_frac)
    dy = rng.uniform(-cfg.height_shift_frac, cfg.height_shift_frac)
    delta = rng.uniform(-cfg.intensity_shift_max, cfg.intensity_shift_max)
    out = rotate(img, angle)
    out = zoom(out, factor)
    out = shift_translate(out, dx, dy)
    return shift_intensity(out, delta)


def augment_image(img: np.ndarray, cfg: AugmentConfig, rng) -> List[np.ndarray]:
    """Return exactly `cfg.copies_per_image` augmented copies of `img`.

    Each copy applies all five transforms with parameters drawn uniformly
    from the configured ranges, so the result is fully determined by `rng`.
    """
    img = check_image(img)
    return [random_transform(img, cfg, rng) for _ in range(cfg.copies_per_image)]


def _augment_one(img, cfg, seed, index):
    return augment_image(img, cfg, spawn_generator(seed, index))


def augment_manifest(
    manifest: Manifest,
    cfg: AugmentConfig,
    seed: int,
    outdir,
    n_jobs=None,
) -> Manifest:
    """Augment every row of `manifest` and write the copies under `outdir`.

    Copies land in `<outdir>/<identity>/<label>/<origname>_augNN.pgm`. Image
    `i` draws from the child stream `(seed, i)`, so the output does not depend
    on the number of workers. Originals are kept in the returned manifest,
    ahead of their copies.

    Raises `ValueError` before anything is written when two rows would map
    to the same output file.
    """
    targets = {}
    for row in manifest.rows:
        stem = os.path.splitext(os.path.basename(row.path))[0]
        key = (row.identity, row.label, stem)
        if key in targets:
            raise ValueError(
                "Rows %r and %r would both be written to %s"
                % (targets[key], row.path, os.path.join(*key))
            )
        targets[key] = row.path
    images = [manifest.load_image(i) for i in range(len(manifest))]
    copies = Parallel(n_jobs=get_n_jobs(n_jobs))(
        delayed(_augment_one)(img, cfg, seed, i) for i, img in enumerate(images)
    )
    rows = []
    out_images = []
    for row, img, augmented in zip(manifest.rows, images, copies):
        stem = os.path.splitext(os.path.basename(row.path))[0]
        subdir = os.path.join(row.identity, row.label)
        os.makedirs(os.path.join(outdir, subdir), exist_ok=True)
        rel = os.path.join(subdir, "%s.pgm" % stem)
        save_image(os.path.join(outdir, rel), img)
        rows.append(ManifestRow(rel, row.identity, row.label))
        out_images.append(img)
        for j, copy in enumerate(augmented):
            rel = os.path.join(subdir, "%s_aug%02d.pgm" % (stem, j))
            save_image(os.path.join(outdir, rel), copy)
            rows.append(ManifestRow(rel, row.identity, row.label))
            out_images.append(copy)
    logger.info(
        "Augmented %d originals into %d rows", len(manifest), len(rows)
    )
    return Manifest(rows, root=outdir, images=out_images)
