"""Gray -> black & white -> (pad) -> resize pipeline for signature scans."""
import warnings
from dataclasses import dataclass, asdict
from typing import Union

import numpy as np
from scipy import ndimage

from .netpbm import check_image

BACKGROUND = 1.0
N_BINS = 256


class DegenerateHistogramWarning(UserWarning):
    """Otsu thresholding was asked to split a single-valued histogram."""


@dataclass(frozen=True)
class PreprocessConfig:
    """
    Settings of the preprocessing pipeline.

    Parameters
    ----------
    * `target_size` [int, default=128]:
        Side of the square output image. Down to 28 for quick runs.

    * `pad_before_resize` [bool, default=True]:
        Pad to a white square before resizing, keeping the aspect ratio.

    * `binarize_mode` [str or float, default="otsu"]:
        "otsu" for an automatic threshold or a fixed threshold in (0, 1).
    """

    target_size: int = 128
    pad_before_resize: bool = True
    binarize_mode: Union[str, float] = "otsu"

    def __post_init__(self):
        if int(self.target_size) < 8:
            raise ValueError(
                "Expected `target_size` >= 8, got %d" % self.target_size
            )
        check_binarize_mode(self.binarize_mode)

    def to_dict(self):
        return asdict(self)


def check_binarize_mode(mode):
    if isinstance(mode, str):
        if mode != "otsu":
            raise ValueError(
                "Binarize mode must be 'otsu' or a threshold in (0, 1), "
                "got %r" % mode
            )
        return mode
    threshold = float(mode)
    if not 0.0 < threshold < 1.0:
        raise ValueError("Fixed threshold must lie in (0, 1), got %r" % mode)
    return threshold


def _bin_index(img):
    return np.minimum((img * N_BINS).astype(np.int64), N_BINS - 1)


def otsu_threshold(img: np.ndarray):
    """Threshold maximising the inter-class variance over 256 bins.

    Candidate `k` in 1..255 splits the bins into `[0, k)` and `[k, 256)`;
    the returned threshold is the lower edge `k / 256` of the upper class.
    Returns None for a histogram with a single occupied bin.
    """
    counts = np.bincount(_bin_index(img).ravel(), minlength=N_BINS)
    if np.count_nonzero(counts) < 2:
        return None
    prob = counts / counts.sum()
    levels = np.arange(N_BINS)
    w0 = np.cumsum(prob)[:-1]
    w1 = 1.0 - w0
    cum_mean = np.cumsum(prob * levels)[:-1]
    total_mean = cum_mean[-1] + prob[-1] * levels[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = cum_mean / w0
        mu1 = (total_mean - cum_mean) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between = np.where((w0 > 0) & (w1 > 0), between, -1.0)
    k = int(np.argmax(between)) + 1
    return k / N_BINS


def binarize(img: np.ndarray, mode="otsu") -> np.ndarray:
    """Map every pixel to ink (0) or background (1).

    Pixels greater than or equal to the threshold become background. A
    constant image under Otsu mode has no threshold; it is returned as all
    background with a `DegenerateHistogramWarning`.
    """
    img = check_image(img)
    mode = check_binarize_mode(mode)
    if mode == "otsu":
        threshold = otsu_threshold(img)
        if threshold is None:
            warnings.warn(
                "Otsu threshold undefined for a constant image; "
                "returning all background.",
                DegenerateHistogramWarning,
            )
            return np.full_like(img, BACKGROUND)
        mode = threshold
    return np.where(img >= mode, 1.0, 0.0)


def pad_to_square(img: np.ndarray) -> np.ndarray:
    """Center `img` on a white max(w, h) square.

    The odd leftover row or column goes to the bottom or right.
    """
    img = check_image(img)
    height, width = img.shape
    side = max(height, width)
    top = (side - height) // 2
    left = (side - width) // 2
    out = np.full((side, side), BACKGROUND)
    out[top:top + height, left:left + width] = img
    return out


def resize(img: np.ndarray, target: int) -> np.ndarray:
    """Bilinear resize to `target` x `target` with edge clamping.

    Output pixel centers are mapped onto input pixel centers
    (`src = (dst + 0.5) * in / out - 0.5`) and clamped to the image.
    """
    img = check_image(img)
    if target < 1:
        raise ValueError("Expected `target` >= 1, got %d" % target)
    height, width = img.shape
    rows = _source_coordinates(height, target)
    cols = _source_coordinates(width, target)
    grid_r, grid_c = np.meshgrid(rows, cols, indexing="ij")
    out = ndimage.map_coordinates(
        img, [grid_r, grid_c], order=1, mode="nearest", prefilter=False
    )
    return np.clip(out, 0.0, 1.0)


def _source_coordinates(n_in, n_out):
    coords = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    return np.clip(coords, 0.0, n_in - 1)


def preprocess(img: np.ndarray, cfg: PreprocessConfig = None) -> np.ndarray:
    """Run the full pipeline: binarize, optionally pad, then resize."""
    if cfg is None:
        cfg = PreprocessConfig()
    out = binarize(img, cfg.binarize_mode)
    if cfg.pad_before_resize:
        out = pad_to_square(out)
    return resize(out, cfg.target_size)
