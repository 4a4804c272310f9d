"""Signature image I/O, preprocessing and augmentation."""
from .netpbm import (
    load_image,
    save_image,
    check_image,
    NetpbmError,
    MalformedHeaderError,
    TruncatedPayloadError,
    UnsupportedFormatError,
)
from .preprocess import (
    PreprocessConfig,
    DegenerateHistogramWarning,
    binarize,
    otsu_threshold,
    pad_to_square,
    resize,
    preprocess,
)
from .manifest import (
    Manifest,
    ManifestRow,
    EmptyManifestError,
    read_manifest,
    GENUINE,
    FORGED,
    GENUINE_LABEL,
    FORGED_LABEL,
)
from .augment import (
    AugmentConfig,
    rotate,
    zoom,
    shift_translate,
    shift_intensity,
    augment_image,
    augment_manifest,
)

__all__ = [
    "load_image",
    "save_image",
    "check_image",
    "NetpbmError",
    "MalformedHeaderError",
    "TruncatedPayloadError",
    "UnsupportedFormatError",
    "PreprocessConfig",
    "DegenerateHistogramWarning",
    "binarize",
    "otsu_threshold",
    "pad_to_square",
    "resize",
    "preprocess",
    "Manifest",
    "ManifestRow",
    "EmptyManifestError",
    "read_manifest",
    "GENUINE",
    "FORGED",
    "GENUINE_LABEL",
    "FORGED_LABEL",
    "AugmentConfig",
    "rotate",
    "zoom",
    "shift_translate",
    "shift_intensity",
    "augment_image",
    "augment_manifest",
]
