"""Dataset manifest: a CSV of `path,identity,label` rows.

Paths are relative to the directory holding the manifest file. A manifest
can also carry its images in memory (synthetic datasets, augmentation
output), in which case nothing is read from disk.
"""
import csv
import os
from collections import namedtuple
from typing import List, Optional, Sequence

import numpy as np

from .netpbm import load_image

GENUINE = "genuine"
FORGED = "forged"
LABELS = (GENUINE, FORGED)
# Integer class labels; forged is the positive class.
GENUINE_LABEL = 0
FORGED_LABEL = 1
HEADER = ["path", "identity", "label"]

ManifestRow = namedtuple("ManifestRow", ["path", "identity", "label"])


class EmptyManifestError(ValueError):
    pass


class Manifest:
    """
    Ordered list of labelled signature images.

    Parameters
    ----------
    * `rows` [list of ManifestRow]:
        One row per image.

    * `root` [str, optional]:
        Directory relative paths are resolved against.

    * `images` [list of arrays, optional]:
        In-memory images aligned with `rows`.
    """

    def __init__(
        self,
        rows: Sequence[ManifestRow],
        root: Optional[str] = None,
        images: Optional[List[np.ndarray]] = None,
    ):
        self.rows = [ManifestRow(*row) for row in rows]
        for i, row in enumerate(self.rows):
            if row.label not in LABELS:
                raise ValueError(
                    "Row %d has label %r, expected one of %s" % (i, row.label, LABELS)
                )
        if images is not None and len(images) != len(self.rows):
            raise ValueError(
                "Got %d images for %d rows" % (len(images), len(self.rows))
            )
        self.root = root
        self.images = images

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if isinstance(other, Manifest):
            return self.rows == other.rows
        return False

    def resolve(self, i: int) -> str:
        path = self.rows[i].path
        if self.root is None or os.path.isabs(path):
            return path
        return os.path.join(self.root, path)

    def load_image(self, i: int) -> np.ndarray:
        if self.images is not None:
            return self.images[i]
        return load_image(self.resolve(i))

    def matrix(self, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        """Stack the selected images as flattened rows, shape (n, pixels)."""
        if indices is None:
            indices = range(len(self))
        flat = [np.asarray(self.load_image(i), dtype=float).ravel() for i in indices]
        if not flat:
            raise EmptyManifestError("No images selected from the manifest")
        sizes = {f.size for f in flat}
        if len(sizes) != 1:
            raise ValueError(
                "Images differ in size %s; preprocess them to a common size first"
                % sorted(sizes)
            )
        return np.vstack(flat)

    @property
    def labels(self) -> np.ndarray:
        """1 for forged, 0 for genuine."""
        return np.array(
            [FORGED_LABEL if row.label == FORGED else GENUINE_LABEL for row in self.rows],
            dtype=int,
        )

    @property
    def identities(self) -> List[str]:
        seen = []
        for row in self.rows:
            if row.identity not in seen:
                seen.append(row.identity)
        return seen

    def indices(self, identity=None, label=None) -> List[int]:
        return [
            i
            for i, row in enumerate(self.rows)
            if (identity is None or row.identity == identity)
            and (label is None or row.label == label)
        ]

    def subset(self, indices: Sequence[int]) -> "Manifest":
        indices = list(indices)
        images = None
        if self.images is not None:
            images = [self.images[i] for i in indices]
        return Manifest([self.rows[i] for i in indices], root=self.root, images=images)

    def genuine(self) -> "Manifest":
        return self.subset(self.indices(label=GENUINE))

    def forged(self) -> "Manifest":
        return self.subset(self.indices(label=FORGED))

    def with_images(self, images: List[np.ndarray]) -> "Manifest":
        return Manifest(self.rows, root=self.root, images=list(images))

    def write(self, path):
        """Write the rows as CSV; images are not written."""
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(HEADER)
            for row in self.rows:
                writer.writerow([row.path.replace(os.sep, "/"), row.identity, row.label])
        return path


def read_manifest(path) -> Manifest:
    """Read a manifest CSV; paths resolve against the file's directory."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != HEADER:
            raise ValueError(
                "Manifest %s must start with the header %s, got %s"
                % (path, ",".join(HEADER), header)
            )
        rows = []
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != 3:
                raise ValueError(
                    "Manifest %s line %d: expected 3 fields, got %d"
                    % (path, lineno, len(fields))
                )
            rows.append(ManifestRow(*(field.strip() for field in fields)))
    return Manifest(rows, root=os.path.dirname(os.path.abspath(path)))
