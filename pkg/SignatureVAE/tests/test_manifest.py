import numpy as np
import pytest
from numpy.testing import assert_array_equal

from SignatureVAE.image import (
    EmptyManifestError,
    Manifest,
    ManifestRow,
    read_manifest,
    save_image,
)


@pytest.fixture
def manifest_dir(tmp_path):
    (tmp_path / "x").mkdir()
    save_image(str(tmp_path / "x" / "g.pgm"), np.full((2, 2), 1.0))
    save_image(str(tmp_path / "x" / "f.pgm"), np.zeros((2, 2)))
    (tmp_path / "manifest.csv").write_text(
        "path,identity,label\nx/g.pgm,x,genuine\nx/f.pgm,x,forged\n"
    )
    return tmp_path


@pytest.mark.fast_test
def test_read_manifest_resolves_relative_paths(manifest_dir):
    manifest = read_manifest(str(manifest_dir / "manifest.csv"))
    assert len(manifest) == 2
    assert_array_equal(manifest.labels, [0, 1])
    assert_array_equal(manifest.matrix(), [[1.0] * 4, [0.0] * 4])


@pytest.mark.fast_test
def test_write_then_read(manifest_dir, tmp_path):
    manifest = read_manifest(str(manifest_dir / "manifest.csv"))
    path = str(manifest_dir / "copy.csv")
    manifest.write(path)
    assert read_manifest(path) == manifest


@pytest.mark.fast_test
def test_bad_header(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("file,who,label\n")
    with pytest.raises(ValueError):
        read_manifest(str(path))


@pytest.mark.fast_test
def test_bad_row_and_label(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("path,identity,label\na.pgm,a\n")
    with pytest.raises(ValueError):
        read_manifest(str(path))
    with pytest.raises(ValueError):
        Manifest([ManifestRow("a.pgm", "a", "maybe")])


@pytest.mark.fast_test
def test_selection_helpers():
    rows = [
        ManifestRow("b1", "b", "genuine"),
        ManifestRow("a1", "a", "forged"),
        ManifestRow("b2", "b", "forged"),
    ]
    images = [np.full((2, 2), v) for v in (0.1, 0.2, 0.3)]
    manifest = Manifest(rows, images=images)
    assert manifest.identities == ["b", "a"]
    assert manifest.indices(identity="b") == [0, 2]
    assert manifest.indices(label="forged") == [1, 2]
    assert len(manifest.genuine()) == 1
    sub = manifest.forged()
    assert_array_equal(sub.matrix()[:, 0], [0.2, 0.3])


@pytest.mark.fast_test
def test_matrix_errors():
    rows = [ManifestRow("a", "a", "genuine"), ManifestRow("b", "a", "genuine")]
    manifest = Manifest(rows, images=[np.ones((2, 2)), np.ones((3, 3))])
    with pytest.raises(ValueError):
        manifest.matrix()
    with pytest.raises(EmptyManifestError):
        manifest.matrix([])
    with pytest.raises(ValueError):
        Manifest(rows, images=[np.ones((2, 2))])
