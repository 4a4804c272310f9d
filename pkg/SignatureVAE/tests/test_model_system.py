import unittest

import numpy as np
from numpy.testing import assert_array_equal

from SignatureVAE.image import read_manifest
from SignatureVAE.model_systems import (
    RandomForgery,
    SignatureSystem,
    SkilledForgery,
    gen_identity,
    get_model_system,
    make_dataset,
    render,
    stroke_curve,
    write_dataset,
)


class TestSignatures(unittest.TestCase):
    def test_gen_identity_is_deterministic(self):
        assert gen_identity(4) == gen_identity(4)
        assert gen_identity(4) != gen_identity(5)
        spec = gen_identity(4)
        assert 2 <= spec.n_strokes <= 5
        assert 2.0 <= spec.stroke_width <= 3.0

    def test_stroke_curve_hits_end_points(self):
        points = np.array([[0.1, 0.2], [0.4, 0.8], [0.6, 0.1], [0.9, 0.5]])
        curve = stroke_curve(points, 10)
        assert_array_equal(curve[0], points[0])
        np.testing.assert_allclose(curve[-1], points[-1])
        line = stroke_curve(points[:2], 5)
        assert len(line) == 5

    def test_render(self):
        spec = gen_identity(0)
        img = render(spec, 0.0, None, 32)
        assert img.shape == (32, 32)
        assert img.min() >= 0.0 and img.max() <= 1.0
        # white paper with some ink
        assert img.mean() > 0.5
        assert img.min() < 0.1
        assert_array_equal(img, render(spec, 0.0, None, 32))
        with self.assertRaises(ValueError):
            render(spec, -1.0, None, 32)


class TestSignatureSystem(unittest.TestCase):
    def test_layout(self):
        manifest = make_dataset(2, 3, 2, forgery="random", seed=1, size=16)
        assert len(manifest) == 2 * (3 + 2)
        assert manifest.identities == ["id000", "id001"]
        assert manifest.rows[0].path == "id000/genuine_00.pgm"
        assert manifest.rows[3].path == "id000/forged_00.pgm"
        assert manifest.labels.tolist() == [0, 0, 0, 1, 1] * 2
        assert manifest.matrix().shape == (10, 256)

    def test_deterministic_and_independent_of_count(self):
        small = make_dataset(1, 2, 1, seed=9, size=16)
        large = make_dataset(3, 2, 1, seed=9, size=16)
        assert_array_equal(small.matrix(), large.matrix(range(3)))
        other = make_dataset(1, 2, 1, seed=10, size=16)
        assert not np.array_equal(small.matrix(), other.matrix())

    def test_validation(self):
        with self.assertRaises(ValueError):
            make_dataset(0, 1, 1)
        with self.assertRaises(ValueError):
            SignatureSystem(size=4)

    def test_write_dataset(self):
        import tempfile
        manifest = make_dataset(1, 2, 1, seed=0, size=16)
        with tempfile.TemporaryDirectory() as tmp:
            written = write_dataset(manifest, tmp)
            assert len(written) == 4
            loaded = read_manifest(written[-1])
            assert loaded == manifest
            assert np.max(np.abs(loaded.matrix() - manifest.matrix())) <= 0.5 / 255 + 1e-12

    def test_presets(self):
        assert isinstance(get_model_system("easy").forgery, RandomForgery)
        hard = get_model_system("hard", size=32)
        assert isinstance(hard.forgery, SkilledForgery)
        assert hard.forgery.jitter == 0.05
        assert hard.size == 32
        for name in ("hard", "skilled"):
            assert get_model_system(name).forgery.jitter >= 0.05
        with self.assertRaises(ValueError):
            get_model_system("impossible")
        with self.assertRaises(ValueError):
            get_model_system("very_hard")
