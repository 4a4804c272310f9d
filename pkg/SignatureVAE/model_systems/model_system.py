import os
from typing import Union

from ..image.manifest import FORGED, GENUINE, Manifest, ManifestRow
from ..image.netpbm import save_image
from ..utils import derive_seed, spawn_generator
from .forgery_models import ForgeryModel, parse_forgery_model
from .signatures import GENUINE_JITTER, gen_identity, render


class SignatureSystem:
    """
    Synthetic signature source for testing the detectors. Instances of this
    class stand in for a scanned signature database in tests and examples.

    Parameters
    ----------
    * `forgery` [str, dict, or ForgeryModel]:
        How forgeries are produced.
        If str, it should be the kind of forgery model ("skilled" or
            "random"). In this case, further arguments can be given
            (e.g. `jitter`).
        If dict, one key should be `kind`.
        If ForgeryModel, this ForgeryModel will be used.

    * `size` [int, default=64]:
        Side of the rendered images in pixels.

    * `genuine_jitter` [float, default=0.01]:
        Control point jitter of genuine signatures.
    """

    def __init__(
        self,
        forgery: Union[str, dict, ForgeryModel, None] = "random",
        size: int = 64,
        genuine_jitter: float = GENUINE_JITTER,
    ):
        self.forgery = parse_forgery_model(forgery)
        if size < 8:
            raise ValueError("Expected `size` >= 8, got %d" % size)
        self.size = size
        self.genuine_jitter = genuine_jitter

    def make_dataset(
        self,
        n_identities: int,
        genuine_per_id: int,
        forged_per_id: int,
        seed: int,
    ) -> Manifest:
        """
        Render a labelled dataset with the genuine/forged layout of a
        signature database.

        Identity `i` is generated from the child seed `(seed, i)` and draws
        its renders from its own stream, so identities are independent of
        each other and of the dataset size.

        Returns
        -------
        * `manifest` [Manifest]:
            Rows `<identity>/genuine_NN.pgm` followed by
            `<identity>/forged_NN.pgm` for every identity, with the images
            held in memory. Forged rows name their victim identity.
        """
        for name, count in (
            ("n_identities", n_identities),
            ("genuine_per_id", genuine_per_id),
            ("forged_per_id", forged_per_id),
        ):
            if count < 1:
                raise ValueError("Expected `%s` >= 1, got %d" % (name, count))
        rows, images = [], []
        for i in range(n_identities):
            identity = "id%03d" % i
            identity_seed = derive_seed(seed, i)
            spec = gen_identity(identity_seed)
            rng = spawn_generator(identity_seed, 1)
            for j in range(genuine_per_id):
                rows.append(
                    ManifestRow("%s/genuine_%02d.pgm" % (identity, j), identity, GENUINE)
                )
                images.append(render(spec, self.genuine_jitter, rng, self.size))
            for j in range(forged_per_id):
                rows.append(
                    ManifestRow("%s/forged_%02d.pgm" % (identity, j), identity, FORGED)
                )
                images.append(self.forgery.forge(spec, rng, self.size))
        return Manifest(rows, images=images)


def make_dataset(
    n_identities: int,
    genuine_per_id: int,
    forged_per_id: int,
    forgery: Union[str, dict, ForgeryModel, None] = "random",
    seed: int = 0,
    size: int = 64,
) -> Manifest:
    """Shortcut for `SignatureSystem(forgery, size).make_dataset(...)`."""
    system = SignatureSystem(forgery=forgery, size=size)
    return system.make_dataset(n_identities, genuine_per_id, forged_per_id, seed)


def write_dataset(manifest: Manifest, outdir, name="manifest.csv"):
    """Save the in-memory images as PGMs and the manifest CSV under `outdir`.

    Returns the list of written file paths.
    """
    written = []
    for i, row in enumerate(manifest.rows):
        path = os.path.join(outdir, row.path)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        save_image(path, manifest.load_image(i))
        written.append(path)
    manifest_path = os.path.join(outdir, name)
    manifest.write(manifest_path)
    written.append(manifest_path)
    return written
