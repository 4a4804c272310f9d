from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def get_random_generator(input: SeedLike) -> np.random.Generator:
    """Get a random generator from an input.

    Parameters
    ----------
    * `input` [int, SeedSequence instance, Generator instance, or None (default)]:
        Set random state to something other than None for reproducible
        results. A Generator is returned as-is, so callers sharing it also
        share its stream.

    Returns
    -------
    * `rng`: [Generator instance]
       Random generator.
    """
    if input is None:
        return np.random.default_rng()
    elif isinstance(input, (int, np.integer)):
        if input < 0:
            raise ValueError("Expected a non-negative seed, got %d" % input)
        return np.random.default_rng(int(input))
    elif isinstance(input, np.random.SeedSequence):
        return np.random.default_rng(input)
    elif isinstance(input, np.random.Generator):
        return input
    else:
        raise TypeError(
            "Random state must be either None, an integer, a SeedSequence "
            "instance, or a Generator instance."
        )


def spawn_generator(seed: int, stream_id: int) -> np.random.Generator:
    """Independent child stream keyed by `(seed, stream_id)`.

    The stream only depends on the pair, never on how many streams were
    derived before it, so work split over processes draws the same numbers
    as a serial run.
    """
    if seed < 0 or stream_id < 0:
        raise ValueError(
            "Expected non-negative seed and stream id, got (%d, %d)"
            % (seed, stream_id)
        )
    return np.random.default_rng(
        np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    )


def derive_seed(seed: int, stream_id: int) -> int:
    """A 63-bit integer seed for the `(seed, stream_id)` child stream."""
    state = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    return int(state.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def sample_standard_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw `n` i.i.d. N(0, 1) values.

    Uses the ziggurat sampler of numpy's `Generator.standard_normal`, so the
    values are fully determined by the generator state.
    """
    if n < 1:
        raise ValueError("Expected `n` >= 1, got %d" % n)
    return rng.standard_normal(n)


def as_sklearn_random_state(rng: SeedLike) -> int:
    """Integer seed for scikit-learn estimators drawn from `rng`."""
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    return int(get_random_generator(rng).integers(2**31 - 1))
