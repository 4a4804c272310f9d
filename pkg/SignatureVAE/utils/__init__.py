from .get_rng import (
    get_random_generator,
    spawn_generator,
    derive_seed,
    sample_standard_normal,
    as_sklearn_random_state,
)
from .linalg import ShapeError, as_matrix, matmul
from .utils import (
    create_result,
    eval_callbacks,
    canonical_json,
    write_json,
    config_hash,
    get_n_jobs,
    fmt_float,
    mean_or_none,
)

__all__ = [
    "get_random_generator",
    "spawn_generator",
    "derive_seed",
    "sample_standard_normal",
    "as_sklearn_random_state",
    "ShapeError",
    "as_matrix",
    "matmul",
    "create_result",
    "eval_callbacks",
    "canonical_json",
    "write_json",
    "config_hash",
    "get_n_jobs",
    "fmt_float",
    "mean_or_none",
]
