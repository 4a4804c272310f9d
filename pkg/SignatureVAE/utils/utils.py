import hashlib
import json
import os
from typing import Sequence

import numpy as np
from scipy.optimize import OptimizeResult


__all__ = (
    "create_result",
    "eval_callbacks",
    "write_json",
    "canonical_json",
    "config_hash",
    "get_n_jobs",
)


def create_result(params, history, config=None, rng=None, specs=None):
    """
    Initialize an `OptimizeResult` object for a VAE training run.

    Parameters
    ----------
    * `params` [VaeParams]:
        Network weights after the last completed update.

    * `history` [list of LossBreakdown]:
        Loss breakdown of every finished epoch.

    * `config` [VaeConfig, optional]:
        Configuration the network was trained with.

    * `rng` [Generator instance, optional]:
        State of the random generator.

    * `specs` [dict, optional]:
        Call specifications.

    Returns
    -------
    * `res` [`OptimizeResult`, scipy object]:
        OptimizeResult instance with the required information. `func_vals`
        holds the per-epoch total loss and `fun` the last one.
    """
    res = OptimizeResult()
    res.params = params
    res.history = list(history)
    res.func_vals = np.asarray([entry.total for entry in history], dtype=float)
    res.fun = res.func_vals[-1] if len(history) else np.nan
    res.config = config
    res.random_state = rng
    res.specs = specs
    return res


def eval_callbacks(callbacks, result):
    """Evaluate list of callbacks on result.

    The return values of the `callbacks` are ORed together to give the
    overall decision on whether or not training should continue.

    Parameters
    ----------
    * `callbacks` [list of callables]:
        Callbacks to evaluate.

    * `result` [`OptimizeResult`, scipy object]:
        Training result so far.

    Returns
    -------
    * `decision` [bool]:
        Decision of the callbacks whether or not to stop training.
    """
    stop = False
    if callbacks:
        for c in callbacks:
            decision = c(result)
            if decision is not None:
                stop = stop or decision

    return stop


def _to_builtin(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError("Object of type %s is not JSON serializable" % type(obj))


def canonical_json(obj) -> str:
    """Stable JSON text: sorted keys, fixed separators, trailing newline."""
    return (
        json.dumps(obj, sort_keys=True, indent=2, default=_to_builtin,
                   allow_nan=True)
        + "\n"
    )


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(canonical_json(obj))
    return path


def config_hash(config) -> str:
    """sha256 of the canonical JSON form of `config`."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def get_n_jobs(n_jobs=None) -> int:
    """Worker count for joblib.

    An explicit `n_jobs` wins. Otherwise `SIGVAE_THREADS` is read: `0`
    means all cores (joblib's `-1`), unset means a serial run.
    """
    if n_jobs is None:
        raw = os.environ.get("SIGVAE_THREADS", "").strip()
        if not raw:
            return 1
        try:
            n_jobs = int(raw)
        except ValueError:
            raise ValueError(
                "SIGVAE_THREADS must be a non-negative integer, got %r" % raw
            )
    if n_jobs < 0 and n_jobs != -1:
        raise ValueError("Expected `n_jobs` >= 0, got %d" % n_jobs)
    return -1 if n_jobs == 0 else n_jobs


def fmt_float(x) -> str:
    """Shortest round-tripping text for a float, used in every CSV."""
    return repr(float(x))


def mean_or_none(values: Sequence):
    values = [v for v in values if v is not None and np.isfinite(v)]
    if not values:
        return None
    return float(np.mean(values))
