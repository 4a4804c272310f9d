"""Monitor and influence VAE training via callbacks.

Callbacks are callables which are invoked after each training epoch and are
passed the results "so far". Callbacks can monitor progress, or stop
training early by returning `True`.

Monitoring callbacks
--------------------
* VerboseCallback
* TimerCallback
* CheckpointSaver

Early stopping callbacks
------------------------
* DeltaLossStopper
* DeadlineStopper
"""
import logging
from collections.abc import Callable
from time import time

import numpy as np

from .learning.vae.checkpoint import save_checkpoint

logger = logging.getLogger(__name__)


def check_callback(callback):
    """
    Check if callback is a callable or a list of callables.
    """
    if callback is not None:
        if isinstance(callback, Callable):
            return [callback]

        elif (isinstance(callback, (list, tuple)) and
              all([isinstance(c, Callable) for c in callback])):
            return list(callback)

        else:
            raise ValueError("callback should be either a callable or "
                             "a list of callables.")
    else:
        return []


class VerboseCallback(object):
    """
    Log the loss breakdown of every epoch.

    Parameters
    ----------
    * `n_total` [int]:
        Total number of epochs.

    * `level` [int, default=logging.INFO]:
        Logging level of the messages.

    Attributes
    ----------
    * `epoch_no`: [int]:
        Number of epochs seen so far.
    """

    def __init__(self, n_total, level=logging.INFO):
        self.n_total = n_total
        self.level = level
        self.epoch_no = 0
        self._start_time = time()

    def __call__(self, res):
        """
        Parameters
        ----------
        * `res` [`OptimizeResult`, scipy object]:
            The training result so far.
        """
        time_taken = time() - self._start_time
        self.epoch_no += 1
        last = res.history[-1]
        logger.log(
            self.level,
            "Epoch %d/%d: total %.4f = recon %.4f + %g * kl %.4f (%.2fs)",
            self.epoch_no, self.n_total, last.total, last.recon,
            last.beta_effective, last.kl, time_taken,
        )
        self._start_time = time()


class TimerCallback(object):
    """
    Log the elapsed time of each training epoch.

    The time for each epoch is stored in the `iter_time` attribute which
    you can inspect after training has completed.

    Attributes
    ----------
    * `iter_time`: [list, shape=(n_epochs,)]:
        `iter_time[i]` gives the time taken to complete epoch `i`
    """
    def __init__(self):
        self._time = time()
        self.iter_time = []

    def __call__(self, res):
        elapsed_time = time() - self._time
        self.iter_time.append(elapsed_time)
        self._time = time()


class EarlyStopper(object):
    """Decide to continue or not given the results so far.

    Training will be stopped if the callback returns True.
    """
    def __call__(self, result):
        """
        Parameters
        ----------
        * `result` [`OptimizeResult`, scipy object]:
            The training result so far.
        """
        return self._criterion(result)

    def _criterion(self, result):
        """Compute the decision to stop or not.

        Classes inheriting from `EarlyStopper` should use this method to
        implement their decision logic.

        Returns
        -------
        * `decision`:
            Return True/False if the criterion can make a decision or `None` if
            there is not enough data yet to make a decision.
        """
        raise NotImplementedError("The _criterion method should be implemented"
                                  " by subclasses of EarlyStopper.")


class DeltaLossStopper(EarlyStopper):
    """Stop training once the last `n_best` epoch totals are within `delta`

    Unlike a stopper on the best values, this looks at the most recent
    epochs, so a plateau ends training even after an earlier better epoch.
    """
    def __init__(self, delta, n_best=5):
        super(DeltaLossStopper, self).__init__()
        if n_best < 2:
            raise ValueError("Expected `n_best` >= 2, got %d" % n_best)
        self.delta = delta
        self.n_best = n_best

    def _criterion(self, result):
        if len(result.func_vals) >= self.n_best:
            recent = np.asarray(result.func_vals[-self.n_best:])
            return bool(recent.max() - recent.min() < self.delta)

        else:
            return None


class DeadlineStopper(EarlyStopper):
    """
    Stop training before running out of a fixed budget of time.

    Attributes
    ----------
    * `iter_time`: [list, shape=(n_epochs,)]:
        `iter_time[i]` gives the time taken to complete epoch `i`

    Parameters
    ----------
    * `total_time`: fixed budget of time (seconds) that training must
        finish within.
    """
    def __init__(self, total_time):
        super(DeadlineStopper, self).__init__()
        self._time = time()
        self.iter_time = []
        self.total_time = total_time

    def _criterion(self, result):
        elapsed_time = time() - self._time
        self.iter_time.append(elapsed_time)
        self._time = time()

        if result.history:
            time_remaining = self.total_time - np.sum(self.iter_time)
            return bool(time_remaining <= np.max(self.iter_time))
        else:
            return None


class CheckpointSaver(object):
    """
    Save the network after each epoch as an SVAE checkpoint.

    Example usage:
        import SignatureVAE as SV

        saver = SV.callbacks.CheckpointSaver("./model.svae")
        SV.train(manifest, cfg, callback=[saver])

    Parameters
    ----------
    * `checkpoint_path`: location where the checkpoint will be saved to.
        The JSON sidecar is written next to it.
    """
    def __init__(self, checkpoint_path):
        self.checkpoint_path = checkpoint_path

    def __call__(self, res):
        save_checkpoint(self.checkpoint_path, res.params, res.history)
