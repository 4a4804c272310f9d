"""Two-dimensional views of latent codes: exact t-SNE and PCA."""
import csv
import logging
import warnings

import numpy as np
from scipy.optimize import brentq
from scipy.spatial.distance import pdist, squareform
from sklearn.decomposition import PCA

from ..utils import fmt_float, get_random_generator

logger = logging.getLogger(__name__)

EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
P_FLOOR = 1e-12
MAX_BACKOFF = 30
EMBEDDING_HEADER = ("id", "label", "x", "y")


class DuplicatePointsWarning(RuntimeWarning):
    """Identical input points were jittered apart."""


def _row_entropy(log_beta, d):
    """Entropy (nats) of the Gaussian neighbour distribution of one row.

    `d` holds squared distances shifted so their minimum is zero.
    """
    w = np.exp(-np.exp(log_beta) * d)
    s = w.sum()
    p = w / s
    return np.log(s) + np.exp(log_beta) * np.dot(d, p)


def _conditional_p(D, perplexity):
    """Row-stochastic neighbour probabilities, bandwidth per row matched to
    `perplexity`."""
    n = D.shape[0]
    target = np.log(perplexity)
    P = np.zeros((n, n))
    for i in range(n):
        d = np.delete(D[i], i)
        d = d - d.min()
        if len(d) == 1:
            p = np.ones(1)
        else:
            f_lo = _row_entropy(-100.0, d) - target
            f_hi = _row_entropy(100.0, d) - target
            if f_lo * f_hi < 0:
                log_beta = brentq(lambda b: _row_entropy(b, d) - target,
                                  -100.0, 100.0, xtol=1e-12)
            else:
                # perplexity out of reach: take the closest end
                log_beta = -100.0 if abs(f_lo) < abs(f_hi) else 100.0
            w = np.exp(-np.exp(log_beta) * d)
            p = w / w.sum()
        P[i, np.arange(n) != i] = p
    return P


def joint_probabilities(points, perplexity):
    D = squareform(pdist(points, "sqeuclidean"))
    P = _conditional_p(D, perplexity)
    P = (P + P.T) / (2.0 * len(points))
    return np.maximum(P, P_FLOOR)


def _student_t(Y):
    num = 1.0 / (1.0 + squareform(pdist(Y, "sqeuclidean")))
    np.fill_diagonal(num, 0.0)
    Q = np.maximum(num / num.sum(), P_FLOOR)
    return num, Q


def _kl(P, Y):
    _, Q = _student_t(Y)
    mask = ~np.eye(len(P), dtype=bool)
    return float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))


def _gradient(P, Y):
    num, Q = _student_t(Y)
    W = (P - Q) * num
    return 4.0 * (np.diag(W.sum(axis=1)) - W) @ Y


def fit_perplexity(perplexity, n):
    """`perplexity`, lowered to (n - 1) / 3 when n points cannot support it."""
    if n < 2:
        raise ValueError("Expected at least 2 points, got %d" % n)
    if perplexity < n / 3.0:
        return perplexity
    fitted = (n - 1) / 3.0
    logger.warning(
        "Perplexity %g is too large for %d points; using %g instead",
        perplexity, n, fitted,
    )
    return fitted


def tsne_2d(points, perplexity=30.0, iterations=1000, rng=None,
            learning_rate=200.0, return_kl=False):
    """
    Exact t-SNE embedding into two dimensions.

    Per-point Gaussian bandwidths are solved to match `perplexity`, the
    joint probabilities are symmetrised and KL(P || Q) against a Student-t
    kernel is minimised by gradient descent with momentum. The first 250
    iterations use early exaggeration (P times 12, momentum 0.5); later
    steps use momentum 0.8 and halve the step, dropping momentum, until the
    KL does not increase, so the KL is non-increasing after exaggeration.

    Parameters
    ----------
    * `points` [array, shape=(n, d)]:
        Points to embed, at most 5000.

    * `perplexity` [float, default=30]:
        Effective number of neighbours; must be below n / 3.

    * `iterations` [int, default=1000]:
        Gradient steps.

    * `rng` [int, Generator or None]:
        Source of the initial layout and of duplicate jitter.

    * `return_kl` [bool, default=False]:
        Also return the KL(P || Q) after every iteration.

    Returns
    -------
    * `Y` [array, shape=(n, 2)]

    * `kl` [list of float]: Only if `return_kl` is True.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("Expected 2-D points, got %d dims" % X.ndim)
    n = len(X)
    if n < 2:
        raise ValueError("Expected at least 2 points, got %d" % n)
    if n > 5000:
        raise ValueError("Exact t-SNE supports at most 5000 points, got %d" % n)
    if not 0 < perplexity < n / 3.0:
        raise ValueError(
            "Expected 0 < `perplexity` < n / 3 = %g, got %r" % (n / 3.0, perplexity)
        )
    if iterations < 1:
        raise ValueError("Expected `iterations` >= 1, got %d" % iterations)
    rng = get_random_generator(rng)
    if np.any(pdist(X) == 0.0):
        warnings.warn("Duplicate points found; jittering inputs by 1e-9",
                      DuplicatePointsWarning)
        X = X + rng.normal(0.0, 1e-9, X.shape)

    P = joint_probabilities(X, perplexity)
    Y = rng.normal(0.0, 1e-4, (n, 2))
    velocity = np.zeros_like(Y)
    history = []
    for it in range(iterations):
        if it < EXAGGERATION_ITERS:
            grad = _gradient(EXAGGERATION * P, Y)
            velocity = 0.5 * velocity - learning_rate * grad
            Y = Y + velocity
        else:
            grad = _gradient(P, Y)
            current = history[-1] if history else _kl(P, Y)
            step, momentum = learning_rate, 0.8
            for _ in range(MAX_BACKOFF):
                candidate = momentum * velocity - step * grad
                if _kl(P, Y + candidate) <= current:
                    velocity = candidate
                    break
                step, momentum = step / 2.0, 0.0
            else:
                velocity = np.zeros_like(Y)
            Y = Y + velocity
        Y = Y - Y.mean(axis=0)
        history.append(_kl(P, Y))
    logger.debug("t-SNE finished with KL %.5f", history[-1])
    if return_kl:
        return Y, history
    return Y


def pca_2d(points) -> np.ndarray:
    """
    Projection onto the top two principal components.

    Each component is signed so its largest-magnitude loading is positive.
    Components without variance give all-zero coordinates.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2 or len(X) < 2:
        raise ValueError("Expected at least 2 points as an (n, d) array")
    out = np.zeros((len(X), 2))
    centered = X - X.mean(axis=0)
    total = float(np.sum(centered ** 2))
    if total == 0.0:
        return out
    k = min(2, X.shape[0], X.shape[1])
    pca = PCA(n_components=k, svd_solver="full").fit(X)
    components = pca.components_.copy()
    for j, comp in enumerate(components):
        if comp[np.argmax(np.abs(comp))] < 0:
            components[j] = -comp
    coords = centered @ components.T
    negligible = pca.explained_variance_ <= 1e-12 * pca.explained_variance_[0]
    coords[:, negligible] = 0.0
    out[:, :k] = coords
    return out


def write_embedding_csv(path, ids, labels, Y):
    Y = np.asarray(Y, dtype=np.float64)
    if not (len(ids) == len(labels) == len(Y)):
        raise ValueError("ids, labels and coordinates differ in length")
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EMBEDDING_HEADER)
        for i, label, (x, y) in zip(ids, labels, Y):
            writer.writerow([i, label, fmt_float(x), fmt_float(y)])
    return path
