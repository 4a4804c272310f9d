"""Dense float64 linear algebra shared by the image and network code.

Matrices are plain row-major (C-ordered) ``numpy`` arrays of dtype float64.
Every public function returns a fresh array and checks the result is
finite.
"""
import numpy as np
from scipy.special import expit


class ShapeError(ValueError):
    """Raised when operands do not have conformable shapes."""


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return `a` as a C-ordered 2-D float64 array with finite values."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeError("Expected `%s` to be 2-D, got %d dims" % (name, arr.ndim))
    check_finite(arr, name)
    return arr


def check_finite(a: np.ndarray, name="array") -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ValueError("`%s` contains NaN or Inf values" % name)
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product of `a` (m, k) and `b` (k, n)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            "Cannot multiply %s by %s: a.cols != b.rows" % (a.shape, b.shape)
        )
    return check_finite(a @ b, "a @ b")


def _check_same_shape(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError("Operand shapes differ: %s vs %s" % (a.shape, b.shape))
    return a, b


def add(a, b) -> np.ndarray:
    a, b = _check_same_shape(a, b)
    return check_finite(a + b, "a + b")


def hadamard(a, b) -> np.ndarray:
    a, b = _check_same_shape(a, b)
    return check_finite(a * b, "a * b")


def scale(a, c: float) -> np.ndarray:
    return check_finite(np.asarray(a, dtype=np.float64) * float(c), "c * a")


def relu(a) -> np.ndarray:
    return np.maximum(np.asarray(a, dtype=np.float64), 0.0)


def sigmoid(a) -> np.ndarray:
    # expit saturates to exactly 0.0 or 1.0 only beyond |a| ~ 37 / 710;
    # clip so the open interval (0, 1) holds for any finite input.
    out = expit(np.asarray(a, dtype=np.float64))
    tiny = np.finfo(np.float64).tiny
    return np.clip(out, tiny, 1.0 - np.finfo(np.float64).epsneg)


def exp(a) -> np.ndarray:
    return check_finite(np.exp(np.asarray(a, dtype=np.float64)), "exp(a)")
