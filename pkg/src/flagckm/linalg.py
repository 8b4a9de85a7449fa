"""Dense complex matrix helpers.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Every
function returns a freshly allocated array and never mutates its inputs.
"""

import numpy as np

from .errors import ShapeError, SingularPivotError, ValidationError

#: Relative tolerance (times the Frobenius norm) for a degenerate pivot in
#: :func:`lu_unpivoted`.
PIVOT_RTOL = 1e-10


def as_matrix(a, name="matrix"):
    """Return ``a`` as a fresh 2-D complex array, rejecting NaN/Inf.

    Extended-precision input keeps its dtype; everything else becomes
    complex128.
    """
    dtype = np.clongdouble if np.asarray(a).dtype == np.clongdouble else np.complex128
    arr = np.array(a, dtype=dtype, copy=True)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def _square(a, name="matrix"):
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    return arr


def identity(n):
    return np.eye(n, dtype=np.complex128)


def adjoint(a):
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def matmul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def commutator(a, b, extended=False):
    """``a @ b - b @ a`` for two square matrices of equal size.

    With ``extended=True`` the products are formed in ``numpy.clongdouble``
    and the result keeps that dtype.
    """
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"commutator needs equal shapes, got {a.shape} and {b.shape}")
    if extended:
        a = a.astype(np.clongdouble)
        b = b.astype(np.clongdouble)
    return a @ b - b @ a


def determinant(a, extended=False):
    """Determinant by Gaussian elimination with partial pivoting.

    Parameters
    ----------
    a : array_like, shape (n, n)
    extended : bool
        Eliminate in ``numpy.clongdouble`` (x87 extended precision on most
        platforms) instead of complex128.

    Returns
    -------
    complex
    """
    lu = _square(a)
    if extended:
        lu = lu.astype(np.clongdouble)
    n = lu.shape[0]
    det = lu.dtype.type(1.0)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0:
            return complex(0.0)
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            det = -det
        pivot = lu[k, k]
        det *= pivot
        if k + 1 < n:
            factors = lu[k + 1:, k] / pivot
            lu[k + 1:, k + 1:] -= np.outer(factors, lu[k, k + 1:])
    return complex(det)


def lu_unpivoted(a, rtol=PIVOT_RTOL):
    """Doolittle factorization ``a = L @ R`` without row exchanges.

    ``L`` is unit lower triangular and ``R`` upper triangular. A pivot whose
    modulus falls below ``rtol * ||a||_F`` raises :class:`SingularPivotError`
    naming the 1-based size of the offending leading principal minor.
    """
    work = _square(a)
    n = work.shape[0]
    threshold = rtol * np.linalg.norm(work)
    lower = identity(n)
    for k in range(n):
        pivot = work[k, k]
        if abs(pivot) <= threshold:
            raise SingularPivotError(
                f"leading principal minor of order {k + 1} is numerically zero "
                f"(|pivot| = {abs(pivot):.3e})",
                index=k + 1,
            )
        if k + 1 < n:
            factors = work[k + 1:, k] / pivot
            lower[k + 1:, k] = factors
            work[k + 1:, k:] -= np.outer(factors, work[k, k:])
    return lower, np.triu(work)


def is_unitary(a, atol=1e-8):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.linalg.norm(a.conj().T @ a - np.eye(a.shape[0])) < atol)


def is_hermitian(a, atol=1e-12):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(a)))
    return bool(np.linalg.norm(a - a.conj().T) <= atol * scale)
