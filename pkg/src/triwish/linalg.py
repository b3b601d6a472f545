"""Dense square/upper-triangular matrix kernels with operation counting.

Matrices are plain float64 numpy arrays of shape (m, m), row-major, with
upper-triangular matrices storing explicit zeros below the diagonal.  The
three O(m^3) kernels (Cholesky factorization, triangular inversion,
triangular multiplication) are thin instrumented wrappers over LAPACK's
POTRF/TRTRI and BLAS's TRMM; every call increments exactly one field of
the supplied :class:`OpCounter`.

Counting convention: forming the symmetric products U^T U and V V^T each
counts as one TRMM call (an actual LAPACK build might use LAUUM or SYRK
instead, but the cost model here books them under TRMM).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import blas, lapack

from .errors import DimensionMismatch, InvalidParameter, NotPositiveDefinite, SingularMatrix

# Symmetry tolerance for Cholesky input: the upper triangle is authoritative,
# the lower triangle may deviate by round-off up to this relative amount.
SYMMETRY_RTOL = 1e-8


@dataclass
class OpCounter:
    """Tally of O(m^3) kernel invocations during a sampling call."""

    potrf: int = 0
    trtri: int = 0
    trmm: int = 0

    def as_dict(self):
        return {"potrf": self.potrf, "trtri": self.trtri, "trmm": self.trmm}

    def total(self):
        return self.potrf + self.trtri + self.trmm


def as_square(x):
    """Coerce to a float64 (m, m) array; raise DimensionMismatch otherwise."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def check_upper_triangular(u, name="matrix"):
    """Require explicit zeros below the diagonal and finite entries."""
    u = as_square(u)
    if not np.isfinite(u).all():
        raise InvalidParameter(f"{name} has non-finite entries")
    if u.shape[0] > 1 and np.any(np.tril(u, -1) != 0.0):
        raise InvalidParameter(f"{name} has nonzero entries below the diagonal")
    return u


def check_cholesky_factor(u, name="factor"):
    """An upper-triangular matrix with strictly positive diagonal."""
    u = check_upper_triangular(u, name)
    d = np.diag(u)
    if np.any(d <= 0.0):
        j = int(np.argmax(d <= 0.0)) + 1
        raise InvalidParameter(f"{name} diagonal entry {j} is not positive")
    return u


def chol_upper(x, counter=None):
    """Upper Cholesky factor U of a positive definite X, with X = U^T U.

    X must be symmetric to within SYMMETRY_RTOL (the upper triangle is the
    authority; only it is read by the factorization).  Counts one POTRF.

    Raises NotPositiveDefinite if a pivot is non-positive or non-finite;
    the 1-based index of the failing pivot is attached to the exception.
    """
    x = as_square(x)
    if not np.isfinite(x).all():
        raise NotPositiveDefinite("matrix has non-finite entries")
    scale = np.abs(x).max()
    asym = np.abs(x - x.T).max()
    if asym > SYMMETRY_RTOL * max(scale, 1e-300):
        raise InvalidParameter(
            f"matrix is not symmetric: max |x_ij - x_ji| = {asym:g} "
            f"exceeds {SYMMETRY_RTOL:g} * max|x_ij|"
        )
    if counter is not None:
        counter.potrf += 1
    u, info = lapack.dpotrf(x, lower=0)
    if info > 0:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (pivot {info} failed)", pivot=info
        )
    if info < 0:  # pragma: no cover - argument errors cannot occur here
        raise InvalidParameter(f"dpotrf: illegal argument {-info}")
    return u


def tri_inverse(u, counter=None):
    """Inverse of an upper-triangular matrix.  Counts one TRTRI."""
    u = as_square(u)
    d = np.diag(u)
    if np.any(d == 0.0):
        j = int(np.argmax(d == 0.0)) + 1
        raise SingularMatrix(f"triangular matrix has zero diagonal entry {j}")
    if counter is not None:
        counter.trtri += 1
    r, info = lapack.dtrtri(u, lower=0)
    if info > 0:
        raise SingularMatrix(f"triangular matrix is singular at diagonal entry {info}")
    if not np.isfinite(r).all():
        raise SingularMatrix("triangular inverse overflowed to non-finite values")
    return r


def tri_mul(c, x, counter=None):
    """Product C @ X of two upper-triangular matrices.  Counts one TRMM."""
    c = as_square(c)
    x = as_square(x)
    if c.shape != x.shape:
        raise DimensionMismatch(f"cannot multiply shapes {c.shape} and {x.shape}")
    if counter is not None:
        counter.trmm += 1
    return blas.dtrmm(1.0, c, x, side=0, lower=0, trans_a=0)


def gram_ut(u, counter=None):
    """Symmetric product U^T U, exactly symmetric by construction.

    The upper triangle of the BLAS result is mirrored onto the lower so the
    output is bitwise symmetric.  Counts one TRMM (see module docstring).
    """
    u = as_square(u)
    if counter is not None:
        counter.trmm += 1
    raw = blas.dtrmm(1.0, u, u, side=0, lower=0, trans_a=1)
    upper = np.triu(raw)
    return upper + np.triu(raw, 1).T


def gram_vt(v, counter=None):
    """Symmetric product V V^T, exactly symmetric by construction.

    Counts one TRMM, matching the cost model of :func:`gram_ut`.
    """
    v = as_square(v)
    if counter is not None:
        counter.trmm += 1
    raw = blas.dtrmm(1.0, v, v, side=1, lower=0, trans_a=1)
    upper = np.triu(raw)
    return upper + np.triu(raw, 1).T


def frobenius_norm_sq(x):
    """Sum of squared entries, tr(X^T X)."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(x * x))


def log_det_tri(u):
    """log |det U| for triangular U: sum of log |u_jj|."""
    u = as_square(u)
    d = np.diag(u)
    if np.any(d == 0.0):
        j = int(np.argmax(d == 0.0)) + 1
        raise SingularMatrix(f"zero diagonal entry {j}: determinant is zero")
    return float(np.sum(np.log(np.abs(d))))
