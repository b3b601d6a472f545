"""Wishart and inverse-Wishart samplers built on triangular factors.

Two routes produce an inverse-Wishart draw:

* ``rinvwishart_indirect`` - the standard route: sample a Cholesky-Wishart
  factor by the Bartlett construction, invert it, and square up.
* ``rinvwishart_direct`` - the direct route: sample the Cholesky factor of
  the inverse-Wishart matrix itself (inverse Bartlett factor times the
  upper factor of the precision scale), so no factorization of the output
  is ever needed.

Both accept any of the four scale parameterizations (covariance, precision,
or either one's upper Cholesky factor) via :class:`ScaleParam`, and both
tally their POTRF/TRTRI/TRMM usage in an :class:`OpCounter`;
``EXPECTED_OP_COUNTS`` records the exact tally for each combination.
``recommend_algorithm`` picks the route with the cheaper tally.

Draw-order contract (seed reproducibility): the Bartlett-type fills consume
randomness column by column, for j = 1..m drawing the j-1 off-diagonal
normals z_1j .. z_(j-1)j first and the diagonal chi draw z_jj last.  For
equal (m, n) both fills consume exactly m(m-1)/2 normal draws and m chi
draws in the same positions; only the chi degrees of freedom differ
(n+1-j for the Wishart fill, n-m+j for the inverse-Wishart fill).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidDegreesOfFreedom, InvalidParameter
from .linalg import (
    OpCounter,
    as_square,
    check_cholesky_factor,
    chol_upper,
    gram_ut,
    gram_vt,
    tri_inverse,
    tri_mul,
)

INDIRECT = "indirect"
DIRECT = "direct"
AUTO = "auto"


@dataclass
class ScaleParam:
    """Scale matrix plus the flags naming which parameterization it is.

    ``iscov`` true means the matrix is a covariance-side scale (or its
    factor), false means precision-side.  ``ischolu`` true means the matrix
    is already an upper Cholesky factor; it is then checked structurally
    (upper triangular, positive diagonal) but never re-factorized.
    """

    matrix: np.ndarray
    iscov: bool = True
    ischolu: bool = False

    def __post_init__(self):
        if self.ischolu:
            self.matrix = check_cholesky_factor(self.matrix, "scale factor")
        else:
            self.matrix = as_square(self.matrix)
            if not np.isfinite(self.matrix).all():
                raise InvalidParameter("scale matrix has non-finite entries")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def kind(self):
        """One of 'cov', 'cov_chol', 'prec', 'prec_chol'."""
        base = "cov" if self.iscov else "prec"
        return base + ("_chol" if self.ischolu else "")


@dataclass
class SamplerSpec:
    """Dimension, degrees of freedom, scale, and output form for one sampler call."""

    m: int
    n: float
    scale: ScaleParam
    retcholu: bool = False

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParameter(f"dimension m must be a positive integer, got {self.m}")
        self.m = int(self.m)
        if not self.n > self.m - 1:
            raise InvalidDegreesOfFreedom(
                f"need n > m - 1 for a nonsingular matrix, got n={self.n}, m={self.m}"
            )
        if self.scale.dim != self.m:
            raise DimensionMismatch(
                f"scale is {self.scale.dim}x{self.scale.dim}, expected {self.m}x{self.m}"
            )


def _bartlett_fill(rng, m, n, diag_df):
    if int(m) != m or m < 1:
        raise InvalidParameter(f"dimension m must be a positive integer, got {m}")
    if not n > m - 1:
        raise InvalidDegreesOfFreedom(f"need n > m - 1, got n={n}, m={m}")
    normal = rng.standard_normal
    chi = rng.chi
    z = np.zeros((m, m))
    for j in range(m):
        if j:
            z[:j, j] = [normal() for _ in range(j)]
        z[j, j] = chi(diag_df(j + 1))
    return z


def draw_bartlett_wishart(rng, m, n):
    """Bartlett factor Z with Z ~ CholeskyWishart(n, identity).

    Column j gets j-1 standard normals above a chi_(n+1-j) diagonal entry,
    in the documented draw order.
    """
    return _bartlett_fill(rng, m, n, lambda j: n + 1 - j)


def draw_bartlett_invwishart(rng, m, n):
    """Factor Z whose inverse is ~ CholeskyInverseWishart(n, identity).

    Identical draw order to :func:`draw_bartlett_wishart`; the diagonal of
    column j uses chi_(n-m+j) instead.
    """
    return _bartlett_fill(rng, m, n, lambda j: n - m + j)


def cholesky_upper_param(scale, invert, counter=None):
    """Upper Cholesky factor of the scale matrix or of its inverse.

    With ``invert`` the factor U of S is inverted (TRTRI), squared into
    S^-1 = (U^-1)(U^-1)^T (TRMM), and re-factorized (POTRF); without it the
    factor is computed directly, or passed through untouched when the scale
    is already a factor.
    """
    if invert:
        u = scale.matrix if scale.ischolu else chol_upper(scale.matrix, counter)
        c = tri_inverse(u, counter)
        p = gram_vt(c, counter)
        return chol_upper(p, counter)
    if scale.ischolu:
        return scale.matrix
    return chol_upper(scale.matrix, counter)


def rwishart_chol(rng, m, n, u_sigma, counter=None):
    """Cholesky-Wishart draw: Bartlett factor times the scale factor (one TRMM)."""
    z = draw_bartlett_wishart(rng, m, n)
    return tri_mul(z, u_sigma, counter)


def rinvwishart_chol(rng, m, n, u_omega, counter=None):
    """Cholesky-inverse-Wishart draw without any factorization.

    Inverts the Bartlett-type factor (one TRTRI) and multiplies by the
    precision-side factor (one TRMM).  The chi diagonal is strictly
    positive, so the inversion cannot fail.
    """
    z = draw_bartlett_invwishart(rng, m, n)
    c = tri_inverse(z, counter)
    return tri_mul(c, u_omega, counter)


def rinvwishart_indirect(rng, spec, counter=None):
    """Inverse-Wishart draw via a Wishart draw and inversion (standard route).

    Returns the matrix, or its upper Cholesky factor if ``spec.retcholu``
    (which costs one extra POTRF on this route).
    """
    u_sigma = cholesky_upper_param(spec.scale, not spec.scale.iscov, counter)
    u_a = rwishart_chol(rng, spec.m, spec.n, u_sigma, counter)
    v = tri_inverse(u_a, counter)
    b = gram_vt(v, counter)
    if spec.retcholu:
        return chol_upper(b, counter)
    return b


def rinvwishart_direct(rng, spec, counter=None):
    """Inverse-Wishart draw with the Cholesky factor generated directly.

    With ``spec.retcholu`` the factor is returned as-is (no extra work);
    otherwise one TRMM squares it up into the full matrix.
    """
    u_omega = cholesky_upper_param(spec.scale, spec.scale.iscov, counter)
    u_b = rinvwishart_chol(rng, spec.m, spec.n, u_omega, counter)
    if spec.retcholu:
        return u_b
    return gram_ut(u_b, counter)


def rwishart(rng, spec, counter=None):
    """Wishart draw (full matrix or factor) from a covariance-side scale."""
    if not spec.scale.iscov:
        raise InvalidParameter("Wishart sampling expects a covariance-side scale (iscov)")
    u_sigma = cholesky_upper_param(spec.scale, False, counter)
    u_a = rwishart_chol(rng, spec.m, spec.n, u_sigma, counter)
    if spec.retcholu:
        return u_a
    return gram_ut(u_a, counter)


def recommend_algorithm(scale):
    """Cheaper inverse-Wishart route for this parameterization.

    Covariance-side scales favor the indirect route; precision-side scales
    favor the direct route (see ``EXPECTED_OP_COUNTS``).
    """
    return INDIRECT if scale.iscov else DIRECT


def sample_invwishart(rng, spec, algorithm, counter=None):
    """Dispatch helper: run the named route, resolving ``'auto'`` first."""
    if algorithm == AUTO:
        algorithm = recommend_algorithm(spec.scale)
    if algorithm == INDIRECT:
        return rinvwishart_indirect(rng, spec, counter)
    if algorithm == DIRECT:
        return rinvwishart_direct(rng, spec, counter)
    raise InvalidParameter(f"unknown algorithm {algorithm!r}")


# (trtri, trmm, potrf) for every parameterization x route x output form.
# retcholu=False returns the full matrix, True just the factor.
EXPECTED_OP_COUNTS = {
    ("cov", INDIRECT, False): OpCounter(trtri=1, trmm=2, potrf=1),
    ("cov", INDIRECT, True): OpCounter(trtri=1, trmm=2, potrf=2),
    ("cov_chol", INDIRECT, False): OpCounter(trtri=1, trmm=2, potrf=0),
    ("cov_chol", INDIRECT, True): OpCounter(trtri=1, trmm=2, potrf=1),
    ("prec", INDIRECT, False): OpCounter(trtri=2, trmm=3, potrf=2),
    ("prec", INDIRECT, True): OpCounter(trtri=2, trmm=3, potrf=3),
    ("prec_chol", INDIRECT, False): OpCounter(trtri=2, trmm=3, potrf=1),
    ("prec_chol", INDIRECT, True): OpCounter(trtri=2, trmm=3, potrf=2),
    ("cov", DIRECT, False): OpCounter(trtri=2, trmm=3, potrf=2),
    ("cov", DIRECT, True): OpCounter(trtri=2, trmm=2, potrf=2),
    ("cov_chol", DIRECT, False): OpCounter(trtri=2, trmm=3, potrf=1),
    ("cov_chol", DIRECT, True): OpCounter(trtri=2, trmm=2, potrf=1),
    ("prec", DIRECT, False): OpCounter(trtri=1, trmm=2, potrf=1),
    ("prec", DIRECT, True): OpCounter(trtri=1, trmm=1, potrf=1),
    ("prec_chol", DIRECT, False): OpCounter(trtri=1, trmm=2, potrf=0),
    ("prec_chol", DIRECT, True): OpCounter(trtri=1, trmm=1, potrf=0),
}
