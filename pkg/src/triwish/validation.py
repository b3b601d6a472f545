"""Statistical and numerical test machinery.

Kolmogorov-Smirnov tests (exact statistic, asymptotic p-value), a
regularized-incomplete-gamma chi-square CDF, Monte Carlo moment checks for
the matrix samplers, central finite-difference Jacobian determinants on
triangular coordinates, and the naive outer-product Wishart construction
used as a distributional oracle for the Bartlett-type samplers.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidParameter, MeanUndefined, NumericalFailure, TooFewSamples
from .linalg import as_square, check_cholesky_factor, gram_ut
from .samplers import ScaleParam, SamplerSpec, rwishart, sample_invwishart

MIN_KS_SAMPLES = 10
CONFIDENT_SAMPLES = 1000


@dataclass
class KsResult:
    """Supremum ECDF deviation plus its asymptotic p-value."""

    statistic: float
    pvalue: float
    n: int
    n2: int | None = None


@dataclass
class MomentReport:
    """Monte Carlo sample mean against an analytic target."""

    sample_mean: np.ndarray
    target: np.ndarray
    relative_error: float
    nsamples: int
    confident: bool  # False when nsamples is below CONFIDENT_SAMPLES


def normal_cdf(x):
    """Standard normal CDF, elementwise on arrays."""
    return special.ndtr(x)


def _kolmogorov_sf(t):
    # Asymptotic two-sided survival function 2 sum_k (-1)^(k-1) exp(-2 k^2 t^2).
    if t < 1e-8:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * t * t)
        total += sign * term
        if term < 1e-16 * max(total, 1e-16):
            break
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


def _eval_cdf(cdf, xs):
    try:
        vals = np.asarray(cdf(xs), dtype=float)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([cdf(float(v)) for v in xs])


def ks_one_sample(draws, cdf):
    """One-sample KS test of draws against a continuous CDF."""
    xs = np.sort(np.asarray(draws, dtype=float))
    n = xs.size
    if n < MIN_KS_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_KS_SAMPLES} draws, got {n}")
    f = _eval_cdf(cdf, xs)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    d = max(float(d_plus), float(d_minus), 0.0)
    rn = math.sqrt(n)
    pvalue = _kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d)
    return KsResult(statistic=d, pvalue=pvalue, n=n)


def ks_two_sample(a, b):
    """Two-sample KS test for equality of two empirical distributions."""
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    n1, n2 = xa.size, xb.size
    if n1 < MIN_KS_SAMPLES or n2 < MIN_KS_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_KS_SAMPLES} draws in each sample")
    grid = np.concatenate([xa, xb])
    cdf1 = np.searchsorted(xa, grid, side="right") / n1
    cdf2 = np.searchsorted(xb, grid, side="right") / n2
    d = float(np.max(np.abs(cdf1 - cdf2)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    pvalue = _kolmogorov_sf((en + 0.12 + 0.11 / en) * d)
    return KsResult(statistic=d, pvalue=pvalue, n=n1, n2=n2)


def _reg_lower_gamma(a, x):
    # Regularized lower incomplete gamma P(a, x): series for x < a + 1,
    # modified-Lentz continued fraction for the upper tail otherwise.
    if x == 0.0:
        return 0.0
    gln = math.lgamma(a)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(1000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-17:
                break
        return total * math.exp(-x + a * math.log(x) - gln)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    q = math.exp(-x + a * math.log(x) - gln) * h
    return min(1.0, max(0.0, 1.0 - q))


def chi_square_cdf(x, k):
    """CDF of the chi-square distribution with k > 0 real degrees of freedom."""
    if not k > 0.0:
        raise InvalidParameter(f"chi-square degrees of freedom must be positive, got {k}")
    if x < 0.0:
        raise InvalidParameter(f"chi-square CDF argument must be nonnegative, got {x}")
    return _reg_lower_gamma(0.5 * k, 0.5 * x)


def _covariance_matrix(scale):
    if scale.iscov:
        return gram_ut(scale.matrix) if scale.ischolu else scale.matrix
    prec = gram_ut(scale.matrix) if scale.ischolu else scale.matrix
    return np.linalg.inv(prec)


def _precision_matrix(scale):
    if not scale.iscov:
        return gram_ut(scale.matrix) if scale.ischolu else scale.matrix
    cov = gram_ut(scale.matrix) if scale.ischolu else scale.matrix
    return np.linalg.inv(cov)


def _relative_frobenius(delta, target):
    return float(np.linalg.norm(delta) / np.linalg.norm(target))


def mc_mean_wishart(rng, spec, nsamples):
    """Monte Carlo mean of Wishart draws against the analytic mean n * Sigma."""
    if nsamples < 1:
        raise TooFewSamples("need at least one draw")
    full = SamplerSpec(spec.m, spec.n, spec.scale, retcholu=False)
    acc = np.zeros((spec.m, spec.m))
    for _ in range(nsamples):
        acc += rwishart(rng, full)
    mean = acc / nsamples
    target = spec.n * _covariance_matrix(spec.scale)
    return MomentReport(
        sample_mean=mean,
        target=target,
        relative_error=_relative_frobenius(mean - target, target),
        nsamples=nsamples,
        confident=nsamples >= CONFIDENT_SAMPLES,
    )


def mc_mean_invwishart(rng, spec, algorithm, nsamples):
    """Monte Carlo mean of inverse-Wishart draws against Omega / (n - m - 1).

    The mean only exists for n > m + 1; otherwise MeanUndefined is raised.
    """
    if not spec.n > spec.m + 1:
        raise MeanUndefined(
            f"inverse-Wishart mean needs n > m + 1, got n={spec.n}, m={spec.m}"
        )
    if nsamples < 1:
        raise TooFewSamples("need at least one draw")
    full = SamplerSpec(spec.m, spec.n, spec.scale, retcholu=False)
    acc = np.zeros((spec.m, spec.m))
    for _ in range(nsamples):
        acc += sample_invwishart(rng, full, algorithm)
    mean = acc / nsamples
    target = _precision_matrix(spec.scale) / (spec.n - spec.m - 1)
    return MomentReport(
        sample_mean=mean,
        target=target,
        relative_error=_relative_frobenius(mean - target, target),
        nsamples=nsamples,
        confident=nsamples >= CONFIDENT_SAMPLES,
    )


def triangular_coords(m):
    """Distinct upper-triangle coordinates in wedge order (11, 12, 22, 13, ...)."""
    return [(i, j) for j in range(m) for i in range(j + 1)]


def _vec_upper(x, coords):
    return np.array([x[i, j] for i, j in coords])


def fd_logdet_jacobian(map_fn, at):
    """log |det J| of a map on upper-triangular matrices, by central differences.

    The Jacobian is assembled coordinate by coordinate over the m(m+1)/2
    distinct entries in wedge order, with step 1e-6 * max(1, |coordinate|).
    Raises NumericalFailure if the finite-difference Jacobian is singular
    to working precision.
    """
    at = as_square(at)
    m = at.shape[0]
    coords = triangular_coords(m)
    d = len(coords)
    jac = np.zeros((d, d))
    for col, (i, j) in enumerate(coords):
        h = 1e-6 * max(1.0, abs(at[i, j]))
        hi = at.copy()
        hi[i, j] += h
        lo = at.copy()
        lo[i, j] -= h
        diff = _vec_upper(map_fn(hi), coords) - _vec_upper(map_fn(lo), coords)
        jac[:, col] = diff / (2.0 * h)
    sign, logabs = np.linalg.slogdet(jac)
    if sign == 0.0 or not np.isfinite(logabs):
        raise NumericalFailure("finite-difference Jacobian is singular to working precision")
    return float(logabs)


def rwishart_outer_oracle(rng, m, n, u_sigma):
    """Naive Wishart draw from the defining sum of outer products.

    Draws n columns y = U_Sigma^T g with g standard normal (entries in row
    order, columns in order) and accumulates sum_i y_i y_i^T.  Requires
    integer n >= 1; this is a small-n validation oracle, not a production
    sampler.
    """
    if int(n) != n or n < 1:
        raise InvalidParameter(f"outer-product oracle needs integer n >= 1, got {n}")
    u_sigma = check_cholesky_factor(u_sigma, "covariance factor")
    if u_sigma.shape[0] != m:
        raise InvalidParameter(f"factor is {u_sigma.shape[0]}x{u_sigma.shape[0]}, expected m={m}")
    normal = rng.standard_normal
    acc = np.zeros((m, m))
    for _ in range(int(n)):
        g = np.array([normal() for _ in range(m)])
        y = u_sigma.T @ g
        acc += np.outer(y, y)
    return acc
