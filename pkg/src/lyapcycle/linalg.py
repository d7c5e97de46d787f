"""Dense kernels for strictly positive matrices.

Everything operates on plain numpy arrays and is dtype-generic: pass
``float64`` data for ordinary runs and ``numpy.longdouble`` when deep
truncation orders need extra mantissa bits.  Nothing here calls LAPACK, so
the extended-precision path runs through exactly the same arithmetic.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from .errors import (
    IndexOutOfRangeError,
    NoConvergenceError,
    NonDominantRootError,
    NonPositiveEntryError,
    SingularMatrixError,
)

#: Default scalar type.  The expansion pipeline threads a ``dtype`` argument
#: everywhere, so an extended-precision scalar can be substituted wholesale.
Scalar = np.float64

#: Power-iteration defaults; see :func:`perron`.
DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 10_000

#: Rescale long matrix products every this many factors.  Entries grow like
#: ``lam1 ** n`` and overflow double precision near ``n ~ 700 / log10(lam1)``.
RENORM_EVERY = 8


def as_square(a, dtype=None):
    """Return ``a`` as a square 2-d floating array, checking the shape."""
    m = np.asarray(a, dtype=dtype)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.dtype.kind in "iub":
        m = m.astype(Scalar)
    return m


def validate_positive(a):
    """Check the model-matrix preconditions: all entries > 0, det != 0.

    Raises ``NonPositiveEntryError`` for the first offending entry in
    row-major order, or ``SingularMatrixError`` when elimination yields a
    zero determinant.
    """
    m = as_square(a)
    bad = np.argwhere(~(m > 0))
    if bad.size:
        i, j = bad[0]
        raise NonPositiveEntryError(int(i), int(j), float(m[i, j]))
    if gauss_determinant(m) == 0:
        raise SingularMatrixError("matrix is singular")


def gauss_determinant(a):
    """Determinant by Gaussian elimination with partial pivoting.

    Deliberately LAPACK-free so it accepts any real floating dtype; the
    0 x 0 determinant is 1 (empty product).
    """
    m = as_square(a)
    d = m.shape[0]
    if d == 0:
        return m.dtype.type(1) if m.dtype.kind == "f" else np.float64(1)
    m = m.copy()
    det = m.dtype.type(1)
    for col in range(d):
        piv = col + int(np.argmax(np.abs(m[col:, col])))
        if m[piv, col] == 0:
            return m.dtype.type(0)
        if piv != col:
            m[[col, piv], :] = m[[piv, col], :]
            det = -det
        det = det * m[col, col]
        if col + 1 < d:
            factors = m[col + 1 :, col] / m[col, col]
            m[col + 1 :, col:] -= np.outer(factors, m[col, col:])
    return det


def check_word(word, n_matrices):
    """Validate a symbol word against the number of available matrices."""
    if len(word) == 0:
        raise ValueError("word must be non-empty")
    for i in word:
        if not 0 <= i < n_matrices:
            raise IndexOutOfRangeError(i, n_matrices)


def cycle_product(word, matrices, dtype=None):
    """Product ``M[w[n-1]] @ ... @ M[w[0]]`` along a word.

    Factors apply in word order, so the last symbol ends up leftmost.
    """
    check_word(word, len(matrices))
    mats = [as_square(m, dtype) for m in matrices]
    prod = mats[word[0]].copy()
    for i in word[1:]:
        prod = mats[i] @ prod
    return prod


def scaled_cycle_product(word, matrices, renorm_every=RENORM_EVERY, dtype=None):
    """Overflow-safe cycle product.

    Divides by the largest entry every ``renorm_every`` factors and
    accumulates the extracted scale, returning ``(scaled, log_scale)`` with
    ``true_product = scaled * exp(log_scale)``.  Eigenvalue ratios (hence the
    determinant factor) are unchanged by the scaling; the top eigenvalue is
    recovered as ``log(lam_scaled) + log_scale``.
    """
    check_word(word, len(matrices))
    mats = [as_square(m, dtype) for m in matrices]
    prod = mats[word[0]].copy()
    log_scale = prod.dtype.type(0)
    for count, i in enumerate(word[1:], start=2):
        prod = mats[i] @ prod
        if count % renorm_every == 0:
            scale = prod.max()
            prod = prod / scale
            log_scale = log_scale + np.log(scale)
    return prod, log_scale


def perron(a, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Top eigenpair of a strictly positive matrix by power iteration.

    Iterates from the all-ones vector, renormalizing the first coordinate to
    1 each step.  Stops once the Hilbert distance between successive
    iterates drops below ``tol`` (scale-free criterion; positive matrices
    contract it geometrically) and the residual ``|A s - lam s|`` is below
    ``tol * |A|_inf``.  Returns ``(lam, s)`` with ``lam = (A s)[0]`` and
    ``s[0] == 1``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_square(a)
    d = m.shape[0]
    s = np.ones(d, dtype=m.dtype)
    anorm = np.abs(m).sum(axis=1).max()
    for _ in range(max_iter):
        w = m @ s
        lam = w[0]
        nxt = w / lam
        ratios = nxt / s
        gap = np.log(ratios.max()) - np.log(ratios.min())
        residual = np.abs(w - lam * s).max()
        if gap < tol and residual <= tol * anorm:
            return lam, s
        s = nxt
    raise NoConvergenceError(max_iter)


def char_poly(a):
    """Monic characteristic polynomial via the Faddeev-LeVerrier recurrence.

    Returns coefficients ``c[0..d]`` in ascending powers:
    ``chi(x) = c[0] + c[1] x + ... + c[d] x**d`` with ``c[d] = 1``.
    """
    m = as_square(a)
    d = m.shape[0]
    coeffs = np.zeros(d + 1, dtype=m.dtype)
    coeffs[d] = 1
    aux = np.eye(d, dtype=m.dtype)
    for k in range(1, d + 1):
        prod = m @ aux
        ck = -np.trace(prod) / m.dtype.type(k)
        coeffs[d - k] = ck
        if k < d:
            aux = prod + ck * np.eye(d, dtype=m.dtype)
    return coeffs


def poly_eval(coeffs, x):
    """Horner evaluation of ascending-order coefficients."""
    c = np.asarray(coeffs)
    acc = c[-1]
    for j in range(len(c) - 2, -1, -1):
        acc = acc * x + c[j]
    return acc


def poly_derivative(coeffs):
    """Ascending-order coefficients of the derivative polynomial."""
    c = np.asarray(coeffs)
    return c[1:] * np.arange(1, len(c), dtype=c.dtype)


def det_factor_charpoly(a, lam):
    """Product of ``1 - lam_i / lam`` over the subdominant eigenvalues.

    Evaluated as ``chi'(lam) / lam**(d-1)``, which equals the product because
    ``chi'(lam1) = prod_{i >= 2} (lam1 - lam_i)`` at a simple root.  Needs
    only the dominant eigenvalue, never the complex spectrum.  For d = 1 the
    empty product is 1.
    """
    m = as_square(a)
    d = m.shape[0]
    if d == 1:
        return m.dtype.type(1)
    dchi = poly_derivative(char_poly(m))
    value = poly_eval(dchi, lam) / lam ** (d - 1)
    if not value > 0:
        raise NonDominantRootError(
            f"determinant factor {value!r} is not positive; "
            "top eigenvalue not strictly dominant within tolerance"
        )
    return value


@dataclass(frozen=True)
class SpectralData:
    """Perron data of one strictly positive matrix.

    ``perron_direction`` has first coordinate exactly 1; ``char_coeffs`` are
    monic ascending coefficients; ``det_factor`` is the subdominant product
    ``prod(1 - lam_i / lam_1)``.
    """

    top_eigenvalue: float
    perron_direction: np.ndarray
    char_coeffs: np.ndarray
    det_factor: float


def spectral_data(a, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Compute the full :class:`SpectralData` of a positive matrix."""
    m = as_square(a)
    lam, s = perron(m, tol, max_iter)
    return SpectralData(lam, s, char_poly(m), det_factor_charpoly(m, lam))
