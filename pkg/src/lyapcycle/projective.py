"""Projective geometry of the positive cone.

Points of the positive projective space are represented on the chart where
the first coordinate equals 1; :func:`chart_point` normalizes a raw positive
vector onto it.  The metric helpers (:func:`hilbert_distance`,
:func:`angle_distance`) accept raw positive vectors as well, since both
distances are scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    as_square,
    gauss_determinant,
    perron,
)


def chart_point(v):
    """Normalize a strictly positive vector to first coordinate 1."""
    x = np.asarray(v)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"expected a non-empty vector, got shape {x.shape}")
    if not np.all(x > 0):
        raise ValueError("chart points need strictly positive coordinates")
    return x / x[0]


def projective_action(a, x):
    """Apply a positive matrix on the chart: ``x -> A x / (A x)[0]``."""
    w = as_square(a) @ np.asarray(x)
    return w / w[0]


def fixed_point(a, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Unique chart fixed point of the induced map: the Perron direction."""
    return perron(a, tol, max_iter)[1]


def chart_jacobian(a, x, lam):
    """Closed-form Jacobian of the induced chart map.

    Valid at the fixed point ``x`` with ``lam = (A x)[0]`` the top
    eigenvalue, where entry (i, j) is ``(a[i+1, j+1] - a[0, j+1] * x[i+1]) /
    lam`` for 0-based chart coordinates.  For d = 1 the chart is a single
    point and the Jacobian is the empty 0 x 0 matrix (determinant 1).
    """
    m = as_square(a)
    d = m.shape[0]
    if d == 1:
        return np.zeros((0, 0), dtype=m.dtype)
    x = np.asarray(x)
    return (m[1:, 1:] - np.outer(x[1:], m[0, 1:])) / lam


def det_factor_jacobian(a, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """``det(I - J)`` with J the chart Jacobian at the Perron fixed point.

    Agrees with :func:`lyapcycle.linalg.det_factor_charpoly` up to rounding;
    the two routes are kept independent so they can cross-check each other.
    """
    m = as_square(a)
    lam, s = perron(m, tol, max_iter)
    jac = chart_jacobian(m, s, lam)
    eye = np.eye(jac.shape[0], dtype=m.dtype)
    return gauss_determinant(eye - jac)


def hilbert_distance(x, y):
    """Projective Hilbert metric between positive vectors.

    ``log(max_i x_i/y_i) - log(min_i x_i/y_i)``: zero iff the vectors are
    proportional, and invariant under positive rescaling of either argument.
    """
    r = np.asarray(x) / np.asarray(y)
    return np.log(r.max()) - np.log(r.min())


def angle_distance(x, y):
    """Sine of the angle between the lines spanned by x and y, in [0, 1]."""
    u = np.asarray(x, dtype=float)
    v = np.asarray(y, dtype=float)
    dot = float(u @ v)
    val = 1.0 - dot * dot / (float(u @ u) * float(v @ v))
    return math.sqrt(max(val, 0.0))


def projective_diameter(a):
    """Hilbert diameter of the cone image of a positive matrix.

    The supremum over the open cone is attained at coordinate directions, so
    this is the maximum of ``hilbert_distance`` over column pairs; rank-one
    positive matrices give 0.
    """
    m = as_square(a)
    d = m.shape[1]
    best = m.dtype.type(0)
    for i in range(d):
        for j in range(i + 1, d):
            dist = hilbert_distance(m[:, i], m[:, j])
            if dist > best:
                best = dist
    return best


@dataclass(frozen=True)
class ContractionReport:
    """Contraction diagnostics of a positive map (or an ensemble of them).

    ``birkhoff == tanh(diameter / 4)`` is the Hilbert-metric Lipschitz
    constant, < 1 for strictly positive matrices.  ``max_violation`` is the
    largest observed ``d_H(Ax, Ay) - birkhoff * d_H(x, y)`` (<= 0 when the
    contraction bound held on every sample); ``max_ratio`` is the largest
    observed ratio against the bound, used by the ensemble-level check.
    Samples with ``d_H(x, y) == 0`` are skipped and counted separately.
    """

    diameter: float
    birkhoff: float
    samples_checked: int = 0
    max_violation: float = 0.0
    max_ratio: float = float("nan")
    skipped: int = 0


def birkhoff_coefficient(a, samples=0, seed=0):
    """Contraction coefficient ``tanh(diameter / 4)`` of a positive matrix.

    With ``samples > 0``, additionally verifies the contraction inequality
    ``d_H(Ax, Ay) <= k(A) d_H(x, y)`` on random positive pairs and records
    the worst violation.
    """
    m = as_square(a)
    diameter = projective_diameter(m)
    coef = np.tanh(diameter / 4)
    checked = 0
    skipped = 0
    worst = None
    if samples:
        rng = np.random.default_rng(seed)
        d = m.shape[0]
        for _ in range(samples):
            x = rng.uniform(0.1, 10.0, size=d)
            y = rng.uniform(0.1, 10.0, size=d)
            dxy = hilbert_distance(x, y)
            if dxy == 0:
                skipped += 1
                continue
            violation = hilbert_distance(m @ x, m @ y) - coef * dxy
            if worst is None or violation > worst:
                worst = violation
            checked += 1
    return ContractionReport(
        diameter=float(diameter),
        birkhoff=float(coef),
        samples_checked=checked,
        max_violation=float(worst) if worst is not None else 0.0,
        skipped=skipped,
    )
