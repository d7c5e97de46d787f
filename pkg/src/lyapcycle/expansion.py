"""Cycle expansion of the weighted transfer operator's determinant.

The top Lyapunov exponent of the Markov-driven product is recovered from the
power-series coefficients of the operator determinant.  Each truncation
order n contributes a trace: a sum over closed symbol words of

    cyclic_probability * top_eigenvalue(cycle product)**t / det_factor

together with its t-derivative at 0 (which multiplies the weight by
``log(top_eigenvalue)``).  The determinant coefficients follow from the
traces by a Newton-style recursion, and the estimate at truncation order p is

    gamma(p) = sum_{n<=p} a_n' / sum_{n<=p} n * a_n .

Convergence in p is super-exponential, so a handful of orders already
exhausts double precision; passing ``dtype=numpy.longdouble`` extends the
usable depth.

The summand is invariant under rotating a word, so traces are aggregated
over rotation classes weighted by class size (an n-fold saving, verified
against brute enumeration in the tests).  Summation order is fixed
(class-lexicographic, block-compensated), which makes threaded and serial
runs bit-identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceededError,
    DegenerateDenominatorError,
    LyapcycleError,
    NonDominantRootError,
    NoSignChangeError,
)
from .linalg import (
    DEFAULT_MAX_ITER,
    RENORM_EVERY,
    det_factor_charpoly,
    gauss_determinant,
    perron,
    poly_eval,
    scaled_cycle_product,
)
from .model import DEFAULT_BUDGET, cyclic_probability, necklace_classes, necklace_count
from .projective import chart_jacobian
from .summation import KahanSum

#: Necklace classes per compensated partial sum.  Fixed so that threaded and
#: serial reductions share the identical summation structure.
BLOCK = 64

#: The partition-formula oracle walks all 2**(n-1) compositions per order.
PARTITION_ORDER_CAP = 12


def _resolve_dtype(dtype):
    return np.dtype(np.float64 if dtype is None else dtype)


def _default_tol(dtype):
    # 1e-13 suits IEEE doubles; extended-precision scalars can push further.
    return 1e-13 if np.finfo(dtype).eps > 1e-17 else 1e-17


@dataclass(frozen=True)
class CycleTerm:
    """One closed word's contribution to the order-n traces.

    ``weight = cyclic_prob / det_factor`` enters the plain trace and
    ``weight_deriv = weight * log_top_eigenvalue`` its t-derivative.
    """

    word: tuple
    cyclic_prob: float
    log_top_eigenvalue: float
    det_factor: float
    weight: float
    weight_deriv: float


@dataclass(frozen=True)
class ExpansionState:
    """Everything produced by a depth-p expansion run.

    Index m of ``gammas`` holds the estimate at truncation order m + 1;
    ``gaps[m]`` is ``|gammas[m+1] - gammas[m]|``.
    """

    order: int
    traces: np.ndarray
    trace_derivs: np.ndarray
    coeffs: np.ndarray
    coeff_derivs: np.ndarray
    gammas: np.ndarray
    gaps: np.ndarray
    cycle_counts: np.ndarray | None = None


def _cycle_term(word, mats, trans, tol, max_iter, renorm_every, cross_check):
    scaled, log_scale = scaled_cycle_product(word, mats, renorm_every)
    lam, vec = perron(scaled, tol, max_iter)
    log_lam = np.log(lam) + log_scale
    jac = chart_jacobian(scaled, vec, lam)
    eye = np.eye(jac.shape[0], dtype=scaled.dtype)
    det_factor = gauss_determinant(eye - jac)
    if not det_factor > 0:
        raise NonDominantRootError(
            f"cycle product of word {word} has non-positive determinant factor"
        )
    if cross_check:
        ref = det_factor_charpoly(scaled, lam)
        if abs(det_factor - ref) > 1e-9 * abs(ref):
            raise LyapcycleError(
                f"determinant-factor routes disagree on word {word}: "
                f"jacobian {det_factor!r} vs charpoly {ref!r}"
            )
    p_star = cyclic_probability(word, trans)
    weight = p_star / det_factor
    return CycleTerm(
        word=tuple(word),
        cyclic_prob=p_star,
        log_top_eigenvalue=log_lam,
        det_factor=det_factor,
        weight=weight,
        weight_deriv=weight * log_lam,
    )


def cycle_term(
    word,
    ens,
    *,
    dtype=None,
    tol=None,
    max_iter=DEFAULT_MAX_ITER,
    renorm_every=RENORM_EVERY,
    cross_check=False,
):
    """Contribution of one closed word to the traces of its length.

    The cycle product is rescaled on the fly, so arbitrarily long words are
    safe; the determinant factor comes from the chart Jacobian and, with
    ``cross_check``, is verified against the characteristic-polynomial route.
    """
    dt = _resolve_dtype(dtype)
    if tol is None:
        tol = _default_tol(dt)
    mats = [m.astype(dt) for m in ens.matrices]
    trans = ens.transition.astype(dt)
    return _cycle_term(word, mats, trans, tol, max_iter, renorm_every, cross_check)


def cycle_trace(
    n,
    ens,
    *,
    dtype=None,
    tol=None,
    max_iter=DEFAULT_MAX_ITER,
    renorm_every=RENORM_EVERY,
    n_jobs=1,
    budget=DEFAULT_BUDGET,
):
    """Order-n trace pair: sums of term weights and derivative weights.

    Aggregates over rotation classes times their multiplicities.  With
    ``n_jobs > 1`` the fixed-size blocks are evaluated by a thread pool and
    merged in block order; the result is bit-identical to the serial run.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    dt = _resolve_dtype(dtype)
    if tol is None:
        tol = _default_tol(dt)
    mats = [m.astype(dt) for m in ens.matrices]
    trans = ens.transition.astype(dt)
    classes = list(necklace_classes(ens.symbols, n, budget=budget))
    blocks = [classes[i : i + BLOCK] for i in range(0, len(classes), BLOCK)]
    zero = dt.type(0)

    def block_partial(block):
        acc = KahanSum(zero)
        acc_deriv = KahanSum(zero)
        for cls in block:
            term = _cycle_term(
                cls.representative, mats, trans, tol, max_iter, renorm_every, False
            )
            mult = dt.type(cls.multiplicity)
            acc.add(term.weight * mult)
            acc_deriv.add(term.weight_deriv * mult)
        return acc.total, acc_deriv.total

    if n_jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            partials = list(pool.map(block_partial, blocks))
    else:
        partials = [block_partial(b) for b in blocks]

    total = KahanSum(zero)
    total_deriv = KahanSum(zero)
    for part, part_deriv in partials:
        total.add(part)
        total_deriv.add(part_deriv)
    return total.total, total_deriv.total


def det_coefficients(traces, trace_derivs):
    """Determinant coefficients and their t-derivatives from the traces.

    Newton-style recursion ``n a_n = -sum_{m<=n} T_m a_{n-m}`` (with a_0 = 1)
    and its termwise t-derivative; O(p^2) and the production path.
    """
    t = np.asarray(traces)
    td = np.asarray(trace_derivs)
    p = len(t)
    dt = t.dtype
    a = np.zeros(p + 1, dtype=dt)
    ad = np.zeros(p + 1, dtype=dt)
    a[0] = 1
    for n in range(1, p + 1):
        acc = dt.type(0)
        acc_deriv = dt.type(0)
        for m in range(1, n + 1):
            acc = acc + t[m - 1] * a[n - m]
            acc_deriv = acc_deriv + td[m - 1] * a[n - m] + t[m - 1] * ad[n - m]
        a[n] = -acc / dt.type(n)
        ad[n] = -acc_deriv / dt.type(n)
    return a[1:], ad[1:]


def det_coefficients_by_partitions(traces, trace_derivs):
    """Same contract as :func:`det_coefficients` via the explicit sum over
    ordered compositions; exponential cost, retained purely as a test oracle.

    ``a_n = sum_l (-1)**l / l! * sum_{n_1+...+n_l = n} prod T_{n_j} / n_j``,
    differentiated termwise by the product rule.
    """
    t = np.asarray(traces)
    td = np.asarray(trace_derivs)
    p = len(t)
    if p > PARTITION_ORDER_CAP:
        raise BudgetExceededError(2 ** (p - 1), 2 ** (PARTITION_ORDER_CAP - 1))
    dt = t.dtype
    a = np.zeros(p, dtype=dt)
    ad = np.zeros(p, dtype=dt)
    for n in range(1, p + 1):
        acc = dt.type(0)
        acc_deriv = dt.type(0)
        for mask in range(1 << (n - 1)):
            parts = []
            prev = 0
            for pos in range(n - 1):
                if (mask >> pos) & 1:
                    parts.append(pos + 1 - prev)
                    prev = pos + 1
            parts.append(n - prev)
            length = len(parts)
            vals = [t[q - 1] / dt.type(q) for q in parts]
            dvals = [td[q - 1] / dt.type(q) for q in parts]
            prefix = [dt.type(1)]
            for v in vals:
                prefix.append(prefix[-1] * v)
            suffix = [dt.type(1)]
            for v in reversed(vals):
                suffix.append(suffix[-1] * v)
            suffix.reverse()
            base = prefix[-1]
            deriv = dt.type(0)
            for r in range(length):
                deriv = deriv + dvals[r] * prefix[r] * suffix[r + 1]
            sign = dt.type((-1) ** length) / dt.type(math.factorial(length))
            acc = acc + sign * base
            acc_deriv = acc_deriv + sign * deriv
        a[n - 1] = acc
        ad[n - 1] = acc_deriv
    return a, ad


def state_from_traces(traces, trace_derivs, cycle_counts=None):
    """Assemble an :class:`ExpansionState` from precomputed trace pairs."""
    t = np.asarray(traces)
    td = np.asarray(trace_derivs)
    p = len(t)
    dt = t.dtype
    coeffs, coeff_derivs = det_coefficients(t, td)
    gammas = np.zeros(p, dtype=dt)
    numerator = dt.type(0)
    denominator = dt.type(0)
    for m in range(1, p + 1):
        numerator = numerator + coeff_derivs[m - 1]
        denominator = denominator + dt.type(m) * coeffs[m - 1]
        if abs(denominator) < 1e-300:
            raise DegenerateDenominatorError(m)
        gammas[m - 1] = numerator / denominator
    gaps = np.abs(np.diff(gammas))
    counts = None if cycle_counts is None else np.asarray(cycle_counts, dtype=np.int64)
    return ExpansionState(
        order=p,
        traces=t,
        trace_derivs=td,
        coeffs=coeffs,
        coeff_derivs=coeff_derivs,
        gammas=gammas,
        gaps=gaps,
        cycle_counts=counts,
    )


def lyapunov_estimate(
    ens,
    order,
    *,
    dtype=None,
    tol=None,
    max_iter=DEFAULT_MAX_ITER,
    renorm_every=RENORM_EVERY,
    n_jobs=1,
    budget=DEFAULT_BUDGET,
):
    """Lyapunov-exponent estimates through truncation order ``order``.

    Runs the full pipeline: traces for n = 1..p, determinant coefficients,
    and the cumulative-ratio estimates with their successive gaps.  The
    initial symbol distribution of the ensemble does not enter.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    traces = []
    trace_derivs = []
    counts = []
    for n in range(1, order + 1):
        value, deriv = cycle_trace(
            n,
            ens,
            dtype=dtype,
            tol=tol,
            max_iter=max_iter,
            renorm_every=renorm_every,
            n_jobs=n_jobs,
            budget=budget,
        )
        traces.append(value)
        trace_derivs.append(deriv)
        counts.append(necklace_count(ens.symbols, n))
    return state_from_traces(traces, trace_derivs, counts)


def truncated_determinant(coeffs, z):
    """Evaluate ``1 + sum_n a_n z**n`` at z (Horner)."""
    c = np.asarray(coeffs)
    full = np.empty(len(c) + 1, dtype=c.dtype)
    full[0] = 1
    full[1:] = c
    return poly_eval(full, c.dtype.type(z))


def smallest_positive_root(coeffs, max_steps=65536):
    """Smallest positive real root of the truncated determinant.

    Marches outward from 0 in steps sized by the first-order root until the
    polynomial changes sign, then bisects the bracket.  For valid ensembles
    the root tends to 1 as the truncation order grows (the reciprocal of the
    operator's top eigenvalue at the unweighted point).
    """
    c = np.asarray(coeffs)
    dt = c.dtype
    scale = 1.0 / abs(c[0]) if c[0] != 0 else 1.0
    step = dt.type(scale / 64.0)
    lo = dt.type(0)
    for j in range(1, max_steps + 1):
        hi = step * dt.type(j)
        value = truncated_determinant(c, hi)
        if value == 0:
            return hi
        if value < 0:
            break
        lo = hi
    else:
        raise NoSignChangeError(
            f"no sign change within {max_steps} steps of {float(step)!r}"
        )
    for _ in range(200):
        mid = (lo + hi) / dt.type(2)
        value = truncated_determinant(c, mid)
        if value == 0:
            return mid
        if value < 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / dt.type(2)
