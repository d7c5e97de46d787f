"""The model container and symbol combinatorics.

A :class:`MatrixEnsemble` holds k strictly positive d x d matrices, a
strictly positive row-stochastic transition matrix driving the symbol chain,
and an initial symbol distribution.  The initial distribution only seeds the
Monte Carlo chain; the cycle-expansion estimates do not depend on it.

Words are tuples of 0-based symbol indices.  The enumeration helpers stream
either all ``k**n`` words or one representative per rotation class, the
latter because every quantity summed over words here is invariant under
cyclic rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

import numpy as np

from .errors import (
    BadInitialVectorError,
    BudgetExceededError,
    EnsembleShapeError,
    EnsembleValidationError,
    LyapcycleError,
    NoConvergenceError,
    NonPositiveTransitionError,
    NonStochasticRowError,
)
from .linalg import Scalar, check_word, validate_positive

#: Row sums and probability vectors must match 1 this tightly.
STOCHASTIC_TOL = 1e-12

#: Default cap on enumerated words per call.
DEFAULT_BUDGET = 10**8

#: Above this many symbols the stationary distribution switches from a
#: direct linear solve to power iteration.
DIRECT_SOLVE_LIMIT = 64


@dataclass(frozen=True)
class MatrixEnsemble:
    """Model data: matrices, transition matrix, initial distribution."""

    matrices: tuple
    transition: np.ndarray
    initial: np.ndarray

    @property
    def dim(self):
        return self.matrices[0].shape[0]

    @property
    def symbols(self):
        return len(self.matrices)


def ensemble(matrices, transition=None, initial=None, validate=True):
    """Build a :class:`MatrixEnsemble` from array-likes.

    ``transition`` defaults to uniform rows (the i.i.d. special case) and
    ``initial`` to the uniform distribution.  With ``validate`` set, all
    invariant violations are collected and raised together as
    :class:`EnsembleValidationError`.
    """
    mats = tuple(np.array(m, dtype=Scalar) for m in matrices)
    if not mats:
        raise EnsembleShapeError("ensemble needs at least one matrix")
    k = len(mats)
    if transition is None:
        transition = np.full((k, k), 1.0 / k)
    trans = np.array(transition, dtype=Scalar)
    if initial is None:
        initial = np.full(k, 1.0 / k)
    init = np.array(initial, dtype=Scalar)
    for m in mats:
        m.setflags(write=False)
    trans.setflags(write=False)
    init.setflags(write=False)
    ens = MatrixEnsemble(mats, trans, init)
    if validate:
        errors = validate_ensemble(ens)
        if errors:
            raise EnsembleValidationError(errors)
    return ens


def validate_ensemble(ens):
    """Return the list of all invariant violations (empty when valid)."""
    errors = []
    k = ens.symbols
    dims = {m.shape for m in ens.matrices}
    if any(m.ndim != 2 or m.shape[0] != m.shape[1] for m in ens.matrices):
        errors.append(EnsembleShapeError("every model matrix must be square"))
    elif len(dims) > 1:
        errors.append(
            EnsembleShapeError(f"model matrices disagree on dimension: {sorted(dims)}")
        )
    else:
        for idx, m in enumerate(ens.matrices):
            try:
                validate_positive(m)
            except LyapcycleError as err:
                err.matrix_index = idx
                errors.append(err)

    trans = ens.transition
    if trans.ndim != 2 or trans.shape != (k, k):
        errors.append(
            EnsembleShapeError(f"transition must be {k} x {k}, got {trans.shape}")
        )
    else:
        for i in range(k):
            for j in range(k):
                if not trans[i, j] > 0:
                    errors.append(NonPositiveTransitionError(i, j, float(trans[i, j])))
            total = float(trans[i].sum())
            if abs(total - 1.0) > STOCHASTIC_TOL:
                errors.append(NonStochasticRowError(i, total))

    init = ens.initial
    if init.ndim != 1 or init.shape != (k,):
        errors.append(BadInitialVectorError(f"initial must have length {k}"))
    elif np.any(init < 0) or abs(float(init.sum()) - 1.0) > STOCHASTIC_TOL:
        errors.append(
            BadInitialVectorError(
                f"initial vector {init.tolist()} is not a probability vector"
            )
        )
    return errors


def stationary_distribution(transition, tol=1e-14, max_iter=100_000):
    """Unique stationary row vector q with q P = q, sum q = 1, q > 0.

    Direct linear solve (transpose system plus a normalization row) for
    small symbol counts; power iteration beyond ``DIRECT_SOLVE_LIMIT``.
    """
    p = np.asarray(transition, dtype=float)
    k = p.shape[0]
    if k <= DIRECT_SOLVE_LIMIT:
        system = np.vstack([p.T - np.eye(k), np.ones((1, k))])
        rhs = np.zeros(k + 1)
        rhs[-1] = 1.0
        q, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    else:
        q = np.full(k, 1.0 / k)
        for _ in range(max_iter):
            nxt = q @ p
            nxt /= nxt.sum()
            if np.abs(nxt - q).max() < tol:
                q = nxt
                break
            q = nxt
        else:
            raise NoConvergenceError(max_iter, "stationary-distribution iteration")
    return q / q.sum()


def cyclic_probability(word, transition):
    """Probability product around the closed symbol cycle.

    Multiplies ``p[w0,w1] ... p[w(n-2),w(n-1)] p[w(n-1),w0]``; a length-1
    word gives the self-transition probability.  Factors are multiplied in
    ascending order, so every rotation of a word yields the bit-identical
    result.
    """
    p = np.asarray(transition)
    check_word(word, p.shape[0])
    n = len(word)
    factors = sorted(p[word[j], word[(j + 1) % n]] for j in range(n))
    acc = p.dtype.type(1)
    for f in factors:
        acc = acc * f
    return acc


def enumerate_words(k, n, start=0, stop=None, budget=DEFAULT_BUDGET):
    """Yield all length-n words over k symbols in lexicographic order.

    ``start``/``stop`` select a contiguous index range so disjoint chunks
    can be owned by separate workers; the stream is restartable.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    total = k**n
    if total > budget:
        raise BudgetExceededError(total, budget)
    if stop is None or stop > total:
        stop = total
    if start < 0 or start > stop:
        raise ValueError(f"bad index range [{start}, {stop})")

    word = [0] * n
    idx = start
    for pos in range(n - 1, -1, -1):
        word[pos] = idx % k
        idx //= k
    for _ in range(stop - start):
        yield tuple(word)
        j = n - 1
        while j >= 0 and word[j] == k - 1:
            word[j] = 0
            j -= 1
        if j < 0:
            return
        word[j] += 1


@dataclass(frozen=True)
class NecklaceClass:
    """One rotation class of words: lexicographically minimal representative,
    number of distinct rotations (the primitive period), and word length."""

    representative: tuple
    multiplicity: int
    length: int


def _fkm_necklaces(k, n):
    # Fredricksen-Kern-Maiorana: representatives in lexicographic order,
    # each with its primitive period p (n % p == 0 selects necklaces).
    word = [0] * (n + 1)

    def gen(t, p):
        if t > n:
            if n % p == 0:
                yield NecklaceClass(tuple(word[1 : n + 1]), p, n)
        else:
            word[t] = word[t - p]
            yield from gen(t + 1, p)
            for j in range(word[t - p] + 1, k):
                word[t] = j
                yield from gen(t + 1, t)

    yield from gen(1, 1)


def necklace_classes(k, n, start=0, stop=None, budget=DEFAULT_BUDGET):
    """Yield one representative per rotation class of length-n words.

    Multiplicities sum to ``k**n``.  ``start``/``stop`` select a contiguous
    range of classes for chunked consumption.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if k**n > budget:
        raise BudgetExceededError(k**n, budget)
    return islice(_fkm_necklaces(k, n), start, stop)


def _euler_phi(n):
    result = n
    q = 2
    while q * q <= n:
        if n % q == 0:
            while n % q == 0:
                n //= q
            result -= result // q
        q += 1
    if n > 1:
        result -= result // n
    return result


def necklace_count(k, n):
    """Number of rotation classes of length-n words over k symbols."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _euler_phi(d) * k ** (n // d)
    return total // n
