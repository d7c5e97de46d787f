"""Monte Carlo oracle: direct simulation of the matrix Markov chain.

The almost-sure limit of ``log |S_n x| / n`` furnishes an estimator that is
completely independent of the cycle-expansion pipeline, which is exactly
what makes it useful as a cross-check.  The iteration renormalizes the
carried vector in the entry-sum norm (plain positive sums, cheap and exact)
and accumulates the extracted logs; the limit itself is norm-independent.

Reproducibility contract: trial t draws from ``numpy`` PCG64 stream
``default_rng(seed ^ t)``, and identical (seed, config) pairs produce
bit-identical results.  Trials are independent; their means are merged in
trial-index order.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .linalg import cycle_product
from .projective import ContractionReport, hilbert_distance, projective_diameter

#: Uniform draws are consumed in chunks of this many steps.
_CHUNK = 1 << 15


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo result: mean estimate (nats per step), standard error of
    the trial means, and the run configuration that produced it."""

    mean: float
    stderr: float
    steps: int
    trials: int
    seed: int


def simulate_chain(ens, steps, seed):
    """Sample the symbol chain: first index from the initial distribution,
    each subsequent one from the transition row of its predecessor.

    Deterministic in ``seed``; consumes exactly ``steps`` uniforms from the
    stream ``default_rng(seed)``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    k = ens.symbols
    start_cum = np.cumsum(ens.initial).tolist()
    row_cums = [np.cumsum(row).tolist() for row in ens.transition]
    out = np.empty(steps, dtype=np.int64)
    state = -1
    pos = 0
    while pos < steps:
        block = rng.random(min(_CHUNK, steps - pos))
        for u in block.tolist():
            if state < 0:
                state = min(bisect_right(start_cum, u), k - 1)
            else:
                state = min(bisect_right(row_cums[state], u), k - 1)
            out[pos] = state
            pos += 1
    return out


def mc_lyapunov(ens, steps, trials, seed, renorm_every=1):
    """Estimate the top Lyapunov exponent by renormalized vector iteration.

    Each trial starts from the all-ones vector (interior of the cone, and
    the limit is direction-independent anyway), applies the sampled matrices
    chronologically, and renormalizes every ``renorm_every`` steps while
    accumulating the extracted log norms.  All trials advance in lockstep,
    each on its own RNG stream, matching :func:`simulate_chain` symbol for
    symbol.
    """
    if steps < 1 or trials < 1 or renorm_every < 1:
        raise ValueError("steps, trials, and renorm_every must be >= 1")
    k = ens.symbols
    d = ens.dim
    mats = np.stack(ens.matrices)
    start_cum = np.cumsum(ens.initial)
    row_cums = np.cumsum(ens.transition, axis=1)
    streams = [np.random.default_rng(seed ^ t) for t in range(trials)]

    vectors = np.ones((trials, d))
    log_acc = np.zeros(trials)
    states = np.zeros(trials, dtype=np.int64)
    done = 0
    while done < steps:
        block = min(_CHUNK, steps - done)
        uniforms = np.empty((block, trials))
        for t, rng in enumerate(streams):
            uniforms[:, t] = rng.random(block)
        for j in range(block):
            u = uniforms[j]
            if done + j == 0:
                states = np.minimum(
                    np.searchsorted(start_cum, u, side="right"), k - 1
                )
            else:
                rows = row_cums[states]
                states = np.minimum((rows <= u[:, None]).sum(axis=1), k - 1)
            vectors = np.matmul(mats[states], vectors[:, :, None])[:, :, 0]
            if (done + j + 1) % renorm_every == 0:
                norms = vectors.sum(axis=1)
                log_acc += np.log(norms)
                vectors /= norms[:, None]
        done += block
    if steps % renorm_every:
        log_acc += np.log(vectors.sum(axis=1))

    per_trial = (log_acc / steps).tolist()
    mean = 0.0
    for value in per_trial:
        mean += value
    mean /= trials
    if trials == 1:
        stderr = 0.0
    else:
        stderr = float(np.std(per_trial, ddof=1) / math.sqrt(trials))
    return McEstimate(mean=mean, stderr=stderr, steps=steps, trials=trials, seed=seed)


def contraction_check(ens, samples, word_len, seed):
    """Empirical check of the uniform Hilbert-metric contraction bound.

    Draws random words of the given length and random positive vector pairs,
    and compares ``d_H(S x, S y)`` against ``r**word_len * d_H(x, y)`` with
    ``r`` the worst single-matrix contraction coefficient.  The reported
    ``max_ratio`` should not exceed 1.  Coincident pairs (zero distance) are
    skipped and counted.
    """
    if samples < 1 or word_len < 1:
        raise ValueError("samples and word_len must be >= 1")
    k = ens.symbols
    d = ens.dim
    diameters = [projective_diameter(m) for m in ens.matrices]
    worst_diameter = float(max(diameters))
    rate = float(np.tanh(worst_diameter / 4.0))
    bound_scale = rate**word_len

    rng = np.random.default_rng(seed)
    checked = 0
    skipped = 0
    max_ratio = 0.0
    max_violation = None
    for _ in range(samples):
        word = tuple(int(i) for i in rng.integers(0, k, size=word_len))
        x = rng.uniform(0.1, 10.0, size=d)
        y = rng.uniform(0.1, 10.0, size=d)
        dist = hilbert_distance(x, y)
        if dist == 0:
            skipped += 1
            continue
        prod = cycle_product(word, ens.matrices)
        dist_image = hilbert_distance(prod @ x, prod @ y)
        bound = bound_scale * dist
        ratio = float(dist_image / bound) if bound > 0 else (
            0.0 if dist_image == 0 else float("inf")
        )
        violation = float(dist_image - bound)
        if ratio > max_ratio:
            max_ratio = ratio
        if max_violation is None or violation > max_violation:
            max_violation = violation
        checked += 1
    return ContractionReport(
        diameter=worst_diameter,
        birkhoff=rate,
        samples_checked=checked,
        max_violation=max_violation if max_violation is not None else 0.0,
        max_ratio=max_ratio if checked else float("nan"),
        skipped=skipped,
    )
