"""Shared fixtures: the standard test ensembles and random-model factories."""

import numpy as np
import pytest

from lyapcycle import ensemble

#: Closed forms for the 2 x 2 workhorse matrix [[2, 1], [1, 1]].
LAMBDA_1 = (3 + np.sqrt(5)) / 2
LAMBDA_2 = (3 - np.sqrt(5)) / 2
LOG_LAMBDA_1 = float(np.log(LAMBDA_1))
DET_FACTOR = float(np.sqrt(5) / LAMBDA_1)  # 1 - lambda2/lambda1


@pytest.fixture
def single():
    """One-matrix chain: the expansion is exact at every order."""
    return ensemble([[[2, 1], [1, 1]]], [[1.0]])


@pytest.fixture
def pair():
    """The standard Markov pair used throughout the acceptance runs."""
    return ensemble(
        [[[2, 1], [1, 1]], [[1, 1], [1, 2]]],
        [[0.6, 0.4], [0.3, 0.7]],
    )


@pytest.fixture
def scalar_uniform():
    """d = 1 with i.i.d. uniform symbols: gamma = 2 log 2 exactly."""
    return ensemble([[[2.0]], [[8.0]]], [[0.5, 0.5], [0.5, 0.5]])


@pytest.fixture
def scalar_markov():
    """d = 1, genuinely Markov transition: gamma = sum q_i log m_i."""
    return ensemble([[[2.0]], [[8.0]]], [[0.6, 0.4], [0.3, 0.7]])


def random_positive_matrix(rng, d, low=0.1, high=10.0):
    return rng.uniform(low, high, size=(d, d))


def random_stochastic(rng, k):
    rows = rng.uniform(0.1, 1.0, size=(k, k))
    return rows / rows.sum(axis=1, keepdims=True)


def random_ensemble(rng, k, d):
    mats = [random_positive_matrix(rng, d) for _ in range(k)]
    return ensemble(mats, random_stochastic(rng, k))


@pytest.fixture
def make_random_ensemble():
    return random_ensemble
