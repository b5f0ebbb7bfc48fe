"""Shared helpers for the test suite."""

import itertools

import numpy as np


def multiset_distance(a, b) -> float:
    """Smallest max-distance matching between two equal-size multisets.

    Complex eigenvalue multisets cannot be compared by lexicographic sorting
    (roundoff reorders conjugate pairs), so match over permutations.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    assert a.shape == b.shape and a.ndim == 1
    best = np.inf
    for perm in itertools.permutations(range(len(b))):
        d = np.max(np.abs(a - b[list(perm)]))
        best = min(best, d)
    return float(best)
