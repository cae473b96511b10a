"""Permanent-based transition amplitudes.

Used only to cross-check :func:`bracedmzi.network.apply`; the simulator never
calls into this module.
"""

import itertools
import math

import numpy as np


def permanent(matrix: np.ndarray) -> complex:
    """Brute-force permanent, summing over all permutations. Fine for n <= 6."""
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    total = 0j
    for perm in itertools.permutations(range(n)):
        total += math.prod(a[i, perm[i]] for i in range(n))
    return total


def permanent_amplitude(unitary: np.ndarray, out_occ, in_occ) -> complex:
    """``<out|U|in> = perm(U[rows(out), cols(in)]) / sqrt(prod out! prod in!)``."""
    if sum(out_occ) != sum(in_occ):
        return 0j
    rows = [j for j, m in enumerate(out_occ) for _ in range(m)]
    cols = [k for k, n in enumerate(in_occ) for _ in range(n)]
    sub = np.asarray(unitary)[np.ix_(rows, cols)]
    norm = math.prod(math.factorial(m) for m in out_occ) * math.prod(math.factorial(n) for n in in_occ)
    return permanent(sub) / math.sqrt(norm)
