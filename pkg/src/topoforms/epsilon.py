"""Levi-Civita permutation tables and a brute-force contraction oracle.

Convention: ``eps^{01} = eps^{123} = eps^{0123} = +1`` (indices counted from 0).
"""
import itertools
from functools import lru_cache

import numpy as np


def _parity(perm):
    """Sign of a permutation by cycle decomposition."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def permutation_table(d):
    """Return ``(perms, signs)`` for all ``d!`` permutations of ``range(d)``.

    ``perms`` is an ``int64`` array of shape ``(d!, d)``, ``signs`` a
    ``float64`` array of +-1. The arrays are read-only and shared.
    """
    perms = np.array(list(itertools.permutations(range(d))), dtype=np.int64)
    signs = np.array([_parity(p) for p in perms], dtype=np.float64)
    perms.flags.writeable = False
    signs.flags.writeable = False
    return perms, signs


def levi_civita(d):
    """Dense ``eps`` tensor of rank ``d``."""
    eps = np.zeros((d,) * d)
    perms, signs = permutation_table(d)
    for p, s in zip(perms, signs):
        eps[tuple(p)] = s
    return eps


def naive_sign(indices):
    """Sign of an index tuple by counting inversions; 0 on any repeat."""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        return 0
    inv = sum(1 for a, b in itertools.combinations(indices, 2) if a > b)
    return -1 if inv % 2 else 1


def naive_contract(*factors):
    """Brute-force ``eps^{i1...id}`` contraction over all ``d**d`` index tuples.

    Each factor is a callable taking its slice of the index tuple and
    returning an array (or scalar); factors consume indices left to right
    according to their ``rank`` attribute. Used as the independent oracle for
    the permutation-table kernels, so it deliberately shares no code with them.
    """
    ranks = [getattr(fac, "rank") for fac in factors]
    d = sum(ranks)
    total = 0.0
    for idx in itertools.product(range(d), repeat=d):
        sign = naive_sign(idx)
        if sign == 0:
            continue
        term = sign
        pos = 0
        for fac, r in zip(factors, ranks):
            term = term * fac(*idx[pos:pos + r])
            pos += r
        total = total + term
    return total


class IndexedFactor:
    """Wrap ``fn(*idx)`` with a fixed index ``rank`` for :func:`naive_contract`."""

    def __init__(self, fn, rank):
        self.fn = fn
        self.rank = rank

    def __call__(self, *idx):
        return self.fn(*idx)
