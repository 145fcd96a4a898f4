"""Dense linear algebra over Z/p with int64 numpy arrays.

Entries are kept in ``[0, p)``; callers pick ``p`` small enough that
``rows * p**2`` fits in int64.
"""
from __future__ import annotations

import numpy as np


def inverse_mod(x: int, p: int) -> int:
    return pow(int(x) % p, -1, p)


def rref_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    reduced = np.asarray(matrix, dtype=np.int64) % p
    rows, cols = reduced.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(reduced[r:, c])
        if not len(nonzero):
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            reduced[[r, pivot]] = reduced[[pivot, r]]
        reduced[r] = reduced[r] * inverse_mod(reduced[r, c], p) % p
        factors = reduced[:, c].copy()
        factors[r] = 0
        reduced = (reduced - np.outer(factors, reduced[r])) % p
        pivots.append(c)
        r += 1
    return reduced[:r], pivots


def nullspace_mod(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{v : matrix @ v = 0}`` as the columns of the result."""
    matrix = np.asarray(matrix, dtype=np.int64)
    cols = matrix.shape[1]
    reduced, pivots = rref_mod(matrix, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(pivots):
            basis[c, j] = (-reduced[i, f]) % p
    return basis


def column_echelon(basis: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced column echelon form: ``result[pivots, :]`` is the identity."""
    reduced, pivots = rref_mod(np.asarray(basis, dtype=np.int64).T, p)
    return np.ascontiguousarray(reduced.T), pivots


def charpoly_mod(matrix: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial, highest degree first (Faddeev-LeVerrier).

    Needs ``p`` larger than the matrix size so that every ``1/k`` exists.
    """
    a = np.asarray(matrix, dtype=np.int64) % p
    n = a.shape[0]
    coeffs = [1]
    m = np.zeros_like(a)
    identity = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        m = (a @ m + coeffs[-1] * identity) % p
        trace = int(np.trace(a @ m % p)) % p
        coeffs.append((-trace * inverse_mod(k, p)) % p)
    return coeffs


def roots_mod(coeffs: list[int], p: int) -> list[int]:
    """All roots in ``[0, p)`` by evaluating the polynomial everywhere."""
    points = np.arange(p, dtype=np.int64)
    values = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        values = (values * points + c) % p
    return np.flatnonzero(values == 0).tolist()
