"""
This file contains the polynomial arithmetic over Z_q[X]/(X^n + 1) used by the lattice scheme.
"""

from typing import Tuple

import numpy as np


def polymul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """
    Negacyclic product of two polynomials with coefficients in [0, q).
    """

    n = a.shape[0]
    full = np.convolve(a, b)
    out = full[:n].copy()
    out[: n - 1] -= full[n:]
    return out % q


def matvec(matrix: np.ndarray, vector: np.ndarray, q: int) -> np.ndarray:
    """
    Product of a (k, l, n) polynomial matrix with an (l, n) polynomial vector.
    """

    k, l, n = matrix.shape
    out = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        for j in range(l):
            out[i] += polymul(matrix[i, j], vector[j], q)
    return out % q


def scale(c: np.ndarray, vector: np.ndarray, q: int) -> np.ndarray:
    """
    Product of the polynomial `c` with every polynomial of `vector`.
    """

    return np.stack([polymul(c, v, q) for v in vector]) % q


def centered(x: np.ndarray, q: int) -> np.ndarray:
    """
    Representatives of `x` mod q within [-(q - 1) / 2, (q - 1) / 2].
    """

    r = np.mod(x, q)
    return np.where(r > q // 2, r - q, r)


def decompose(w: np.ndarray, alpha: int, q: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split w = r1 * alpha + r0 with r0 the centered residue of w mod alpha.
    `alpha` is odd, so |r0| <= (alpha - 1) / 2.
    """

    r = np.mod(w, q)
    r0 = np.mod(r, alpha)
    r0 = np.where(r0 > (alpha - 1) // 2, r0 - alpha, r0)
    r1 = (r - r0) // alpha
    return r1, r0


def high_bits(w: np.ndarray, alpha: int, q: int) -> np.ndarray:
    return decompose(w, alpha, q)[0]


def low_bits(w: np.ndarray, alpha: int, q: int) -> np.ndarray:
    return decompose(w, alpha, q)[1]


def power2round(t: np.ndarray, d: int, q: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split t = t1 * 2^d + t0 with t0 within (-2^(d-1), 2^(d-1)].
    """

    r = np.mod(t, q)
    half = 1 << (d - 1)
    t0 = np.mod(r, 1 << d)
    t0 = np.where(t0 > half, t0 - (1 << d), t0)
    t1 = (r - t0) >> d
    return t1, t0

