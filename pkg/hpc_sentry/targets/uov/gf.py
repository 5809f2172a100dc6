"""
This file contains prime-field linear algebra for the UOV scheme. Row
operations of the elimination emit probe events when a probe is given.
"""

from typing import Optional

import numpy as np

from ...vpmu.probe import BaseProbe, NullProbe
from ..layout import block_id, site_id

COEFF_BYTES = 4

_PIVOT_SITE = site_id("uov.gauss.pivot")
_ELIMINATE_SITE = site_id("uov.gauss.eliminate")
_SWAP = block_id("uov.gauss.swap")
_SINGULAR = block_id("uov.gauss.singular")


def gf_inverse(a: int, q: int) -> int:
    if a % q == 0:
        raise ZeroDivisionError("0 has no inverse.")
    return pow(int(a), q - 2, q)


def eliminate(
    augmented: np.ndarray, q: int, probe: Optional[BaseProbe] = None, address: int = 0
) -> Optional[np.ndarray]:
    """
    Gauss-Jordan elimination of an augmented matrix over GF(q).

    Parameters
    ----------
    augmented : np.ndarray
        (rows, cols) matrix with cols >= rows. Not modified.
    q : int
        Prime modulus.
    probe : Optional[BaseProbe], optional
        Receives a branch per pivot test and per candidate row, and a memory
        access per row written, by default None
    address : int, optional
        Simulated address of the matrix, by default 0

    Returns
    -------
    Optional[np.ndarray]
        The reduced matrix, with the identity in its left block, or None if the
        left block is singular.
    """

    probe = probe or NullProbe()
    work = np.mod(augmented, q).astype(np.int64)
    rows, cols = work.shape
    row_bytes = cols * COEFF_BYTES
    for col in range(rows):
        pivot = col
        while pivot < rows and work[pivot, col] == 0:
            probe.branch(_PIVOT_SITE, False)
            pivot += 1
        if pivot == rows:
            probe.block(_SINGULAR)
            return None
        probe.branch(_PIVOT_SITE, True)
        if pivot != col:
            probe.block(_SWAP)
            work[[col, pivot]] = work[[pivot, col]]
            probe.touch(address + pivot * row_bytes, row_bytes)
        work[col] = work[col] * gf_inverse(work[col, col], q) % q
        probe.touch(address + col * row_bytes, row_bytes)
        for r in range(rows):
            if r == col:
                continue
            factor = work[r, col]
            probe.branch(_ELIMINATE_SITE, bool(factor))
            if factor:
                work[r] = (work[r] - factor * work[col]) % q
                probe.touch(address + r * row_bytes, row_bytes)
    return work


def solve(
    matrix: np.ndarray,
    rhs: np.ndarray,
    q: int,
    probe: Optional[BaseProbe] = None,
    address: int = 0,
) -> Optional[np.ndarray]:
    """
    Solution x of matrix @ x = rhs over GF(q), None if `matrix` is singular.
    """

    augmented = np.column_stack([matrix, rhs])
    reduced = eliminate(augmented, q, probe, address)
    return None if reduced is None else reduced[:, -1]


def invert(matrix: np.ndarray, q: int) -> Optional[np.ndarray]:
    size = matrix.shape[0]
    reduced = eliminate(np.hstack([matrix, np.eye(size, dtype=np.int64)]), q)
    return None if reduced is None else reduced[:, size:]
