"""
This file contains the parameter set of the toy hash-tree scheme.
"""

from pydantic import BaseModel, ConfigDict, model_validator


class HashtreeParams(BaseModel):
    """
    Parameters of the toy hash-tree scheme.

    Attributes
    ----------
    h : int
        Total height of the hyper-tree.
    d : int
        Number of hyper-tree layers. Must divide `h`.
    k : int
        Number of FORS trees.
    t : int
        Leaves per FORS tree, a power of two.
    n_bytes : int
        Hash width in bytes.
    """

    model_config = ConfigDict(frozen=True)

    h: int = 8
    d: int = 4
    k: int = 4
    t: int = 64
    n_bytes: int = 16

    @model_validator(mode="after")
    def validate_shape(self) -> "HashtreeParams":
        if not 1 <= self.h <= 32:
            raise ValueError("h must be within [1, 32].")
        if self.d < 1 or self.h % self.d:
            raise ValueError("d must be a positive divisor of h.")
        if self.k < 1:
            raise ValueError("k must be positive.")
        if self.t < 2 or self.t > 1 << 16 or self.t & (self.t - 1):
            raise ValueError("t must be a power of two within [2, 2^16].")
        if self.n_bytes < 4:
            raise ValueError("n_bytes must be at least 4.")
        return self

    @property
    def subtree_height(self) -> int:
        return self.h // self.d

    @property
    def log_t(self) -> int:
        return self.t.bit_length() - 1

    @property
    def path_nodes(self) -> int:
        """
        Authentication path nodes in a signature: k * log2(t) + h.
        """

        return self.k * self.log_t + self.h

    def sparam(self) -> "HashtreeParams":
        """
        Scaled-down parameters: the hyper-tree shrinks to 3/8 of its height in a
        single layer, half the FORS trees remain and each holds two leaves.
        """

        h = max(1, 3 * self.h // 8)
        return self.model_copy(update={"h": h, "d": 1, "k": max(1, self.k // 2), "t": 2})
