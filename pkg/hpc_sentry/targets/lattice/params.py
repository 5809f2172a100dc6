"""
This file contains the parameter set of the toy lattice scheme.
"""

from pydantic import BaseModel, ConfigDict, model_validator


class LatticeParams(BaseModel):
    """
    Parameters of the toy lattice scheme.

    The mask range is fixed independently of `beta`, and small enough that no
    response coefficient can reach `gamma1 - beta`. The response check never
    rejects, so the rejection rate comes from the low-bits check alone: about
    one iteration in four is accepted with the defaults, and every iteration
    is accepted once `beta` is 0.

    Attributes
    ----------
    q : int
        Modulus, at most 2^13.
    n : int
        Ring degree, a power of two.
    k : int
        Rows of the public matrix.
    l : int
        Columns of the public matrix.
    eta : int
        Secret coefficient bound.
    tau : int
        Number of non-zero challenge coefficients.
    gamma1 : int
        Response bound. Signer and verifier require ||z||inf < gamma1 - beta.
    mask_bound : int
        Largest mask coefficient magnitude. mask_bound + tau * eta < gamma1 - beta.
    gamma2 : int
        Low-bits range of the commitment decomposition.
    beta : int
        Rejection margin subtracted from gamma1 and gamma2 in the bound checks.
    omega : int
        Maximum hint weight.
    d : int
        Dropped bits of the public key.
    """

    model_config = ConfigDict(frozen=True)

    q: int = 7681
    n: int = 64
    k: int = 2
    l: int = 2
    eta: int = 1
    tau: int = 4
    gamma1: int = 2048
    mask_bound: int = 2000
    gamma2: int = 1920
    beta: int = 21
    omega: int = 64
    d: int = 3

    @model_validator(mode="after")
    def validate_bounds(self) -> "LatticeParams":
        if self.q > 1 << 13 or self.q < 3:
            raise ValueError("q must be within [3, 2^13].")
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError("n must be a power of two.")
        if not 0 <= self.beta <= self.gamma1:
            raise ValueError("beta must be within [0, gamma1].")
        if self.gamma1 >= self.q:
            raise ValueError("gamma1 must be smaller than q.")
        if not 1 <= self.tau <= self.n:
            raise ValueError("tau must be within [1, n].")
        if self.mask_bound < 1 or self.mask_bound + self.tau * self.eta >= self.gamma1 - self.beta:
            raise ValueError("mask_bound must be positive and mask_bound + tau * eta must stay below gamma1 - beta.")
        if self.n > 256:
            raise ValueError("n must not exceed 256.")
        if self.gamma2 <= self.beta or 2 * self.gamma2 - 1 >= self.q:
            raise ValueError("gamma2 must exceed beta and satisfy 2 * gamma2 - 1 < q.")
        if self.k < 1 or self.l < 1 or self.d < 1:
            raise ValueError("k, l and d must be positive.")
        return self

    @property
    def alpha(self) -> int:
        """
        Odd decomposition modulus, low bits are within [-(gamma2 - 1), gamma2 - 1].
        """

        return 2 * self.gamma2 - 1

    def sparam(self) -> "LatticeParams":
        return self.model_copy(update={"beta": 0})
