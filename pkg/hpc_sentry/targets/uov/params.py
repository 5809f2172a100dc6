"""
This file contains the parameter set of the toy layered oil-and-vinegar scheme.
"""

from pydantic import BaseModel, ConfigDict, model_validator


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


class UovParams(BaseModel):
    """
    Parameters of the toy UOV scheme.

    Attributes
    ----------
    q : int
        Prime field size, at most 256.
    v1 : int
        Number of vinegar variables.
    o1 : int
        Oil variables of the first layer.
    o2 : int
        Oil variables of the second layer.
    """

    model_config = ConfigDict(frozen=True)

    q: int = 31
    v1: int = 12
    o1: int = 8
    o2: int = 8

    @model_validator(mode="after")
    def validate_field(self) -> "UovParams":
        if not is_prime(self.q) or self.q > 256:
            raise ValueError("q must be a prime not larger than 256.")
        if self.v1 < 1 or self.o1 < 1 or self.o2 < 1:
            raise ValueError("v1, o1 and o2 must be positive.")
        return self

    @property
    def m(self) -> int:
        """
        Number of equations, o1 + o2 = n_vars - v1.
        """

        return self.o1 + self.o2

    @property
    def n_vars(self) -> int:
        return self.v1 + self.o1 + self.o2

    def sparam(self) -> "UovParams":
        return self.model_copy(update={"o1": max(1, self.o1 // 2), "o2": max(1, self.o2 // 2)})
