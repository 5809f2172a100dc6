from .params import LatticeParams
from .scheme import (
    CP_BOUNDS,
    CP_CHALLENGE,
    CP_EXPAND,
    CP_MASK,
    CP_MESSAGE,
    CP_PACK,
    LatticePublicKey,
    LatticeSecretKey,
    LatticeSignature,
    LatticeTarget,
    lattice_sign,
    lattice_verify,
)

__all__ = [
    "CP_BOUNDS",
    "CP_CHALLENGE",
    "CP_EXPAND",
    "CP_MASK",
    "CP_MESSAGE",
    "CP_PACK",
    "LatticeParams",
    "LatticePublicKey",
    "LatticeSecretKey",
    "LatticeSignature",
    "LatticeTarget",
    "lattice_sign",
    "lattice_verify",
]
