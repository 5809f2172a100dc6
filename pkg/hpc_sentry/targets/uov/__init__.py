from .gf import eliminate, gf_inverse, invert, solve
from .params import UovParams
from .scheme import (
    CP_ATTEMPT,
    CP_DIGEST,
    CP_ELIMINATION,
    CP_MESSAGE,
    CP_PACK,
    CP_TRANSFORM,
    UovPublicKey,
    UovSecretKey,
    UovSignature,
    UovTarget,
    central_mask,
    evaluate,
    uov_sign,
    uov_verify,
)

__all__ = [
    "CP_ATTEMPT",
    "CP_DIGEST",
    "CP_ELIMINATION",
    "CP_MESSAGE",
    "CP_PACK",
    "CP_TRANSFORM",
    "UovParams",
    "UovPublicKey",
    "UovSecretKey",
    "UovSignature",
    "UovTarget",
    "central_mask",
    "eliminate",
    "evaluate",
    "gf_inverse",
    "invert",
    "solve",
    "uov_sign",
    "uov_verify",
]
