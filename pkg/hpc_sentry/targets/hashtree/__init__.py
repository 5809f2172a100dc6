from .params import HashtreeParams
from .scheme import (
    CP_DIGEST,
    CP_FORS_ROOT,
    CP_FORS_TREE,
    CP_LAYER,
    CP_MESSAGE,
    CP_PACK,
    HashtreePublicKey,
    HashtreeSecretKey,
    HashtreeSignature,
    HashtreeTarget,
    hashtree_sign,
    hashtree_verify,
)

__all__ = [
    "CP_DIGEST",
    "CP_FORS_ROOT",
    "CP_FORS_TREE",
    "CP_LAYER",
    "CP_MESSAGE",
    "CP_PACK",
    "HashtreeParams",
    "HashtreePublicKey",
    "HashtreeSecretKey",
    "HashtreeSignature",
    "HashtreeTarget",
    "hashtree_sign",
    "hashtree_verify",
]
