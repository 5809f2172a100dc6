from .base import KEY_SEED_BYTES, MAX_INPUT_BYTES, BaseTarget, KeyPair, Signature, split_input
from .frontend import encode_message
from .hashtree import HashtreeParams, HashtreeTarget, hashtree_sign, hashtree_verify
from .lattice import LatticeParams, LatticeTarget, lattice_sign, lattice_verify
from .layout import MemoryLayout, block_id, site_id
from .primitives import PrimitiveKind, Primitives, strong_hash, weak_hash
from .subversion import Scheme, SubversionVariant, apply_subversion
from .uov import UovParams, UovTarget, uov_sign, uov_verify

__all__ = [
    "KEY_SEED_BYTES",
    "MAX_INPUT_BYTES",
    "BaseTarget",
    "HashtreeParams",
    "HashtreeTarget",
    "KeyPair",
    "LatticeParams",
    "LatticeTarget",
    "MemoryLayout",
    "PrimitiveKind",
    "Primitives",
    "Scheme",
    "Signature",
    "SubversionVariant",
    "UovParams",
    "UovTarget",
    "apply_subversion",
    "block_id",
    "encode_message",
    "hashtree_sign",
    "hashtree_verify",
    "lattice_sign",
    "lattice_verify",
    "site_id",
    "split_input",
    "strong_hash",
    "uov_sign",
    "uov_verify",
    "weak_hash",
]
