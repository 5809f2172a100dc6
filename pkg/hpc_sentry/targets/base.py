"""
This file contains the base class of the instrumented toy signature schemes.
"""

from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Any, Callable, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from ..vpmu.probe import BaseProbe, NullProbe
from .primitives import Primitives

KEY_SEED_BYTES = 32
MAX_INPUT_BYTES = 4096
KEYPAIR_CACHE_SIZE = 256


def split_input(data: bytes) -> Tuple[bytes, bytes]:
    """
    Split a test input into a 32-byte key seed and the message. Short inputs
    are zero-padded up to the key seed length and carry an empty message.
    """

    if len(data) < KEY_SEED_BYTES:
        data = data + b"\x00" * (KEY_SEED_BYTES - len(data))
    return data[:KEY_SEED_BYTES], data[KEY_SEED_BYTES:]


class KeyPair(BaseModel):
    """
    A key pair of one of the toy schemes.

    Attributes
    ----------
    scheme : str
        The scheme name.
    seed : bytes
        Key seed the pair was derived from.
    secret : Any
        Scheme-specific secret components.
    public : Any
        Scheme-specific public components, exposing `to_bytes()`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scheme: str
    seed: bytes
    secret: Any
    public: Any

    def hex(self) -> str:
        return bytes(self.public.to_bytes()).hex()


class Signature(BaseModel):
    """
    Base of the scheme-specific signatures.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def to_bytes(self) -> bytes:
        raise NotImplementedError

    def hex(self) -> str:
        return self.to_bytes().hex()


class BaseTarget(ABC):
    """
    An instrumented signature scheme built with a given parameter set and primitives.

    Subclasses implement unmonitored key generation, an instrumented `sign`
    and an honest `verify`. `run` maps a test input to one sign() call.

    Attributes
    ----------
    scheme : str
        Scheme name.
    params : BaseModel
        Scheme parameters.
    primitives : Primitives
        PRNG and hash of this build.
    variant : str
        Label of the build, "trusted" unless a subversion was applied.
    verify_params : BaseModel
        Unsubverted parameters the honest verifier checks bounds against,
        `params` unless given.
    """

    scheme: str = ""

    def __init__(
        self,
        params: Any,
        primitives: Primitives,
        variant: str = "trusted",
        verify_params: Optional[Any] = None,
    ) -> None:
        self.params = params
        self.verify_params = params if verify_params is None else verify_params
        self.primitives = primitives
        self.variant = variant
        self._cached_keygen: Callable[[bytes], KeyPair] = lru_cache(
            maxsize=KEYPAIR_CACHE_SIZE
        )(self.keygen)

    @property
    def name(self) -> str:
        return f"{self.scheme}-{self.variant}"

    @abstractmethod
    def keygen(self, key_seed: bytes) -> KeyPair:
        """
        Derive a key pair from a 32-byte seed. Not monitored.
        """

    @abstractmethod
    def sign(self, keypair: KeyPair, message: bytes, probe: BaseProbe) -> Signature:
        """
        Sign `message`, emitting probe events.
        """

    @abstractmethod
    def verify(self, public: Any, message: bytes, signature: Signature) -> bool:
        """
        Honest verification. Returns False on malformed signatures.
        """

    def keypair(self, key_seed: bytes) -> KeyPair:
        return self._cached_keygen(key_seed)

    def run(self, data: bytes, probe: BaseProbe) -> Signature:
        """
        Execute one sign() call on a test input.
        """

        key_seed, message = split_input(data)
        return self.sign(self.keypair(key_seed), message, probe)

    def round_trip(self, data: bytes) -> bool:
        """
        Sign a test input without monitoring and verify the result.
        """

        key_seed, message = split_input(data)
        keypair = self.keypair(key_seed)
        signature = self.sign(keypair, message, NullProbe())
        return self.verify(keypair.public, message, signature)

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_cached_keygen"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._cached_keygen = lru_cache(maxsize=KEYPAIR_CACHE_SIZE)(self.keygen)
