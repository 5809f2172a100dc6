"""
This file contains the instrumented toy layered oil-and-vinegar scheme.

The central map has two layers of homogeneous quadratic equations. Every term
contains a vinegar variable, and the first layer has no second-layer oil
terms, so fixing the vinegar variables leaves one linear system in all
o1 + o2 oil variables. The public map is P = S o F o T.
"""

from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ...exceptions import TargetAbortError
from ...vpmu.probe import BaseProbe, NullProbe
from ..base import MAX_INPUT_BYTES, BaseTarget, KeyPair, Signature
from ..frontend import encode_message
from ..layout import MemoryLayout, block_id, site_id
from ..primitives import ByteStream, Primitives
from .gf import COEFF_BYTES, invert, solve
from .params import UovParams

CP_MESSAGE = 1
CP_DIGEST = 2
CP_ATTEMPT = 3
CP_ELIMINATION = 4
CP_TRANSFORM = 5
CP_PACK = 6

MAX_ATTEMPTS = 64
TR_BYTES = 32

_ENTRY = block_id("uov.entry")
_DIGEST = block_id("uov.digest")
_ATTEMPT = block_id("uov.attempt")
_RETRY = block_id("uov.retry")
_SOLVED = block_id("uov.solved")
_TRANSFORM = block_id("uov.transform")
_PACK = block_id("uov.pack")

_SOLVED_SITE = site_id("uov.solved")


class UovPublicKey(BaseModel):
    """
    Public quadratic map as (m, n, n) coefficient matrices, and the parameters
    it was generated with.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    quadratic: Any
    params: UovParams

    def to_bytes(self) -> bytes:
        return np.asarray(self.quadratic, dtype=np.uint8).tobytes()


class UovSecretKey(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    central: Any
    s_inv: Any
    t_inv: Any
    vinegar_seed: bytes
    tr: bytes


class UovSignature(Signature):
    """
    A UOV signature.

    Attributes
    ----------
    x : np.ndarray
        The n_vars solution values in GF(q).
    attempts : int
        Vinegar draws the signer needed.
    """

    x: Any
    attempts: int = 1

    def to_bytes(self) -> bytes:
        return np.asarray(self.x, dtype=np.uint8).tobytes()


def _field_elements(stream: ByteStream, shape: Any, q: int) -> np.ndarray:
    count = int(np.prod(shape))
    raw = np.frombuffer(stream.read(count), dtype=np.uint8).astype(np.int64)
    return (raw % q).reshape(shape)


def _invertible(stream: ByteStream, size: int, q: int) -> np.ndarray:
    while True:
        matrix = _field_elements(stream, (size, size), q)
        if invert(matrix, q) is not None:
            return matrix


def central_mask(params: UovParams) -> np.ndarray:
    """
    (m, n, n) 0/1 mask of the admissible terms x_i * x_j of the central map.
    """

    v1, o1, n = params.v1, params.o1, params.n_vars
    mask = np.zeros((params.m, n, n), dtype=np.int64)
    upper = np.triu(np.ones((n, n), dtype=np.int64))
    mask[:o1, :v1, : v1 + o1] = upper[:v1, : v1 + o1]
    mask[o1:, :v1, :] = upper[:v1, :]
    return mask


def evaluate(quadratic: np.ndarray, x: np.ndarray, q: int) -> np.ndarray:
    """
    Values x^T Q_k x of every quadratic form over GF(q).
    """

    x = np.asarray(x, dtype=np.int64)
    return np.einsum("i,kij,j->k", x, quadratic, x) % q


def message_target(
    tr: bytes, encoded: bytes, params: UovParams, primitives: Primitives, probe: BaseProbe
) -> np.ndarray:
    raw = primitives.digest(tr + encoded, 2 * params.m, probe)
    return np.frombuffer(raw, dtype="<u2").astype(np.int64) % params.q


class UovTarget(BaseTarget):
    """
    Toy UOV signer.

    Signing draws vinegar values, solves the linear system of the oil
    variables by Gaussian elimination and retries on singular systems. The
    elimination size follows o1 + o2.
    """

    scheme = "uov"

    def __init__(
        self,
        params: Optional[UovParams] = None,
        primitives: Optional[Primitives] = None,
        variant: str = "trusted",
        verify_params: Optional[UovParams] = None,
        max_attempts: int = MAX_ATTEMPTS,
    ) -> None:
        super().__init__(params or UovParams(), primitives or Primitives(), variant, verify_params)
        self.max_attempts = max_attempts
        p: UovParams = self.params
        self.layout = MemoryLayout()
        self.layout.alloc("message", MAX_INPUT_BYTES)
        self.layout.alloc("central", p.m * p.v1 * p.n_vars * COEFF_BYTES)
        self.layout.alloc("system", p.m * (p.m + 1) * COEFF_BYTES)
        self.layout.alloc("s_inv", p.m * p.m * COEFF_BYTES)
        self.layout.alloc("t_inv", p.n_vars * p.n_vars * COEFF_BYTES)
        self.layout.alloc("signature", p.n_vars)

    def keygen(self, key_seed: bytes) -> KeyPair:
        p: UovParams = self.params
        probe = NullProbe()
        expanded = self.primitives.digest(key_seed, 64, probe)
        stream = self.primitives.stream(expanded[:32], probe)
        n, q = p.n_vars, p.q

        central = _field_elements(stream, (p.m, n, n), q) * central_mask(p)
        s = _invertible(stream, p.m, q)
        t = _invertible(stream, n, q)
        transformed = np.einsum("ai,jab,bc->jic", t, central, t) % q
        quadratic = np.einsum("kj,jic->kic", s, transformed) % q

        public = UovPublicKey(quadratic=quadratic, params=p)
        tr = self.primitives.digest(public.to_bytes(), TR_BYTES, probe)
        secret = UovSecretKey(
            central=central,
            s_inv=invert(s, q),
            t_inv=invert(t, q),
            vinegar_seed=expanded[32:],
            tr=tr,
        )
        return KeyPair(scheme=self.scheme, seed=key_seed, secret=secret, public=public)

    def sign(self, keypair: KeyPair, message: bytes, probe: BaseProbe) -> UovSignature:
        p: UovParams = self.params
        sk: UovSecretKey = keypair.secret
        layout = self.layout
        q, v1 = p.q, p.v1

        probe.block(_ENTRY)
        encoded = encode_message(message, self.primitives, probe, layout["message"])
        target = message_target(sk.tr, encoded, p, self.primitives, probe)
        probe.checkpoint(CP_MESSAGE)

        probe.block(_DIGEST)
        y = sk.s_inv @ target % q
        probe.touch(layout["s_inv"], layout.size("s_inv"))
        stream = self.primitives.stream(sk.vinegar_seed + encoded, probe)
        probe.checkpoint(CP_DIGEST)

        attempts = 0
        while True:
            attempts += 1
            if attempts > self.max_attempts:
                raise TargetAbortError(
                    self.scheme, f"singular system on {self.max_attempts} vinegar draws"
                )
            probe.block(_ATTEMPT)
            vinegar = _field_elements(stream, (v1,), q)
            linear = np.einsum("i,kij->kj", vinegar, sk.central[:, :v1, v1:]) % q
            constant = np.einsum("i,kij,j->k", vinegar, sk.central[:, :v1, :v1], vinegar) % q
            probe.touch(layout["central"], layout.size("central"))
            probe.checkpoint(CP_ATTEMPT)

            oil = solve(linear, (y - constant) % q, q, probe, layout["system"])
            probe.branch(_SOLVED_SITE, oil is not None)
            if oil is not None:
                break
            probe.block(_RETRY)

        probe.block(_SOLVED)
        probe.checkpoint(CP_ELIMINATION)

        probe.block(_TRANSFORM)
        x = sk.t_inv @ np.concatenate([vinegar, oil]) % q
        probe.touch(layout["t_inv"], layout.size("t_inv"))
        probe.checkpoint(CP_TRANSFORM)

        probe.block(_PACK)
        signature = UovSignature(x=x, attempts=attempts)
        probe.touch(layout["signature"], layout.size("signature"))
        probe.checkpoint(CP_PACK)
        return signature

    def verify(self, public: Any, message: bytes, signature: Signature) -> bool:
        if not isinstance(public, UovPublicKey) or not isinstance(signature, UovSignature):
            return False
        p = public.params
        x = np.asarray(signature.x, dtype=np.int64)
        if x.shape != (p.n_vars,) or np.any((x < 0) | (x >= p.q)):
            return False
        probe = NullProbe()
        tr = self.primitives.digest(public.to_bytes(), TR_BYTES, probe)
        encoded = encode_message(message, self.primitives, probe, 0)
        target = message_target(tr, encoded, p, self.primitives, probe)
        return bool(np.array_equal(evaluate(public.quadratic, x, p.q), target))


def uov_sign(
    target: UovTarget, keypair: KeyPair, message: bytes, probe: Optional[BaseProbe] = None
) -> UovSignature:
    return target.sign(keypair, message, probe or NullProbe())


def uov_verify(
    target: UovTarget, public: UovPublicKey, message: bytes, signature: UovSignature
) -> bool:
    return target.verify(public, message, signature)
