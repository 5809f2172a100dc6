"""
This file contains the instrumented toy lattice signature scheme: a
Fiat-Shamir-with-aborts signer over Z_q[X]/(X^n + 1).
"""

from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ...exceptions import TargetAbortError
from ...vpmu.probe import BaseProbe, NullProbe
from ..base import MAX_INPUT_BYTES, BaseTarget, KeyPair, Signature
from ..frontend import encode_message
from ..layout import MemoryLayout, block_id, site_id
from ..primitives import Primitives
from .params import LatticeParams
from .poly import centered, high_bits, low_bits, matvec, power2round, scale

CP_MESSAGE = 1
CP_EXPAND = 2
CP_MASK = 3
CP_CHALLENGE = 4
CP_BOUNDS = 5
CP_PACK = 6

MAX_ITERATIONS = 1000
COEFF_BYTES = 4
CHALLENGE_BYTES = 32
MU_BYTES = 64

_ENTRY = block_id("lattice.entry")
_EXPAND = block_id("lattice.expand")
_LOOP = block_id("lattice.loop")
_CHALLENGE = block_id("lattice.challenge")
_BALL = block_id("lattice.ball")
_REJECT_Z = block_id("lattice.reject.z")
_REJECT_R0 = block_id("lattice.reject.r0")
_REJECT_CT0 = block_id("lattice.reject.ct0")
_REJECT_HINT = block_id("lattice.reject.hint")
_ACCEPT = block_id("lattice.accept")
_PACK = block_id("lattice.pack")

_NORM_Z_SITE = site_id("lattice.norm.z")
_NORM_R0_SITE = site_id("lattice.norm.r0")
_NORM_CT0_SITE = site_id("lattice.norm.ct0")
_HINT_SITE = site_id("lattice.hint.weight")
_BALL_SITE = site_id("lattice.ball.accept")
_LOOP_SITE = site_id("lattice.loop.accept")


class LatticePublicKey(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: bytes
    t1: Any

    def to_bytes(self) -> bytes:
        return self.rho + np.asarray(self.t1, dtype="<u2").tobytes()


class LatticeSecretKey(BaseModel):
    """
    Secret components. Polynomials are stored with coefficients in [0, q).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: bytes
    key: bytes
    tr: bytes
    s1: Any
    s2: Any
    t0: Any


class LatticeSignature(Signature):
    """
    A lattice signature.

    Attributes
    ----------
    c_tilde : bytes
        Challenge seed.
    z : np.ndarray
        Response, (l, n) centered coefficients.
    h : np.ndarray
        Signed hint, (k, n).
    iterations : int
        Rejection-loop iterations the signer needed.
    """

    c_tilde: bytes
    z: Any
    h: Any
    iterations: int = 1

    def to_bytes(self) -> bytes:
        return (
            self.c_tilde
            + np.asarray(self.z, dtype="<i2").tobytes()
            + np.asarray(self.h, dtype="i1").tobytes()
        )


def expand_matrix(
    rho: bytes, params: LatticeParams, primitives: Primitives, probe: BaseProbe
) -> np.ndarray:
    """
    Public (k, l, n) matrix from the PRNG seeded with `rho`, two bytes per coefficient.
    """

    count = params.k * params.l * params.n
    raw = primitives.stream(rho, probe).read(2 * count)
    coeffs = np.frombuffer(raw, dtype="<u2").astype(np.int64) % params.q
    return coeffs.reshape(params.k, params.l, params.n)


def sample_in_ball(
    c_tilde: bytes, params: LatticeParams, primitives: Primitives, probe: BaseProbe
) -> np.ndarray:
    """
    Challenge polynomial with exactly `tau` coefficients in {-1, 1}, in [0, q).
    """

    n = params.n
    stream = primitives.stream(c_tilde, probe)
    signs = int.from_bytes(stream.read(8), "little")
    c = np.zeros(n, dtype=np.int64)
    for i in range(n - params.tau, n):
        while True:
            j = stream.read(1)[0] & (n - 1)
            accepted = j <= i
            probe.branch(_BALL_SITE, accepted)
            if accepted:
                break
        c[i] = c[j]
        c[j] = 1 - 2 * (signs & 1)
        signs >>= 1
    return c % params.q


def _pack_high_bits(w1: np.ndarray) -> bytes:
    return np.asarray(w1, dtype="<i2").tobytes()


def _exceeds(values: np.ndarray, bound: int, site: int, probe: BaseProbe) -> bool:
    """
    Scan `values` coefficient by coefficient and stop at the first |v| >= bound.
    """

    flat = np.abs(values).reshape(-1)
    over = np.flatnonzero(flat >= bound)
    scanned = int(over[0]) + 1 if over.size else int(flat.size)
    for i in range(scanned - 1):
        probe.branch(site, False)
    probe.branch(site, bool(over.size))
    return bool(over.size)


class LatticeTarget(BaseTarget):
    """
    Toy lattice signer.

    The signer draws a mask, commits to its high bits, derives a sparse
    challenge and rejects the response unless it passes the norm and hint
    checks. The iteration count leaks through the counters: it depends on
    `beta` and on the quality of the mask randomness.

    `verify` checks the response bound of `verify_params`, the unsubverted
    parameters, whatever `beta` the signer used.
    """

    scheme = "lattice"

    def __init__(
        self,
        params: Optional[LatticeParams] = None,
        primitives: Optional[Primitives] = None,
        variant: str = "trusted",
        verify_params: Optional[LatticeParams] = None,
        max_iterations: int = MAX_ITERATIONS,
    ) -> None:
        super().__init__(params or LatticeParams(), primitives or Primitives(), variant, verify_params)
        self.max_iterations = max_iterations
        p: LatticeParams = self.params
        poly = p.n * COEFF_BYTES
        self.layout = MemoryLayout()
        self.layout.alloc("message", MAX_INPUT_BYTES)
        self.layout.alloc("matrix", p.k * p.l * poly)
        self.layout.alloc("secret", (p.k + p.l) * poly)
        self.layout.alloc("t0", p.k * poly)
        self.layout.alloc("mask", p.l * poly)
        self.layout.alloc("commitment", p.k * poly)
        self.layout.alloc("challenge", poly)
        self.layout.alloc("response", p.l * poly)
        self.layout.alloc("hint", p.k * poly)
        self.layout.alloc("signature", CHALLENGE_BYTES + p.l * p.n * 2 + p.k * p.n)

    def keygen(self, key_seed: bytes) -> KeyPair:
        p: LatticeParams = self.params
        probe = NullProbe()
        expanded = self.primitives.digest(key_seed, 96, probe)
        rho, sigma, key = expanded[:32], expanded[32:64], expanded[64:]
        matrix = expand_matrix(rho, p, self.primitives, probe)

        raw = self.primitives.stream(sigma, probe).read((p.k + p.l) * p.n)
        coeffs = np.frombuffer(raw, dtype=np.uint8).astype(np.int64) % (2 * p.eta + 1) - p.eta
        s1 = coeffs[: p.l * p.n].reshape(p.l, p.n) % p.q
        s2 = coeffs[p.l * p.n :].reshape(p.k, p.n) % p.q

        t = (matvec(matrix, s1, p.q) + s2) % p.q
        t1, t0 = power2round(t, p.d, p.q)
        public = LatticePublicKey(rho=rho, t1=t1)
        tr = self.primitives.digest(public.to_bytes(), CHALLENGE_BYTES, probe)
        secret = LatticeSecretKey(rho=rho, key=key, tr=tr, s1=s1, s2=s2, t0=t0 % p.q)
        return KeyPair(scheme=self.scheme, seed=key_seed, secret=secret, public=public)

    def sign(self, keypair: KeyPair, message: bytes, probe: BaseProbe) -> LatticeSignature:
        p: LatticeParams = self.params
        sk: LatticeSecretKey = keypair.secret
        layout = self.layout

        probe.block(_ENTRY)
        encoded = encode_message(message, self.primitives, probe, layout["message"])
        mu = self.primitives.digest(sk.tr + encoded, MU_BYTES, probe)
        probe.checkpoint(CP_MESSAGE)

        probe.block(_EXPAND)
        rho_prime = self.primitives.digest(sk.key + mu, 64, probe)
        matrix = expand_matrix(sk.rho, p, self.primitives, probe)
        probe.touch(layout["matrix"], layout.size("matrix"))
        probe.checkpoint(CP_EXPAND)

        modulus = 2 * p.mask_bound + 1
        kappa = 0
        iterations = 0
        while True:
            iterations += 1
            if iterations > self.max_iterations:
                raise TargetAbortError(
                    self.scheme, f"no signature after {self.max_iterations} iterations"
                )
            probe.block(_LOOP)

            raw = self.primitives.stream(rho_prime + kappa.to_bytes(2, "little"), probe).read(
                2 * p.l * p.n
            )
            kappa = (kappa + p.l) & 0xFFFF
            y = (np.frombuffer(raw, dtype="<u2").astype(np.int64) % modulus - p.mask_bound).reshape(
                p.l, p.n
            )
            probe.touch(layout["mask"], layout.size("mask"))
            w = matvec(matrix, y % p.q, p.q)
            w1 = high_bits(w, p.alpha, p.q)
            probe.touch(layout["commitment"], layout.size("commitment"))
            probe.checkpoint(CP_MASK)

            probe.block(_CHALLENGE)
            c_tilde = self.primitives.digest(mu + _pack_high_bits(w1), CHALLENGE_BYTES, probe)
            probe.block(_BALL)
            c = sample_in_ball(c_tilde, p, self.primitives, probe)
            probe.touch(layout["challenge"], layout.size("challenge"))
            cs1 = centered(scale(c, sk.s1, p.q), p.q)
            cs2 = scale(c, sk.s2, p.q)
            z = y + cs1
            probe.touch(layout["secret"], layout.size("secret"))
            probe.touch(layout["response"], layout.size("response"))
            probe.checkpoint(CP_CHALLENGE)

            accepted = False
            w_minus = (w - cs2) % p.q
            if _exceeds(z, p.gamma1 - p.beta, _NORM_Z_SITE, probe):
                probe.block(_REJECT_Z)
            elif _exceeds(low_bits(w_minus, p.alpha, p.q), p.gamma2 - p.beta, _NORM_R0_SITE, probe):
                probe.block(_REJECT_R0)
            else:
                ct0 = centered(scale(c, sk.t0, p.q), p.q)
                probe.touch(layout["t0"], layout.size("t0"))
                if _exceeds(ct0, p.gamma2, _NORM_CT0_SITE, probe):
                    probe.block(_REJECT_CT0)
                else:
                    h = w1 - high_bits(w_minus + ct0, p.alpha, p.q)
                    probe.touch(layout["hint"], layout.size("hint"))
                    heavy = int(np.count_nonzero(h)) > p.omega
                    probe.branch(_HINT_SITE, heavy)
                    if heavy:
                        probe.block(_REJECT_HINT)
                    else:
                        probe.block(_ACCEPT)
                        accepted = True

            probe.checkpoint(CP_BOUNDS)
            probe.branch(_LOOP_SITE, accepted)
            if accepted:
                break

        probe.block(_PACK)
        signature = LatticeSignature(c_tilde=c_tilde, z=z, h=h, iterations=iterations)
        probe.touch(layout["signature"], layout.size("signature"))
        probe.checkpoint(CP_PACK)
        return signature

    def verify(self, public: Any, message: bytes, signature: Signature) -> bool:
        p: LatticeParams = self.verify_params
        if not isinstance(signature, LatticeSignature) or not isinstance(public, LatticePublicKey):
            return False
        z = np.asarray(signature.z, dtype=np.int64)
        h = np.asarray(signature.h, dtype=np.int64)
        if z.shape != (p.l, p.n) or h.shape != (p.k, p.n):
            return False
        if len(signature.c_tilde) != CHALLENGE_BYTES:
            return False
        if int(np.abs(z).max()) >= p.gamma1 - p.beta or int(np.count_nonzero(h)) > p.omega:
            return False

        probe = NullProbe()
        matrix = expand_matrix(public.rho, p, self.primitives, probe)
        c = sample_in_ball(signature.c_tilde, p, self.primitives, probe)
        t1 = np.asarray(public.t1, dtype=np.int64)
        approx = (matvec(matrix, z % p.q, p.q) - scale(c, t1 << p.d, p.q)) % p.q
        w1 = high_bits(approx, p.alpha, p.q) + h

        tr = self.primitives.digest(public.to_bytes(), CHALLENGE_BYTES, probe)
        encoded = encode_message(message, self.primitives, probe, 0)
        mu = self.primitives.digest(tr + encoded, MU_BYTES, probe)
        return self.primitives.digest(mu + _pack_high_bits(w1), CHALLENGE_BYTES, probe) == (
            signature.c_tilde
        )


def lattice_sign(
    target: LatticeTarget, keypair: KeyPair, message: bytes, probe: Optional[BaseProbe] = None
) -> LatticeSignature:
    return target.sign(keypair, message, probe or NullProbe())


def lattice_verify(
    target: LatticeTarget, public: LatticePublicKey, message: bytes, signature: LatticeSignature
) -> bool:
    return target.verify(public, message, signature)
