"""
This file contains the instrumented toy hash-tree signature scheme: a FORS
few-time signature on the message digest, certified by a hyper-tree of
Lamport one-time signatures.
"""

from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from ...vpmu.probe import BaseProbe, NullProbe
from ..base import MAX_INPUT_BYTES, BaseTarget, KeyPair, Signature
from ..frontend import encode_message
from ..layout import MemoryLayout, block_id, site_id
from ..primitives import Primitives
from .params import HashtreeParams

CP_MESSAGE = 1
CP_DIGEST = 2
CP_FORS_TREE = 3
CP_FORS_ROOT = 4
CP_LAYER = 5
CP_PACK = 6

OTS_BITS = 8
DIGEST_BYTES = 64
FORS_LAYER = 0xFF

FORS_SECRET = 0
FORS_LEAF = 1
FORS_NODE = 2
FORS_ROOTS = 3
OTS_SECRET = 4
OTS_PUBLIC = 5
OTS_LEAF = 6
TREE_NODE = 7

_ENTRY = block_id("hashtree.entry")
_DIGEST = block_id("hashtree.digest")
_FORS_TREE = block_id("hashtree.fors.tree")
_FORS_LEAF = block_id("hashtree.fors.leaf")
_FORS_ROOT = block_id("hashtree.fors.root")
_LAYER = block_id("hashtree.layer")
_OTS_LEAF = block_id("hashtree.ots.leaf")
_NODE = block_id("hashtree.node")
_PACK = block_id("hashtree.pack")

_LEAF_SITE = site_id("hashtree.leaf.more")
_NODE_SITE = site_id("hashtree.node.right")
_OTS_BIT_SITE = site_id("hashtree.ots.bit")

NodeAddress = Callable[[int, int], bytes]


def address(layer: int, tree: int, kind: int, a: int = 0, b: int = 0) -> bytes:
    return (
        layer.to_bytes(1, "big")
        + tree.to_bytes(8, "big")
        + kind.to_bytes(1, "big")
        + a.to_bytes(4, "big")
        + b.to_bytes(4, "big")
    )


class HashtreePublicKey(BaseModel):
    """
    Public key. It carries the parameters the key was generated with, the
    verifier follows them.
    """

    model_config = ConfigDict(frozen=True)

    pk_seed: bytes
    root: bytes
    params: HashtreeParams

    def to_bytes(self) -> bytes:
        return self.pk_seed + self.root


class HashtreeSecretKey(BaseModel):
    model_config = ConfigDict(frozen=True)

    sk_seed: bytes
    sk_prf: bytes
    pk_seed: bytes
    root: bytes


class HashtreeSignature(Signature):
    """
    A hash-tree signature.

    Attributes
    ----------
    randomizer : bytes
        Message randomizer.
    fors_secrets : List[bytes]
        One revealed FORS secret per tree.
    fors_paths : List[List[bytes]]
        One authentication path of log2(t) nodes per FORS tree.
    ots : List[List[bytes]]
        Per layer, the revealed Lamport secret and the complementary public
        element for each signed bit.
    tree_paths : List[List[bytes]]
        Per layer, the authentication path inside the layer's subtree.
    """

    randomizer: bytes
    fors_secrets: List[bytes]
    fors_paths: List[List[bytes]]
    ots: List[List[bytes]]
    tree_paths: List[List[bytes]]

    def to_bytes(self) -> bytes:
        parts = [self.randomizer]
        for secret, path in zip(self.fors_secrets, self.fors_paths):
            parts.append(secret)
            parts.extend(path)
        for nodes, path in zip(self.ots, self.tree_paths):
            parts.extend(nodes)
            parts.extend(path)
        return b"".join(parts)


class _Hasher:
    """
    Keyed hash calls of one sign() or verify() run.
    """

    def __init__(
        self, pk_seed: bytes, params: HashtreeParams, primitives: Primitives, probe: BaseProbe
    ) -> None:
        self.pk_seed = pk_seed
        self.n = params.n_bytes
        self.primitives = primitives
        self.probe = probe

    def prf(self, sk_seed: bytes, addr: bytes) -> bytes:
        return self.primitives.digest(sk_seed + addr, self.n, self.probe)

    def thash(self, addr: bytes, data: bytes) -> bytes:
        return self.primitives.digest(self.pk_seed + addr + data, self.n, self.probe)


def merkle_levels(leaves: List[bytes], node_address: NodeAddress, hasher: _Hasher) -> List[List[bytes]]:
    """
    All levels of the Merkle tree over `leaves`, leaves first.
    """

    levels = [leaves]
    height = 0
    while len(levels[-1]) > 1:
        below = levels[-1]
        height += 1
        hasher.probe.block(_NODE)
        levels.append(
            [
                hasher.thash(node_address(height, i), below[2 * i] + below[2 * i + 1])
                for i in range(len(below) // 2)
            ]
        )
    return levels


def auth_path(levels: List[List[bytes]], index: int) -> List[bytes]:
    return [levels[height][(index >> height) ^ 1] for height in range(len(levels) - 1)]


def climb(
    leaf: bytes, index: int, path: List[bytes], node_address: NodeAddress, hasher: _Hasher
) -> bytes:
    """
    Root reached from `leaf` at `index` along `path`.
    """

    node = leaf
    for height, sibling in enumerate(path):
        right = bool((index >> height) & 1)
        hasher.probe.branch(_NODE_SITE, right)
        parent = node_address(height + 1, index >> (height + 1))
        node = hasher.thash(parent, sibling + node if right else node + sibling)
    return node


def _ots_secrets(sk_seed: bytes, layer: int, tree: int, leaf: int, hasher: _Hasher) -> List[bytes]:
    return [
        hasher.prf(sk_seed, address(layer, tree, OTS_SECRET, leaf, i)) for i in range(2 * OTS_BITS)
    ]


def _ots_publics(secrets: List[bytes], layer: int, tree: int, leaf: int, hasher: _Hasher) -> List[bytes]:
    return [
        hasher.thash(address(layer, tree, OTS_PUBLIC, leaf, i), s) for i, s in enumerate(secrets)
    ]


def _ots_leaf(publics: List[bytes], layer: int, tree: int, leaf: int, hasher: _Hasher) -> bytes:
    return hasher.thash(address(layer, tree, OTS_LEAF, leaf), b"".join(publics))


def _signed_bits(node: bytes, hasher: _Hasher) -> List[int]:
    value = hasher.primitives.digest(node, 1, hasher.probe)[0]
    return [(value >> i) & 1 for i in range(OTS_BITS)]


def _subtree_leaves(
    sk_seed: bytes, layer: int, tree: int, params: HashtreeParams, hasher: _Hasher
) -> List[bytes]:
    count = 1 << params.subtree_height
    leaves = []
    for leaf in range(count):
        hasher.probe.block(_OTS_LEAF)
        secrets = _ots_secrets(sk_seed, layer, tree, leaf, hasher)
        leaves.append(_ots_leaf(_ots_publics(secrets, layer, tree, leaf, hasher), layer, tree, leaf, hasher))
        hasher.probe.branch(_LEAF_SITE, leaf < count - 1)
    return leaves


def _tree_address(layer: int, tree: int) -> NodeAddress:
    return lambda height, index: address(layer, tree, TREE_NODE, height, index)


def _fors_address(tree: int) -> NodeAddress:
    return lambda height, index: address(FORS_LAYER, tree, FORS_NODE, height, index)


def select_indices(
    digest: bytes, params: HashtreeParams, primitives: Primitives, probe: BaseProbe
) -> Tuple[List[int], int]:
    """
    FORS leaf indices and the hyper-tree leaf index drawn from the PRNG seeded with `digest`.
    """

    stream = primitives.stream(digest, probe)
    fors = [int.from_bytes(stream.read(2), "little") & (params.t - 1) for _ in range(params.k)]
    leaf = int.from_bytes(stream.read(8), "little") % (1 << params.h)
    return fors, leaf


class HashtreeTarget(BaseTarget):
    """
    Toy hash-tree signer.

    The amount of hashing per signature, and hence every counter total,
    follows h, k and log2(t).
    """

    scheme = "hashtree"

    def __init__(
        self,
        params: Optional[HashtreeParams] = None,
        primitives: Optional[Primitives] = None,
        variant: str = "trusted",
        verify_params: Optional[HashtreeParams] = None,
    ) -> None:
        super().__init__(params or HashtreeParams(), primitives or Primitives(), variant, verify_params)
        p: HashtreeParams = self.params
        self.layout = MemoryLayout()
        self.layout.alloc("message", MAX_INPUT_BYTES)
        self.layout.alloc("fors", 2 * p.t * p.n_bytes)
        self.layout.alloc("subtree", (2 << p.subtree_height) * p.n_bytes)
        self.layout.alloc("ots", 4 * OTS_BITS * p.n_bytes)
        self.layout.alloc("signature", (1 + p.k + p.path_nodes + 2 * OTS_BITS * p.d) * p.n_bytes)

    def keygen(self, key_seed: bytes) -> KeyPair:
        p: HashtreeParams = self.params
        probe = NullProbe()
        n = p.n_bytes
        expanded = self.primitives.digest(key_seed, 3 * n, probe)
        sk_seed, sk_prf, pk_seed = expanded[:n], expanded[n : 2 * n], expanded[2 * n :]
        hasher = _Hasher(pk_seed, p, self.primitives, probe)
        top = p.d - 1
        leaves = _subtree_leaves(sk_seed, top, 0, p, hasher)
        root = merkle_levels(leaves, _tree_address(top, 0), hasher)[-1][0]
        public = HashtreePublicKey(pk_seed=pk_seed, root=root, params=p)
        secret = HashtreeSecretKey(sk_seed=sk_seed, sk_prf=sk_prf, pk_seed=pk_seed, root=root)
        return KeyPair(scheme=self.scheme, seed=key_seed, secret=secret, public=public)

    def sign(self, keypair: KeyPair, message: bytes, probe: BaseProbe) -> HashtreeSignature:
        p: HashtreeParams = self.params
        sk: HashtreeSecretKey = keypair.secret
        layout = self.layout
        hasher = _Hasher(sk.pk_seed, p, self.primitives, probe)

        probe.block(_ENTRY)
        encoded = encode_message(message, self.primitives, probe, layout["message"])
        randomizer = self.primitives.digest(sk.sk_prf + encoded, p.n_bytes, probe)
        digest = self.primitives.digest(
            randomizer + sk.pk_seed + sk.root + encoded, DIGEST_BYTES, probe
        )
        probe.checkpoint(CP_MESSAGE)

        probe.block(_DIGEST)
        fors_indices, leaf_index = select_indices(digest, p, self.primitives, probe)
        probe.checkpoint(CP_DIGEST)

        fors_secrets: List[bytes] = []
        fors_paths: List[List[bytes]] = []
        fors_roots: List[bytes] = []
        for tree, index in enumerate(fors_indices):
            probe.block(_FORS_TREE)
            leaves = []
            for j in range(p.t):
                probe.block(_FORS_LEAF)
                secret = hasher.prf(sk.sk_seed, address(FORS_LAYER, tree, FORS_SECRET, j))
                if j == index:
                    fors_secrets.append(secret)
                leaves.append(hasher.thash(address(FORS_LAYER, tree, FORS_LEAF, j), secret))
                probe.branch(_LEAF_SITE, j < p.t - 1)
            probe.touch(layout["fors"], layout.size("fors"))
            levels = merkle_levels(leaves, _fors_address(tree), hasher)
            fors_paths.append(auth_path(levels, index))
            fors_roots.append(levels[-1][0])
            probe.checkpoint(CP_FORS_TREE)

        probe.block(_FORS_ROOT)
        node = hasher.thash(address(FORS_LAYER, 0, FORS_ROOTS), b"".join(fors_roots))
        probe.checkpoint(CP_FORS_ROOT)

        ots: List[List[bytes]] = []
        tree_paths: List[List[bytes]] = []
        index = leaf_index
        mask = (1 << p.subtree_height) - 1
        for layer in range(p.d):
            probe.block(_LAYER)
            tree, leaf = index >> p.subtree_height, index & mask
            leaves = _subtree_leaves(sk.sk_seed, layer, tree, p, hasher)
            probe.touch(layout["subtree"], layout.size("subtree"))

            secrets = _ots_secrets(sk.sk_seed, layer, tree, leaf, hasher)
            publics = _ots_publics(secrets, layer, tree, leaf, hasher)
            revealed = []
            for i, bit in enumerate(_signed_bits(node, hasher)):
                probe.branch(_OTS_BIT_SITE, bool(bit))
                revealed += [secrets[2 * i + bit], publics[2 * i + 1 - bit]]
            probe.touch(layout["ots"], layout.size("ots"))
            ots.append(revealed)

            levels = merkle_levels(leaves, _tree_address(layer, tree), hasher)
            tree_paths.append(auth_path(levels, leaf))
            node = levels[-1][0]
            index = tree
            probe.checkpoint(CP_LAYER)

        probe.block(_PACK)
        signature = HashtreeSignature(
            randomizer=randomizer,
            fors_secrets=fors_secrets,
            fors_paths=fors_paths,
            ots=ots,
            tree_paths=tree_paths,
        )
        probe.touch(layout["signature"], layout.size("signature"))
        probe.checkpoint(CP_PACK)
        return signature

    def verify(self, public: object, message: bytes, signature: Signature) -> bool:
        if not isinstance(public, HashtreePublicKey) or not isinstance(signature, HashtreeSignature):
            return False
        p = public.params
        n = p.n_bytes
        if (
            len(signature.fors_secrets) != p.k
            or len(signature.fors_paths) != p.k
            or any(len(path) != p.log_t for path in signature.fors_paths)
            or len(signature.ots) != p.d
            or any(len(nodes) != 2 * OTS_BITS for nodes in signature.ots)
            or len(signature.tree_paths) != p.d
            or any(len(path) != p.subtree_height for path in signature.tree_paths)
        ):
            return False
        if any(len(x) != n for x in signature.fors_secrets + sum(signature.fors_paths, [])):
            return False

        probe = NullProbe()
        hasher = _Hasher(public.pk_seed, p, self.primitives, probe)
        encoded = encode_message(message, self.primitives, probe, 0)
        digest = self.primitives.digest(
            signature.randomizer + public.pk_seed + public.root + encoded, DIGEST_BYTES, probe
        )
        fors_indices, leaf_index = select_indices(digest, p, self.primitives, probe)

        roots = []
        for tree, (index, secret, path) in enumerate(
            zip(fors_indices, signature.fors_secrets, signature.fors_paths)
        ):
            leaf = hasher.thash(address(FORS_LAYER, tree, FORS_LEAF, index), secret)
            roots.append(climb(leaf, index, path, _fors_address(tree), hasher))
        node = hasher.thash(address(FORS_LAYER, 0, FORS_ROOTS), b"".join(roots))

        index = leaf_index
        mask = (1 << p.subtree_height) - 1
        for layer, (revealed, path) in enumerate(zip(signature.ots, signature.tree_paths)):
            tree, leaf = index >> p.subtree_height, index & mask
            publics: List[bytes] = [b""] * (2 * OTS_BITS)
            for i, bit in enumerate(_signed_bits(node, hasher)):
                slot = 2 * i + bit
                publics[slot] = hasher.thash(address(layer, tree, OTS_PUBLIC, leaf, slot), revealed[2 * i])
                publics[2 * i + 1 - bit] = revealed[2 * i + 1]
            ots_leaf = _ots_leaf(publics, layer, tree, leaf, hasher)
            node = climb(ots_leaf, leaf, path, _tree_address(layer, tree), hasher)
            index = tree
        return node == public.root


def hashtree_sign(
    target: HashtreeTarget, keypair: KeyPair, message: bytes, probe: Optional[BaseProbe] = None
) -> HashtreeSignature:
    return target.sign(keypair, message, probe or NullProbe())


def hashtree_verify(
    target: HashtreeTarget, public: HashtreePublicKey, message: bytes, signature: HashtreeSignature
) -> bool:
    return target.verify(public, message, signature)
