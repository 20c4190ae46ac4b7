"""Per-lane key/IV derivation from one 256-bit master seed.

Parallel lanes must start decorrelated, so lane material is produced by a
non-linear expansion rather than by slicing the seed: AES-128 encrypts
lane-indexed counter blocks under a key derived from the master seed, and
the ciphertext is truncated to the algorithm's key/IV sizes. Identical
inputs always derive identical material; distinct lanes always differ.

A master seed feeds at most 64 lanes, so the cipher-side budget of 2**40
IVs per key is structurally out of reach.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aes_ctr import AesScalarTable
from .grain import GrainKeyIv
from .mickey import MickeyKeyIv

SEED_BYTES = 32
MAX_LANES = 64

#: bytes of (key material, iv material) per algorithm
_SIZES = {
    "mickey": (10, 10),
    "grain": (10, 8),
    "aes-ctr": (16, 12),
}

_ALGO_TAGS = {name: i + 1 for i, name in enumerate(sorted(_SIZES))}


class SeedError(ValueError):
    """Invalid master seed or lane request."""


@dataclass(frozen=True)
class MasterSeed:
    """256-bit master entropy value with its target algorithm and lane count."""

    seed: bytes
    algo: str
    lanes: int = MAX_LANES

    def __post_init__(self):
        if len(self.seed) != SEED_BYTES:
            raise SeedError(f"master seed must be {SEED_BYTES} bytes")
        if self.seed == bytes(SEED_BYTES):
            raise SeedError("all-zero master seed rejected")
        if self.algo not in _SIZES:
            raise SeedError(f"unknown algorithm {self.algo!r}")
        if not 1 <= self.lanes <= MAX_LANES:
            raise SeedError(f"lane count must be in [1, {MAX_LANES}]")


def _derivation_cipher(seed: bytes) -> AesScalarTable:
    # one-way key separation: encrypt the seed's second half under its first
    front = AesScalarTable(seed[:16])
    return AesScalarTable(front.encrypt_block(seed[16:]))


def derive_lane_material(master: MasterSeed, lane: int):
    """Key/IV material for one lane: MickeyKeyIv, GrainKeyIv or (key, nonce)."""
    if not 0 <= lane < master.lanes:
        raise IndexError(f"lane {lane} out of range [0, {master.lanes})")
    key_len, iv_len = _SIZES[master.algo]
    cipher = _derivation_cipher(master.seed)
    stream = bytearray()
    counter = 0
    while len(stream) < key_len + iv_len:
        block = bytes((
            _ALGO_TAGS[master.algo],
            *lane.to_bytes(4, "big"),
            *counter.to_bytes(4, "big"),
            0, 0, 0, 0, 0, 0, 0,
        ))
        stream += cipher.encrypt_block(block)
        counter += 1
    key = bytes(stream[:key_len])
    iv = bytes(stream[key_len: key_len + iv_len])
    if master.algo == "mickey":
        return MickeyKeyIv(key, iv)
    if master.algo == "grain":
        return GrainKeyIv(key, iv)
    return key, iv


def derive_all(master: MasterSeed) -> list:
    """Material for every lane of the master seed."""
    return [derive_lane_material(master, j) for j in range(master.lanes)]
