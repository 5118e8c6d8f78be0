"""Keyed 128-bit block PRF and the canonical block encodings.

Every pseudorandom value in the scheme is one block-cipher call on a
16-byte block whose layout is fixed here:

    bytes 0..7   index (bit position or masking block index), big-endian
    bytes 8..14  zero
    byte  15     bit value (0 or 1); always 0 for nonce blocks

This layout is the interoperability contract for test vectors.
"""

from __future__ import annotations

import threading
from typing import Protocol

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

BLOCK_SIZE = 16
KEY_SIZE = 16
MAX_INDEX = 2**64 - 1


class BlockCipher(Protocol):
    """A keyed permutation on 16-byte blocks.

    ``encrypt_blocks`` applies the permutation independently to each
    16-byte block of ``data`` (ECB semantics), so callers can batch.
    """

    def encrypt_blocks(self, key: bytes, data: bytes) -> bytes: ...


class Aes128:
    """AES-128 backed by OpenSSL via ``cryptography``.

    Encryptor contexts are cached per thread and key; building one costs
    roughly ten block encryptions.
    """

    _MAX_CACHED_KEYS = 64

    def __init__(self) -> None:
        self._local = threading.local()

    def _encryptor(self, key: bytes):
        cache = getattr(self._local, "encryptors", None)
        if cache is None:
            cache = self._local.encryptors = {}
        enc = cache.get(key)
        if enc is None:
            if len(cache) >= self._MAX_CACHED_KEYS:
                cache.clear()
            enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
            cache[key] = enc
        return enc

    def encrypt_blocks(self, key: bytes, data: bytes) -> bytes:
        check_key(key)
        if len(data) % BLOCK_SIZE:
            raise ValueError("data length must be a multiple of 16")
        return self._encryptor(key).update(data)


class CountingCipher:
    """Wraps a cipher and counts block encryptions (not API calls)."""

    def __init__(self, inner: BlockCipher | None = None) -> None:
        self.inner = inner if inner is not None else AES128
        self.calls = 0

    def encrypt_blocks(self, key: bytes, data: bytes) -> bytes:
        self.calls += len(data) // BLOCK_SIZE
        return self.inner.encrypt_blocks(key, data)

    def reset(self) -> None:
        self.calls = 0


AES128: BlockCipher = Aes128()


def check_key(key: bytes) -> None:
    if not isinstance(key, (bytes, bytearray)) or len(key) != KEY_SIZE:
        raise ValueError("PRF key must be exactly 16 bytes")


def check_tag_len(tag_len: int) -> None:
    if not 1 <= tag_len <= BLOCK_SIZE:
        raise ValueError(f"tag length must be in [1, 16], got {tag_len}")


def block_encrypt(key: bytes, block: bytes, cipher: BlockCipher | None = None) -> bytes:
    if len(block) != BLOCK_SIZE:
        raise ValueError("block must be exactly 16 bytes")
    return (cipher or AES128).encrypt_blocks(bytes(key), bytes(block))


def encode_bit_index(index: int, bit: int) -> bytes:
    if not 0 <= index <= MAX_INDEX:
        raise ValueError(f"index out of range: {index}")
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return index.to_bytes(8, "big") + bytes(7) + bytes((bit,))


def encode_nonce_block(block_index: int) -> bytes:
    """Input block for the masking PRF: the block index with byte 15 zero."""
    return encode_bit_index(block_index, 0)


def bit_tag(
    k1: bytes, index: int, bit: int, tag_len: int, cipher: BlockCipher | None = None
) -> bytes:
    check_tag_len(tag_len)
    return block_encrypt(k1, encode_bit_index(index, bit), cipher)[:tag_len]
