"""Naive BP-MAC used as ground truth: no table, no cache.

Each padded bit costs one fresh PRF call, and the masking tag one more.
Keep this slow and obvious; it exists to check ``core``.
"""

from __future__ import annotations

from .core import KeyMaterial, MacParams, MessageTooLongError
from .prf import AES128, BLOCK_SIZE, BlockCipher, encode_bit_index, encode_nonce_block


def pad_bits(msg: bytes, n_bits: int) -> list[int]:
    """ISO/IEC 9797-1 method 2: a single 1 bit, then 0 bits up to ``n_bits``."""
    bits = [(byte >> (7 - j)) & 1 for byte in msg for j in range(8)]
    if len(bits) + 1 > n_bits:
        raise MessageTooLongError(f"{len(msg)}-byte message does not fit {n_bits} padded bits")
    bits.append(1)
    bits.extend([0] * (n_bits - len(bits)))
    return bits


def hash_naive(
    k1: bytes, params: MacParams, msg: bytes, cipher: BlockCipher | None = None
) -> bytes:
    if len(msg) > params.max_msg_len:
        raise MessageTooLongError(f"message of {len(msg)} bytes exceeds {params.max_msg_len}")
    bits = pad_bits(msg, params.padded_bits)
    blocks = b"".join(encode_bit_index(i, b) for i, b in enumerate(bits))
    out = (cipher or AES128).encrypt_blocks(k1, blocks)
    L = params.tag_len
    acc = 0
    for i in range(len(bits)):
        bit_tag = out[BLOCK_SIZE * i : BLOCK_SIZE * i + L]
        acc ^= int.from_bytes(bit_tag, "big")
    return acc.to_bytes(L, "big")


def masking_naive(k2: bytes, n: int, tag_len: int, cipher: BlockCipher | None = None) -> bytes:
    per_block = BLOCK_SIZE // tag_len
    block = (cipher or AES128).encrypt_blocks(k2, encode_nonce_block(n // per_block))
    start = (n % per_block) * tag_len
    return block[start : start + tag_len]


def sign_naive(
    keys: KeyMaterial, params: MacParams, msg: bytes, n: int, cipher: BlockCipher | None = None
) -> bytes:
    h = hash_naive(keys.k1, params, msg, cipher)
    mask = masking_naive(keys.k2, n, params.tag_len, cipher)
    return (int.from_bytes(h, "big") ^ int.from_bytes(mask, "big")).to_bytes(params.tag_len, "big")
