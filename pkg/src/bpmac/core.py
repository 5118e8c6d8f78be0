"""BP-MAC: precomputed bit tables, masking tags, signing and verification.

Tags are ``universal_hash(msg) XOR masking_tag(nonce)``.  The hash is the
XOR of one per-bit PRF output per padded message bit; with the table it
reduces to the default tag XORed with one bitflip entry per set bit plus
the padding bit.  Bits are numbered MSB-first within each byte.

Internally tags are held as Python ints so the signing loop is plain
integer XOR.  Truncating to the leading ``L`` bytes commutes with XOR.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass, field

from .prf import (
    AES128,
    BLOCK_SIZE,
    MAX_INDEX,
    BlockCipher,
    check_key,
    check_tag_len,
    encode_bit_index,
    encode_nonce_block,
)


class MessageTooLongError(ValueError):
    pass


@dataclass(frozen=True)
class KeyMaterial:
    k1: bytes  # bit tags
    k2: bytes  # masking tags

    def __post_init__(self):
        check_key(self.k1)
        check_key(self.k2)
        if hmac.compare_digest(self.k1, self.k2):
            raise ValueError("k1 and k2 must differ")

    @classmethod
    def generate(cls) -> KeyMaterial:
        while True:
            k1, k2 = secrets.token_bytes(16), secrets.token_bytes(16)
            if k1 != k2:
                return cls(k1, k2)

    @classmethod
    def from_bytes(cls, raw: bytes) -> KeyMaterial:
        if len(raw) != 32:
            raise ValueError(f"key material must be 32 bytes, got {len(raw)}")
        return cls(bytes(raw[:16]), bytes(raw[16:]))

    def to_bytes(self) -> bytes:
        return self.k1 + self.k2


@dataclass(frozen=True)
class MacParams:
    tag_len: int
    max_msg_len: int

    def __post_init__(self):
        check_tag_len(self.tag_len)
        if not 1 <= self.max_msg_len <= 0xFFFF:
            raise ValueError(f"max message length must be in [1, 65535], got {self.max_msg_len}")

    @property
    def padded_bits(self) -> int:
        # one extra position so a full-length message still has a padding bit
        return 8 * self.max_msg_len + 1


def key_fingerprint(k1: bytes) -> bytes:
    """8-byte identifier of ``k1``; lets a table be matched to its key."""
    return hashlib.sha256(b"bpmac-table-key-id" + bytes(k1)).digest()[:8]


def _int(tag: bytes) -> int:
    return int.from_bytes(tag, "big")


@dataclass(frozen=True)
class PrecomputedTable:
    params: MacParams
    default_tag: bytes
    bitflip: tuple[bytes, ...]
    key_id: bytes
    _default: int = field(init=False, repr=False, compare=False)
    _flips: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        L = self.params.tag_len
        if len(self.default_tag) != L:
            raise ValueError("default tag length does not match tag_len")
        if len(self.bitflip) != self.params.padded_bits:
            raise ValueError(
                f"expected {self.params.padded_bits} bitflip entries, got {len(self.bitflip)}"
            )
        if any(len(e) != L for e in self.bitflip):
            raise ValueError("bitflip entry length does not match tag_len")
        if len(self.key_id) != 8:
            raise ValueError("key_id must be 8 bytes")
        object.__setattr__(self, "_default", _int(self.default_tag))
        object.__setattr__(self, "_flips", tuple(_int(e) for e in self.bitflip))


def build_table(k1: bytes, params: MacParams, cipher: BlockCipher | None = None) -> PrecomputedTable:
    """Offline phase: 2N cipher calls for N = 8M+1 padded bit positions."""
    check_key(k1)
    cipher = cipher or AES128
    n_bits = params.padded_bits
    L = params.tag_len
    shift = 8 * (BLOCK_SIZE - L)
    blocks = b"".join(encode_bit_index(i, b) for i in range(n_bits) for b in (0, 1))
    out = cipher.encrypt_blocks(k1, blocks)
    default = 0
    flips = []
    for i in range(n_bits):
        zero = _int(out[32 * i : 32 * i + 16]) >> shift
        one = _int(out[32 * i + 16 : 32 * i + 32]) >> shift
        default ^= zero
        flips.append((zero ^ one).to_bytes(L, "big"))
    return PrecomputedTable(params, default.to_bytes(L, "big"), tuple(flips), key_fingerprint(k1))


@dataclass
class MaskingCache:
    """Memo of the last encrypted nonce block.

    With ``floor(16 / L)`` tags per block, nonce ``n`` uses slot
    ``n mod tags_per_block`` of block ``n // tags_per_block``; slots never
    overlap so no keystream byte is reused.
    """

    tag_len: int
    cached_block: bytes | None = None
    cached_block_index: int | None = None
    cached_key: bytes | None = field(default=None, repr=False)

    def __post_init__(self):
        check_tag_len(self.tag_len)

    @property
    def tags_per_block(self) -> int:
        return BLOCK_SIZE // self.tag_len


def masking_slot(n: int, tag_len: int) -> tuple[int, int]:
    """(block index, byte offset) of the masking bytes for nonce ``n``."""
    block_index, slot = divmod(n, BLOCK_SIZE // tag_len)
    return block_index, slot * tag_len


def masking_tag(
    k2: bytes,
    n: int,
    tag_len: int,
    cache: MaskingCache | None = None,
    cipher: BlockCipher | None = None,
) -> bytes:
    check_tag_len(tag_len)
    if not 0 <= n <= MAX_INDEX:
        raise ValueError(f"nonce out of range: {n}")
    block_index, offset = masking_slot(n, tag_len)
    if cache is None:
        block = (cipher or AES128).encrypt_blocks(k2, encode_nonce_block(block_index))
        return block[offset : offset + tag_len]
    if cache.tag_len != tag_len:
        raise ValueError("masking cache was created for a different tag length")
    if cache.cached_block_index != block_index or cache.cached_key != k2:
        cache.cached_block = (cipher or AES128).encrypt_blocks(k2, encode_nonce_block(block_index))
        cache.cached_block_index = block_index
        cache.cached_key = bytes(k2)
    return cache.cached_block[offset : offset + tag_len]


def _check_len(table: PrecomputedTable, msg: bytes) -> None:
    if len(msg) > table.params.max_msg_len:
        raise MessageTooLongError(
            f"message of {len(msg)} bytes exceeds table maximum {table.params.max_msg_len}"
        )


def _xor_set_bits(flips, msg, t: int) -> int:
    # one XOR per set bit; running time depends on the message's Hamming weight
    i = 0
    for byte in msg:
        if byte:
            if byte & 0x80:
                t ^= flips[i]
            if byte & 0x40:
                t ^= flips[i + 1]
            if byte & 0x20:
                t ^= flips[i + 2]
            if byte & 0x10:
                t ^= flips[i + 3]
            if byte & 0x08:
                t ^= flips[i + 4]
            if byte & 0x04:
                t ^= flips[i + 5]
            if byte & 0x02:
                t ^= flips[i + 6]
            if byte & 0x01:
                t ^= flips[i + 7]
        i += 8
    return t ^ flips[i]


def _xor_all_bits_masked(flips, msg, t: int) -> int:
    # every position is XORed, AND-masked by its bit: no data-dependent branch
    i = 0
    for byte in msg:
        for shift in range(7, -1, -1):
            t ^= flips[i] & -((byte >> shift) & 1)
            i += 1
    return t ^ flips[i]


def universal_hash(table: PrecomputedTable, msg: bytes, constant_time: bool = False) -> bytes:
    _check_len(table, msg)
    xor_bits = _xor_all_bits_masked if constant_time else _xor_set_bits
    return xor_bits(table._flips, msg, table._default).to_bytes(table.params.tag_len, "big")


def prepare(
    table: PrecomputedTable,
    k2: bytes,
    n: int,
    cache: MaskingCache | None = None,
    cipher: BlockCipher | None = None,
) -> int:
    """Message-independent part of a tag: masking tag XOR default tag."""
    mask = masking_tag(k2, n, table.params.tag_len, cache, cipher)
    return _int(mask) ^ table._default


def finish(table: PrecomputedTable, msg: bytes, prepared: int, constant_time: bool = False) -> bytes:
    """Latency-critical part of a tag: table lookups and XORs only."""
    _check_len(table, msg)
    xor_bits = _xor_all_bits_masked if constant_time else _xor_set_bits
    return xor_bits(table._flips, msg, prepared).to_bytes(table.params.tag_len, "big")


def sign(
    table: PrecomputedTable,
    k2: bytes,
    cache: MaskingCache | None,
    msg: bytes,
    n: int,
    *,
    constant_time: bool = False,
    cipher: BlockCipher | None = None,
) -> bytes:
    return finish(table, msg, prepare(table, k2, n, cache, cipher), constant_time)


def verify(
    table: PrecomputedTable,
    k2: bytes,
    cache: MaskingCache | None,
    msg: bytes,
    n: int,
    tag: bytes,
    *,
    constant_time: bool = False,
    cipher: BlockCipher | None = None,
) -> bool:
    """True iff ``tag`` matches.  Replay checking is a separate step."""
    if not 0 <= n <= MAX_INDEX:
        return False
    expected = sign(table, k2, cache, msg, n, constant_time=constant_time, cipher=cipher)
    return hmac.compare_digest(expected, bytes(tag))


def memory_footprint(params: MacParams) -> int:
    """Bytes held by a signer: 8M bitflips, the padding bitflip, default and masking tag."""
    return (8 * params.max_msg_len + 3) * params.tag_len


def naive_bit_tag_storage(params: MacParams) -> int:
    """Bytes to store both bit tags for every message bit, without the table optimisation."""
    return 2 * 8 * params.max_msg_len * params.tag_len


class BPMac:
    """A signing or verifying context bundling keys, table and masking cache.

    Not safe for concurrent use; create one per session.  ``table`` can
    be supplied when it was precomputed elsewhere.
    """

    name = "bpmac"

    def __init__(
        self,
        keys: KeyMaterial,
        params: MacParams | None = None,
        *,
        table: PrecomputedTable | None = None,
        constant_time: bool = False,
        cipher: BlockCipher | None = None,
    ):
        if table is None:
            if params is None:
                raise ValueError("either params or table is required")
            table = build_table(keys.k1, params, cipher)
        elif table.key_id != key_fingerprint(keys.k1):
            raise ValueError("table was not built for this key")
        elif params is not None and params != table.params:
            raise ValueError("table parameters do not match")
        self.keys = keys
        self.table = table
        self.params = table.params
        self.tag_len = table.params.tag_len
        self.constant_time = constant_time
        self.cipher = cipher
        self.cache = MaskingCache(self.tag_len)
        self._flips = table._flips
        self._xor_bits = _xor_all_bits_masked if constant_time else _xor_set_bits

    def prepare(self, n: int) -> int:
        return prepare(self.table, self.keys.k2, n, self.cache, self.cipher)

    def finish(self, msg: bytes, prepared: int) -> bytes:
        # inlined core.finish: this is the timed latency-critical step
        if len(msg) > self.params.max_msg_len:
            _check_len(self.table, msg)
        return self._xor_bits(self._flips, msg, prepared).to_bytes(self.tag_len, "big")

    def sign(self, msg: bytes, n: int) -> bytes:
        return sign(
            self.table, self.keys.k2, self.cache, msg, n,
            constant_time=self.constant_time, cipher=self.cipher,
        )

    def verify(self, msg: bytes, n: int, tag: bytes) -> bool:
        return verify(
            self.table, self.keys.k2, self.cache, msg, n, tag,
            constant_time=self.constant_time, cipher=self.cipher,
        )
