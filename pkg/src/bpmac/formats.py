"""Byte formats: serialized tables, key files and authenticated datagrams.

Table layout (all integers big-endian)::

    "BPM1" | version u8 | L u8 | M u16 | key_id[8] | default_tag[L] | bitflip[8M+1][L]

Datagram layout::

    nonce u64 | msg_len u16 | msg[msg_len] | tag[L]
"""

from __future__ import annotations

import struct
from pathlib import Path

from .core import KeyMaterial, MacParams, PrecomputedTable

TABLE_MAGIC = b"BPM1"
TABLE_VERSION = 1
_HEADER = struct.Struct(">4sBBH8s")
TABLE_HEADER_SIZE = _HEADER.size  # 16

_DGRAM_HEADER = struct.Struct(">QH")


class FormatError(ValueError):
    pass


def serialize_table(table: PrecomputedTable) -> bytes:
    p = table.params
    header = _HEADER.pack(TABLE_MAGIC, TABLE_VERSION, p.tag_len, p.max_msg_len, table.key_id)
    return header + table.default_tag + b"".join(table.bitflip)


def deserialize_table(data: bytes) -> PrecomputedTable:
    data = bytes(data)
    if len(data) < TABLE_HEADER_SIZE:
        raise FormatError(f"truncated table header ({len(data)} bytes)")
    magic, version, tag_len, max_len, key_id = _HEADER.unpack_from(data)
    if magic != TABLE_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != TABLE_VERSION:
        raise FormatError(f"unsupported table version {version}")
    try:
        params = MacParams(tag_len, max_len)
    except ValueError as e:
        raise FormatError(str(e)) from None
    expected = TABLE_HEADER_SIZE + (params.padded_bits + 1) * tag_len
    if len(data) != expected:
        kind = "truncated" if len(data) < expected else "oversized"
        raise FormatError(f"{kind} table: {len(data)} bytes, expected {expected}")
    body = data[TABLE_HEADER_SIZE:]
    entries = [body[i : i + tag_len] for i in range(0, len(body), tag_len)]
    return PrecomputedTable(params, entries[0], tuple(entries[1:]), key_id)


def table_size(params: MacParams) -> int:
    return TABLE_HEADER_SIZE + (params.padded_bits + 1) * params.tag_len


def read_table(path) -> PrecomputedTable:
    return deserialize_table(Path(path).read_bytes())


def write_table(path, table: PrecomputedTable) -> None:
    Path(path).write_bytes(serialize_table(table))


def read_key_file(path) -> KeyMaterial:
    raw = Path(path).read_bytes()
    try:
        return KeyMaterial.from_bytes(raw)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def write_key_file(path, keys: KeyMaterial) -> None:
    path = Path(path)
    path.touch(mode=0o600)
    path.write_bytes(keys.to_bytes())


def encode_datagram(nonce: int, msg: bytes, tag: bytes) -> bytes:
    return _DGRAM_HEADER.pack(nonce, len(msg)) + msg + tag


def decode_datagram(data: bytes, tag_len: int) -> tuple[int, bytes, bytes]:
    if len(data) < _DGRAM_HEADER.size:
        raise FormatError("datagram shorter than header")
    nonce, msg_len = _DGRAM_HEADER.unpack_from(data)
    end = _DGRAM_HEADER.size + msg_len
    if len(data) != end + tag_len:
        raise FormatError(f"datagram length {len(data)} inconsistent with msg_len {msg_len}")
    return nonce, data[_DGRAM_HEADER.size : end], data[end:]
