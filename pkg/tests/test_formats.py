import random

import pytest
from hypothesis import given, strategies as st

from bpmac.core import KeyMaterial, MacParams, build_table
from bpmac.formats import (
    TABLE_HEADER_SIZE,
    FormatError,
    decode_datagram,
    deserialize_table,
    encode_datagram,
    read_key_file,
    serialize_table,
    table_size,
    write_key_file,
)


def test_table_layout(keys):
    t = build_table(keys.k1, MacParams(16, 2))
    raw = serialize_table(t)
    assert TABLE_HEADER_SIZE == 16
    assert len(raw) == 16 + (17 + 1) * 16 == table_size(t.params)
    assert raw[:4] == b"BPM1"
    assert raw[4:8] == bytes([1, 16, 0, 2])
    assert raw[8:16] == t.key_id
    assert raw[16:32] == t.default_tag
    assert raw[32:48] == t.bitflip[0]


def test_table_round_trip_random_params():
    rng = random.Random(7)
    for _ in range(20):
        k1 = rng.randbytes(16)
        t = build_table(k1, MacParams(rng.randint(1, 16), rng.randint(1, 40)))
        assert deserialize_table(serialize_table(t)) == t


def test_table_truncation_rejected(keys):
    raw = serialize_table(build_table(keys.k1, MacParams(4, 3)))
    for cut in (0, 3, 15, 16, 17, len(raw) - 1):
        with pytest.raises(FormatError):
            deserialize_table(raw[:cut])
    with pytest.raises(FormatError):
        deserialize_table(raw + b"\x00")


@pytest.mark.parametrize("pos,value", [(0, ord("X")), (4, 2), (5, 0), (5, 17), (6, 0)])
def test_table_header_validation(keys, pos, value):
    raw = bytearray(serialize_table(build_table(keys.k1, MacParams(4, 3))))
    raw[pos] = value
    if pos == 6:
        raw[7] = 0  # M = 0
    with pytest.raises(FormatError):
        deserialize_table(bytes(raw))


def test_key_file(tmp_path):
    keys = KeyMaterial.generate()
    path = tmp_path / "k.bin"
    write_key_file(path, keys)
    assert path.stat().st_size == 32
    assert read_key_file(path) == keys
    path.write_bytes(bytes(32))
    with pytest.raises(FormatError):
        read_key_file(path)


@given(st.integers(0, 2**64 - 1), st.binary(max_size=300), st.binary(min_size=1, max_size=16))
def test_datagram_round_trip(n, msg, tag):
    raw = encode_datagram(n, msg, tag)
    assert raw[:8] == n.to_bytes(8, "big")
    assert raw[8:10] == len(msg).to_bytes(2, "big")
    assert decode_datagram(raw, len(tag)) == (n, msg, tag)


def test_datagram_malformed():
    raw = encode_datagram(1, b"abc", bytes(4))
    for bad in (raw[:5], raw[:-1], raw + b"\x00"):
        with pytest.raises(FormatError):
            decode_datagram(bad, 4)
