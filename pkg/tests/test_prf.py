import os

import pytest
from Crypto.Cipher import AES as RefAES
from hypothesis import given, strategies as st

from bpmac.prf import (
    AES128,
    CountingCipher,
    bit_tag,
    block_encrypt,
    encode_bit_index,
    encode_nonce_block,
)


def ref_encrypt(key, block):
    return RefAES.new(key, RefAES.MODE_ECB).encrypt(block)


# FIPS-197 known answers
@pytest.mark.parametrize("key,pt,ct", [
    ("00" * 16, "00" * 16, "66e94bd4ef8a2c3b884cfa59ca342b2e"),
    ("000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
     "69c4e0d86a7b0430d8cdb78070b4c55a"),
])
def test_block_encrypt_known_answers(key, pt, ct):
    assert block_encrypt(bytes.fromhex(key), bytes.fromhex(pt)).hex() == ct


@given(st.binary(min_size=16, max_size=16), st.binary(min_size=16, max_size=16))
def test_block_encrypt_matches_independent_aes(key, block):
    assert block_encrypt(key, block) == ref_encrypt(key, block)


def test_block_encrypt_deterministic_and_injective():
    key = os.urandom(16)
    a = bytes(16)
    b = bytes(15) + b"\x01"
    assert block_encrypt(key, a) == block_encrypt(key, a)
    assert block_encrypt(key, a) != block_encrypt(key, b)


def test_block_encrypt_no_collisions_on_10k_inputs():
    key = os.urandom(16)
    inputs = {os.urandom(16) for _ in range(10_000)}
    outputs = {block_encrypt(key, x) for x in inputs}
    assert len(outputs) == len(inputs)


@pytest.mark.parametrize("key,block", [(bytes(15), bytes(16)), (bytes(16), bytes(17))])
def test_block_encrypt_rejects_bad_sizes(key, block):
    with pytest.raises(ValueError):
        block_encrypt(key, block)


def test_encode_bit_index_layout():
    assert encode_bit_index(0, 0) == bytes(16)
    assert encode_bit_index(10, 0) == bytes(7) + b"\x0a" + bytes(8)
    assert encode_bit_index(1, 1) == bytes(7) + b"\x01" + bytes(7) + b"\x01"
    assert encode_bit_index(2**64 - 1, 1) == b"\xff" * 8 + bytes(7) + b"\x01"
    assert encode_bit_index(1, 1) != encode_bit_index(1, 0)
    assert encode_bit_index(1, 1) != encode_bit_index(3, 1)
    assert encode_nonce_block(7) == encode_bit_index(7, 0)


@pytest.mark.parametrize("index,bit", [(-1, 0), (2**64, 0), (0, 2), (0, -1)])
def test_encode_bit_index_rejects(index, bit):
    with pytest.raises(ValueError):
        encode_bit_index(index, bit)


@given(st.integers(0, 2**64 - 1), st.integers(0, 1), st.integers(0, 2**64 - 1), st.integers(0, 1))
def test_encode_bit_index_injective(i, b, j, c):
    assert (encode_bit_index(i, b) == encode_bit_index(j, c)) == ((i, b) == (j, c))


def test_bit_tag_full_and_zero_key():
    assert bit_tag(bytes(16), 0, 0, 16) == ref_encrypt(bytes(16), bytes(16))
    key = os.urandom(16)
    assert bit_tag(key, 5, 1, 16) == block_encrypt(key, encode_bit_index(5, 1))
    assert bit_tag(key, 5, 1, 4) == bit_tag(key, 5, 1, 16)[:4]


@given(st.binary(min_size=16, max_size=16), st.integers(0, 2**20), st.integers(0, 1),
       st.integers(1, 16), st.integers(1, 16))
def test_bit_tag_prefix_property(key, index, bit, a, b):
    a, b = sorted((a, b))
    assert bit_tag(key, index, bit, b)[:a] == bit_tag(key, index, bit, a)


@pytest.mark.parametrize("L", [0, 17])
def test_bit_tag_rejects_tag_len(L):
    with pytest.raises(ValueError):
        bit_tag(bytes(16), 0, 0, L)


def test_counting_cipher_counts_blocks():
    c = CountingCipher()
    out = c.encrypt_blocks(bytes(16), bytes(48))
    assert c.calls == 3
    assert out == AES128.encrypt_blocks(bytes(16), bytes(48))
    block_encrypt(bytes(16), bytes(16), c)
    assert c.calls == 4
