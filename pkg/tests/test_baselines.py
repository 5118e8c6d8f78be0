import os
import random

import pytest

from bpmac.baselines import BASELINES, AesCmacMac, HmacSha256Mac, aes_cmac, hmac_sha256


# RFC 4231 test cases 1-3
@pytest.mark.parametrize("key,data,mac", [
    (b"\x0b" * 20, b"Hi There", "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"),
    (b"Jefe", b"what do ya want for nothing?",
     "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"),
    (b"\xaa" * 20, b"\xdd" * 50, "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"),
])
def test_hmac_sha256_vectors(key, data, mac):
    assert hmac_sha256(key, data).hex() == mac


RFC4493_KEY = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
RFC4493_MSG = bytes.fromhex(
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710")


@pytest.mark.parametrize("length,mac", [
    (0, "bb1d6929e95937287fa37d129b756746"),
    (16, "070a16b46b4d4144f79bdd9dd04a287c"),
    (40, "dfa66747de9ae63030ca32611497c827"),
    (64, "51f0bebf7e3b9d92fc49741779363cfe"),
])
def test_aes_cmac_vectors(length, mac):
    assert aes_cmac(RFC4493_KEY, RFC4493_MSG[:length]).hex() == mac


def test_baseline_input_is_nonce_then_message():
    key = os.urandom(16)
    assert HmacSha256Mac(key, 12).sign(b"hi", 5) == hmac_sha256(key, (5).to_bytes(8, "big") + b"hi")[:12]
    assert AesCmacMac(key, 4).sign(b"hi", 5) == aes_cmac(key, (5).to_bytes(8, "big") + b"hi")[:4]


@pytest.mark.parametrize("cls", list(BASELINES.values()))
def test_baseline_round_trip_and_corruption(cls):
    rng = random.Random(9)
    mac = cls(rng.randbytes(16), 16)
    other = cls(rng.randbytes(16), 16)
    m = b"payload"
    assert mac.sign(m, 1) == mac.sign(m, 1)
    assert mac.sign(m, 1) != mac.sign(m, 2)
    for _ in range(100):
        m = rng.randbytes(rng.randint(1, 32))
        n = rng.getrandbits(64)
        tag = mac.sign(m, n)
        assert mac.verify(m, n, tag)
        bit = rng.randrange(8 * len(tag))
        bad = bytearray(tag)
        bad[bit // 8] ^= 0x80 >> (bit % 8)
        assert not mac.verify(m, n, bytes(bad))
        assert not other.verify(m, n, tag)


def test_baseline_tag_len_limits():
    with pytest.raises(ValueError):
        AesCmacMac(bytes(16), 17)
    with pytest.raises(ValueError):
        HmacSha256Mac(bytes(16), 0)
    with pytest.raises(ValueError):
        AesCmacMac(bytes(15), 16)
    assert len(HmacSha256Mac(bytes(16), 32).sign(b"", 0)) == 32
