"""Conventional MACs used as comparison points.

Both authenticate ``nonce (u64 BE) || msg`` and truncate to the leading
``tag_len`` bytes.  They expose the same ``sign``/``verify`` shape as
:class:`bpmac.core.BPMac` so the benchmark treats all schemes alike.
"""

from __future__ import annotations

import hmac

from cryptography.hazmat.primitives import cmac
from cryptography.hazmat.primitives.ciphers import algorithms


def hmac_sha256(key: bytes, data: bytes) -> bytes:
    return hmac.digest(key, data, "sha256")


def aes_cmac(key: bytes, data: bytes) -> bytes:
    c = cmac.CMAC(algorithms.AES(key))
    c.update(data)
    return c.finalize()


class _Baseline:
    name: str
    digest_size: int

    def __init__(self, key: bytes, tag_len: int = 16):
        if not 1 <= tag_len <= self.digest_size:
            raise ValueError(f"{self.name} tags are 1..{self.digest_size} bytes, got {tag_len}")
        self.key = bytes(key)
        self.tag_len = tag_len

    def _mac(self, data: bytes) -> bytes:
        raise NotImplementedError

    def sign(self, msg: bytes, n: int) -> bytes:
        return self._mac(n.to_bytes(8, "big") + msg)[: self.tag_len]

    def verify(self, msg: bytes, n: int, tag: bytes) -> bool:
        if not 0 <= n < 2**64:
            return False
        return hmac.compare_digest(self.sign(msg, n), bytes(tag))


class HmacSha256Mac(_Baseline):
    name = "hmac-sha256"
    digest_size = 32

    def _mac(self, data):
        return hmac.digest(self.key, data, "sha256")


class AesCmacMac(_Baseline):
    name = "aes-cmac"
    digest_size = 16

    def __init__(self, key: bytes, tag_len: int = 16):
        if len(key) not in (16, 24, 32):
            raise ValueError("AES-CMAC key must be 16, 24 or 32 bytes")
        super().__init__(key, tag_len)

    def _mac(self, data):
        return aes_cmac(self.key, data)


BASELINES = {cls.name: cls for cls in (HmacSha256Mac, AesCmacMac)}
