"""Authenticated datagram sender and receiver with replay protection."""

from __future__ import annotations

from dataclasses import dataclass

from .core import BPMac, MessageTooLongError
from .formats import FormatError, decode_datagram, encode_datagram
from .state import NonceState, ReplayWindow, next_nonce, replay_check


class Sender:
    def __init__(self, mac: BPMac, nonces: NonceState | None = None):
        self.mac = mac
        self.nonces = nonces or NonceState()

    def seal(self, msg: bytes) -> bytes:
        n = next_nonce(self.nonces)
        return encode_datagram(n, msg, self.mac.sign(msg, n))


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str  # "ok", "malformed", "bad-tag" or "replay"
    nonce: int | None = None
    msg: bytes | None = None


class Receiver:
    """Single verifying context; owns the replay window."""

    def __init__(self, mac: BPMac, window: ReplayWindow | None = None):
        self.mac = mac
        self.window = window or ReplayWindow()

    def open(self, datagram: bytes) -> Verdict:
        try:
            n, msg, tag = decode_datagram(datagram, self.mac.tag_len)
        except FormatError:
            return Verdict(False, "malformed")
        try:
            ok = self.mac.verify(msg, n, tag)
        except MessageTooLongError:
            return Verdict(False, "malformed", n)
        if not ok:
            return Verdict(False, "bad-tag", n, msg)
        # only authentic nonces may advance the window
        if not replay_check(self.window, n):
            return Verdict(False, "replay", n, msg)
        return Verdict(True, "ok", n, msg)
