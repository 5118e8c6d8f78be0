"""Sender nonce counter and receiver anti-replay window."""

from __future__ import annotations

from dataclasses import dataclass

MAX_NONCE = 2**64 - 1


class NonceExhaustedError(RuntimeError):
    """The 64-bit counter is used up; the key must be rotated."""


@dataclass
class NonceState:
    next: int = 0


def next_nonce(state: NonceState) -> int:
    n = state.next
    if n >= MAX_NONCE:
        raise NonceExhaustedError("nonce counter exhausted; rotate keys")
    state.next = n + 1
    return n


@dataclass
class ReplayWindow:
    """Sliding bitmap over the ``size`` most recent nonces.

    Bit ``d`` of ``bitmap`` records whether ``highest_seen - d`` was accepted.
    """

    size: int = 64
    highest_seen: int | None = None
    bitmap: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("window size must be positive")


def replay_check(window: ReplayWindow, n: int) -> bool:
    """Accept each nonce at most once; updates the window on accept."""
    if not 0 <= n <= MAX_NONCE:
        return False
    if window.highest_seen is None:
        window.highest_seen = n
        window.bitmap = 1
        return True
    if n > window.highest_seen:
        shift = n - window.highest_seen
        window.bitmap = ((window.bitmap << shift) | 1) & ((1 << window.size) - 1)
        window.highest_seen = n
        return True
    age = window.highest_seen - n
    if age >= window.size:
        return False
    if window.bitmap >> age & 1:
        return False
    window.bitmap |= 1 << age
    return True
