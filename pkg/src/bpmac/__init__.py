"""BP-MAC: a Carter-Wegman MAC whose per-message work is a handful of XORs."""

from .core import (
    BPMac,
    KeyMaterial,
    MacParams,
    MaskingCache,
    MessageTooLongError,
    PrecomputedTable,
    build_table,
    finish,
    key_fingerprint,
    masking_slot,
    masking_tag,
    memory_footprint,
    naive_bit_tag_storage,
    prepare,
    sign,
    universal_hash,
    verify,
)
from .formats import FormatError, deserialize_table, serialize_table
from .state import NonceExhaustedError, NonceState, ReplayWindow, next_nonce, replay_check

__version__ = "0.1.0"
