"""Reversible byte-to-printable-character remapping for byte-level BPE.

The standard map follows the familiar byte-level convention: the 188 visible
latin-1 characters map to themselves and the remaining 68 bytes are shifted
into the U+0100 range, so every byte becomes exactly one printable character.
A leading space turns into the marker character SPACE_MARKER ("Ġ").

The "morphsafe" variant additionally relocates "#" (0x23) to "ń" so that
no BPE token can ever contain a literal "#".  That keeps the "#" affix marker
unambiguous when BPE tokens and morpheme tokens share one vocabulary.
"""

from __future__ import annotations

from functools import lru_cache

SPACE_MARKER = chr(0x0120)  # remapped 0x20

GPT2 = "gpt2"
MORPHSAFE = "morphsafe"
DEFAULT_BYTE_MAP = MORPHSAFE

# Where "#" lands under morphsafe; first codepoint past the standard remap range.
HASH_SUBSTITUTE = chr(0x0144)

_BYTE_MAPS = (GPT2, MORPHSAFE)


def _standard_table() -> dict[int, str]:
    visible = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("¡"), ord("¬") + 1))
        + list(range(ord("®"), ord("ÿ") + 1))
    )
    table = {b: chr(b) for b in visible}
    shift = 0
    for b in range(256):
        if b not in table:
            table[b] = chr(256 + shift)
            shift += 1
    return table


@lru_cache(maxsize=None)
def byte_to_char_table(name: str = DEFAULT_BYTE_MAP) -> dict[int, str]:
    """Return the byte -> character table for the named map."""
    if name not in _BYTE_MAPS:
        raise ValueError(f"unknown byte map {name!r} (expected one of {_BYTE_MAPS})")
    table = _standard_table()
    if name == MORPHSAFE:
        table[0x23] = HASH_SUBSTITUTE
    return table


@lru_cache(maxsize=None)
def char_to_byte_table(name: str = DEFAULT_BYTE_MAP) -> dict[str, int]:
    return {c: b for b, c in byte_to_char_table(name).items()}


def encode_bytes(data: bytes, name: str = DEFAULT_BYTE_MAP) -> str:
    """Remap raw bytes into the printable alphabet."""
    table = byte_to_char_table(name)
    return "".join(table[b] for b in data)


def decode_chars(text: str, name: str = DEFAULT_BYTE_MAP) -> bytes:
    """Invert encode_bytes.  Raises KeyError on characters outside the map."""
    table = char_to_byte_table(name)
    return bytes(table[c] for c in text)
