"""Binary on-disk cache for KL tables.

Building the table for S_6 or S_7 is the expensive step of every run, so
tables are persisted per group descriptor.  The format is little-endian
and length-prefixed:

    magic "KLTB" | u16 version | u16 reserved
    u32 descriptor-JSON length | descriptor JSON (canonical)
    32-byte SHA-256 of the descriptor JSON
    u32 element count | u64 payload length
    32-byte SHA-256 of the payload
    32-byte SHA-256 of everything above (header checksum)
    payload

The payload stores, for each element index x in canonical order, a varint
count of column entries, each entry being varint(y), varint(#terms), then
(zigzag-varint exponent, zigzag-varint coefficient) pairs with exponents
ascending.  Coefficients are unbounded integers; varints handle any size.

Loads verify every checksum and the descriptor before trusting a file; on
any mismatch the loader reports the file as absent so callers recompute.
Loaded tables are marked as cache-verified rather than build-verified (the
build-time bar-invariance check ran when the cached table was first made).
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import sys
from pathlib import Path

from .coxeter import CoxeterGroup, GroupDescriptor, build_group
from .hecke import KLTable, build_kl_table

MAGIC = b"KLTB"
VERSION = 1
ENV_CACHE_DIR = "KLCALC_CACHE_DIR"


class ChecksumMismatch(RuntimeError):
    """A cache file failed validation (treated as a miss, never fatal)."""


def descriptor_digest(descriptor: GroupDescriptor) -> str:
    return hashlib.sha256(_descriptor_bytes(descriptor)).hexdigest()


def _descriptor_bytes(descriptor: GroupDescriptor) -> bytes:
    return json.dumps(descriptor.canonical_json(), sort_keys=True).encode()


def cache_path(descriptor: GroupDescriptor, directory: str | Path) -> Path:
    return Path(directory) / f"{descriptor_digest(descriptor)}.klt"


# -- varint helpers ----------------------------------------------------------

def _write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varint needs a nonnegative integer")
    while True:
        b = value & 0x7F
        value >>= 7
        out.append(b | (0x80 if value else 0))
        if not value:
            return


def _zigzag_big(value: int) -> int:
    return (value << 1) if value >= 0 else ((-value) << 1) - 1


def _read_varint(buf: bytes, pos: int) -> tuple[int, int]:
    shift = 0
    value = 0
    while True:
        if pos >= len(buf):
            raise ChecksumMismatch("truncated varint")
        b = buf[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if not b & 0x80:
            return value, pos
        shift += 7


def _unzigzag(value: int) -> int:
    return (value >> 1) if not value & 1 else -((value + 1) >> 1)


# -- store / load -------------------------------------------------------------

def cache_store(table: KLTable, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = bytearray()
    for col in table.cols:
        _write_varint(payload, len(col))
        for y in sorted(col):
            p = col[y]
            _write_varint(payload, y)
            _write_varint(payload, len(p))
            for e in sorted(p):
                _write_varint(payload, _zigzag_big(e))
                _write_varint(payload, _zigzag_big(p[e]))
    payload = bytes(payload)

    desc_bytes = _descriptor_bytes(table.group.descriptor)
    header = bytearray()
    header += MAGIC
    header += struct.pack("<HH", VERSION, 0)
    header += struct.pack("<I", len(desc_bytes))
    header += desc_bytes
    header += hashlib.sha256(desc_bytes).digest()
    header += struct.pack("<IQ", table.group.size, len(payload))
    header += hashlib.sha256(payload).digest()
    header += hashlib.sha256(bytes(header)).digest()

    path = cache_path(table.group.descriptor, directory)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(bytes(header) + payload)
    os.replace(tmp, path)
    return path


def cache_load(group: CoxeterGroup, directory: str | Path) -> KLTable | None:
    """Load the table for a built group, or None on miss/corruption."""
    path = cache_path(group.descriptor, directory)
    try:
        blob = path.read_bytes()
    except OSError:
        return None
    try:
        return _parse(group, blob)
    except ChecksumMismatch as exc:
        print(f"klcalc: ignoring cache file {path}: {exc}", file=sys.stderr)
        return None


def _parse(group: CoxeterGroup, blob: bytes) -> KLTable:
    pos = 0

    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(blob):
            raise ChecksumMismatch("truncated file")
        out = blob[pos : pos + n]
        pos += n
        return out

    if take(4) != MAGIC:
        raise ChecksumMismatch("bad magic")
    version, _ = struct.unpack("<HH", take(4))
    if version != VERSION:
        raise ChecksumMismatch(f"unsupported version {version}")
    (desc_len,) = struct.unpack("<I", take(4))
    desc_bytes = take(desc_len)
    desc_digest = take(32)
    if hashlib.sha256(desc_bytes).digest() != desc_digest:
        raise ChecksumMismatch("descriptor digest mismatch")
    if desc_bytes != _descriptor_bytes(group.descriptor):
        raise ChecksumMismatch("cache file describes a different group")
    count, payload_len = struct.unpack("<IQ", take(12))
    if count != group.size:
        raise ChecksumMismatch("element count mismatch")
    payload_digest = take(32)
    header_digest = take(32)
    if hashlib.sha256(blob[: pos - 32]).digest() != header_digest:
        raise ChecksumMismatch("header checksum mismatch")
    payload = take(payload_len)
    if pos != len(blob):
        raise ChecksumMismatch("trailing bytes")
    if hashlib.sha256(payload).digest() != payload_digest:
        raise ChecksumMismatch("payload checksum mismatch")

    cols: list[dict] = []
    p = 0
    for _x in range(count):
        nentries, p = _read_varint(payload, p)
        col: dict = {}
        for _ in range(nentries):
            y, p = _read_varint(payload, p)
            nterms, p = _read_varint(payload, p)
            poly: dict = {}
            for _ in range(nterms):
                ez, p = _read_varint(payload, p)
                cz, p = _read_varint(payload, p)
                poly[_unzigzag(ez)] = _unzigzag(cz)
            if y >= count:
                raise ChecksumMismatch("element index out of range")
            col[y] = poly
        cols.append(col)
    if p != len(payload):
        raise ChecksumMismatch("payload length mismatch")

    mu_cols = [
        {y: q[1] for y, q in col.items() if y != x and 1 in q}
        for x, col in enumerate(cols)
    ]
    return KLTable(group, cols, mu_cols, verified=True)


def get_table(descriptor: GroupDescriptor, cache_dir: str | Path | None,
              verify: bool = True) -> KLTable:
    """Build the group and fetch its KL table, consulting the cache if set."""
    group = build_group(descriptor)
    if cache_dir:
        table = cache_load(group, cache_dir)
        if table is not None:
            return table
    table = build_kl_table(group, verify=verify)
    if cache_dir:
        cache_store(table, cache_dir)
    return table


def default_cache_dir() -> str | None:
    return os.environ.get(ENV_CACHE_DIR)
