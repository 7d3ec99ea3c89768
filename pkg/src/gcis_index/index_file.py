"""Index file container shared by both encodings.

Layout, all integers little-endian::

    magic "GCISIDX1" | version u16 | encoding u8 | flags u8 | n u64 | tau u16
    | tau x u32 rule counts per height | payload | CRC32(payload) u32

nep payload: Q (u64 x (|Gamma|+1)), R (u32 x g), L (u64 x |Gamma|).
uni payload: F and Q as Elias-Fano (universe u64, count u64, low width u8,
low bits, high bits), the gamma stream (bit length u64, packed bits), then L
as tiers (two boundary u64s, 8/16/32-bit arrays).  Bit offsets in Q are pure
bit positions in the gamma stream, no padding between records.
"""

from __future__ import annotations

import os
import struct
import zlib

import numpy as np

from .coding import EliasFano, TieredArray
from .errors import BadMagic, FormatError, TruncatedStream, VersionMismatch, ChecksumMismatch
from .grammar import Grammar
from .nep import NepStore
from .store import BuildInfo, RuleStore
from .uni import UniStore

MAGIC = b"GCISIDX1"
VERSION = 1
ENCODINGS = ("nep", "uni")
_HEADER = struct.Struct("<8sHBBQH")
_U64 = struct.Struct("<Q")


def convert(store: RuleStore, encoding: str) -> RuleStore:
    if encoding == "nep":
        return NepStore.from_store(store)
    if encoding == "uni":
        return store if isinstance(store, UniStore) else UniStore.from_store(store)
    raise ValueError(f"unknown encoding {encoding!r}")


def _payload(store: RuleStore) -> bytes:
    if isinstance(store, NepStore):
        return b"".join([store.Q.astype("<u8").tobytes(), store.R.astype("<u4").tobytes(),
                         store.L.astype("<u8").tobytes()])
    if isinstance(store, UniStore):
        nbits = store.Qbits[store.num_rules]
        return b"".join([store.F.to_bytes(), store.Qbits.to_bytes(), _U64.pack(nbits),
                         store.delta[:(nbits + 7) // 8], store.L.to_bytes()])
    raise TypeError(f"cannot serialize {type(store).__name__}")


def dumps(store: RuleStore) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, ENCODINGS.index(store.encoding), store.info.to_flags(),
                          store.text_len, store.heights)
    counts = np.asarray(store.rule_counts, dtype="<u4").tobytes()
    payload = _payload(store)
    return b"".join([header, counts, payload, struct.pack("<I", zlib.crc32(payload))])


def _take(buf: memoryview, pos: int, size: int, what: str) -> int:
    if pos + size > len(buf):
        raise TruncatedStream(f"{what}: need {size} bytes at offset {pos}, file has {len(buf)}")
    return pos + size


def _read_nep(buf: memoryview, pos: int, count: int) -> tuple[tuple, int]:
    end = _take(buf, pos, 8 * (count + 1), "Q")
    Q = np.frombuffer(buf, dtype="<u8", count=count + 1, offset=pos).astype(np.uint64)
    pos = end
    g = int(Q[-1])
    if Q[0] != 0 or np.any(Q[1:] <= Q[:-1]):
        raise FormatError("offsets are not strictly increasing from 0")
    end = _take(buf, pos, 4 * g, "R")
    R = np.frombuffer(buf, dtype="<u4", count=g, offset=pos).astype(np.uint32)
    pos = end
    end = _take(buf, pos, 8 * count, "L")
    L = np.frombuffer(buf, dtype="<u8", count=count, offset=pos).astype(np.uint64)
    return (R, Q, L), end


def _read_uni(buf: memoryview, pos: int, count: int) -> tuple[tuple, int]:
    F, pos = EliasFano.from_bytes(buf, pos)
    Qbits, pos = EliasFano.from_bytes(buf, pos)
    if F.count != count or Qbits.count != count + 1:
        raise FormatError("Elias-Fano lengths disagree with the rule counts")
    _take(buf, pos, 8, "gamma stream length")
    (nbits,) = _U64.unpack_from(buf, pos)
    pos += 8
    end = _take(buf, pos, (nbits + 7) // 8, "gamma stream")
    delta = bytes(buf[pos:end])
    L, pos = TieredArray.from_bytes(buf, end, count)
    return (F, Qbits, delta, L), pos


def loads(data: bytes | bytearray | memoryview) -> RuleStore:
    buf = memoryview(data)
    if len(buf) < len(MAGIC):
        raise TruncatedStream("file shorter than the magic number")
    if bytes(buf[:len(MAGIC)]) != MAGIC:
        raise BadMagic(f"bad magic {bytes(buf[:len(MAGIC)])!r}")
    pos = _take(buf, 0, _HEADER.size, "header")
    _, version, enc, flags, n, tau = _HEADER.unpack_from(buf, 0)
    if version != VERSION:
        raise VersionMismatch(f"file version {version}, reader supports {VERSION}")
    if enc >= len(ENCODINGS):
        raise FormatError(f"unknown encoding byte {enc}")
    end = _take(buf, pos, 4 * tau, "rule counts")
    counts = np.frombuffer(buf, dtype="<u4", count=tau, offset=pos).tolist()
    pos = end
    if tau == 0 or any(c == 0 for c in counts) or counts[-1] != 1:
        raise FormatError("malformed rule counts")
    info = BuildInfo.from_flags(flags)
    reader = _read_nep if ENCODINGS[enc] == "nep" else _read_uni
    parts, end = reader(buf, pos, sum(counts))
    _take(buf, end, 4, "checksum")
    (crc,) = struct.unpack_from("<I", buf, end)
    if zlib.crc32(buf[pos:end]) != crc:
        raise ChecksumMismatch("payload checksum does not match")
    if end + 4 != len(buf):
        raise FormatError(f"{len(buf) - end - 4} trailing bytes after the checksum")
    cls = NepStore if ENCODINGS[enc] == "nep" else UniStore
    return cls(*parts, n, counts, info)


def save(target: Grammar | RuleStore, path: str | os.PathLike) -> int:
    store = target.store if isinstance(target, Grammar) else target
    data = dumps(store)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path: str | os.PathLike) -> Grammar:
    with open(path, "rb") as fh:
        return Grammar(loads(fh.read()))
