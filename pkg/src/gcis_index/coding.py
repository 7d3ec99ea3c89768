"""Bit-level integer codes: Elias-gamma streams, Elias-Fano sequences and
tiered fixed-width arrays.

Bit conventions: gamma streams are MSB-first (the first codeword bit is the
most significant bit of byte 0), so a codeword reads left to right exactly as
written, e.g. 4 -> ``00100``.  Elias-Fano bitvectors are LSB-first.
"""

from __future__ import annotations

import struct
from typing import Sequence

import numpy as np

from .errors import InvalidValue, Overflow, TruncatedStream

_U64 = struct.Struct("<Q")


def gamma_bits(v: int) -> str:
    """Elias-gamma codeword of ``v`` as a string of '0'/'1'."""
    if v < 1:
        raise InvalidValue(f"gamma code needs v >= 1, got {v}")
    b = bin(v)[2:]
    return "0" * (len(b) - 1) + b


def gamma_decode(buf: bytes, pos: int, end: int | None = None) -> tuple[int, int]:
    """Decode one codeword starting at bit ``pos``; return (value, next pos)."""
    if end is None:
        end = len(buf) * 8
    zeros = 0
    p = pos
    while True:
        if p >= end:
            raise TruncatedStream("gamma codeword runs past the end of the stream")
        if (buf[p >> 3] >> (7 - (p & 7))) & 1:
            break
        zeros += 1
        p += 1
    if p + zeros + 1 > end:
        raise TruncatedStream("gamma codeword runs past the end of the stream")
    v = _read_msb(buf, p, p + zeros + 1)
    return v, p + zeros + 1


def _read_msb(buf: bytes, a: int, b: int) -> int:
    if a == b:
        return 0
    lo, hi = a >> 3, (b + 7) >> 3
    x = int.from_bytes(buf[lo:hi], "big")
    x >>= hi * 8 - b
    return x & ((1 << (b - a)) - 1)


# bits decoded per big-integer window by gamma_decode_range
_WINDOW = 2048
# longest codeword the windowed decoder guarantees to see whole (values < 2**64)
_MAX_CODEWORD = 127


def gamma_decode_range(buf: bytes, a: int, b: int) -> list[int]:
    """Decode every codeword in the bit range [a, b)."""
    if b > len(buf) * 8:
        raise TruncatedStream("bit range exceeds the stream")
    out: list[int] = []
    pos = a
    while pos < b:
        end = min(pos + _WINDOW, b)
        width = end - pos
        x = _read_msb(buf, pos, end)
        # leave a possibly cut codeword at the end of an inner window to the
        # next window
        floor = 0 if end == b else _MAX_CODEWORD
        while width > floor:
            zeros = width - x.bit_length()
            size = 2 * zeros + 1
            if size > width:
                raise TruncatedStream("gamma codeword runs past the end of the range")
            width -= size
            out.append(x >> width)
            x &= (1 << width) - 1
        pos = end - width
    return out


def gamma_encode_array(values: np.ndarray) -> tuple[bytes, np.ndarray]:
    """Gamma-code ``values`` back to back.

    Returns the packed stream and the bit offset of every codeword (with the
    total bit length appended).
    """
    v = np.asarray(values, dtype=np.uint64)
    if len(v) and int(v.min()) < 1:
        raise InvalidValue("gamma code needs values >= 1")
    nbits = np.zeros(len(v), dtype=np.int64)
    if len(v):
        # bit length without float rounding
        tmp = v.copy()
        while True:
            live = tmp > 0
            if not live.any():
                break
            nbits += live
            tmp >>= np.uint64(1)
    size = 2 * nbits - 1
    offsets = np.zeros(len(v) + 1, dtype=np.int64)
    np.cumsum(size, out=offsets[1:])
    total = int(offsets[-1])
    bits = np.zeros(total, dtype=bool)
    last = offsets[1:] - 1  # position of each codeword's least significant bit
    for j in range(int(nbits.max()) if len(v) else 0):
        sel = ((v >> np.uint64(j)) & np.uint64(1)).astype(bool) & (nbits > j)
        bits[last[sel] - j] = True
    return np.packbits(bits, bitorder="big").tobytes(), offsets


class EliasFano:
    """Elias-Fano code of a non-decreasing sequence with random access."""

    SAMPLE = 64

    def __init__(self, universe: int, count: int, low_width: int, low: bytes, high: bytes):
        self.universe = universe
        self.count = count
        self.low_width = low_width
        self.low = low
        self.high = high
        ones = np.flatnonzero(np.unpackbits(np.frombuffer(high, dtype=np.uint8), bitorder="little"))
        if len(ones) < count:
            raise TruncatedStream("Elias-Fano high bits hold fewer elements than declared")
        self._samples = ones[: count : self.SAMPLE].tolist()

    @classmethod
    def encode(cls, values: Sequence[int] | np.ndarray, universe: int | None = None) -> EliasFano:
        v = np.asarray(values, dtype=np.uint64)
        count = len(v)
        if count and np.any(v[1:] < v[:-1]):
            raise InvalidValue("Elias-Fano needs a non-decreasing sequence")
        if universe is None:
            universe = int(v[-1]) + 1 if count else 1
        if count and int(v[-1]) >= universe:
            raise InvalidValue("value outside the declared universe")
        low_width = max(0, (universe // count).bit_length() - 1) if count else 0
        lows = v & np.uint64((1 << low_width) - 1)
        highs = (v >> np.uint64(low_width)).astype(np.int64)
        lbits = ((lows[:, None] >> np.arange(low_width, dtype=np.uint64)) & np.uint64(1)).astype(bool)
        low = np.packbits(lbits.ravel(), bitorder="little").tobytes()
        hbits = np.zeros(count + (universe >> low_width) + 1, dtype=bool)
        hbits[highs + np.arange(count)] = True
        high = np.packbits(hbits, bitorder="little").tobytes()
        return cls(universe, count, low_width, low, high)

    def __len__(self) -> int:
        return self.count

    def _select1(self, i: int) -> int:
        p = self._samples[i // self.SAMPLE]
        r = i % self.SAMPLE
        byte = p >> 3
        x = int.from_bytes(self.high[byte:byte + 16], "little") >> (p & 7)
        base = p
        while True:
            if x == 0:
                byte += 16
                base = byte * 8
                x = int.from_bytes(self.high[byte:byte + 16], "little")
                continue
            if r == 0:
                return base + (x & -x).bit_length() - 1
            x &= x - 1
            r -= 1

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.count:
            raise IndexError(i)
        w = self.low_width
        low = 0
        if w:
            a = i * w
            lo, hi = a >> 3, (a + w + 7) >> 3
            low = (int.from_bytes(self.low[lo:hi], "little") >> (a & 7)) & ((1 << w) - 1)
        return ((self._select1(i) - i) << w) | low

    def to_numpy(self) -> np.ndarray:
        hb = np.unpackbits(np.frombuffer(self.high, dtype=np.uint8), bitorder="little")
        highs = np.flatnonzero(hb)[: self.count].astype(np.uint64) - np.arange(self.count, dtype=np.uint64)
        w = self.low_width
        out = highs << np.uint64(w)
        if w:
            lb = np.unpackbits(np.frombuffer(self.low, dtype=np.uint8), bitorder="little")
            lb = lb[: self.count * w].reshape(self.count, w).astype(np.uint64)
            out |= (lb << np.arange(w, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
        return out

    def size_in_bytes(self) -> int:
        return 17 + len(self.low) + len(self.high)

    def to_bytes(self) -> bytes:
        return b"".join(
            [struct.pack("<QQB", self.universe, self.count, self.low_width), self.low, self.high]
        )

    @classmethod
    def from_bytes(cls, buf: bytes, pos: int) -> tuple[EliasFano, int]:
        if pos + 17 > len(buf):
            raise TruncatedStream("Elias-Fano header")
        universe, count, w = struct.unpack_from("<QQB", buf, pos)
        pos += 17
        nlow = (count * w + 7) // 8
        nhigh = (count + (universe >> w) + 1 + 7) // 8
        if pos + nlow + nhigh > len(buf):
            raise TruncatedStream("Elias-Fano body")
        low = bytes(buf[pos:pos + nlow])
        high = bytes(buf[pos + nlow:pos + nlow + nhigh])
        return cls(universe, count, w, low, high), pos + nlow + nhigh


class TieredArray:
    """Integers stored in an 8-bit, then a 16-bit, then a 32-bit array.

    Entries go to the current tier until one does not fit it; from then on
    every later entry uses the wider tier, so two indices locate any entry.
    """

    def __init__(self, first: int, second: int, t8: np.ndarray, t16: np.ndarray, t32: np.ndarray):
        self.first = first
        self.second = second
        self.t8, self.t16, self.t32 = t8, t16, t32

    @classmethod
    def build(cls, values: Sequence[int] | np.ndarray) -> TieredArray:
        v = np.asarray(values, dtype=np.uint64)
        if len(v) and int(v.max()) >= 1 << 32:
            raise Overflow("expansion length does not fit 32 bits")
        big8 = np.flatnonzero(v >= 1 << 8)
        first = int(big8[0]) if len(big8) else len(v)
        big16 = np.flatnonzero(v[first:] >= 1 << 16)
        second = first + int(big16[0]) if len(big16) else len(v)
        return cls(
            first,
            second,
            v[:first].astype(np.uint8),
            v[first:second].astype(np.uint16),
            v[second:].astype(np.uint32),
        )

    def __len__(self) -> int:
        return self.second + len(self.t32)

    def __getitem__(self, i: int) -> int:
        if i < self.first:
            return int(self.t8[i])
        if i < self.second:
            return int(self.t16[i - self.first])
        return int(self.t32[i - self.second])

    def to_numpy(self) -> np.ndarray:
        return np.concatenate(
            [self.t8.astype(np.uint64), self.t16.astype(np.uint64), self.t32.astype(np.uint64)]
        )

    def size_in_bytes(self) -> int:
        return 16 + self.t8.nbytes + self.t16.nbytes + self.t32.nbytes

    def to_bytes(self) -> bytes:
        return b"".join(
            [
                struct.pack("<QQ", self.first, self.second),
                self.t8.tobytes(),
                self.t16.astype("<u2").tobytes(),
                self.t32.astype("<u4").tobytes(),
            ]
        )

    @classmethod
    def from_bytes(cls, buf: bytes, pos: int, count: int) -> tuple[TieredArray, int]:
        if pos + 16 > len(buf):
            raise TruncatedStream("tiered array header")
        first, second = struct.unpack_from("<QQ", buf, pos)
        pos += 16
        if not first <= second <= count:
            raise TruncatedStream("tiered array boundaries out of range")
        need = first + 2 * (second - first) + 4 * (count - second)
        if pos + need > len(buf):
            raise TruncatedStream("tiered array body")
        t8 = np.frombuffer(buf, dtype=np.uint8, count=first, offset=pos)
        pos += first
        t16 = np.frombuffer(buf, dtype="<u2", count=second - first, offset=pos)
        pos += 2 * (second - first)
        t32 = np.frombuffer(buf, dtype="<u4", count=count - second, offset=pos)
        pos += 4 * (count - second)
        return cls(first, second, t8, t16, t32), pos
