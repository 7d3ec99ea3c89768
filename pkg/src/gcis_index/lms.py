"""Suffix typing and LMS factorization of symbol strings.

Symbols are plain non-negative integers.  Characters are byte values and
non-terminals are numbered from 256 upwards, so integer comparison gives the
order in which every character precedes every non-terminal.

Two flavours are provided: the list-based functions (``classify_types``,
``factorize``, ``run_length_encode``) used for patterns and small inputs, and
``lms_starts`` which computes the same factor boundaries over numpy arrays in
bounded-size chunks for whole texts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyInput

# positions of a level string processed per chunk by lms_starts
CHUNK = 1 << 24


class SuffixType(enum.IntEnum):
    L = 0
    S = 1
    SSTAR = 2

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Factorization:
    """LMS factorization of ``symbols``.

    ``starts`` holds the 0-based start offset of every factor; the first is
    always 0 and every other one is an S* position.
    """

    symbols: tuple[int, ...]
    starts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def factors(self) -> list[tuple[int, ...]]:
        ends = self.starts[1:] + (len(self.symbols),)
        return [self.symbols[b:e] for b, e in zip(self.starts, ends)]


def classify_types(s: Sequence[int], end_sentinel: bool = False) -> list[SuffixType]:
    """Type every position of ``s`` with a single right-to-left pass.

    The last position is S, unless ``end_sentinel`` asks to type ``s`` as if a
    symbol smaller than all others followed it, which makes it L.
    """
    n = len(s)
    if n == 0:
        raise EmptyInput("cannot type an empty string")
    is_s = [False] * n
    is_s[-1] = not end_sentinel
    for i in range(n - 2, -1, -1):
        if s[i] < s[i + 1]:
            is_s[i] = True
        elif s[i] == s[i + 1]:
            is_s[i] = is_s[i + 1]
    types = [SuffixType.S if t else SuffixType.L for t in is_s]
    for i in range(1, n):
        if is_s[i] and not is_s[i - 1]:
            types[i] = SuffixType.SSTAR
    return types


def factorize(s: Sequence[int], end_sentinel: bool = False) -> Factorization:
    """Split ``s`` before every S* position, plus a forced cut at offset 0.

    The forced cut stands in for a sentinel smaller than every symbol
    prepended to ``s``; only the first factor can differ from what that
    sentinel would produce.
    """
    types = classify_types(s, end_sentinel)
    starts = [0] + [i for i, t in enumerate(types) if t is SuffixType.SSTAR]
    return Factorization(tuple(s), tuple(starts))


def run_length_encode(s: Sequence[int]) -> list[tuple[int, int]]:
    if len(s) == 0:
        raise EmptyInput("cannot run-length encode an empty string")
    runs: list[tuple[int, int]] = []
    prev, count = s[0], 0
    for c in s:
        if c == prev:
            count += 1
        else:
            runs.append((prev, count))
            prev, count = c, 1
    runs.append((prev, count))
    return runs


def _run_end(s: np.ndarray, b: int) -> int:
    """First index >= b whose symbol differs from s[b - 1], or len(s)."""
    n = len(s)
    ref = s[b - 1]
    span = 64
    while b < n:
        seg = s[b:b + span]
        hit = np.flatnonzero(seg != ref)
        if len(hit):
            return b + int(hit[0])
        b += len(seg)
        span *= 2
    return n


def _sstar_in_chunk(s: np.ndarray, a: int, b: int, end_sentinel: bool) -> np.ndarray:
    """S* positions i with a <= i < b, as global 0-based offsets."""
    n = len(s)
    e = _run_end(s, b) if b < n else n
    off = max(a - 1, 0)
    w = s[off:min(e + 1, n)]
    cuts = np.flatnonzero(w[1:] != w[:-1]) + 1
    if len(cuts) == 0:
        return np.empty(0, dtype=np.int64)
    heads = np.concatenate(([0], cuts))
    vals = w[heads]
    # a run is S iff the next run holds a larger symbol; the final run of the
    # whole string is S by stipulation, otherwise it lies beyond b and is unused
    run_is_s = np.empty(len(vals), dtype=bool)
    run_is_s[:-1] = vals[1:] > vals[:-1]
    run_is_s[-1] = e >= n and not end_sentinel
    sstar = (vals[:-1] > vals[1:]) & run_is_s[1:]
    pos = heads[1:][sstar].astype(np.int64) + off
    return pos[(pos >= max(a, 1)) & (pos < b)]


def lms_starts(s: np.ndarray, end_sentinel: bool = False) -> np.ndarray:
    """Factor start offsets of ``s`` (same result as ``factorize(s).starts``)."""
    n = len(s)
    if n == 0:
        raise EmptyInput("cannot factorize an empty string")
    dtype = np.int32 if n < 2**31 else np.int64
    parts = [np.zeros(1, dtype=dtype)]
    for a in range(0, n, CHUNK):
        parts.append(_sstar_in_chunk(s, a, min(a + CHUNK, n), end_sentinel).astype(dtype))
    return np.concatenate(parts)
