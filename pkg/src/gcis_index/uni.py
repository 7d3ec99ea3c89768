"""Succinct rule store.

* ``F``: Elias-Fano code of the first symbol of every right-hand side
  (non-decreasing because rules are sorted by height, then content).
* ``Delta``: one gamma-coded record per rule.  A bitonic right-hand side is
  written as gamma(l) followed by gamma(|gap| + 1) for every later symbol,
  where l is the length of its longest non-decreasing prefix; gaps past the
  prefix are subtracted when decoding.  The start rule is not bitonic in
  general, so its record holds zigzag-mapped signed gaps instead.
* ``Q``: Elias-Fano code of the bit offset of each record (plus the end).
* ``L``: expansion lengths in a tiered 8/16/32-bit array.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .coding import EliasFano, TieredArray, gamma_bits, gamma_decode_range, gamma_encode_array
from .errors import NotBitonic
from .store import BuildInfo, RuleStore

RULE_CACHE = 1 << 16


def nondecreasing_prefix(rhs: Sequence[int]) -> int:
    k = 1
    while k < len(rhs) and rhs[k] >= rhs[k - 1]:
        k += 1
    return k


def is_bitonic(rhs: Sequence[int]) -> bool:
    k = nondecreasing_prefix(rhs)
    return all(rhs[j] <= rhs[j - 1] for j in range(k, len(rhs)))


def _zigzag(d: int) -> int:
    return 2 * d if d >= 0 else -2 * d - 1


def _unzigzag(z: int) -> int:
    return z >> 1 if not z & 1 else -((z + 1) >> 1)


def encode_rule(rhs: Sequence[int], signed: bool = False) -> tuple[int, str]:
    """(first symbol, record bits) of one right-hand side."""
    first = rhs[0]
    gaps = [rhs[k] - rhs[k - 1] for k in range(1, len(rhs))]
    if signed:
        return first, "".join(gamma_bits(_zigzag(d) + 1) for d in gaps)
    if not is_bitonic(rhs):
        raise NotBitonic(list(rhs))
    ell = nondecreasing_prefix(rhs)
    return first, gamma_bits(ell) + "".join(gamma_bits(abs(d) + 1) for d in gaps)


def decode_record(first: int, values: Sequence[int], signed: bool = False) -> list[int]:
    out = [first]
    if signed:
        for z in values:
            out.append(out[-1] + _unzigzag(z - 1))
        return out
    ell = values[0]
    for k, v in enumerate(values[1:], start=2):
        out.append(out[-1] + (v - 1) if k <= ell else out[-1] - (v - 1))
    return out


def _record_values(R: np.ndarray, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gamma values of every record in rule order, the rule heads, and the
    mask of positions of R that produce a stored value."""
    R = R.astype(np.int64)
    Q = Q.astype(np.int64)
    count = len(Q) - 1
    lens = np.diff(Q)
    d = np.zeros(len(R), dtype=np.int64)
    d[1:] = R[1:] - R[:-1]
    heads = Q[:-1]
    # index of the first descent inside each rule (rule length when none)
    pos = np.arange(len(R), dtype=np.int64) - np.repeat(heads, lens)
    marker = np.where((d < 0) & (pos > 0), pos, np.iinfo(np.int64).max)
    first_desc = np.minimum.reduceat(marker, heads) if count else marker[:0]
    ell = np.minimum(first_desc, lens)
    vals = np.abs(d) + 1
    # rises after a descent would break the bitonic decoding
    after = pos >= np.repeat(ell, lens)
    bad = after & (d > 0) & (pos > 0)
    start_lo, start_hi = int(Q[-2]), int(Q[-1])
    bad[start_lo:start_hi] = False
    if bad.any():
        rule = int(np.searchsorted(Q, np.flatnonzero(bad)[0], side="right")) - 1
        raise NotBitonic(f"rule {rule} is not bitonic")
    vals[heads[:-1]] = ell[:-1]
    sd = d[start_lo + 1:start_hi]
    zig = np.where(sd >= 0, 2 * sd, -2 * sd - 1) + 1
    keep = np.ones(len(R), dtype=bool)
    keep[start_lo] = False
    vals[start_lo + 1:start_hi] = zig
    return vals[keep], heads, keep


class UniStore(RuleStore):
    encoding = "uni"

    def __init__(self, F: EliasFano, Qbits: EliasFano, delta: bytes, L: TieredArray,
                 text_len: int, rule_counts: Sequence[int], info: BuildInfo = BuildInfo()):
        super().__init__(text_len, rule_counts, info)
        self.F = F
        self.Qbits = Qbits
        self.delta = delta
        self.L = L
        self._cached_rule = lru_cache(maxsize=RULE_CACHE)(self._decode_rule)

    @classmethod
    def from_plain(cls, R: np.ndarray, Q: np.ndarray, L: np.ndarray, text_len: int,
                   rule_counts: Sequence[int], info: BuildInfo = BuildInfo()) -> UniStore:
        Q = np.asarray(Q, dtype=np.int64)
        R = np.asarray(R)
        values, heads, keep = _record_values(R, Q)
        delta, offsets = gamma_encode_array(values)
        # bit offset of each rule's first stored value; the start rule stores
        # nothing at its head, which the exclusive count accounts for
        stored_index = np.cumsum(keep) - keep
        rule_bits = offsets[stored_index[heads]]
        rule_bits = np.append(rule_bits, offsets[-1])
        F = EliasFano.encode(R[Q[:-1]].astype(np.uint64))
        Qbits = EliasFano.encode(rule_bits.astype(np.uint64))
        return cls(F, Qbits, delta, TieredArray.build(L), text_len, rule_counts, info)

    @classmethod
    def from_store(cls, store: RuleStore) -> UniStore:
        R, Q, L = store.plain_arrays()
        return cls.from_plain(R, Q, L, store.text_len, store.rule_counts, store.info)

    def _decode_rule(self, i: int) -> list[int]:
        vals = gamma_decode_range(self.delta, self.Qbits[i], self.Qbits[i + 1])
        return decode_record(self.F[i], vals, signed=i == self.num_rules - 1)

    def rule(self, i: int) -> list[int]:
        return list(self._cached_rule(i))

    def first(self, i: int) -> int:
        return self.F[i]

    def length(self, i: int) -> int:
        return self.L[i]

    def plain_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        rules = [self._decode_rule(i) for i in range(self.num_rules)]
        lens = np.fromiter((len(r) for r in rules), dtype=np.int64, count=len(rules))
        Q = np.zeros(len(rules) + 1, dtype=np.uint64)
        np.cumsum(lens, out=Q[1:])
        R = np.fromiter((s for r in rules for s in r), dtype=np.uint32, count=int(Q[-1]))
        return R, Q, self.L.to_numpy()

    def size_in_bytes(self) -> int:
        return self.F.size_in_bytes() + self.Qbits.size_in_bytes() + 8 + len(self.delta) \
            + self.L.size_in_bytes()
