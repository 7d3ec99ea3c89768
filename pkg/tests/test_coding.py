import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcis_index.coding import (EliasFano, TieredArray, gamma_bits, gamma_decode, gamma_decode_range,
                               gamma_encode_array)
from gcis_index.errors import InvalidValue, Overflow, TruncatedStream


def pack(bits: str) -> bytes:
    if not bits:
        return b""
    pad = (8 - len(bits) % 8) % 8
    return (int(bits, 2) << pad).to_bytes((len(bits) + pad) // 8, "big")


def test_gamma_table():
    assert gamma_bits(1) == "1"
    assert gamma_bits(2) == "010"
    assert gamma_bits(4) == "00100"
    with pytest.raises(InvalidValue):
        gamma_bits(0)


def test_gamma_decode_single():
    buf = pack("00100" + "1")
    assert gamma_decode(buf, 0) == (4, 5)
    assert gamma_decode(buf, 5) == (1, 6)
    with pytest.raises(TruncatedStream):
        gamma_decode(pack("0010"), 0, 4)
    with pytest.raises(TruncatedStream):
        gamma_decode(b"\x00", 0)


def test_gamma_round_trip_to_a_million():
    values = np.arange(1, 10**6 + 1, dtype=np.uint64)
    buf, offsets = gamma_encode_array(values)
    assert gamma_decode_range(buf, 0, int(offsets[-1])) == values.tolist()
    for v in (1, 2, 3, 255, 256, 65535, 10**6):
        a, b = int(offsets[v - 1]), int(offsets[v])
        assert gamma_decode(buf, a) == (v, b)


def test_gamma_encode_rejects_zero():
    with pytest.raises(InvalidValue):
        gamma_encode_array([3, 0])


@given(st.lists(st.integers(1, 2**40), max_size=500))
def test_gamma_array_matches_bit_strings(values):
    buf, offsets = gamma_encode_array(values)
    bits = "".join(gamma_bits(v) for v in values)
    assert buf == pack(bits)
    assert int(offsets[-1]) == len(bits)
    assert gamma_decode_range(buf, 0, len(bits)) == values


def test_gamma_range_truncated():
    buf = pack("00100")
    with pytest.raises(TruncatedStream):
        gamma_decode_range(buf, 0, 4)
    with pytest.raises(TruncatedStream):
        gamma_decode_range(buf, 0, 64)


monotone = st.lists(st.integers(0, 2**34), max_size=400).map(sorted)


@given(monotone)
def test_elias_fano_access(values):
    ef = EliasFano.encode(values)
    assert len(ef) == len(values)
    assert [ef[i] for i in range(len(values))] == values
    assert ef.to_numpy().tolist() == values
    back, pos = EliasFano.from_bytes(ef.to_bytes(), 0)
    assert pos == len(ef.to_bytes())
    assert back.to_numpy().tolist() == values


def test_elias_fano_errors():
    with pytest.raises(InvalidValue):
        EliasFano.encode([3, 2])
    with pytest.raises(InvalidValue):
        EliasFano.encode([5], universe=5)
    ef = EliasFano.encode([1, 5, 9])
    with pytest.raises(IndexError):
        ef[3]
    with pytest.raises(TruncatedStream):
        EliasFano.from_bytes(ef.to_bytes()[:-1], 0)


def test_elias_fano_dense_runs():
    values = [7] * 300 + [8] * 5 + list(range(9, 2000, 3))
    ef = EliasFano.encode(values)
    assert [ef[i] for i in range(len(values))] == values


def test_tiers_example():
    t = TieredArray.build([3, 5, 300, 4])
    assert t.t8.tolist() == [3, 5]
    assert t.t16.tolist() == [300, 4]
    assert t.t32.tolist() == []
    assert [t[i] for i in range(4)] == [3, 5, 300, 4]


def test_tiers_small_and_overflow():
    t = TieredArray.build([1, 2, 255])
    assert (len(t.t8), len(t.t16), len(t.t32)) == (3, 0, 0)
    with pytest.raises(Overflow):
        TieredArray.build([1, 2**32])


@given(st.lists(st.integers(0, 2**32 - 1), max_size=200))
def test_tiers_round_trip(values):
    t = TieredArray.build(values)
    assert [t[i] for i in range(len(values))] == values
    back, _ = TieredArray.from_bytes(t.to_bytes(), 0, len(values))
    assert back.to_numpy().tolist() == values
    # monotone tiers: the first value needing a wider tier fixes the boundary
    big = [i for i, v in enumerate(values) if v >= 256]
    assert t.first == (big[0] if big else len(values))
