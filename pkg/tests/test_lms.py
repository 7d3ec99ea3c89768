import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcis_index import lms
from gcis_index.errors import EmptyInput
from gcis_index.lms import SuffixType, classify_types, factorize, lms_starts, run_length_encode

from oracles import naive_factorize, naive_types

L, S, SS = SuffixType.L, SuffixType.S, SuffixType.SSTAR
NAMES = {L: "L", S: "S", SS: "S*"}

small_strings = st.lists(st.integers(0, 3), min_size=1, max_size=40)
symbol_strings = st.lists(st.sampled_from([97, 98, 99, 256, 257, 300]), min_size=1, max_size=40)


def test_types_examples():
    assert classify_types(b"a") == [S]
    # "ba" ends in an S position right after an L one, which the marking rule
    # makes S*; the L/S split is what the example pins down
    assert [t != L for t in classify_types(b"ba")] == [False, True]
    assert classify_types(b"acab") == [S, L, SS, S]


def test_factorize_examples():
    assert factorize(b"acabacab").factors == [tuple(b"ac"), tuple(b"ab")] * 2
    assert factorize(b"acabacab").starts == (0, 2, 4, 6)
    assert factorize(b"a").factors == [(97,)]
    f = factorize([257, 256, 257, 256])
    assert f.factors == [(257,), (256, 257), (256,)]
    assert f.starts == (0, 1, 3)


def test_run_length_examples():
    assert run_length_encode(b"abcc") == [(97, 1), (98, 1), (99, 2)]
    assert run_length_encode(b"aaaa") == [(97, 4)]
    assert run_length_encode([260, 259, 258]) == [(260, 1), (259, 1), (258, 1)]


@pytest.mark.parametrize("fn", [classify_types, factorize, run_length_encode])
def test_empty_input(fn):
    with pytest.raises(EmptyInput):
        fn([])


def test_empty_input_array():
    with pytest.raises(EmptyInput):
        lms_starts(np.zeros(0, dtype=np.uint8))


@given(symbol_strings, st.booleans())
def test_types_match_suffix_comparison(s, end):
    assert [NAMES[t] for t in classify_types(s, end)] == naive_types(s, end)


@given(symbol_strings)
def test_type_invariants(s):
    t = classify_types(s)
    assert t[-1] != L
    for i in range(len(s) - 1):
        if s[i] > s[i + 1]:
            assert t[i] == L
        elif s[i] < s[i + 1]:
            assert t[i] != L
        else:
            assert (t[i] == L) == (t[i + 1] == L)
        if t[i + 1] == SS:
            assert t[i] == L


@given(symbol_strings, st.booleans())
def test_factorization_matches_oracle(s, end):
    f = factorize(s, end)
    assert f.factors == naive_factorize(s, end)
    assert [c for fac in f.factors for c in fac] == list(s)
    types = classify_types(s, end)
    assert all(types[b] == SS for b in f.starts[1:])
    assert set(f.starts[1:]) == {i for i, t in enumerate(types) if t == SS}


@given(small_strings)
def test_factor_count_bound(s):
    assert len(factorize(s)) <= math.ceil(len(s) / 2) + 1


@given(small_strings, small_strings, small_strings)
def test_context_stability(u, s, v):
    """Boundaries strictly inside s, apart from its first and last factor,
    do not depend on the context."""
    alone = factorize(s).starts
    if len(alone) < 3:
        return
    lo, hi = alone[1], alone[-1]
    inner = {b for b in alone if lo <= b < hi}
    embedded = factorize(u + s + v).starts
    shifted = {b - len(u) for b in embedded if len(u) + lo <= b < len(u) + hi}
    assert shifted == inner


@settings(max_examples=200)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=300), st.booleans(),
       st.sampled_from([1, 2, 3, 7, 64]))
def test_lms_starts_chunked(s, end, chunk):
    arr = np.array(s, dtype=np.uint8)
    old = lms.CHUNK
    lms.CHUNK = chunk
    try:
        got = lms_starts(arr, end).tolist()
    finally:
        lms.CHUNK = old
    assert got == list(factorize(s, end).starts)


def test_lms_starts_wide_symbols():
    s = [300, 257, 257, 400, 256, 256, 300]
    assert lms_starts(np.array(s, dtype=np.uint32)).tolist() == list(factorize(s).starts)


def test_lms_starts_long_run_across_chunks():
    s = np.array([1] + [0] * 50 + [2] * 50 + [1, 0], dtype=np.uint8)
    old = lms.CHUNK
    lms.CHUNK = 8
    try:
        assert lms_starts(s).tolist() == list(factorize(s.tolist()).starts)
    finally:
        lms.CHUNK = old
