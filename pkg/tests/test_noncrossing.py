import itertools

import pytest
from hypothesis import given, strategies as st

from pst.noncrossing import (brute_force_minimal, canonical_relabel, collapse,
                             enumerate_minimal_noncrossing, expand_minimal, is_minimal,
                             is_noncrossing, max_minimal_length, noncrossing_sequences)


@pytest.mark.parametrize("seq,ok", [
    ((1, 2, 1), True),
    ((1, 2, 1, 2), False),
    ((1, 1, 2, 2, 1, 1), True),
    ((1, 2, 3, 2, 1), True),
    ((1, 2, 3, 1, 3), False),
    ((), True),
])
def test_noncrossing_examples(seq, ok):
    assert is_noncrossing(seq) is ok


def test_collapse_keeps_two_copies():
    assert collapse((1, 1, 1, 1, 2, 2, 2, 1)) == (1, 1, 2, 2, 1)
    assert is_minimal(collapse((3,) * 7))


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_enumeration_matches_brute_force(ell):
    assert set(enumerate_minimal_noncrossing(ell)) == set(brute_force_minimal(ell, 4 * ell + 1))


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_length_bound(ell):
    longest, count = max_minimal_length(ell)
    assert count > 0
    assert longest <= 4 * ell


@pytest.mark.parametrize("n,ell", [(4, 2), (5, 3), (6, 3)])
def test_all_sequences_match_direct_filter(n, ell):
    fast = list(noncrossing_sequences(n, ell))
    direct = {s for s in itertools.product(range(1, ell + 1), repeat=n) if is_noncrossing(s)}
    assert len(fast) == len(set(fast))
    assert set(fast) == direct


def test_expand_minimal_stretches_double_runs():
    assert set(expand_minimal((1, 1, 2), 4)) == {(1, 1, 1, 2)}
    assert list(expand_minimal((1, 2), 3)) == []


def test_canonical_relabel():
    assert canonical_relabel((5, 3, 5, 9)) == (1, 2, 1, 3)


@given(st.lists(st.integers(1, 4), max_size=12))
def test_collapse_preserves_noncrossing(seq):
    assert is_noncrossing(seq) == is_noncrossing(collapse(seq))
    assert is_minimal(collapse(seq))
