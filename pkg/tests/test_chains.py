import itertools

import pytest
from hypothesis import given, strategies as st

from ordsemi.chains import (FORWARD, REVERSED, ChainPair, GapBlock,
                            InvalidInstance, gap_blocks, gap_signature,
                            is_convex, is_lower_convex, is_upper_convex,
                            pair_isomorphism)


@st.composite
def chain_pairs(draw, max_size=9):
    n = draw(st.integers(1, max_size))
    rng = draw(st.sets(st.integers(0, n - 1), min_size=1))
    return ChainPair.of(n, sorted(rng))


def test_invalid_pairs_rejected():
    with pytest.raises(InvalidInstance):
        ChainPair.of(0, [0])
    with pytest.raises(InvalidInstance):
        ChainPair.of(3, [])
    with pytest.raises(InvalidInstance):
        ChainPair.of(3, [3])
    with pytest.raises(InvalidInstance):
        ChainPair.of(3, [2, 1])
    with pytest.raises(InvalidInstance):
        ChainPair.of(3, [1, 1])


def test_json_round_trip():
    p = ChainPair.of(9, [0, 2, 4, 6, 8])
    assert p.to_json() == {"size": 9, "range": [0, 2, 4, 6, 8]}
    assert ChainPair.from_json(p.to_json()) == p


@pytest.mark.parametrize("n, rng, gaps", [
    (9, [0, 2, 4, 6, 8], (0, 1, 1, 1, 1, 0)),
    (5, [1, 3], (1, 1, 1)),
    (4, [0, 1, 2, 3], (0, 0, 0, 0, 0)),
    (6, [1, 4], (1, 2, 1)),
])
def test_gap_signature(n, rng, gaps):
    assert gap_signature(ChainPair.of(n, rng)).gaps == gaps


def test_gap_blocks_examples():
    assert [list(b.elements) for b in gap_blocks(ChainPair.of(9, [0, 2, 4, 6, 8]))] == [[1], [3], [5], [7]]
    assert gap_blocks(ChainPair.of(5, range(5))) == []
    assert gap_blocks(ChainPair.of(6, [1, 4])) == [GapBlock(0, 0, 0), GapBlock(2, 3, 1), GapBlock(5, 5, 2)]


@given(chain_pairs())
def test_signature_sums_to_size(pair):
    sig = gap_signature(pair)
    assert len(sig) == len(pair.range) + 1
    assert sum(sig) + len(pair.range) == pair.size


@given(chain_pairs())
def test_blocks_match_nonzero_signature(pair):
    blocks = gap_blocks(pair)
    assert [b.size for b in blocks] == [g for g in gap_signature(pair) if g]
    for b in blocks:
        assert not set(b.elements) & pair.range_set
        for edge in (b.lo - 1, b.hi + 1):
            assert edge in (-1, pair.size) or edge in pair.range_set


def test_pair_isomorphism_examples():
    a = ChainPair.of(3, [1, 2])
    assert pair_isomorphism(a, a) == (0, 1, 2)
    assert pair_isomorphism(a, ChainPair.of(3, [0, 1]), REVERSED) == (2, 1, 0)
    c, d = ChainPair.of(3, [0, 1]), ChainPair.of(3, [0, 2])
    assert pair_isomorphism(c, d, FORWARD) is None
    assert pair_isomorphism(c, d, REVERSED) is None


def _brute_pair_isos(a, b):
    """Every bijection X -> Y that is monotone or antitone and carries range onto range."""
    out = []
    if a.size != b.size:
        return out
    for perm in itertools.permutations(range(b.size)):
        if {perm[x] for x in a.range} != b.range_set:
            continue
        inc = all(perm[i] < perm[i + 1] for i in range(a.size - 1))
        dec = all(perm[i] > perm[i + 1] for i in range(a.size - 1))
        if inc:
            out.append((FORWARD, perm))
        if dec:
            out.append((REVERSED, perm))
    return out


def test_pair_isomorphism_against_permutations():
    insts = [ChainPair.of(n, r) for n in range(1, 5) for k in range(1, n + 1)
             for r in itertools.combinations(range(n), k)]
    for a in insts:
        for b in insts:
            brute = _brute_pair_isos(a, b)
            for orient in (FORWARD, REVERSED):
                theta = pair_isomorphism(a, b, orient)
                expected = [p for o, p in brute if o == orient]
                assert (theta is None) == (not expected)
                if theta is not None:
                    assert [theta] == expected


@given(chain_pairs(), chain_pairs())
def test_pair_isomorphism_symmetric(a, b):
    for orient in (FORWARD, REVERSED):
        ab, ba = pair_isomorphism(a, b, orient), pair_isomorphism(b, a, orient)
        assert (ab is None) == (ba is None)
        if ab is not None:
            assert all(ba[ab[x]] == x for x in range(a.size))
            assert {ab[x] for x in a.range} == b.range_set


def test_convexity():
    p = ChainPair.of(6, [1, 4])
    assert is_convex(p, {2, 3, 4})
    assert not is_convex(p, {2, 4})
    block = gap_blocks(p)[1]
    assert is_lower_convex(p, {2}, block)
    assert is_upper_convex(p, {3}, block)
    assert not is_lower_convex(p, {3}, block)
    assert not is_upper_convex(p, {2}, block)
    assert is_lower_convex(p, {2, 3}, block) and is_upper_convex(p, {2, 3}, block)


def test_empty_subset_rejected():
    p = ChainPair.of(6, [1, 4])
    for f in (is_convex, is_lower_convex, is_upper_convex):
        with pytest.raises(InvalidInstance):
            f(p, set())
