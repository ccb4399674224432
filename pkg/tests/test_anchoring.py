import pytest
from hypothesis import given, settings, strategies as st

from finealign.anchoring import (
    EmptySetError, build_backbone, build_neighborhood_chain, length_threshold, select_anchors,
)
from finealign.suffix_index import Match, build, enumerate_mmss


@pytest.mark.parametrize("longest,floor,want", [(30, 1, 10), (5, 1, 2), (5, 10, 10)])
def test_threshold(longest, floor, want):
    assert length_threshold([Match(0, 0, longest), Match(50, 50, 1)], floor) == want


def test_threshold_empty():
    with pytest.raises(EmptySetError):
        length_threshold([])


def test_sixty_percent_rule_both_sequences():
    anchor = Match(900, 1900, 100)
    assert build_neighborhood_chain([anchor, Match(1055, 2050, 20)]).anchors == [anchor, Match(1055, 2050, 20)]
    assert build_neighborhood_chain([anchor, Match(1070, 2061, 20)]).anchors == [anchor]


def test_sixty_percent_rule_left_side():
    anchor = Match(1000, 2000, 100)
    left = Match(900, 1910, 40)  # ends 60 and 50 before the anchor
    assert build_neighborhood_chain([anchor, left]).anchors == [left, anchor]


def test_hand_simulated_chain():
    mmss = [Match(0, 0, 50), Match(40, 60, 20), Match(120, 80, 30)]
    chain = build_neighborhood_chain(mmss)
    assert chain.anchors == [Match(0, 0, 50)]
    assert chain.origin == Match(0, 0, 50)
    # a restart picks up the stranded anchor
    assert build_backbone(mmss).anchors == [Match(0, 0, 50), Match(120, 80, 30)]


def test_tie_break_prefers_smaller_pos1():
    anchor = Match(0, 0, 100)
    a, b = Match(110, 120, 20), Match(120, 110, 20)
    chain = build_neighborhood_chain([anchor, b, a])
    assert chain.anchors[1] == a


matches = st.builds(Match, st.integers(0, 300), st.integers(0, 300), st.integers(1, 40))


@settings(max_examples=150, deadline=None)
@given(st.lists(matches, max_size=30), st.booleans())
def test_chain_invariants(mmss, restart):
    mmss = sorted(set(mmss))
    chain = select_anchors(mmss, floor=1, restart=restart)
    chain.check()
    if mmss:
        cutoff = length_threshold(mmss)
        assert all(a.length >= cutoff for a in chain)
        assert chain.anchors[0] in mmss
    assert select_anchors(list(reversed(mmss)), floor=1, restart=restart).anchors == chain.anchors


def test_single_chain_on_real_matches():
    s = "ACGTTGCAAGGCTTACGATCGATCGGATCCATGACTGACTAGCATG"
    t = s[:20] + "T" + s[21:]
    chain = select_anchors(enumerate_mmss(build(s, t)), floor=1)
    assert [a.key for a in chain] == [(0, 0, 20), (21, 21, len(s) - 21)]
