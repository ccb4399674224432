import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from finealign.anchoring import AnchorChain
from finealign.chaining import diagonal, merge_adaptive_runs, merge_chain, resolve_non_crossing
from finealign.suffix_index import Kind, Match


def test_diagonal():
    assert [diagonal(Match(10, 50, 1)), diagonal(Match(0, 0, 1)), diagonal(Match(20, 40, 1))] == [40, 0, 20]


def test_closeness_keeps_on_diagonal_candidate():
    left, right = Match(0, 40, 5), Match(100, 140, 5)
    a, b = Match(10, 50, 4), Match(20, 40, 4)
    assert resolve_non_crossing([b, a], left, right) == [a]


def test_non_conflicting_all_kept():
    cands = [Match(10, 10, 2), Match(20, 25, 2), Match(30, 31, 3)]
    assert resolve_non_crossing(cands, Match(0, 0, 5), Match(50, 50, 5)) == cands
    assert resolve_non_crossing([], None, None) == []


def test_tie_breaks_longer_then_pos1():
    # both on the target diagonal and overlapping: the longer wins
    a, b = Match(10, 10, 4), Match(12, 12, 2)
    assert resolve_non_crossing([b, a], Match(0, 0, 2), Match(50, 50, 2)) == [a]


def _score(subset, target):
    return sum(abs(diagonal(c) - target) for c in subset)


matches = st.builds(Match, st.integers(6, 60), st.integers(6, 60), st.integers(1, 4))


@settings(max_examples=200, deadline=None)
@given(st.lists(matches, max_size=8, unique=True))
def test_resolution_maximal_and_monotone(cands):
    left, right = Match(0, 0, 5), Match(70, 70, 5)
    kept = resolve_non_crossing(cands, left, right)
    chain = [left] + kept + [right]
    assert all(x.precedes(y) for x, y in zip(chain, chain[1:]))
    # maximal: no dropped candidate fits into the kept chain
    for c in set(cands) - set(kept):
        assert not all(c.compatible(k) for k in chain)
    # greedy keeps at least one item whenever any candidate fits at all
    if any(left.precedes(c) and c.precedes(right) for c in cands):
        assert kept


def test_resolution_optimal_on_small_fixture():
    left, right = Match(0, 40, 5), Match(100, 140, 5)
    cands = [Match(10, 50, 4), Match(20, 40, 4), Match(30, 70, 4)]
    kept = resolve_non_crossing(cands, left, right)
    subsets = [s for r in range(len(cands) + 1) for s in itertools.combinations(cands, r)
               if all(x.precedes(y) for x, y in zip(sorted(s), sorted(s)[1:]))]
    best = max(len(s) for s in subsets)
    assert len(kept) == best and Match(20, 40, 4) not in kept


def test_merge_chain_cases():
    anchors = AnchorChain([Match(0, 0, 10), Match(50, 50, 10)])
    assert merge_chain(anchors, [[], [], []]).items == anchors.anchors
    seed = Match(20, 20, 20, 3, Kind.ADAPTIVE)
    assert merge_chain(anchors, [[], [seed], []]).items == [anchors.anchors[0], seed, anchors.anchors[1]]
    crossing = Match(42, 12, 4, 0, Kind.PERFECT4)
    resolved = merge_chain(anchors, [[], [crossing, seed], []])
    assert crossing not in resolved.items and seed in resolved.items
    assert resolved.kinds() == {Kind.MMSS: 2, Kind.ADAPTIVE: 1}


def test_merge_adaptive_runs_fuses_diagonal():
    rng = np.random.default_rng(4)
    a = rng.integers(0, 4, 60).astype(np.uint8)
    b = a.copy()
    seeds = [Match(p, p, 20, 0, Kind.ADAPTIVE) for p in range(0, 41)]
    runs = merge_adaptive_runs(a, b, seeds, 20)
    assert [(r.pos1, r.pos2, r.length, r.mismatches) for r in runs] == [(0, 0, 60, 0)]


def test_merge_adaptive_runs_clips_conflicts():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 4, 120).astype(np.uint8)
    b = a.copy()
    seeds = [Match(p, p, 20, 0, Kind.ADAPTIVE) for p in range(0, 61)]  # run 0..80 on diagonal 0
    seeds += [Match(p, p + 3, 20, 0, Kind.ADAPTIVE) for p in range(70, 91)]  # run 70..110 on diagonal 3
    runs = merge_adaptive_runs(a, b, seeds, 20)
    assert runs[0].key == (0, 0, 80)
    assert runs[1].pos1 >= 80 and runs[1].length >= 20 and runs[1].diagonal == 3
    assert all(x.precedes(y) for x, y in zip(runs, runs[1:]))
    for r in runs:
        x, y = a[r.pos1:r.end1], b[r.pos2:r.end2]
        assert r.mismatches == int(np.count_nonzero(x != y))
