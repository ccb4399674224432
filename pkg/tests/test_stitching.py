import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finealign import _backend
from finealign.chaining import ResolvedChain
from finealign.scoring import ScoringScheme
from finealign.seqio import Op, as_codes
from finealign.stitching import (
    EmptyChainError, ExtensionParams, assemble, best_segment, extend_ungapped, fill_gap,
    fill_gap_scored,
)
from finealign.suffix_index import Kind, Match

from .conftest import random_codes

schemes = [ScoringScheme(), ScoringScheme(2, -3, -5, -2), ScoringScheme(1, -2, -1, -3)]


def full_dp(a, b, sc):
    w = max(len(a), len(b), 1)
    return _backend.kernels.global_affine(as_codes(a), as_codes(b), w, sc.match, sc.mismatch,
                                          sc.gap_open, sc.gap_extend)[0]


def test_params_validation():
    with pytest.raises(ValueError):
        ExtensionParams(x_drop=0)
    with pytest.raises(ValueError):
        ExtensionParams(band_pad=-1)


def test_extend_identical():
    assert extend_ungapped("AAATTTGGG", "AAATTTGGG", Match(3, 3, 3)).key == (0, 0, 9)


def test_extend_stops_at_wall():
    s1, s2 = "ACGTAAAA", "TGCAAAAA"
    out = extend_ungapped(s1, s2, Match(4, 4, 4), params=ExtensionParams(x_drop=1))
    assert out.key == (4, 4, 4)


def test_extend_respects_bounds():
    s = "ACGT" * 10
    assert extend_ungapped(s, s, Match(10, 10, 4), (8, 6, 30, 40)).key == (8, 8, 22)


def _best_ungapped(a, b, i, j, direction, limit, sc):
    best = run = best_t = 0
    for t in range(limit):
        x, y = (a[i + t], b[j + t]) if direction > 0 else (a[i - 1 - t], b[j - 1 - t])
        run += sc.match if (x == y and x < 4) else sc.mismatch
        if run > best:
            best, best_t = run, t + 1
    return best, best_t


def test_extend_endpoint_equals_exhaustive_scan(backend):
    """With an X-drop larger than any possible recovery the endpoint is the global max."""
    rng = np.random.default_rng(31)
    sc = ScoringScheme()
    for _ in range(100):
        core = random_codes(rng, 10)
        a = np.concatenate([random_codes(rng, 100), core, random_codes(rng, 100)])
        b = a.copy()
        flip = rng.random(len(b)) < 0.3
        b[flip] = (b[flip] + 1) % 4
        b[100:110] = core
        out = extend_ungapped(a, b, Match(100, 100, 10), params=ExtensionParams(x_drop=1000))
        _, right = _best_ungapped(a, b, 110, 110, 1, 100, sc)
        _, left = _best_ungapped(a, b, 100, 100, -1, 100, sc)
        assert out.key == (100 - left, 100 - left, 10 + left + right)


def test_fill_gap_examples():
    sc = ScoringScheme()
    score, blocks, _ = fill_gap_scored("ACG", "AG", sc)
    assert blocks == [(Op.MATCH, 1), (Op.INSERT_1, 1), (Op.MATCH, 1)] and score == 0
    assert fill_gap("", "TT") == [(Op.INSERT_2, 2)]
    assert fill_gap("TTT", "") == [(Op.INSERT_1, 3)]
    assert fill_gap("", "") == []


@pytest.mark.parametrize("sc", schemes, ids=["default", "harsh-open", "cheap-open"])
def test_banded_equals_full_dp(sc, backend):
    rng = np.random.default_rng(32)
    for _ in range(120):
        a = random_codes(rng, int(rng.integers(0, 40)), int(rng.integers(1, 5)))
        b = random_codes(rng, int(rng.integers(0, 40)), int(rng.integers(1, 5)))
        score, blocks, _ = fill_gap_scored(a, b, sc, band_pad=int(rng.integers(0, 4)))
        assert score == sc.score_blocks(blocks)
        if len(a) and len(b):
            assert score == full_dp(a, b, sc)


def test_fallback_engages_when_band_is_breached():
    # a long shifted repeat forces the optimal path far off the main diagonal
    sc = ScoringScheme()
    a = "ACGTTGCA" * 3 + "GGGGGGGGGGGG"
    b = "GGGGGGGGGGGG" + "ACGTTGCA" * 3
    score, _, fallback = fill_gap_scored(a, b, sc, band_pad=0)
    assert fallback and score == full_dp(a, b, sc)


def test_best_segment():
    ops = np.array([1, 1, 0, 0, 0, 1, 0, 2, 2, 1, 1], dtype=np.uint8)
    i, j, best = best_segment(ops, ScoringScheme())
    # ties resolve to the earliest end
    assert (i, j, best) == (2, 5, 3)


def test_assemble_identity():
    s = "ACGTTGCAAGGCTTACGATC"
    rec = assemble(s, s, ResolvedChain([Match(0, 0, len(s))]))
    assert rec.blocks == ((Op.MATCH, len(s)),) and rec.identity == 1.0 and rec.score == len(s)


def test_assemble_two_anchors_with_gap():
    left, right = "ACGTTGCAAG", "TCCATGACTG"
    s1, s2 = left + "ACG" + right, left + "AG" + right
    chain = [Match(0, 0, 10), Match(13, 12, 10)]
    rec = assemble(s1, s2, chain, params=ExtensionParams(x_drop=1))
    assert rec.blocks == ((Op.MATCH, 11), (Op.INSERT_1, 1), (Op.MATCH, 11))
    assert rec.seq1_span == (0, 23) and rec.seq2_span == (0, 22)


def test_assemble_reports_seed_mismatches():
    s1 = "ACGTTGCAAGGCTTACGATC"
    s2 = "ACGTTGCAAGCCTTACGATC"
    rec = assemble(s1, s2, [Match(0, 0, 20, 1, Kind.ADAPTIVE)])
    assert rec.cigar == "10M1X9M"


def test_assemble_empty_chain():
    with pytest.raises(EmptyChainError):
        assemble("ACGT", "ACGT", [])


@settings(max_examples=60, deadline=None)
@given(st.text("ACGT", min_size=1, max_size=60), st.text("ACGT", min_size=1, max_size=60), st.data())
def test_assemble_faithful(a, b, data):
    from finealign.suffix_index import build, enumerate_mmss
    from finealign.anchoring import select_anchors

    mmss = enumerate_mmss(build(a, b))
    chain = select_anchors(mmss, floor=1).anchors
    if not chain:
        return
    sc = data.draw(st.sampled_from(schemes))
    rec = assemble(a, b, chain, scoring=sc)
    assert rec.score == sc.score_blocks(rec.blocks)
    i = j = None
    for op, x, y in rec.aligned_pairs():
        if op is Op.MATCH:
            assert a[x] == b[y]
        elif op is Op.MISMATCH:
            assert a[x] != b[y]
        if x is not None:
            assert i is None or x == i + 1
            i = x
        if y is not None:
            assert j is None or y == j + 1
            j = y
