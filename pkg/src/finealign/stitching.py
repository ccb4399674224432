"""Turn a resolved chain into a scored local alignment.

Each chain item is grown without gaps (X-drop) toward its neighbours, the
residual gaps are aligned globally with a banded affine DP, and the
concatenation is trimmed to its best-scoring stretch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .chaining import ResolvedChain
from .scoring import ScoringScheme
from .seqio import OPS_BY_CODE, AlignmentRecord, Op, SeqLike, Sequence, as_codes, merge_blocks
from .suffix_index import Match


class EmptyChainError(ValueError):
    """Nothing to stitch: no anchors and no seeds."""


@dataclass(frozen=True)
class ExtensionParams:
    x_drop: int = 10
    band_pad: int = 16

    def __post_init__(self):
        if self.x_drop <= 0:
            raise ValueError("x_drop must be positive")
        if self.band_pad < 0:
            raise ValueError("band_pad must be non-negative")


def extend_ungapped(s1: SeqLike, s2: SeqLike, m: Match,
                    bounds: tuple[int, int, int, int] | None = None,
                    params: ExtensionParams = ExtensionParams(),
                    scoring: ScoringScheme = ScoringScheme()) -> Match:
    """Grow ``m`` left and right, column by column, under the X-drop rule.

    ``bounds`` is ``(lo1, lo2, hi1, hi2)``; the result never leaves
    ``[lo1, hi1) x [lo2, hi2)``. Each side is cut back to where its running
    score peaked.
    """
    a, b = as_codes(s1), as_codes(s2)
    lo1, lo2, hi1, hi2 = bounds if bounds is not None else (0, 0, len(a), len(b))
    left_room = min(m.pos1 - lo1, m.pos2 - lo2)
    right_room = min(hi1 - m.end1, hi2 - m.end2)
    left = right = 0
    if left_room > 0:
        left = kernels.xdrop_extend(a, b, m.pos1, m.pos2, -1, left_room,
                                    params.x_drop, scoring.match, scoring.mismatch)
    if right_room > 0:
        right = kernels.xdrop_extend(a, b, m.end1, m.end2, 1, right_room,
                                     params.x_drop, scoring.match, scoring.mismatch)
    if not left and not right:
        return m
    p1, p2, n = m.pos1 - left, m.pos2 - left, m.length + left + right
    x, y = a[p1:p1 + n], b[p2:p2 + n]
    mism = int(np.count_nonzero((x != y) | (x >= 4)))
    return Match(p1, p2, n, mism, m.kind)


def _gap_run_bound(m: int, n: int, w: int, sc: ScoringScheme) -> float | None:
    """Upper bound on any global path that leaves the band ``|j - i| <= w``.

    Such a path reaches diagonal ``w + 1`` (or ``-w - 1``) and must return to
    ``n - m``, so it holds at least ``2(w + 1) - |n - m|`` gap residues, in
    at least two runs. None when no path can leave the band.
    """
    g = 2 * (w + 1) - abs(n - m)
    if (m + n - g) % 2:
        g += 1
    if g > m + n:
        return None
    pairs = (m + n - g) // 2
    if sc.gap_open >= sc.gap_extend:
        gaps = g * sc.gap_open
    else:
        gaps = 2 * sc.gap_open + (g - 2) * sc.gap_extend
    return pairs * sc.match + gaps


def _blocks_from_ops(ops: np.ndarray) -> list[tuple[Op, int]]:
    if len(ops) == 0:
        return []
    cuts = np.flatnonzero(np.diff(ops)) + 1
    starts = np.concatenate([[0], cuts])
    ends = np.concatenate([cuts, [len(ops)]])
    return [(OPS_BY_CODE[ops[s]], int(e - s)) for s, e in zip(starts, ends)]


def fill_gap_scored(s1_slice: SeqLike, s2_slice: SeqLike,
                    scoring: ScoringScheme = ScoringScheme(),
                    band_pad: int = 16) -> tuple[int, list[tuple[Op, int]], bool]:
    """Like :func:`fill_gap` but also returns the score and whether the
    unbanded fallback ran."""
    a, b = as_codes(s1_slice), as_codes(s2_slice)
    m, n = len(a), len(b)
    if m == 0 and n == 0:
        return 0, [], False
    if m == 0:
        return scoring.gap(n), [(Op.INSERT_2, n)], False
    if n == 0:
        return scoring.gap(m), [(Op.INSERT_1, m)], False
    sc = scoring
    w = abs(m - n) + band_pad
    full = max(m, n)
    fallback = False
    if w >= full:
        score, ops = kernels.global_affine(a, b, full, sc.match, sc.mismatch,
                                           sc.gap_open, sc.gap_extend)
    else:
        score, ops = kernels.global_affine(a, b, w, sc.match, sc.mismatch,
                                           sc.gap_open, sc.gap_extend)
        bound = _gap_run_bound(m, n, w, sc)
        if bound is not None and score < bound:
            fallback = True
            score, ops = kernels.global_affine(a, b, full, sc.match, sc.mismatch,
                                               sc.gap_open, sc.gap_extend)
    return score, _blocks_from_ops(ops), fallback


def fill_gap(s1_slice: SeqLike, s2_slice: SeqLike,
             scoring: ScoringScheme = ScoringScheme(),
             band_pad: int = 16) -> list[tuple[Op, int]]:
    """Global affine alignment of two residual slices, banded.

    The band half-width is ``|len1 - len2| + band_pad``. When the banded
    optimum falls below the best score any out-of-band path could reach,
    the slices are re-aligned without a band, so the result is always a
    global optimum.
    """
    return fill_gap_scored(s1_slice, s2_slice, scoring, band_pad)[1]


def _column_ops(a: np.ndarray, b: np.ndarray, m: Match) -> np.ndarray:
    x, y = a[m.pos1:m.end1], b[m.pos2:m.end2]
    return np.where((x == y) & (x < 4), 0, 1).astype(np.uint8)


def _column_scores(ops: np.ndarray, sc: ScoringScheme) -> np.ndarray:
    scores = np.select(
        [ops == 0, ops == 1], [sc.match, sc.mismatch], default=sc.gap_extend
    ).astype(np.int64)
    gap = ops >= 2
    # first column of each gap run pays the opening cost
    first = gap & np.concatenate([[True], ops[1:] != ops[:-1]])
    scores[first] = sc.gap_open
    return scores


def best_segment(ops: np.ndarray, sc: ScoringScheme) -> tuple[int, int, int]:
    """Maximum-scoring contiguous column range ``[i, j)`` and its score."""
    scores = _column_scores(ops, sc)
    prefix = np.concatenate([[0], np.cumsum(scores)])
    run_min = np.minimum.accumulate(prefix)
    gain = prefix - run_min
    j = int(np.argmax(gain))
    best = int(gain[j])
    if best <= 0:
        return 0, 0, 0
    i = int(np.argmin(prefix[:j + 1]))
    return i, j, best


def assemble(s1: SeqLike, s2: SeqLike, chain: ResolvedChain | list[Match],
             params: ExtensionParams = ExtensionParams(),
             scoring: ScoringScheme = ScoringScheme(),
             ids: tuple[str, str] | None = None) -> AlignmentRecord:
    """Stitch the chain left to right into one local alignment.

    Each item extends toward its neighbours (an item never reaches past the
    already-extended item on its left nor the unextended item on its right),
    residual gaps are filled by :func:`fill_gap`, and the result is trimmed
    to its highest-scoring contiguous stretch.
    """
    items = list(chain.items if isinstance(chain, ResolvedChain) else chain)
    if ids is None:
        ids = (s1.id if isinstance(s1, Sequence) else "seq1",
               s2.id if isinstance(s2, Sequence) else "seq2")
    if not items:
        raise EmptyChainError("chain is empty")
    a, b = as_codes(s1), as_codes(s2)
    len1, len2 = len(a), len(b)

    extended: list[Match] = []
    lo1 = lo2 = 0
    for k, it in enumerate(items):
        nxt = items[k + 1] if k + 1 < len(items) else None
        hi1 = nxt.pos1 if nxt else len1
        hi2 = nxt.pos2 if nxt else len2
        ext = extend_ungapped(a, b, it, (lo1, lo2, hi1, hi2), params, scoring)
        extended.append(ext)
        lo1, lo2 = ext.end1, ext.end2

    pieces: list[np.ndarray] = []
    for k, ext in enumerate(extended):
        if k:
            prev = extended[k - 1]
            _, blocks, _ = fill_gap_scored(a[prev.end1:ext.pos1], b[prev.end2:ext.pos2],
                                           scoring, params.band_pad)
            for op, n in blocks:
                pieces.append(np.full(n, OPS_BY_CODE.index(op), dtype=np.uint8))
        pieces.append(_column_ops(a, b, ext))
    ops = np.concatenate(pieces)

    i, j, best = best_segment(ops, scoring)
    if best <= 0:
        return AlignmentRecord.empty(*ids)
    head = ops[:i]
    start1 = extended[0].pos1 + int(np.count_nonzero(head != 3))
    start2 = extended[0].pos2 + int(np.count_nonzero(head != 2))
    seg = ops[i:j]
    end1 = start1 + int(np.count_nonzero(seg != 3))
    end2 = start2 + int(np.count_nonzero(seg != 2))
    blocks = merge_blocks(_blocks_from_ops(seg))
    score = scoring.score_blocks(blocks)
    assert score == best, (score, best)
    return AlignmentRecord(ids[0], ids[1], tuple(blocks), (start1, end1), (start2, end2), score)
