"""Seeds inside the gaps left between chained anchors.

Two kinds: adaptive seeds (20-mers with at most 6 substitutions, found by
bounded-mismatch descent of a suffix tree built over the gap) and perfect
seeds (exact 4-mers, then exact 2-mers in whatever is still uncovered).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence as Seq

import numpy as np

from .seqio import SeqLike, as_codes
from .suffix_index import Kind, Match, build, descend_batch


@dataclass(frozen=True)
class SeedParams:
    adaptive_length: int = 20
    adaptive_max_mismatch: int = 6
    perfect_lengths: tuple[int, ...] = (4, 2)
    proximity_fraction: float = 1 / 3
    # sub-gaps larger than this many cells are not searched for perfect seeds
    max_perfect_area: int = 4_000_000

    def __post_init__(self):
        if self.adaptive_length < 1:
            raise ValueError("adaptive_length must be positive")
        if not 0 <= self.adaptive_max_mismatch < self.adaptive_length:
            raise ValueError("adaptive_max_mismatch must be in [0, adaptive_length)")
        lens = tuple(int(k) for k in self.perfect_lengths)
        if not 1 <= len(lens) <= 2 or any(k < 1 for k in lens):
            raise ValueError("perfect_lengths must hold one or two positive lengths")
        if any(a <= b for a, b in zip(lens, lens[1:])):
            raise ValueError("perfect_lengths must be strictly decreasing")
        object.__setattr__(self, "perfect_lengths", lens)
        if not 0 < self.proximity_fraction <= 1:
            raise ValueError("proximity_fraction must be in (0, 1]")


@dataclass(frozen=True)
class GapRegion:
    """Half-open ranges strictly between two chain anchors (or a sequence end).

    ``left``/``right`` are the flanking anchors, None at a sequence end.
    """

    seq1_range: tuple[int, int]
    seq2_range: tuple[int, int]
    left: Match | None = field(default=None, compare=False)
    right: Match | None = field(default=None, compare=False)

    @property
    def width1(self) -> int:
        return self.seq1_range[1] - self.seq1_range[0]

    @property
    def width2(self) -> int:
        return self.seq2_range[1] - self.seq2_range[0]

    def contains(self, m: Match) -> bool:
        (a1, b1), (a2, b2) = self.seq1_range, self.seq2_range
        return a1 <= m.pos1 and m.end1 <= b1 and a2 <= m.pos2 and m.end2 <= b2


def gap_regions(anchors: Seq[Match], len1: int, len2: int) -> list[GapRegion]:
    """Gaps before, between and after the anchors; empty-area gaps included."""
    gaps = []
    prev = None
    for a in list(anchors) + [None]:
        s1 = prev.end1 if prev else 0
        s2 = prev.end2 if prev else 0
        e1 = a.pos1 if a else len1
        e2 = a.pos2 if a else len2
        gaps.append(GapRegion((s1, e1), (s2, e2), prev, a))
        prev = a
    return gaps


def find_adaptive_seeds(s1: SeqLike, s2: SeqLike, gap: GapRegion,
                        params: SeedParams = SeedParams()) -> list[Match]:
    """Every ``(p1, p2)`` inside the gap whose k-mers differ in at most
    ``adaptive_max_mismatch`` positions, sorted by ``(pos1, pos2)``."""
    a, b = as_codes(s1), as_codes(s2)
    k = params.adaptive_length
    (a1, b1), (a2, b2) = gap.seq1_range, gap.seq2_range
    g1, g2 = a[a1:b1], b[a2:b2]
    if len(g1) < k or len(g2) < k:
        return []
    tree = build(np.empty(0, dtype=np.uint8), g2)
    queries = np.lib.stride_tricks.sliding_window_view(g1, k)
    qi, pos, mm = descend_batch(tree, queries.ravel(), k, params.adaptive_max_mismatch)
    p2 = pos - tree.offset2
    order = np.lexsort((p2, qi))
    return [
        Match(a1 + int(i), a2 + int(j), k, int(u), Kind.ADAPTIVE)
        for i, j, u in zip(qi[order], p2[order], mm[order])
    ]


def _kmer_index(codes: np.ndarray, k: int, lo: int, hi: int, ok) -> dict:
    index: dict = {}
    for p in range(lo, hi - k + 1):
        if not ok(p):
            continue
        word = codes[p:p + k]
        if (word >= 4).any():
            continue
        index.setdefault(word.tobytes(), []).append(p)
    return index


def _near_edge(frac: Fraction, x: int, y: int, k: int):
    num, den = frac.numerator, frac.denominator
    limit = num * (y - x)

    def ok(p: int) -> bool:
        return min(p - x, y - (p + k)) * den <= limit

    return ok


def _exact_pairs(a, b, box, k, frac: Fraction, kind: Kind) -> list[Match]:
    (x1, y1), (x2, y2) = box
    if y1 - x1 < k or y2 - x2 < k:
        return []
    ok1 = _near_edge(frac, x1, y1, k)
    ok2 = _near_edge(frac, x2, y2, k)
    index = _kmer_index(b, k, x2, y2, ok2)
    out = []
    for p in range(x1, y1 - k + 1):
        if not ok1(p):
            continue
        hits = index.get(a[p:p + k].tobytes())
        if hits:
            out.extend(Match(p, q, k, 0, kind) for q in hits)
    return out


def _subgaps(gap: GapRegion, features: list[Match]):
    """Consecutive (left, right, box) triples between features inside the gap."""
    (a1, b1), (a2, b2) = gap.seq1_range, gap.seq2_range
    bounds = [None] + features + [None]
    for left, right in zip(bounds, bounds[1:]):
        x1 = left.end1 if left else a1
        x2 = left.end2 if left else a2
        y1 = right.pos1 if right else b1
        y2 = right.pos2 if right else b2
        yield left, right, ((x1, y1), (x2, y2))


def find_perfect_seeds(s1: SeqLike, s2: SeqLike, gap: GapRegion, placed: Seq[Match],
                       params: SeedParams = SeedParams()) -> list[Match]:
    """Exact seeds between placed features, coarse length first.

    ``placed`` are the adaptive seeds already kept in this gap (possibly
    none). In each sub-gap between neighbouring features, a seed qualifies
    when its start lies within ``proximity_fraction`` of the sub-gap's span
    from the nearer feature, in both sequences. Crossing or overlapping
    candidates are resolved by diagonal closeness to the flanks. The finer
    length then searches the sub-gaps left between all features, the coarse
    seeds included.
    """
    from .chaining import resolve_non_crossing

    a, b = as_codes(s1), as_codes(s2)
    frac = Fraction(params.proximity_fraction).limit_denominator(1000)
    kinds = (Kind.PERFECT4, Kind.PERFECT2)
    features = sorted(m for m in placed if gap.contains(m))
    flank_left = gap.left
    flank_right = gap.right
    found: list[Match] = []
    for stage, k in enumerate(params.perfect_lengths):
        kept_here: list[Match] = []
        for left, right, box in _subgaps(gap, sorted(features + found)):
            (x1, y1), (x2, y2) = box
            if (y1 - x1) * (y2 - x2) > params.max_perfect_area:
                continue
            cands = _exact_pairs(a, b, box, k, frac, kinds[stage])
            lf = left if left is not None else flank_left
            rf = right if right is not None else flank_right
            kept_here.extend(resolve_non_crossing(cands, lf, rf))
        found.extend(kept_here)
    return sorted(found)
