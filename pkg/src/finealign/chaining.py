"""Merge anchors and gap seeds into one non-crossing chain."""

from __future__ import annotations

import bisect
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence as Seq

import numpy as np

from .anchoring import AnchorChain
from .seqio import SeqLike, as_codes
from .suffix_index import Kind, Match


def diagonal(m: Match) -> int:
    return m.pos2 - m.pos1


@dataclass
class ResolvedChain:
    items: list[Match] = field(default_factory=list)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def check(self) -> None:
        for a, b in zip(self.items, self.items[1:]):
            assert a.precedes(b), f"chain items {a.key} and {b.key} overlap or cross"

    def kinds(self) -> dict[Kind, int]:
        out: dict[Kind, int] = {}
        for m in self.items:
            out[m.kind] = out.get(m.kind, 0) + 1
        return out


class _SortedChain:
    def __init__(self, items: Iterable[Match] = ()):
        self.items = sorted(items)
        self.keys = [m.pos1 for m in self.items]

    def fits(self, m: Match) -> bool:
        k = bisect.bisect_left(self.keys, m.pos1)
        if k > 0 and not self.items[k - 1].precedes(m):
            return False
        if k < len(self.items) and not m.precedes(self.items[k]):
            return False
        return True

    def add(self, m: Match) -> None:
        k = bisect.bisect_left(self.keys, m.pos1)
        self.items.insert(k, m)
        self.keys.insert(k, m.pos1)

    def neighbours(self, mid1: float):
        mids = [(x.pos1 + x.end1) / 2 for x in self.items]
        k = bisect.bisect_left(mids, mid1)
        before = self.items[k - 1] if k > 0 else None
        after = self.items[k] if k < len(self.items) else None
        return before, after


def _interpolated_diagonal(left: Match | None, right: Match | None,
                           candidates: Seq[Match]):
    if left is None and right is None:
        d = statistics.median_low([diagonal(c) for c in candidates])
        return lambda x: d
    if left is None or right is None:
        d = diagonal(left or right)
        return lambda x: d
    x0, x1 = left.end1, right.pos1
    d0, d1 = diagonal(left), diagonal(right)
    if x1 <= x0:
        mid = (d0 + d1) / 2
        return lambda x: mid
    return lambda x: d0 + (x - x0) * (d1 - d0) / (x1 - x0)


def resolve_non_crossing(candidates: Seq[Match], left_flank: Match | None,
                         right_flank: Match | None) -> list[Match]:
    """Keep a maximal non-crossing, non-overlapping subset of ``candidates``.

    Conflicts go to the candidate whose diagonal lies closer to the line
    interpolated between the flank diagonals (taken at the candidate's seq1
    midpoint); ties prefer longer, then smaller ``pos1``, then ``pos2``.
    Candidates that do not fit strictly between the flanks are dropped. A
    missing flank borrows the other one's diagonal.
    """
    if not candidates:
        return []
    target = _interpolated_diagonal(left_flank, right_flank, candidates)

    def rank(c: Match):
        return (abs(diagonal(c) - target(c.pos1 + c.length / 2)), -c.length, c.pos1, c.pos2)

    chain = _SortedChain()
    for c in sorted(candidates, key=rank):
        if left_flank is not None and not left_flank.precedes(c):
            continue
        if right_flank is not None and not c.precedes(right_flank):
            continue
        if chain.fits(c):
            chain.add(c)
    return chain.items


def _hamming(a: np.ndarray, b: np.ndarray, m: Match) -> int:
    x = a[m.pos1:m.end1]
    y = b[m.pos2:m.end2]
    return int(np.count_nonzero((x != y) | (x >= 4)))


def merge_adaptive_runs(s1: SeqLike, s2: SeqLike, seeds: Seq[Match],
                        min_length: int | None = None) -> list[Match]:
    """Collapse adaptive seeds into one non-crossing set of runs.

    Overlapping or abutting seeds on one diagonal describe a single longer
    seed and are fused (mismatches recounted over the fused span). Fused
    runs are then admitted longest first; a run that collides with admitted
    ones is clipped along its diagonal to the free stretch and kept if at
    least ``min_length`` residues remain.
    """
    if not seeds:
        return []
    a, b = as_codes(s1), as_codes(s2)
    if min_length is None:
        min_length = min(s.length for s in seeds)
    by_diag: dict[int, list[Match]] = {}
    for s in seeds:
        by_diag.setdefault(diagonal(s), []).append(s)
    runs = []
    for d, group in by_diag.items():
        group.sort()
        start, end = group[0].pos1, group[0].end1
        for s in group[1:]:
            if s.pos1 <= end:
                end = max(end, s.end1)
            else:
                runs.append((start, end, d))
                start, end = s.pos1, s.end1
        runs.append((start, end, d))
    fused = []
    for p1, e1, d in runs:
        m = Match(p1, p1 + d, e1 - p1, 0, Kind.ADAPTIVE)
        fused.append(Match(m.pos1, m.pos2, m.length, _hamming(a, b, m), Kind.ADAPTIVE))
    fused.sort(key=lambda m: (-m.length, m.mismatches, m.pos1, m.pos2))

    chain = _SortedChain()
    for m in fused:
        if chain.fits(m):
            chain.add(m)
            continue
        before, after = chain.neighbours(m.pos1 + m.length / 2)
        lo, hi = 0, m.length
        if before is not None:
            lo = max(lo, before.end1 - m.pos1, before.end2 - m.pos2)
        if after is not None:
            hi = min(hi, after.pos1 - m.pos1, after.pos2 - m.pos2)
        if hi - lo < min_length:
            continue
        clipped = Match(m.pos1 + lo, m.pos2 + lo, hi - lo, 0, Kind.ADAPTIVE)
        if chain.fits(clipped):
            chain.add(Match(clipped.pos1, clipped.pos2, clipped.length,
                            _hamming(a, b, clipped), Kind.ADAPTIVE))
    return chain.items


def merge_chain(anchors: AnchorChain | Seq[Match],
                gap_seeds: Iterable[Seq[Match]]) -> ResolvedChain:
    """Insert each gap's seeds into the anchor chain.

    Adaptive seeds go in before perfect seeds; anything that would overlap
    or cross an item already admitted is dropped. Anchors are never moved.
    """
    base = anchors.anchors if isinstance(anchors, AnchorChain) else list(anchors)
    chain = _SortedChain(base)
    for seeds in gap_seeds:
        ordered = sorted(seeds, key=lambda m: (m.kind is not Kind.ADAPTIVE, m.pos1, m.pos2))
        for m in ordered:
            if chain.fits(m):
                chain.add(m)
    resolved = ResolvedChain(chain.items)
    resolved.check()
    return resolved
