"""Anchor selection: length threshold and neighborhood chaining of MMSSs."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from .suffix_index import Match

_EPS = 1e-9


class EmptySetError(ValueError):
    """No maximal match was found; the caller seeds the whole pair instead."""


def length_threshold(mmss: list[Match], floor: int = 1) -> int:
    if not mmss:
        raise EmptySetError("no MMSS to derive a length threshold from")
    longest = max(m.length for m in mmss)
    return max(math.ceil(longest / 3), floor)


@dataclass
class AnchorChain:
    """Anchors ordered by ``pos1``, strictly increasing in both sequences."""

    anchors: list[Match] = field(default_factory=list)
    origin: Match | None = None

    def __len__(self):
        return len(self.anchors)

    def __iter__(self):
        return iter(self.anchors)

    def check(self) -> None:
        for a, b in zip(self.anchors, self.anchors[1:]):
            assert a.precedes(b), f"anchors {a.key} and {b.key} overlap or cross"


def _priority(m: Match):
    return (-m.length, m.pos1, m.pos2)


class _Backbone:
    """Sorted, mutually compatible set of matches with O(log n) slot lookup."""

    def __init__(self):
        self.items: list[Match] = []
        self._keys: list[int] = []

    def fits(self, m: Match) -> bool:
        k = bisect.bisect_left(self._keys, m.pos1)
        if k > 0 and not self.items[k - 1].precedes(m):
            return False
        if k < len(self.items) and not m.precedes(self.items[k]):
            return False
        return True

    def add(self, m: Match) -> None:
        k = bisect.bisect_left(self._keys, m.pos1)
        self.items.insert(k, m)
        self._keys.insert(k, m.pos1)


def _grow(seed: Match, pool: list[Match], by_pos1: list[Match], keys1: list[int],
          by_end1: list[Match], keys_end1: list[int], used: set, backbone: _Backbone,
          fraction: float) -> None:
    """Extend ``backbone`` from ``seed`` in both directions under the neighborhood rule."""
    for direction in (1, -1):
        cur = seed
        while True:
            reach = fraction * cur.length + _EPS
            best = None
            if direction == 1:
                lo = bisect.bisect_left(keys1, cur.end1)
                hi = bisect.bisect_right(keys1, cur.end1 + reach)
                cands = by_pos1[lo:hi]
            else:
                lo = bisect.bisect_left(keys_end1, cur.pos1 - reach)
                hi = bisect.bisect_right(keys_end1, cur.pos1)
                cands = by_end1[lo:hi]
            for c in cands:
                if c.key in used:
                    continue
                if direction == 1:
                    gap2 = c.pos2 - cur.end2
                else:
                    gap2 = cur.pos2 - c.end2
                if gap2 < 0 or gap2 > reach:
                    continue
                if not backbone.fits(c):
                    continue
                if best is None or _priority(c) < _priority(best):
                    best = c
            if best is None:
                break
            backbone.add(best)
            used.add(best.key)
            cur = best


def _chain(mmss: list[Match], fraction: float, restart: bool) -> AnchorChain:
    if not mmss:
        return AnchorChain()
    pool = sorted(mmss, key=_priority)
    by_pos1 = sorted(mmss, key=lambda m: (m.pos1, m.pos2))
    keys1 = [m.pos1 for m in by_pos1]
    by_end1 = sorted(mmss, key=lambda m: (m.end1, m.pos2))
    keys_end1 = [m.end1 for m in by_end1]
    backbone = _Backbone()
    used: set = set()
    origin = pool[0]
    for seed in pool:
        if seed.key in used or not backbone.fits(seed):
            continue
        backbone.add(seed)
        used.add(seed.key)
        _grow(seed, pool, by_pos1, keys1, by_end1, keys_end1, used, backbone, fraction)
        if not restart:
            break
    chain = AnchorChain(backbone.items, origin)
    chain.check()
    return chain


def build_neighborhood_chain(mmss: list[Match], fraction: float = 0.6) -> AnchorChain:
    """Greedy chain grown from the longest MMSS.

    A candidate joins when it keeps the chain non-overlapping and
    non-crossing and starts within ``fraction * len(current)`` of the current
    anchor's end in both sequences (mirrored on the left side). Among
    qualifying candidates the longest wins, then smaller ``pos1``, ``pos2``.
    """
    return _chain(mmss, fraction, restart=False)


def build_backbone(mmss: list[Match], fraction: float = 0.6) -> AnchorChain:
    """Neighborhood chains grown repeatedly.

    Once a neighborhood chain stalls, the longest MMSS still compatible with
    everything admitted so far starts a new one. The result is a single
    non-crossing chain that spans the whole pair rather than one locality.
    """
    return _chain(mmss, fraction, restart=True)


def select_anchors(mmss: list[Match], floor: int = 1, fraction: float = 0.6,
                   restart: bool = True) -> AnchorChain:
    """Apply the length threshold, then chain the survivors."""
    if not mmss:
        return AnchorChain()
    cutoff = length_threshold(mmss, floor)
    kept = [m for m in mmss if m.length >= cutoff]
    return _chain(kept, fraction, restart)
