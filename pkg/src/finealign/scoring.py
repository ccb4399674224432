"""Scoring scheme shared by stitching and the oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .seqio import Op, merge_blocks


@dataclass(frozen=True)
class ScoringScheme:
    """Integer scores; a gap run of length L costs ``gap_open + (L-1)*gap_extend``."""

    match: int = 1
    mismatch: int = -1
    gap_open: int = -2
    gap_extend: int = -1

    def __post_init__(self):
        if self.match <= 0:
            raise ValueError("match score must be positive")
        if self.mismatch >= 0:
            raise ValueError("mismatch score must be negative")
        if self.gap_open >= 0 or self.gap_extend >= 0:
            raise ValueError("gap scores must be negative")

    @classmethod
    def linear(cls, match: int, mismatch: int, gap: int) -> "ScoringScheme":
        return cls(match, mismatch, gap, gap)

    def gap(self, length: int) -> int:
        return self.gap_open + (length - 1) * self.gap_extend if length > 0 else 0

    def score_blocks(self, blocks: Iterable[tuple[Op, int]]) -> int:
        total = 0
        for op, n in merge_blocks(blocks):
            if op is Op.MATCH:
                total += n * self.match
            elif op is Op.MISMATCH:
                total += n * self.mismatch
            else:
                total += self.gap(n)
        return total
