"""Generalized suffix tree over a sequence pair.

The two sequences are joined as ``S1 + SEP1 + S2 + SEP2`` and indexed with
Ukkonen's online construction. Edge labels are ``(start, end)`` slices into
the joined text. ``N`` is coded differently on each side (and never equals
anything during descent), so no exact match between the sequences ever
contains an ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from ._backend import kernels
from .seqio import SeqLike, as_codes

N1, N2, SEP1, SEP2 = 4, 5, 6, 7
SYMBOLS = "ACGTNn$#"


class Kind(str, Enum):
    MMSS = "MMSS"
    ADAPTIVE = "ADAPTIVE"
    PERFECT4 = "PERFECT4"
    PERFECT2 = "PERFECT2"


@dataclass(frozen=True, order=True)
class Match:
    """A pair of equal-length slices ``S1[pos1:pos1+length]``/``S2[pos2:...]``."""

    pos1: int
    pos2: int
    length: int
    mismatches: int = 0
    kind: Kind = Kind.MMSS

    @property
    def end1(self) -> int:
        return self.pos1 + self.length

    @property
    def end2(self) -> int:
        return self.pos2 + self.length

    @property
    def diagonal(self) -> int:
        return self.pos2 - self.pos1

    @property
    def key(self) -> tuple[int, int, int]:
        return self.pos1, self.pos2, self.length

    def precedes(self, other: "Match") -> bool:
        """True when ``self`` ends before ``other`` starts in both sequences."""
        return self.end1 <= other.pos1 and self.end2 <= other.pos2

    def compatible(self, other: "Match") -> bool:
        return self.precedes(other) or other.precedes(self)


def joined_text(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    c2 = s2.copy()
    c2[c2 == N1] = N2
    return np.concatenate([s1, [SEP1], c2, [SEP2]]).astype(np.uint8)


class GeneralizedSuffixTree:
    """Array-backed suffix tree; node 0 is the root.

    Per-node arrays: ``start``/``end`` (edge label slice), ``link`` (suffix
    link), ``child`` (``nodes x 8`` table keyed by the first edge symbol),
    ``depth`` (string depth), ``lo``/``hi`` (range into ``leaf_order``) and
    ``suffix`` (start of the suffix a leaf spells, -1 for internal nodes).
    """

    def __init__(self, s1: np.ndarray, s2: np.ndarray):
        self.len1 = len(s1)
        self.len2 = len(s2)
        self.text = joined_text(s1, s2)
        n = len(self.text)
        self.start, self.end, self.link, self.child = kernels.build_tree(self.text)
        (self.depth, self.lo, self.hi, self.suffix,
         self.leaf_order) = kernels.annotate_tree(n, self.start, self.end, self.child)
        starts = self.suffix[self.leaf_order]
        in1 = np.concatenate([[0], np.cumsum(starts < self.len1)])
        in2 = np.concatenate([[0], np.cumsum((starts > self.len1) & (starts < n - 1))])
        self.cnt1 = (in1[self.hi] - in1[self.lo]).astype(np.int32)
        self.cnt2 = (in2[self.hi] - in2[self.lo]).astype(np.int32)

    @property
    def n_nodes(self) -> int:
        return len(self.start)

    @property
    def offset2(self) -> int:
        """Position of ``S2[0]`` in the joined text."""
        return self.len1 + 1

    def is_leaf(self, v: int) -> bool:
        return v != 0 and self.end[v] == len(self.text)

    def children(self, v: int) -> list[int]:
        return [int(c) for c in self.child[v] if c != -1]

    def edge_label(self, v: int) -> str:
        return "".join(SYMBOLS[c] for c in self.text[self.start[v]:self.end[v]])

    def path_label(self, v: int) -> str:
        d = int(self.depth[v])
        return "".join(SYMBOLS[c] for c in self.text[self.end[v] - d:self.end[v]])

    def suffix_link(self, v: int) -> int:
        return int(self.link[v])

    def leaves(self, v: int) -> np.ndarray:
        """Joined-text start positions of all suffixes below ``v``."""
        return self.suffix[self.leaf_order[self.lo[v]:self.hi[v]]]

    def internal_nodes(self) -> Iterator[int]:
        n = len(self.text)
        return (v for v in range(1, self.n_nodes) if self.end[v] != n)

    def root_to_leaf_paths(self) -> list[str]:
        out = []
        stack = [(0, "")]
        while stack:
            v, prefix = stack.pop()
            label = prefix + (self.edge_label(v) if v else "")
            if self.is_leaf(v):
                out.append(label)
            stack.extend((c, label) for c in self.children(v))
        return out

    def longest_common_length(self) -> int:
        """Length of the longest exact match between the two sequences."""
        mixed = (self.cnt1 > 0) & (self.cnt2 > 0)
        mixed[0] = False
        return int(self.depth[mixed].max()) if mixed.any() else 0


def build(s1: SeqLike, s2: SeqLike) -> GeneralizedSuffixTree:
    return GeneralizedSuffixTree(as_codes(s1), as_codes(s2))


def enumerate_mmss(
    tree: GeneralizedSuffixTree, min_length: int = 1, unique: bool = False
) -> list[Match]:
    """All maximal exact matches of at least ``min_length`` residues.

    With ``unique=True`` only matches whose string occurs exactly once in
    each sequence are kept.
    """
    p1, p2, ln = kernels.enumerate_mems(
        tree.text, tree.len1, tree.end, tree.child, tree.depth, tree.suffix,
        tree.cnt1, tree.cnt2, max(int(min_length), 1), bool(unique),
    )
    order = np.lexsort((ln, p2, p1))
    return [Match(int(a), int(b), int(c)) for a, b, c in zip(p1[order], p2[order], ln[order])]


def descend_with_mismatches(
    tree: GeneralizedSuffixTree, query: SeqLike, budget: int
) -> list[tuple[int, int]]:
    """Joined-text positions whose ``len(query)`` slice is within ``budget``
    substitutions of ``query``, as sorted ``(position, mismatches)``."""
    q = as_codes(query)
    if len(q) < 1 or budget < 0:
        raise ValueError("query must be non-empty and budget non-negative")
    _, pos, mm = kernels.descend(
        tree.text, tree.start, tree.end, tree.child, tree.lo, tree.hi,
        tree.leaf_order, tree.suffix, q, len(q), int(budget),
    )
    return sorted(zip(pos.tolist(), mm.tolist()))


def descend_batch(tree: GeneralizedSuffixTree, queries: np.ndarray, qlen: int, budget: int):
    """Raw batched descent: ``queries`` holds equal-length queries back to back."""
    return kernels.descend(
        tree.text, tree.start, tree.end, tree.child, tree.lo, tree.hi,
        tree.leaf_order, tree.suffix, np.ascontiguousarray(queries, dtype=np.uint8),
        int(qlen), int(budget),
    )
