"""Slow, independent ground truth used to check the heuristic pipeline.

Nothing here calls the compiled kernels; the local-alignment DP is a
row-vectorized numpy formulation and the match enumerators are direct scans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scoring import ScoringScheme
from .seqio import AlignmentRecord, Op, Sequence, SeqLike, as_codes, run_length
from .suffix_index import Match

DEFAULT_CELL_CAP = 4_000_000
MEM_PAIR_CAP = 1_000_000
NEG = -(2 ** 30)


class SizeCapError(RuntimeError):
    def __init__(self, cells: int, cap: int):
        self.cells = cells
        self.cap = cap
        super().__init__(f"instance needs {cells} cells, cap is {cap}")


@dataclass
class DPMatrix:
    """Local-alignment score grid plus the three state grids behind it.

    ``scores[i, j]`` is the best local score ending at (i, j), floored at
    zero, so row 0 and column 0 are zero.
    """

    scores: np.ndarray
    pair: np.ndarray
    gap1: np.ndarray  # ends with a residue of s2 only
    gap2: np.ndarray  # ends with a residue of s1 only


def _fill(a: np.ndarray, b: np.ndarray, sc: ScoringScheme) -> DPMatrix:
    m, n = len(a), len(b)
    M = np.full((m + 1, n + 1), NEG, dtype=np.int32)
    E = np.full((m + 1, n + 1), NEG, dtype=np.int32)
    F = np.full((m + 1, n + 1), NEG, dtype=np.int32)
    H = np.zeros((m + 1, n + 1), dtype=np.int32)
    valid_b = b < 4
    ext_ramp = np.arange(n + 1, dtype=np.int64) * sc.gap_extend
    for i in range(1, m + 1):
        hp = np.maximum(np.maximum(M[i - 1], E[i - 1]), F[i - 1]).astype(np.int64)
        s_row = np.where((b == a[i - 1]) & valid_b, sc.match, sc.mismatch)
        Mi = np.full(n + 1, NEG, dtype=np.int64)
        Mi[1:] = np.maximum(hp[:-1], 0) + s_row
        Fi = np.maximum(
            np.maximum(M[i - 1], E[i - 1]).astype(np.int64) + sc.gap_open,
            F[i - 1].astype(np.int64) + sc.gap_extend,
        )
        # E[j] = max over k < j of G[k] + open + (j - 1 - k) * extend
        G = np.maximum(Mi, Fi)
        best_prefix = np.maximum.accumulate(G - ext_ramp)
        Ei = np.full(n + 1, NEG, dtype=np.int64)
        Ei[1:] = best_prefix[:-1] + sc.gap_open + ext_ramp[:-1]
        M[i] = np.maximum(Mi, NEG)
        E[i] = np.maximum(Ei, NEG)
        F[i] = np.maximum(Fi, NEG)
        H[i] = np.maximum(np.maximum(np.maximum(M[i], E[i]), F[i]), 0)
    return DPMatrix(H, M, E, F)


def _traceback(a, b, dp: DPMatrix, sc: ScoringScheme, i: int, j: int) -> tuple[list[Op], int, int]:
    M, E, F = dp.pair, dp.gap1, dp.gap2
    ops: list[Op] = []
    state = "M"
    while True:
        if state == "M":
            same = a[i - 1] == b[j - 1] and a[i - 1] < 4
            ops.append(Op.MATCH if same else Op.MISMATCH)
            prev = int(M[i, j]) - (sc.match if same else sc.mismatch)
            i -= 1
            j -= 1
            if prev == 0 or i == 0 or j == 0:
                break
            if M[i, j] == prev:
                state = "M"
            elif F[i, j] == prev:
                state = "F"
            else:
                state = "E"
        elif state == "E":
            ops.append(Op.INSERT_2)
            cur = int(E[i, j])
            j -= 1
            if int(E[i, j]) + sc.gap_extend == cur:
                state = "E"
            elif int(M[i, j]) + sc.gap_open == cur:
                state = "M"
            else:
                state = "F"
        else:
            ops.append(Op.INSERT_1)
            cur = int(F[i, j])
            i -= 1
            if int(F[i, j]) + sc.gap_extend == cur:
                state = "F"
            elif int(M[i, j]) + sc.gap_open == cur:
                state = "M"
            else:
                state = "E"
    ops.reverse()
    return ops, i, j


def smith_waterman(
    s1: SeqLike,
    s2: SeqLike,
    scoring: ScoringScheme | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[int, AlignmentRecord]:
    """Optimal local alignment under affine gaps (three-state Gotoh).

    Raises :class:`SizeCapError` when ``len(s1) * len(s2)`` exceeds
    ``cell_cap``.
    """
    sc = scoring or ScoringScheme()
    id1 = s1.id if isinstance(s1, Sequence) else "seq1"
    id2 = s2.id if isinstance(s2, Sequence) else "seq2"
    a, b = as_codes(s1), as_codes(s2)
    cells = len(a) * len(b)
    if cells > cell_cap:
        raise SizeCapError(cells, cell_cap)
    if len(a) == 0 or len(b) == 0:
        return 0, AlignmentRecord.empty(id1, id2)
    dp = _fill(a, b, sc)
    # an optimal local alignment always ends on an aligned pair
    best = int(dp.pair.max())
    if best <= 0:
        return 0, AlignmentRecord.empty(id1, id2)
    i, j = np.unravel_index(int(np.argmax(dp.pair)), dp.pair.shape)
    ops, i0, j0 = _traceback(a, b, dp, sc, int(i), int(j))
    record = AlignmentRecord(id1, id2, tuple(run_length(ops)), (i0, int(i)), (j0, int(j)), best)
    return best, record


def smith_waterman_matrix(s1: SeqLike, s2: SeqLike, scoring: ScoringScheme | None = None) -> DPMatrix:
    return _fill(as_codes(s1), as_codes(s2), scoring or ScoringScheme())


def _check_pairs(a, b):
    if len(a) * len(b) > MEM_PAIR_CAP:
        raise SizeCapError(len(a) * len(b), MEM_PAIR_CAP)


def brute_force_mems(s1: SeqLike, s2: SeqLike) -> list[Match]:
    """Every maximal exact match, by extending each left-maximal start pair."""
    a = as_codes(s1).tolist()
    b = as_codes(s2).tolist()
    _check_pairs(a, b)
    out = []
    for i in range(len(a)):
        for j in range(len(b)):
            if a[i] != b[j] or a[i] == 4:
                continue
            if i > 0 and j > 0 and a[i - 1] == b[j - 1] and a[i - 1] != 4:
                continue
            k = 1
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k] and a[i + k] != 4:
                k += 1
            out.append(Match(i, j, k))
    return sorted(out)


def diagonal_run_mems(s1: SeqLike, s2: SeqLike) -> list[Match]:
    """Maximal exact matches as maximal runs of equal residues per diagonal."""
    a, b = as_codes(s1), as_codes(s2)
    _check_pairs(a, b)
    out = []
    for d in range(-len(a) + 1, len(b)):
        i0 = max(0, -d)
        j0 = i0 + d
        k = min(len(a) - i0, len(b) - j0)
        if k <= 0:
            continue
        eq = (a[i0:i0 + k] == b[j0:j0 + k]) & (a[i0:i0 + k] < 4)
        padded = np.concatenate([[False], eq, [False]]).astype(np.int8)
        edges = np.diff(padded)
        for s, e in zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)):
            out.append(Match(int(i0 + s), int(j0 + s), int(e - s)))
    return sorted(out)
