"""End-to-end alignment: anchors, gap seeds, chain, stitch."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .anchoring import AnchorChain, select_anchors
from .chaining import ResolvedChain, merge_adaptive_runs, merge_chain
from .scoring import ScoringScheme
from .seeding import GapRegion, SeedParams, find_adaptive_seeds, find_perfect_seeds, gap_regions
from .seqio import AlignmentRecord, SeqLike, Sequence, as_codes
from .stitching import EmptyChainError, ExtensionParams, assemble
from .suffix_index import Match, build, enumerate_mmss


@dataclass(frozen=True)
class PipelineConfig:
    threshold_floor: int = 10
    neighborhood_fraction: float = 0.6
    # restart stalled neighborhood chains so anchors span the whole pair
    restart: bool = True
    seeds: SeedParams = field(default_factory=SeedParams)
    extension: ExtensionParams = field(default_factory=ExtensionParams)
    scoring: ScoringScheme = field(default_factory=ScoringScheme)
    threads: int = 1
    # gaps with more cells than this are re-anchored on their own longest match
    max_gap_area: int | None = 4_000_000

    def __post_init__(self):
        if self.threshold_floor < 1:
            raise ValueError("threshold_floor must be at least 1")
        if not 0 < self.neighborhood_fraction <= 1:
            raise ValueError("neighborhood_fraction must be in (0, 1]")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.max_gap_area is not None and self.max_gap_area < 1:
            raise ValueError("max_gap_area must be positive or None")


@dataclass
class PipelineResult:
    record: AlignmentRecord
    threshold: int = 0
    mmss: list[Match] = field(default_factory=list)
    anchors: AnchorChain = field(default_factory=AnchorChain)
    gaps: list[GapRegion] = field(default_factory=list)
    chain: ResolvedChain = field(default_factory=ResolvedChain)


def _anchor(a, b, config: PipelineConfig) -> tuple[int, list[Match], AnchorChain]:
    tree = build(a, b)
    longest = tree.longest_common_length()
    threshold = max(math.ceil(longest / 3), config.threshold_floor)
    mmss = enumerate_mmss(tree, min_length=threshold) if longest >= threshold else []
    chain = select_anchors(mmss, config.threshold_floor, config.neighborhood_fraction,
                           config.restart)
    return threshold, mmss, chain


def refine_anchors(a, b, anchors: list[Match], config: PipelineConfig,
                   max_rounds: int = 4) -> list[Match]:
    """Split oversized gaps by anchoring each one on its own longest match.

    The threshold derived from the whole pair's longest match can leave gaps
    whose seeding cost grows with their area. Any gap above
    ``config.max_gap_area`` is treated as a pair of its own: its MMSSs are
    filtered by one third of the gap's longest match and chained, and the
    result joins the anchor chain. Repeats until no gap is split.
    """
    cap = config.max_gap_area
    if cap is None:
        return anchors
    for _ in range(max_rounds):
        added = []
        for g in gap_regions(anchors, len(a), len(b)):
            if g.width1 * g.width2 <= cap:
                continue
            (x1, y1), (x2, y2) = g.seq1_range, g.seq2_range
            _, _, sub = _anchor(a[x1:y1], b[x2:y2], config)
            added.extend(Match(m.pos1 + x1, m.pos2 + x2, m.length) for m in sub)
        if not added:
            break
        anchors = sorted(anchors + added)
    return anchors


def _seed_gap(a, b, gap: GapRegion, params: SeedParams) -> list[Match]:
    adaptive = find_adaptive_seeds(a, b, gap, params)
    runs = merge_adaptive_runs(a, b, adaptive, params.adaptive_length)
    perfect = find_perfect_seeds(a, b, gap, runs, params)
    return runs + perfect


def run_pipeline(s1: SeqLike, s2: SeqLike, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    ids = (s1.id if isinstance(s1, Sequence) else "seq1",
           s2.id if isinstance(s2, Sequence) else "seq2")
    a, b = as_codes(s1), as_codes(s2)
    if len(a) == 0 or len(b) == 0:
        return PipelineResult(AlignmentRecord.empty(*ids))

    threshold, mmss, anchors = _anchor(a, b, config)
    refined = refine_anchors(a, b, anchors.anchors, config)
    if len(refined) != len(anchors):
        anchors = AnchorChain(refined, anchors.origin)
        anchors.check()
    gaps = gap_regions(anchors.anchors, len(a), len(b))

    if config.threads > 1 and len(gaps) > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            seeds = list(pool.map(lambda g: _seed_gap(a, b, g, config.seeds), gaps))
    else:
        seeds = [_seed_gap(a, b, g, config.seeds) for g in gaps]

    chain = merge_chain(anchors, seeds)
    result = PipelineResult(AlignmentRecord.empty(*ids), threshold, mmss, anchors, gaps, chain)
    try:
        result.record = assemble(a, b, chain, config.extension, config.scoring, ids)
    except EmptyChainError:
        pass
    return result


def align(s1: SeqLike, s2: SeqLike, config: PipelineConfig = PipelineConfig()) -> AlignmentRecord:
    """Local alignment of ``s1`` against ``s2``; empty record when nothing is found."""
    return run_pipeline(s1, s2, config).record
