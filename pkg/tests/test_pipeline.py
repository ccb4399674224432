import numpy as np
import pytest

from finealign.evalbench import MutationModel, generate_pair
from finealign.oracle import smith_waterman
from finealign.pipeline import PipelineConfig, align, refine_anchors, run_pipeline
from finealign.scoring import ScoringScheme
from finealign.seqio import Op, Sequence


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(threshold_floor=0)
    with pytest.raises(ValueError):
        PipelineConfig(neighborhood_fraction=1.5)


def test_identity():
    s1, _, _ = generate_pair(3000, MutationModel(0, 0, rng_seed=1))
    rec = align(s1, s1)
    assert rec.blocks == ((Op.MATCH, 3000),) and rec.identity == 1.0


def test_empty_and_unrelated():
    assert align("", "ACGT").is_empty
    assert align("AAAAAAAAAA", "CCCCCCCCCC").is_empty


def test_no_anchor_falls_back_to_seeding():
    # no exact match reaches the floor, but the pair is clearly similar
    rng = np.random.default_rng(7)
    a = rng.integers(0, 4, 200).astype(np.uint8)
    b = a.copy()
    b[::6] = (b[::6] + 1) % 4
    res = run_pipeline(a, b)
    assert res.anchors.anchors == [] and not res.record.is_empty
    assert res.record.score > 50


def test_stages_recorded():
    s1, s2, _ = generate_pair(2000, MutationModel(0.05, 0.01, rng_seed=2))
    res = run_pipeline(s1, s2)
    res.chain.check()
    assert all(a in res.chain.items for a in res.anchors)
    assert all(m.length >= 10 for m in res.anchors)
    assert len(res.gaps) == len(res.anchors) + 1


def test_below_oracle_and_threads_agree():
    sc = ScoringScheme()
    for seed in range(5):
        s1, s2, _ = generate_pair(1500, MutationModel(0.08, 0.02, rng_seed=seed))
        rec = align(s1, s2)
        assert rec.score <= smith_waterman(s1, s2, sc)[0]
        assert align(s1, s2, PipelineConfig(threads=3)) == rec


def test_ids_carried():
    a, b = Sequence("x", b"ACGTACGTACGTAC"), Sequence("y", b"ACGTACGTACGTAC")
    rec = align(a, b)
    assert (rec.seq1_id, rec.seq2_id) == ("x", "y")


def test_refine_splits_large_gaps():
    s1, s2, _ = generate_pair(6000, MutationModel(0.05, 0.01, rng_seed=3))
    a, b = s1.codes(), s2.codes()
    cfg = PipelineConfig(max_gap_area=200_000)
    coarse = run_pipeline(a, b, PipelineConfig(max_gap_area=None))
    fine = refine_anchors(a, b, coarse.anchors.anchors, cfg)
    assert set(coarse.anchors.anchors) <= set(fine)
    assert all(x.precedes(y) for x, y in zip(fine, fine[1:]))
    for m in fine:
        assert (a[m.pos1:m.end1] == b[m.pos2:m.end2]).all()
    widths = [(y.pos1 - x.end1) * (y.pos2 - x.end2) for x, y in zip(fine, fine[1:])]
    assert max(widths) <= max((y.pos1 - x.end1) * (y.pos2 - x.end2)
                              for x, y in zip(coarse.anchors.anchors, coarse.anchors.anchors[1:]))
    assert run_pipeline(a, b, cfg).record.score <= smith_waterman(a, b, cell_cap=10**8)[0]
