import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finealign.evalbench import MutationModel, exon_coverage, generate_pair, run_benchmark
from finealign.seqio import AlignmentRecord, ExonAnnotation, Op


def test_model_validation():
    with pytest.raises(ValueError):
        MutationModel(substitution_rate=1.5)
    with pytest.raises(ValueError):
        MutationModel(indel_rate=-0.1)


def test_no_mutation_pair():
    s1, s2, ann = generate_pair(500, MutationModel(0, 0, rng_seed=4))
    assert s1.residues == s2.residues
    assert ann.intervals == ((0, 500, 0, 500),)


def test_full_substitution_changes_every_base():
    s1, s2, _ = generate_pair(2000, MutationModel(1, 0, rng_seed=4))
    assert len(s1) == len(s2)
    assert all(x != y for x, y in zip(s1.residues, s2.residues))


def test_substitution_rate_statistics():
    n, p = 100_000, 0.1
    for seed in range(3):
        s1, s2, _ = generate_pair(n, MutationModel(p, 0, rng_seed=seed))
        a = np.frombuffer(s1.residues, dtype=np.uint8)
        b = np.frombuffer(s2.residues, dtype=np.uint8)
        frac = np.mean(a != b)
        assert abs(frac - p) <= 3 * math.sqrt(p * (1 - p) / n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 400), st.floats(0, 1), st.floats(0, 0.2), st.integers(0, 2**64 - 1))
def test_generation_deterministic_and_annotation_consistent(n, sub, indel, seed):
    model = MutationModel(sub, indel, rng_seed=seed)
    s1, s2, ann = generate_pair(n, model)
    assert (s1, s2, ann) == generate_pair(n, model)
    ann.validate_against(len(s1), len(s2))
    for a1, b1, a2, b2 in ann.intervals:
        assert b1 - a1 == b2 - a2
        if sub == 0:
            assert s1.residues[a1:b1] == s2.residues[a2:b2]


def _rec(blocks, start1=0, start2=0):
    w1 = sum(n for op, n in blocks if op.consumes1)
    w2 = sum(n for op, n in blocks if op.consumes2)
    return AlignmentRecord("a", "b", tuple(blocks), (start1, start1 + w1), (start2, start2 + w2), 0)


def _column_walk(rec, ann):
    covered = 0
    for op, i, j in rec.aligned_pairs():
        if op in (Op.MATCH, Op.MISMATCH) and any(a1 <= i < b1 and a2 <= j < b2 for a1, b1, a2, b2 in ann.intervals):
            covered += 1
    return covered / ann.seq1_length


def test_coverage_fixtures():
    full = ExonAnnotation(((0, 100, 0, 100),))
    assert exon_coverage(_rec([(Op.MATCH, 100)]), full) == pytest.approx(1.0, abs=1e-9)
    assert exon_coverage(_rec([(Op.MATCH, 50)], 200, 200), full) == pytest.approx(0.0, abs=1e-9)
    # 75 of 100 exon columns land in the paired range; 25 are shifted off it
    fixture = _rec([(Op.MATCH, 50), (Op.MISMATCH, 25), (Op.INSERT_2, 30), (Op.MATCH, 25)])
    ann = ExonAnnotation(((0, 100, 0, 100),))
    assert exon_coverage(fixture, ann) == pytest.approx(0.75, abs=1e-9)
    assert _column_walk(fixture, ann) == pytest.approx(0.75, abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(list(Op)), st.integers(1, 12)), min_size=1, max_size=12),
       st.integers(0, 20), st.integers(0, 20))
def test_coverage_matches_column_walk(blocks, s1, s2):
    rec = _rec(blocks, s1, s2)
    ann = ExonAnnotation(((0, 15, 3, 18), (20, 40, 22, 42), (50, 60, 45, 55)))
    cov = exon_coverage(rec, ann)
    assert 0.0 <= cov <= 1.0
    assert cov == pytest.approx(_column_walk(rec, ann), abs=1e-12)


def test_benchmark_identity_and_determinism():
    rep = run_benchmark([1000], MutationModel(0, 0, rng_seed=3))
    row = rep.rows[0]
    assert row.score_ratio == 1.0 and row.exon_coverage == 1.0 and row.status == "ok"
    model = MutationModel(0.05, 0.01, rng_seed=9)
    a = run_benchmark([800, 1200], model).to_tsv(timing=False)
    assert a == run_benchmark([800, 1200], model).to_tsv(timing=False)
    assert len(a.splitlines()) == 3


def test_benchmark_row_errors_do_not_abort():
    rep = run_benchmark([0, 500], MutationModel(rng_seed=1))
    assert rep.rows[0].status.startswith("error") and rep.rows[1].status == "ok"


def test_oracle_skipped_above_cap():
    rep = run_benchmark([600], MutationModel(rng_seed=1), oracle_cap=1000)
    assert rep.rows[0].oracle_score is None and "NA" in rep.to_tsv()
