"""Synthetic homologous pairs, exon-coverage sensitivity, and timing reports."""

from __future__ import annotations

import bisect
import dataclasses
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .oracle import DEFAULT_CELL_CAP, smith_waterman
from .pipeline import PipelineConfig, run_pipeline
from .seqio import AlignmentRecord, ExonAnnotation, Op, Sequence, decode


@dataclass(frozen=True)
class MutationModel:
    substitution_rate: float = 0.05
    indel_rate: float = 0.01
    indel_length_geometric_p: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("substitution_rate", "indel_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not 0.0 < self.indel_length_geometric_p <= 1.0:
            raise ValueError("indel_length_geometric_p must be in (0, 1]")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


def _to_sequence(name: str, codes: np.ndarray) -> Sequence:
    return Sequence(name, decode(codes))


def generate_pair(length: int, model: MutationModel = MutationModel(),
                  ids: tuple[str, str] = ("seq1", "seq2")) -> tuple[Sequence, Sequence, ExonAnnotation]:
    """Random sequence plus a mutated copy and the conserved-segment map.

    Each position of the source independently starts an indel with
    probability ``indel_rate`` (insertion or deletion with equal odds,
    geometric length); surviving positions are substituted with probability
    ``substitution_rate`` to one of the three other bases. The annotation
    lists the maximal stretches copied between indels as paired intervals.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    rng = np.random.Generator(np.random.PCG64(model.rng_seed))
    src = rng.integers(0, 4, length, dtype=np.uint8)
    events = np.flatnonzero(rng.random(length) < model.indel_rate)
    is_ins = rng.random(len(events)) < 0.5
    sizes = rng.geometric(model.indel_length_geometric_p, len(events))

    pieces: list[np.ndarray] = []
    intervals = []
    i = j = 0
    for pos, ins, size in zip(events.tolist(), is_ins.tolist(), sizes.tolist()):
        if pos < i:
            continue  # swallowed by an earlier deletion
        if pos > i:
            pieces.append(src[i:pos])
            intervals.append((i, pos, j, j + pos - i))
            j += pos - i
            i = pos
        if ins:
            pieces.append(rng.integers(0, 4, size, dtype=np.uint8))
            j += size
        else:
            i = min(length, i + size)
    if i < length:
        pieces.append(src[i:])
        intervals.append((i, length, j, j + length - i))
    dst = np.concatenate(pieces) if pieces else np.empty(0, dtype=np.uint8)

    hit = rng.random(len(dst)) < model.substitution_rate
    shift = rng.integers(1, 4, len(dst), dtype=np.uint8)
    dst = np.where(hit, (dst + shift) % 4, dst).astype(np.uint8)
    return _to_sequence(ids[0], src), _to_sequence(ids[1], dst), ExonAnnotation(tuple(intervals))


def exon_coverage(record: AlignmentRecord, annotation: ExonAnnotation) -> float:
    """Fraction of exon length on seq1 aligned into the paired seq2 range."""
    total = annotation.seq1_length
    if total == 0 or record.is_empty:
        return 0.0
    ivs = annotation.intervals
    starts = [iv[0] for iv in ivs]
    covered = 0
    i, j = record.seq1_span[0], record.seq2_span[0]
    for op, n in record.blocks:
        if op in (Op.MATCH, Op.MISMATCH):
            dj = j - i
            k = max(bisect.bisect_right(starts, i) - 1, 0)
            while k < len(ivs) and ivs[k][0] < i + n:
                a1, b1, a2, b2 = ivs[k]
                lo = max(i, a1, a2 - dj)
                hi = min(i + n, b1, b2 - dj)
                covered += max(0, hi - lo)
                k += 1
        i += n if op.consumes1 else 0
        j += n if op.consumes2 else 0
    return covered / total


@dataclass
class BenchRow:
    length: int
    seed: int
    wall_time_s: float | None = None
    score: int | None = None
    oracle_score: int | None = None
    score_ratio: float | None = None
    exon_coverage: float | None = None
    status: str = "ok"


COLUMNS = ("length", "seed", "wall_time_s", "score", "oracle_score",
           "score_ratio", "exon_coverage", "status")


def _cell(v, fmt: str = "{}") -> str:
    return "NA" if v is None else fmt.format(v)


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def to_tsv(self, timing: bool = True) -> str:
        out = io.StringIO()
        out.write("\t".join(COLUMNS) + "\n")
        for r in self.rows:
            out.write("\t".join([
                str(r.length), str(r.seed),
                _cell(r.wall_time_s if timing else None, "{:.3f}"),
                _cell(r.score), _cell(r.oracle_score),
                _cell(r.score_ratio, "{:.6f}"), _cell(r.exon_coverage, "{:.6f}"),
                r.status,
            ]) + "\n")
        return out.getvalue()


def run_benchmark(lengths: list[int], model: MutationModel = MutationModel(),
                  config: PipelineConfig = PipelineConfig(),
                  oracle_cap: int = DEFAULT_CELL_CAP) -> BenchReport:
    """One row per length, seeded ``model.rng_seed + row index``.

    The oracle score is filled in only when ``len1 * len2`` fits
    ``oracle_cap``. A failing row records its error in ``status`` and the
    remaining rows still run.
    """
    report = BenchReport()
    for k, n in enumerate(lengths):
        seed = (model.rng_seed + k) % 2**64
        row = BenchRow(int(n), seed)
        report.rows.append(row)
        try:
            s1, s2, ann = generate_pair(n, dataclasses.replace(model, rng_seed=seed))
            t0 = time.perf_counter()
            rec = run_pipeline(s1, s2, config).record
            row.wall_time_s = time.perf_counter() - t0
            row.score = rec.score
            row.exon_coverage = exon_coverage(rec, ann)
            if len(s1) * len(s2) <= oracle_cap:
                best, _ = smith_waterman(s1, s2, config.scoring, cell_cap=oracle_cap)
                row.oracle_score = best
                row.score_ratio = rec.score / best if best > 0 else None
        except Exception as exc:  # noqa: BLE001 - rows report their own failure
            row.status = f"error:{type(exc).__name__}"
    return report
