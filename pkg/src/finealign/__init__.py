"""Fine-grained local alignment of long DNA sequences.

Maximal exact matches found with a generalized suffix tree anchor the
alignment; mismatch-tolerant and short exact seeds fill the gaps between
anchors; banded dynamic programming stitches the result together.
"""

from ._backend import BACKEND
from .evalbench import MutationModel, exon_coverage, generate_pair, run_benchmark
from .oracle import brute_force_mems, smith_waterman
from .pipeline import PipelineConfig, align, run_pipeline
from .scoring import ScoringScheme
from .seqio import AlignmentRecord, ExonAnnotation, Op, Sequence, emit_alignment, parse_fasta
from .suffix_index import GeneralizedSuffixTree, Match, enumerate_mmss

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AlignmentRecord",
    "ExonAnnotation",
    "GeneralizedSuffixTree",
    "Match",
    "MutationModel",
    "Op",
    "PipelineConfig",
    "ScoringScheme",
    "Sequence",
    "align",
    "brute_force_mems",
    "emit_alignment",
    "enumerate_mmss",
    "exon_coverage",
    "generate_pair",
    "parse_fasta",
    "run_benchmark",
    "run_pipeline",
    "smith_waterman",
]
