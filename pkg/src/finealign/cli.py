"""Command-line entry point: ``finealign {align,bench,oracle,eval}``.

Exit codes: 0 success, 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .evalbench import MutationModel, exon_coverage, run_benchmark
from .oracle import DEFAULT_CELL_CAP, SizeCapError, smith_waterman
from .pipeline import PipelineConfig, align
from .scoring import ScoringScheme
from .seeding import SeedParams
from .seqio import Format, SeqIOError, emit_alignment, parse_exon_annotation, read_fasta
from .stitching import ExtensionParams

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3
DEFAULT_SEED = 20240101


class InputError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _fraction(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _scoring_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scoring")
    g.add_argument("--match", type=int, default=1, help="match score (default 1)")
    g.add_argument("--mismatch", type=int, default=-1, help="mismatch score (default -1)")
    g.add_argument("--gap-open", type=int, default=-2, help="score of a gap's first column (default -2)")
    g.add_argument("--gap-extend", type=int, default=-1, help="score of each further gap column (default -1)")


def _pipeline_flags(p: argparse.ArgumentParser) -> None:
    _scoring_flags(p)
    g = p.add_argument_group("pipeline")
    g.add_argument("--threshold-floor", type=int, default=10,
                   help="minimum anchor length (default 10)")
    g.add_argument("--neighborhood", type=_fraction, default=0.6,
                   help="neighbourhood reach as a fraction of anchor length (default 0.6)")
    g.add_argument("--adaptive-len", type=int, default=20, help="adaptive seed length (default 20)")
    g.add_argument("--adaptive-mm", type=int, default=6,
                   help="mismatches allowed in an adaptive seed (default 6)")
    g.add_argument("--perfect-lens", type=_int_list, default=[4, 2],
                   help="exact seed lengths, coarse first (default 4,2)")
    g.add_argument("--proximity", type=_fraction, default=1 / 3,
                   help="perfect seed proximity fraction (default 1/3)")
    g.add_argument("--x-drop", type=int, default=10, help="ungapped extension X-drop (default 10)")
    g.add_argument("--band-pad", type=int, default=16, help="extra DP band half-width (default 16)")
    g.add_argument("--threads", type=int, default=1, help="worker threads for gap seeding (default 1)")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"random seed for every stochastic step (default {DEFAULT_SEED})")
    p.add_argument("--out", help="write output here instead of standard output")


def _scoring(args) -> ScoringScheme:
    try:
        return ScoringScheme(args.match, args.mismatch, args.gap_open, args.gap_extend)
    except ValueError as exc:
        raise InputError(f"invalid scoring: {exc}")


def _config(args) -> PipelineConfig:
    scoring = _scoring(args)
    try:
        return PipelineConfig(
            threshold_floor=args.threshold_floor,
            neighborhood_fraction=args.neighborhood,
            seeds=SeedParams(args.adaptive_len, args.adaptive_mm, tuple(args.perfect_lens),
                             args.proximity),
            extension=ExtensionParams(args.x_drop, args.band_pad),
            scoring=scoring,
            threads=args.threads,
        )
    except ValueError as exc:
        raise InputError(f"invalid parameter: {exc}")


def _read_pair(path: str):
    try:
        records = read_fasta(path)
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror or exc}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: non-ASCII byte at offset {exc.start}")
    except SeqIOError as exc:
        raise InputError(f"{path}: {exc}")
    if len(records) < 2:
        raise InputError(f"{path}: expected at least 2 FASTA records, found {len(records)}")
    return records[0], records[1]


def _write(args, text: str) -> None:
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"{args.out}: cannot write: {exc.strerror or exc}")
    else:
        sys.stdout.write(text)


def cmd_align(args) -> int:
    s1, s2 = _read_pair(args.fasta)
    record = align(s1, s2, _config(args))
    _write(args, emit_alignment(record, args.format, s1, s2))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        model = MutationModel(args.sub, args.indel, 0.5, args.seed)
    except ValueError as exc:
        raise InputError(f"invalid mutation model: {exc}")
    if any(n < 1 for n in args.lengths):
        raise InputError("--lengths must be positive")
    report = run_benchmark(args.lengths, model, _config(args), args.oracle_cap)
    _write(args, report.to_tsv(timing=not args.no_timing))
    return EXIT_OK


def cmd_oracle(args) -> int:
    s1, s2 = _read_pair(args.fasta)
    scoring = _scoring(args)
    try:
        score, record = smith_waterman(s1, s2, scoring, cell_cap=args.cell_cap)
    except SizeCapError as exc:
        print(f"error: {len(s1)} x {len(s2)} = {exc.cells} cells exceeds the oracle cap of "
              f"{exc.cap} cells (raise it with --cell-cap)", file=sys.stderr)
        return EXIT_CAP
    body = emit_alignment(record, args.format, s1, s2)
    _write(args, f"score\t{score}\n" + body)
    return EXIT_OK


def cmd_eval(args) -> int:
    s1, s2 = _read_pair(args.fasta)
    try:
        with open(args.exons, "rb") as fh:
            annotation = parse_exon_annotation(fh)
        annotation.validate_against(len(s1), len(s2))
    except OSError as exc:
        raise InputError(f"{args.exons}: cannot read: {exc.strerror or exc}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{args.exons}: non-ASCII byte at offset {exc.start}")
    except SeqIOError as exc:
        raise InputError(f"{args.exons}: {exc}")
    record = align(s1, s2, _config(args))
    _write(args, f"{exon_coverage(record, annotation):.6f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finealign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [f.value for f in Format]

    p = sub.add_parser("align", help="align the first two records of a FASTA file")
    p.add_argument("fasta")
    p.add_argument("--format", choices=formats, default="text")
    _pipeline_flags(p)
    _common_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("bench", help="timing and accuracy on synthetic homologous pairs")
    p.add_argument("--lengths", type=_int_list, default=[1000, 2000])
    p.add_argument("--sub", type=float, default=0.05, help="substitution rate (default 0.05)")
    p.add_argument("--indel", type=float, default=0.01, help="indel rate (default 0.01)")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_CELL_CAP,
                   help=f"largest pair scored by the oracle, in DP cells (default {DEFAULT_CELL_CAP})")
    p.add_argument("--no-timing", action="store_true",
                   help="print NA for wall times so reports are byte-identical")
    _pipeline_flags(p)
    _common_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exact Smith-Waterman on the first two FASTA records")
    p.add_argument("fasta")
    p.add_argument("--format", choices=formats, default="text")
    p.add_argument("--cell-cap", type=int, default=DEFAULT_CELL_CAP,
                   help=f"refuse instances above this many DP cells (default {DEFAULT_CELL_CAP})")
    _scoring_flags(p)
    _common_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("eval", help="exon coverage of the pipeline alignment")
    p.add_argument("fasta")
    p.add_argument("exons", help="TSV of seq1_start seq1_end seq2_start seq2_end")
    _pipeline_flags(p)
    _common_flags(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
