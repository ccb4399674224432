"""Sequence and exon-annotation ingestion, alignment output.

Coordinates are 0-based and half-open everywhere. In CIGAR output ``I``
marks a residue present only in sequence 1 and ``D`` a residue present only
in sequence 2.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Sequence as Seq, Union

import numpy as np

DNA = frozenset(b"ACGTN")
_FOLD = bytes.maketrans(b"acgtnuU", b"ACGTNTT")

# residue codes shared with the kernels; N never equals anything
CODE = np.full(256, 255, dtype=np.uint8)
for _i, _c in enumerate(b"ACGTN"):
    CODE[_c] = _i
BASES = b"ACGTN"


class SeqIOError(ValueError):
    """Base class for input errors."""


class MalformedFastaError(SeqIOError):
    pass


class IllegalResidueError(SeqIOError):
    def __init__(self, record: str, position: int, char: str, line: int | None = None):
        self.record = record
        self.position = position
        self.char = char
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(
            f"illegal residue {char!r} in record {record!r} at offset {position}{where}"
        )


class BadIntervalError(SeqIOError):
    pass


class OverlapError(SeqIOError):
    pass


def _first_illegal(res: bytes) -> int:
    if not res.translate(None, b"ACGTN"):
        return -1
    return next(pos for pos, ch in enumerate(res) if ch not in DNA)


@dataclass(frozen=True)
class Sequence:
    id: str
    residues: bytes

    def __post_init__(self):
        res = self.residues
        if isinstance(res, str):
            res = res.encode("ascii")
        res = bytes(res).translate(_FOLD)
        pos = _first_illegal(res)
        if pos >= 0:
            raise IllegalResidueError(self.id, pos, chr(res[pos]))
        object.__setattr__(self, "residues", res)

    def __len__(self) -> int:
        return len(self.residues)

    @property
    def length(self) -> int:
        return len(self.residues)

    def codes(self) -> np.ndarray:
        """Residues as kernel codes (A=0, C=1, G=2, T=3, N=4)."""
        return CODE[np.frombuffer(self.residues, dtype=np.uint8)]


SeqLike = Union[Sequence, bytes, str, np.ndarray]


def as_codes(seq: SeqLike) -> np.ndarray:
    if isinstance(seq, np.ndarray):
        return np.ascontiguousarray(seq, dtype=np.uint8)
    if isinstance(seq, Sequence):
        return seq.codes()
    return Sequence("_", seq).codes()


def decode(codes: np.ndarray) -> bytes:
    return bytes(np.frombuffer(BASES, dtype=np.uint8)[np.asarray(codes)])


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("ascii") if isinstance(data, bytes) else data


def parse_fasta(source: Union[str, bytes, IO]) -> list[Sequence]:
    """Parse FASTA text into sequences.

    Lowercase is folded to uppercase and ``U`` to ``T``. Anything outside
    ``ACGTNU`` raises :class:`IllegalResidueError` carrying the offset within
    the record's residues.
    """
    records: list[Sequence] = []
    header: str | None = None
    chunks: list[bytes] = []
    offset = 0

    def flush():
        if header is not None:
            records.append(Sequence(header, b"".join(chunks)))

    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            header = line[1:].split()[0] if line[1:].split() else ""
            chunks = []
            offset = 0
            continue
        if header is None:
            raise MalformedFastaError(f"residues before any '>' header (line {lineno})")
        folded = line.encode("ascii", errors="replace").translate(_FOLD)
        pos = _first_illegal(folded)
        if pos >= 0:
            raise IllegalResidueError(header, offset + pos, line[pos], lineno)
        chunks.append(folded)
        offset += len(folded)
    flush()
    return records


def read_fasta(path: Union[str, os.PathLike]) -> list[Sequence]:
    with open(path, "rb") as fh:
        return parse_fasta(fh)


def format_fasta(records: Iterable[Sequence], width: int = 60) -> str:
    out = io.StringIO()
    for rec in records:
        out.write(f">{rec.id}\n")
        res = rec.residues.decode("ascii")
        for i in range(0, len(res), width):
            out.write(res[i:i + width] + "\n")
    return out.getvalue()


@dataclass(frozen=True)
class ExonAnnotation:
    """Paired exon intervals, ``(seq1_start, seq1_end, seq2_start, seq2_end)``."""

    intervals: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        ivs = tuple(sorted(tuple(int(x) for x in iv) for iv in self.intervals))
        for a1, b1, a2, b2 in ivs:
            if a1 < 0 or a2 < 0 or a1 >= b1 or a2 >= b2:
                raise BadIntervalError(f"empty or negative interval {(a1, b1, a2, b2)}")
        for side in (0, 2):
            spans = sorted((iv[side], iv[side + 1]) for iv in ivs)
            for (s0, e0), (s1, _) in zip(spans, spans[1:]):
                if s1 < e0:
                    raise OverlapError(
                        f"intervals overlap on sequence {side // 2 + 1}: {s0}-{e0} and {s1}"
                    )
        object.__setattr__(self, "intervals", ivs)

    def __len__(self):
        return len(self.intervals)

    def validate_against(self, len1: int, len2: int) -> None:
        for iv in self.intervals:
            if iv[1] > len1 or iv[3] > len2:
                raise BadIntervalError(
                    f"interval {iv} exceeds sequence lengths ({len1}, {len2})"
                )

    @property
    def seq1_length(self) -> int:
        return sum(b - a for a, b, _, _ in self.intervals)


def parse_exon_annotation(source: Union[str, bytes, IO]) -> ExonAnnotation:
    intervals = []
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) != 4:
            raise BadIntervalError(f"line {lineno}: expected 4 columns, got {len(fields)}")
        try:
            intervals.append(tuple(int(f) for f in fields))
        except ValueError as exc:
            raise BadIntervalError(f"line {lineno}: {exc}") from None
    return ExonAnnotation(tuple(intervals))


def format_exon_annotation(annotation: ExonAnnotation) -> str:
    return "".join("\t".join(map(str, iv)) + "\n" for iv in annotation.intervals)


class Op(str, Enum):
    MATCH = "M"
    MISMATCH = "X"
    INSERT_1 = "I"
    INSERT_2 = "D"

    @property
    def consumes1(self) -> bool:
        return self is not Op.INSERT_2

    @property
    def consumes2(self) -> bool:
        return self is not Op.INSERT_1


OPS_BY_CODE = (Op.MATCH, Op.MISMATCH, Op.INSERT_1, Op.INSERT_2)


def run_length(ops: Seq[Op]) -> list[tuple[Op, int]]:
    blocks: list[tuple[Op, int]] = []
    for op in ops:
        if blocks and blocks[-1][0] is op:
            blocks[-1] = (op, blocks[-1][1] + 1)
        else:
            blocks.append((op, 1))
    return blocks


def merge_blocks(blocks: Iterable[tuple[Op, int]]) -> list[tuple[Op, int]]:
    out: list[tuple[Op, int]] = []
    for op, n in blocks:
        if n <= 0:
            continue
        if out and out[-1][0] is op:
            out[-1] = (op, out[-1][1] + n)
        else:
            out.append((op, n))
    return out


@dataclass(frozen=True)
class AlignmentRecord:
    seq1_id: str
    seq2_id: str
    blocks: tuple[tuple[Op, int], ...]
    seq1_span: tuple[int, int]
    seq2_span: tuple[int, int]
    score: int
    identity: float = field(default=0.0)

    def __post_init__(self):
        blocks = tuple(merge_blocks((Op(op), int(n)) for op, n in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        w1 = sum(n for op, n in blocks if op.consumes1)
        w2 = sum(n for op, n in blocks if op.consumes2)
        if w1 != self.seq1_span[1] - self.seq1_span[0] or w2 != self.seq2_span[1] - self.seq2_span[0]:
            raise ValueError(
                f"blocks consume ({w1}, {w2}) residues but spans are "
                f"{self.seq1_span} / {self.seq2_span}"
            )
        cols = sum(n for _, n in blocks)
        matches = sum(n for op, n in blocks if op is Op.MATCH)
        object.__setattr__(self, "identity", matches / cols if cols else 0.0)

    @property
    def is_empty(self) -> bool:
        return not self.blocks

    @property
    def columns(self) -> int:
        return sum(n for _, n in self.blocks)

    @property
    def cigar(self) -> str:
        return "".join(f"{n}{op.value}" for op, n in self.blocks)

    @classmethod
    def empty(cls, seq1_id: str, seq2_id: str) -> "AlignmentRecord":
        return cls(seq1_id, seq2_id, (), (0, 0), (0, 0), 0)

    def aligned_pairs(self):
        """Yield ``(op, i, j)`` per column; ``i``/``j`` is None for gaps."""
        i, j = self.seq1_span[0], self.seq2_span[0]
        for op, n in self.blocks:
            for _ in range(n):
                yield op, (i if op.consumes1 else None), (j if op.consumes2 else None)
                i += op.consumes1
                j += op.consumes2


class Format(str, Enum):
    TEXT = "text"
    CIGAR = "cigar"
    TSV = "tsv"


NO_ALIGNMENT = "NO_ALIGNMENT"


def _text_rows(record: AlignmentRecord, s1: bytes, s2: bytes) -> tuple[str, str, str]:
    top, mid, bot = [], [], []
    i, j = record.seq1_span[0], record.seq2_span[0]
    for op, n in record.blocks:
        if op.consumes1:
            top.append(s1[i:i + n].decode("ascii"))
            i += n
        else:
            top.append("-" * n)
        if op.consumes2:
            bot.append(s2[j:j + n].decode("ascii"))
            j += n
        else:
            bot.append("-" * n)
        mid.append(("|" if op is Op.MATCH else " ") * n)
    return "".join(top), "".join(mid), "".join(bot)


def emit_alignment(
    record: AlignmentRecord,
    fmt: Union[Format, str] = Format.TEXT,
    s1: bytes | Sequence | None = None,
    s2: bytes | Sequence | None = None,
    width: int = 60,
) -> str:
    """Serialize an alignment as TEXT (needs the residues), CIGAR or TSV."""
    fmt = Format(fmt)
    if record.is_empty:
        if fmt is Format.TSV:
            return f"{record.seq1_id}\tNA\tNA\t{record.seq2_id}\tNA\tNA\t0\t0.000000\t{NO_ALIGNMENT}\n"
        return NO_ALIGNMENT + "\n"
    if fmt is Format.CIGAR:
        return record.cigar + "\n"
    if fmt is Format.TSV:
        (a1, b1), (a2, b2) = record.seq1_span, record.seq2_span
        return (
            f"{record.seq1_id}\t{a1}\t{b1}\t{record.seq2_id}\t{a2}\t{b2}\t"
            f"{record.score}\t{record.identity:.6f}\t{record.cigar}\n"
        )
    if s1 is None or s2 is None:
        raise ValueError("TEXT output needs both sequences")
    r1 = s1.residues if isinstance(s1, Sequence) else bytes(s1)
    r2 = s2.residues if isinstance(s2, Sequence) else bytes(s2)
    top, mid, bot = _text_rows(record, r1, r2)
    label = max(len(record.seq1_id), len(record.seq2_id))
    out = io.StringIO()
    out.write(
        f"# score={record.score} identity={record.identity:.6f} "
        f"seq1={record.seq1_span[0]}-{record.seq1_span[1]} "
        f"seq2={record.seq2_span[0]}-{record.seq2_span[1]}\n"
    )
    i, j = record.seq1_span[0], record.seq2_span[0]
    for k in range(0, len(top), width):
        t, m, b = top[k:k + width], mid[k:k + width], bot[k:k + width]
        ni = len(t) - t.count("-")
        nj = len(b) - b.count("-")
        out.write(f"{record.seq1_id:<{label}} {i:>10} {t} {i + ni}\n")
        out.write(f"{'':<{label}} {'':>10} {m}\n")
        out.write(f"{record.seq2_id:<{label}} {j:>10} {b} {j + nj}\n\n")
        i += ni
        j += nj
    return out.getvalue()
