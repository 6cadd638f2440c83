"""Line-oriented plain-text artifact formats with format-version headers.

All integers are decimal; GF(2) vectors are two lowercase hex digits. Every
writer is deterministic so repeated runs produce byte-identical files.
"""

from __future__ import annotations

from .autgroup import Isometry
from .blocks import Norm4Block, Norm4Partition
from .certs import Certificate
from .frames import Frame, FrameArray
from .gf2 import F2Subspace, SpaceClass
from .intmat import Mat
from .permgroup import Perm
from .spreadsearch import Spread

SPREAD_HEADER = "e8nine-spread 1"
FRAMES_HEADER = "e8nine-frames 1"
PARTITION_HEADER = "e8nine-partition 1"
GENERATORS_HEADER = "e8nine-generators 1"
CERTIFICATES_HEADER = "e8nine-certificates 1"


class ParseError(ValueError):
    pass


def _expect_header(lines: list[str], header: str) -> None:
    if not lines or lines[0].strip() != header:
        raise ParseError("missing or wrong header, expected %r" % header)


# -- spread ------------------------------------------------------------------


def serialize_spread(s: Spread) -> str:
    out = [SPREAD_HEADER, "class %s" % s.class_label.value]
    for sp in s.spaces:
        out.append(" ".join("%02x" % r for r in sp.rows))
    return "\n".join(out) + "\n"


def parse_spread(text: str) -> Spread:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    _expect_header(lines, SPREAD_HEADER)
    if len(lines) != 11 or not lines[1].startswith("class "):
        raise ParseError("spread file must be header, class line, 9 spaces")
    label_txt = lines[1].split()[1]
    try:
        label = SpaceClass(label_txt)
    except ValueError:
        raise ParseError("unknown class label %r" % label_txt) from None
    spaces = []
    for ln in lines[2:]:
        try:
            rows = tuple(int(tok, 16) for tok in ln.split())
        except ValueError:
            raise ParseError("bad hex row in %r" % ln) from None
        if len(rows) != 4 or any(not 0 < r < 256 for r in rows):
            raise ParseError("each space needs 4 hex basis rows: %r" % ln)
        spaces.append(F2Subspace(rows=rows))
    return Spread(spaces=tuple(spaces), class_label=label)


# -- frame array ---------------------------------------------------------------


def serialize_frames(arr: FrameArray) -> str:
    out = [FRAMES_HEADER]
    for i, row in enumerate(arr.rows):
        out.append("row %d" % i)
        for f in row:
            out.append(" ".join(str(pid) for pid in f.roots))
    return "\n".join(out) + "\n"


def parse_frames(text: str) -> FrameArray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    _expect_header(lines, FRAMES_HEADER)
    rows: list[tuple[Frame, ...]] = []
    i = 1
    for r in range(9):
        if i >= len(lines) or lines[i].strip() != "row %d" % r:
            raise ParseError("expected 'row %d' marker" % r)
        i += 1
        frames = []
        for k in range(15):
            if i >= len(lines):
                raise ParseError("truncated frame row %d" % r)
            try:
                ids = tuple(int(tok) for tok in lines[i].split())
            except ValueError:
                raise ParseError("bad id line %r" % lines[i]) from None
            if len(ids) != 8 or any(not 0 <= x < 120 for x in ids):
                raise ParseError("frame line needs 8 pair ids in 0..119")
            frames.append(Frame(roots=ids, source=(r, k)))
            i += 1
        rows.append(tuple(frames))
    if i != len(lines):
        raise ParseError("trailing content after 9 rows")
    return FrameArray(rows=tuple(rows))


# -- partition -----------------------------------------------------------------


def serialize_partition(p: Norm4Partition) -> str:
    out = [PARTITION_HEADER]
    for b in p.blocks:
        out.append("block %d" % b.row_index)
        for v in b.vectors:
            out.append(" ".join(str(x) for x in v))
    return "\n".join(out) + "\n"


def parse_partition(text: str) -> Norm4Partition:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    _expect_header(lines, PARTITION_HEADER)
    blocks = []
    i = 1
    for r in range(9):
        if i >= len(lines) or lines[i].strip() != "block %d" % r:
            raise ParseError("expected 'block %d' marker" % r)
        i += 1
        vectors = []
        for _ in range(240):
            if i >= len(lines):
                raise ParseError("truncated block %d" % r)
            try:
                v = tuple(int(tok) for tok in lines[i].split())
            except ValueError:
                raise ParseError("bad vector line %r" % lines[i]) from None
            if len(v) != 8:
                raise ParseError("vector needs 8 coordinates: %r" % lines[i])
            vectors.append(v)
            i += 1
        # Semantic checks (duplicates, spans, norms) belong to verification.
        blocks.append(Norm4Block(row_index=r, vectors=tuple(sorted(vectors))))
    if i != len(lines):
        raise ParseError("trailing content after 9 blocks")
    return Norm4Partition(blocks=tuple(blocks))


# -- generators ------------------------------------------------------------------


def serialize_generators(isos: list[Isometry], block_perms: list[Perm]) -> str:
    out = [GENERATORS_HEADER, "count %d" % len(isos)]
    for i, (iso, bp) in enumerate(zip(isos, block_perms)):
        out.append("gen %d blocks %s" % (i, " ".join(str(x) for x in bp)))
        out.append(" ".join(str(x) for row in iso.matrix for x in row))
    return "\n".join(out) + "\n"


def parse_generators(text: str) -> tuple[list[Isometry], list[Perm]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    _expect_header(lines, GENERATORS_HEADER)
    if len(lines) < 2 or not lines[1].startswith("count "):
        raise ParseError("missing generator count")
    try:
        count = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise ParseError("bad count line") from None
    if len(lines) != 2 + 2 * count:
        raise ParseError("expected %d generator entries" % count)
    isos = []
    perms = []
    for i in range(count):
        head = lines[2 + 2 * i].split()
        if head[:2] != ["gen", str(i)] or head[2] != "blocks" or len(head) != 12:
            raise ParseError("bad generator header %r" % lines[2 + 2 * i])
        bp = tuple(int(x) for x in head[3:])
        if sorted(bp) != list(range(9)):
            raise ParseError("generator %d block line is not a permutation" % i)
        try:
            entries = [int(tok) for tok in lines[3 + 2 * i].split()]
        except ValueError:
            raise ParseError("bad matrix line for generator %d" % i) from None
        if len(entries) != 64:
            raise ParseError("generator %d matrix needs 64 entries" % i)
        matrix: Mat = tuple(tuple(entries[8 * r : 8 * r + 8]) for r in range(8))
        isos.append(Isometry(matrix=matrix))
        perms.append(bp)
    return isos, perms


# -- certificates -----------------------------------------------------------------


def serialize_certificates(certs: list[Certificate]) -> str:
    """Deterministic certificate listing; timings are deliberately omitted."""
    out = [CERTIFICATES_HEADER]
    for c in certs:
        out.append("stage %s: %s" % (c.stage, "PASS" if c.passed else "FAIL"))
        for ch in c.checks:
            out.append(
                "  %s: expected %r actual %r: %s"
                % (ch.description, ch.expected, ch.actual, "PASS" if ch.ok else "FAIL")
            )
    out.append("overall: %s" % ("PASS" if all(c.passed for c in certs) else "FAIL"))
    return "\n".join(out) + "\n"
