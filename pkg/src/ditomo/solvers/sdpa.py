"""Sparse SDPA text interchange for single-block trace-equality SDPs.

Dialect (documented here with a byte-level example; see also the
project README):

    "ditomo-sdp sense=max
    "any further comment lines are ignored
    2
    1
    3
    1 0.5
    0 1 1 2 0.5
    1 1 1 1 1
    2 1 2 2 1

Line 1 must be a comment (leading double-quote) of the exact form
``"ditomo-sdp sense=<max|min>``.  Then: the number of constraints m, the
number of blocks (always 1), the block size, the m right-hand sides on
one whitespace-separated line, and finally one entry per line in the
form ``matno blkno i j value``.  Matrix 0 is the objective, matrices
1..m are the constraint matrices (Tr(A_k Gamma) = rhs_k); indices are
1-based with i <= j (upper triangle, symmetric mirror implied).  Values
are printed with 17 significant digits (%.17g), which round-trips IEEE
doubles exactly.

Import rejects malformed files with the offending line number.
"""

from __future__ import annotations

from .sdp import SemidefiniteProgramInstance

_HEADER = '"ditomo-sdp sense='


class SDPAFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def export_sdpa(p: SemidefiniteProgramInstance) -> str:
    """Serialize an instance; inequality constraints are not representable."""
    if p.inequalities:
        raise ValueError("SDPA export supports equality-constrained instances only")
    lines = [f'"ditomo-sdp sense={p.sense}']
    m = len(p.constraints)
    lines.append(str(m))
    lines.append("1")
    lines.append(str(p.dim))
    lines.append(" ".join("%.17g" % float(rhs) for _mat, rhs in p.constraints)
                 if m else "")
    def emit(matno, entries):
        for i, j, v in entries:
            lines.append("%d 1 %d %d %.17g" % (matno, i + 1, j + 1, float(v)))
    emit(0, p.objective)
    for k, (mat, _rhs) in enumerate(p.constraints):
        emit(k + 1, mat)
    return "\n".join(lines) + "\n"


def import_sdpa(text: str) -> SemidefiniteProgramInstance:
    lines = text.splitlines()
    pos = 0

    def next_line():
        nonlocal pos
        if pos >= len(lines):
            raise SDPAFormatError(len(lines), "unexpected end of file")
        pos += 1
        return lines[pos - 1], pos

    # header comment carries the sense; further comments are skipped
    line, no = next_line()
    if not line.startswith(_HEADER):
        raise SDPAFormatError(no, f"expected header starting with {_HEADER!r}")
    sense = line[len(_HEADER):].strip()
    if sense not in ("max", "min"):
        raise SDPAFormatError(no, f"invalid sense {sense!r}")
    line, no = next_line()
    while line.startswith('"'):
        line, no = next_line()

    def parse_int(s, no, what):
        try:
            return int(s)
        except ValueError:
            raise SDPAFormatError(no, f"invalid {what}: {s!r}") from None

    m = parse_int(line.strip(), no, "constraint count")
    line, no = next_line()
    nblocks = parse_int(line.strip(), no, "block count")
    if nblocks != 1:
        raise SDPAFormatError(no, f"exactly one block supported, got {nblocks}")
    line, no = next_line()
    dim = parse_int(line.strip(), no, "block size")
    line, no = next_line()
    rhs_tokens = line.split()
    if len(rhs_tokens) != m:
        raise SDPAFormatError(no, f"expected {m} right-hand sides, got "
                                  f"{len(rhs_tokens)}")
    try:
        rhs = [float(t) for t in rhs_tokens]
    except ValueError:
        raise SDPAFormatError(no, "invalid right-hand side value") from None

    objective = []
    mats = [[] for _ in range(m)]
    while pos < len(lines):
        line, no = next_line()
        if not line.strip() or line.startswith('"'):
            continue
        tokens = line.split()
        if len(tokens) != 5:
            raise SDPAFormatError(no, f"expected 5 fields, got {len(tokens)}")
        matno = parse_int(tokens[0], no, "matrix number")
        blkno = parse_int(tokens[1], no, "block number")
        i = parse_int(tokens[2], no, "row index")
        j = parse_int(tokens[3], no, "column index")
        try:
            value = float(tokens[4])
        except ValueError:
            raise SDPAFormatError(no, f"invalid value {tokens[4]!r}") from None
        if blkno != 1:
            raise SDPAFormatError(no, f"block number must be 1, got {blkno}")
        if not 0 <= matno <= m:
            raise SDPAFormatError(no, f"matrix number {matno} out of range 0..{m}")
        if i > j:
            raise SDPAFormatError(
                no, f"lower-triangle entry ({i},{j}): specify i <= j only")
        if not 1 <= i <= dim or not 1 <= j <= dim:
            raise SDPAFormatError(no, f"entry ({i},{j}) outside order-{dim} block")
        target = objective if matno == 0 else mats[matno - 1]
        target.append((i - 1, j - 1, value))

    return SemidefiniteProgramInstance(
        dim=dim, objective=objective,
        constraints=[(mat, r) for mat, r in zip(mats, rhs)],
        sense=sense)
