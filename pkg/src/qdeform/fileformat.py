"""Plain-text problem files.

A problem file is line oriented; ``#`` starts a comment and blank lines
are ignored::

    qdeform-problem 1
    field real
    vertices 3
    arrow 1 2          # arrow 1: 1 -> 2
    arrow 2 3          # arrow 2: 2 -> 3
    dims 1 2 1
    matrix 1           # followed by one line per row
    1
    0
    matrix 2
    0 1
    perturbation 2     # same layout as matrix, optional
    0.001 0            # a bare 'perturbation' line gives a zero one
    interval 1 2       # optional, for chain problems
    interval 2 3

Arrows are numbered 1, 2, ... in the order of their ``arrow`` lines.  A matrix
or perturbation with no rows or columns has no data lines; omitted
matrices are zero.  When ``dims`` is absent but intervals are present, the
representation is the direct sum of the interval modules.

Entries are separated by whitespace or commas.  Complex entries read
``a+bi`` or ``a-bi`` (``j`` is accepted for ``i``); spaces are allowed
around the middle sign, so a real entry followed by a pure imaginary one
must be written ``1, -2i`` or ``1 0-2i``.
"""
from dataclasses import dataclass, field
import math
import re

import numpy as np

from .chain import ChainShape, build_interval
from .exceptions import QDeformError
from .quiver import Quiver, Representation, direct_sum

__all__ = ["FORMAT_VERSION", "ParseError", "Problem", "emit_problem",
           "format_scalar", "parse_problem", "read_problem"]

FORMAT_VERSION = 1
_HEADER = "qdeform-problem"

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan"
_ENTRY = re.compile(
    rf"(?P<pure>[+-]?(?:{_NUM})?)[ij](?![a-z])"
    rf"|(?P<re>[+-]?(?:{_NUM}))(?:\s*(?P<sign>[+-])\s*(?P<im>{_NUM})?[ij](?![a-z]))?")
_SEP = re.compile(r"[\s,]*")


class ParseError(QDeformError, ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass
class Problem:
    field: str
    quiver: Quiver
    representation: Representation
    perturbation: Representation = None
    intervals: list = field(default_factory=list)


def _parse_float(s):
    return float(s) if s not in ("", "+", "-") else float(s + "1")


def parse_entries(line, lineno=None):
    out, pos = [], _SEP.match(line).end()
    while pos < len(line):
        m = _ENTRY.match(line, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot read an entry at {line[pos:]!r}", lineno)
        if m.group("re") is not None:
            value = float(m.group("re"))
            if m.group("sign"):
                im = _parse_float(m.group("im") or "")
                value = complex(value, -im if m.group("sign") == "-" else im)
        else:
            value = complex(0.0, _parse_float(m.group("pure")))
        out.append(value)
        pos = _SEP.match(line, m.end()).end()
    return out


def format_scalar(x, fmt=".17g"):
    """Text for one entry; complex values print as ``a+bi`` without spaces."""
    if isinstance(x, (complex, np.complexfloating)):
        re_, im = float(x.real), float(x.imag)
        sign = "-" if math.copysign(1.0, im) < 0 else "+"
        return f"{format(re_, fmt)}{sign}{format(abs(im), fmt)}i"
    return format(float(x), fmt)


def _ints(parts, lineno, what):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"{what} expects integers", lineno) from None


def parse_problem(text):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise ParseError("empty problem file")
    lineno, head = lines[0]
    parts = head.split()
    if parts[0] != _HEADER or len(parts) != 2:
        raise ParseError(f"expected header '{_HEADER} {FORMAT_VERSION}'", lineno)
    if parts[1] != str(FORMAT_VERSION):
        raise ParseError(f"unsupported format version {parts[1]}", lineno)

    field_name, t, edges, dims = "real", None, [], None
    blocks = {"matrix": {}, "perturbation": {}}
    ivs = []
    has_pert = False
    k = 1
    while k < len(lines):
        lineno, body = lines[k]
        key, *args = body.split()
        k += 1
        if key == "field":
            if args not in (["real"], ["complex"]):
                raise ParseError("field must be 'real' or 'complex'", lineno)
            field_name = args[0]
        elif key == "vertices":
            vals = _ints(args, lineno, "vertices")
            if len(vals) != 1 or vals[0] < 1:
                raise ParseError("vertices expects one positive integer", lineno)
            t = vals[0]
        elif key == "arrow":
            pq = _ints(args, lineno, "arrow")
            if len(pq) != 2:
                raise ParseError("arrow expects SOURCE TARGET", lineno)
            edges.append((lineno, tuple(pq)))
        elif key == "dims":
            dims = _ints(args, lineno, "dims")
        elif key == "interval":
            ij = _ints(args, lineno, "interval")
            if len(ij) != 2:
                raise ParseError("interval expects I J", lineno)
            ivs.append((lineno, tuple(ij)))
        elif key == "perturbation" and not args:
            has_pert = True             # zero perturbation, e.g. with no arrows
        elif key in blocks:
            if t is None or dims is None:
                raise ParseError(f"{key} before vertices/dims", lineno)
            vals = _ints(args, lineno, key)
            aid = vals[0] if len(vals) == 1 else None
            if aid is None or not 1 <= aid <= len(edges):
                raise ParseError(f"{key} expects an arrow number 1..{len(edges)}",
                                 lineno)
            if aid in blocks[key]:
                raise ParseError(f"{key} {aid} given twice", lineno)
            if len(dims) != t:
                raise ParseError(f"dims must list {t} entries", lineno)
            p, q = edges[aid - 1][1]
            if not (1 <= p <= t and 1 <= q <= t):
                raise ParseError(f"arrow {aid} has an endpoint outside 1..{t}", lineno)
            rows, cols = dims[q - 1], dims[p - 1]
            data = []
            if rows and cols:
                for _ in range(rows):
                    if k >= len(lines):
                        raise ParseError(f"{key} {aid}: expected {rows} rows", lineno)
                    rl, row_text = lines[k]
                    k += 1
                    row = parse_entries(row_text, rl)
                    if len(row) != cols:
                        raise ParseError(f"{key} {aid}: expected {cols} entries, "
                                         f"got {len(row)}", rl)
                    data.append(row)
            blocks[key][aid] = np.array(data).reshape(rows, cols) if data \
                else np.zeros((rows, cols))
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)

    if t is None:
        raise ParseError("missing 'vertices'")
    try:
        quiver = Quiver.from_edges(t, [pq for _, pq in edges])
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    for lineno, (i, j) in ivs:
        if not 1 <= i <= j <= t:
            raise ParseError(f"interval ({i}, {j}) invalid for {t} vertices", lineno)
    intervals = [ij for _, ij in ivs]

    dtype = np.complex128 if field_name == "complex" else np.float64
    for name, mats in blocks.items():
        for aid, m in mats.items():
            if field_name == "real" and np.iscomplexobj(m):
                if np.any(np.imag(m)):
                    raise ParseError(f"complex entry in {name} {aid} of a real problem")
                mats[aid] = np.real(m)
    if dims is None:
        if not intervals:
            raise ParseError("missing 'dims'")
        try:
            shape = ChainShape.from_quiver(quiver)
        except ValueError as exc:
            raise ParseError(f"intervals need a chain quiver: {exc}") from None
        rep = direct_sum(*(build_interval(shape, iv) for iv in intervals))
        rep = Representation(rep.quiver, rep.dims, rep.matrices, dtype=dtype)
    else:
        if len(dims) != t or any(n < 0 for n in dims):
            raise ParseError(f"dims must list {t} nonnegative integers")
        rep = Representation(quiver, dims, blocks["matrix"], dtype=dtype)
    pert = None
    if blocks["perturbation"] or has_pert:
        pert = Representation(quiver, rep.dims, blocks["perturbation"], dtype=dtype)
    return Problem(field_name, quiver, rep, pert, intervals)


def read_problem(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _emit_block(key, number, m):
    out = [f"{key} {number}"]
    if m.size:
        out.extend(" ".join(format_scalar(x) for x in row) for row in m)
    return out


def emit_problem(problem):
    """Text of ``problem``; parsing it back gives a bit-identical problem."""
    rep = problem.representation
    quiver = problem.quiver
    out = [f"{_HEADER} {FORMAT_VERSION}", f"field {problem.field}",
           f"vertices {quiver.vertex_count}"]
    out += [f"arrow {a.source} {a.target}" for a in quiver.arrows]
    out.append("dims " + " ".join(str(n) for n in rep.dims))
    for k, m in enumerate(rep.matrices, 1):
        out += _emit_block("matrix", k, m)
    if problem.perturbation is not None:
        if not quiver.arrows:
            out.append("perturbation")
        for k, m in enumerate(problem.perturbation.matrices, 1):
            out += _emit_block("perturbation", k, m)
    out += [f"interval {i} {j}" for i, j in problem.intervals]
    return "\n".join(out) + "\n"
