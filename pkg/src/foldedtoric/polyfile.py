"""Text format for folded polygons.

::

    # comments run to the end of the line
    loop {
      corner (-2, 0)
      corner (1, 0)
      corner (0, 1)
      fold (0, 1/2) chart [[0, -1], [1, 0]] + (0, 1/2)
      corner (0, 2)
    }

Marks are listed in walk order; every number is an exact rational ``p/q``
or integer ``p``.  Chart matrices must be integral.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .delzant import PolygonError
from .folded import FoldedPolygon, Mark, MarkedPoint
from .lattice import AffineMapZ, LatticeError, format_rational, parse_rational


class PolygonSyntaxError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)"
    r"|(?P<word>[A-Za-z_]+)|(?P<num>-?\d+(?:/\d+)?)|(?P<punct>[{}()\[\],+])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PolygonSyntaxError(line, pos - start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("word", "num", "punct"):
            tokens.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def fail(self, tok: Token, message: str):
        raise PolygonSyntaxError(tok.line, tok.column, message)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            shown = "end of file" if tok.kind == "eof" else repr(tok.text)
            self.fail(tok, f"expected {text!r}, found {shown}")
        self.i += 1
        return tok

    def number(self) -> Fraction:
        tok = self.peek()
        if tok.kind != "num":
            shown = "end of file" if tok.kind == "eof" else repr(tok.text)
            self.fail(tok, f"expected a rational number, found {shown}")
        self.i += 1
        try:
            return parse_rational(tok.text)
        except LatticeError as exc:
            self.fail(tok, str(exc))

    def pair(self):
        self.expect("(")
        a = self.number()
        self.expect(",")
        b = self.number()
        self.expect(")")
        return (a, b)

    def matrix(self):
        tok = self.expect("[")
        rows = []
        for k in range(2):
            if k:
                self.expect(",")
            self.expect("[")
            a = self.number()
            self.expect(",")
            b = self.number()
            self.expect("]")
            rows.append((a, b))
        self.expect("]")
        for row in rows:
            for x in row:
                if x.denominator != 1:
                    self.fail(tok, f"chart matrix entries must be integers, got {format_rational(x)}")
        return tuple(tuple(int(x) for x in row) for row in rows), tok

    def mark(self) -> MarkedPoint:
        tok = self.peek()
        if tok.text == "corner":
            self.i += 1
            return MarkedPoint(Mark.CORNER, self.pair())
        if tok.text == "fold":
            self.i += 1
            pt = self.pair()
            self.expect("chart")
            lin, mtok = self.matrix()
            self.expect("+")
            off = self.pair()
            try:
                chart = AffineMapZ(lin, off)
            except LatticeError as exc:
                self.fail(mtok, str(exc))
            return MarkedPoint(Mark.FOLD, pt, chart)
        self.fail(tok, f"expected 'corner', 'fold' or '}}', found {tok.text!r}")

    def polygon(self) -> FoldedPolygon:
        loops = []
        while self.peek().kind != "eof":
            self.expect("loop")
            self.expect("{")
            marks = []
            while self.peek().text != "}":
                if self.peek().kind == "eof":
                    self.fail(self.peek(), "unterminated loop, expected '}'")
                marks.append(self.mark())
            self.expect("}")
            loops.append(tuple(marks))
        if not loops:
            self.fail(self.peek(), "expected at least one 'loop' block")
        return FoldedPolygon(tuple(loops))


def parse_polygon(text: str) -> FoldedPolygon:
    """Parse polygon text.

    Raises :class:`PolygonSyntaxError` (with line and column) for malformed
    text and :class:`~foldedtoric.delzant.PolygonError` when the marks
    violate the structural rules, e.g. a fold placed at a corner.
    """
    return _Parser(text).polygon()


def load_polygon(path) -> FoldedPolygon:
    return parse_polygon(Path(path).read_text(encoding="utf-8"))


def _pair(p) -> str:
    return f"({format_rational(p[0])}, {format_rational(p[1])})"


def serialize_polygon(p: FoldedPolygon) -> str:
    out = []
    for loop in p.boundary_loops:
        out.append("loop {")
        for m in loop:
            if m.kind is Mark.CORNER:
                out.append(f"  corner {_pair(m.point)}")
            else:
                (a, b), (c, d) = m.chart.linear
                out.append(
                    f"  fold {_pair(m.point)} chart [[{a}, {b}], [{c}, {d}]] + {_pair(m.chart.offset)}"
                )
        out.append("}")
    return "\n".join(out) + "\n"


__all__ = [
    "PolygonError",
    "PolygonSyntaxError",
    "load_polygon",
    "parse_polygon",
    "serialize_polygon",
    "tokenize",
]
