"""Parser for the vector-field expression language and the JSON frame document.

Grammar (whitespace is ignored)::

    expr     := term (('+' | '-') term)*
    term     := ('+' | '-')* product
    product  := power ('*' power)*
    power    := atom ('^' uint)*
    atom     := rational | 'x' uint | 'd' uint | '(' expr ')'
    rational := uint ('/' uint)?

Unary signs apply to a whole product, so ``-x1^2*d1`` is ``-(x1^2 d1)``.  After expansion every
product must carry exactly one derivation symbol ``dk``; the single literal ``0`` denotes the zero
field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import DimensionError, ParseError
from .frames import Frame
from .poly import Poly, WeightSequence
from .vf import VectorField

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<var>[xd])(?P<idx>\d+)|(?P<op>[-+*/^()]))")


@dataclass
class _Tok:
    kind: str  # "num", "x", "d", an operator character, or "end"
    text: str
    pos: int
    value: Any = None


def _lex(src: str) -> list:
    toks = []
    i = 0
    while i < len(src):
        if src[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(src, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {src[i]!r}", offset=i)
        start = m.start(m.lastgroup) if m.lastgroup != "idx" else m.start("var")
        if m.group("num") is not None:
            text = m.group("num")
            if "." in text:
                raise ParseError("decimal literals are not allowed; use p/q", offset=start)
            toks.append(_Tok("num", text, start, int(text)))
        elif m.group("var") is not None:
            toks.append(_Tok(m.group("var"), m.group(0).strip(), start, int(m.group("idx"))))
        else:
            toks.append(_Tok(m.group("op"), m.group("op"), start))
        i = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Value:
    """``scalar + sum_k vec[k] d_k``; ``None`` marks a part that is syntactically absent."""

    __slots__ = ("scalar", "vec", "scalar_pos")

    def __init__(self, scalar, vec, scalar_pos=None):
        self.scalar = scalar
        self.vec = vec
        self.scalar_pos = scalar_pos


class _Parser:
    def __init__(self, src: str, n: int):
        self.src = src
        self.n = n
        self.w = (1,) * n
        self.toks = _lex(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind=None) -> _Tok:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {want}, found {got}", offset=tok.pos)
        self.i += 1
        return tok

    # values ------------------------------------------------------------------
    def _add(self, a: _Value, b: _Value, sign: int) -> _Value:
        scalar = a.scalar
        if b.scalar is not None:
            s = b.scalar if sign > 0 else -b.scalar
            scalar = s if scalar is None else scalar + s
        vec = a.vec
        if b.vec is not None:
            v = b.vec if sign > 0 else [-p for p in b.vec]
            vec = v if vec is None else [p + q for p, q in zip(vec, v)]
        pos = a.scalar_pos if a.scalar_pos is not None else b.scalar_pos
        return _Value(scalar, vec, pos)

    def _mul(self, a: _Value, b: _Value, pos: int) -> _Value:
        if a.vec is not None and b.vec is not None:
            raise ParseError("a product term may contain only one derivation symbol", offset=pos)
        scalar = a.scalar * b.scalar if a.scalar is not None and b.scalar is not None else None
        vec = None
        if a.vec is not None and b.scalar is not None:
            vec = [b.scalar * p for p in a.vec]
        if b.vec is not None and a.scalar is not None:
            vec = [a.scalar * p for p in b.vec]
        return _Value(scalar, vec, a.scalar_pos if scalar is not None else None)

    # grammar -------------------------------------------------------------------
    def parse(self) -> _Value:
        v = self.expr()
        self.take("end")
        return v

    def expr(self) -> _Value:
        v = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take()
            v = self._add(v, self.term(), 1 if op.kind == "+" else -1)
        return v

    def term(self) -> _Value:
        sign = 1
        while self.peek().kind in ("+", "-"):
            if self.take().kind == "-":
                sign = -sign
        v = self.product()
        if sign < 0:
            v = _Value(None if v.scalar is None else -v.scalar,
                       None if v.vec is None else [-p for p in v.vec], v.scalar_pos)
        return v

    def product(self) -> _Value:
        v = self.power()
        while self.peek().kind == "*":
            op = self.take()
            v = self._mul(v, self.power(), op.pos)
        return v

    def power(self) -> _Value:
        v = self.atom()
        while self.peek().kind == "^":
            op = self.take()
            tok = self.peek()
            if tok.kind != "num":
                raise ParseError("exponent must be a non-negative integer", offset=tok.pos)
            self.take()
            if v.vec is not None:
                raise ParseError("powers apply to scalars only; a derivation cannot be raised to a power",
                                 offset=op.pos)
            v = _Value(v.scalar ** tok.value, None, v.scalar_pos)
        return v

    def atom(self) -> _Value:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            value = Fraction(tok.value)
            if self.peek().kind == "/":
                self.take()
                den = self.peek()
                if den.kind != "num":
                    raise ParseError("expected a denominator after '/'", offset=den.pos)
                self.take()
                if den.value == 0:
                    raise ParseError("division by zero", offset=den.pos)
                value = Fraction(tok.value, den.value)
            return _Value(Poly.const(value, self.w), None, tok.pos)
        if tok.kind in ("x", "d"):
            self.take()
            if not 1 <= tok.value <= self.n:
                raise ParseError(f"index {tok.value} out of range 1..{self.n}", offset=tok.pos)
            if tok.kind == "x":
                return _Value(Poly.var(tok.value - 1, self.w), None, tok.pos)
            vec = [Poly.const(int(k == tok.value - 1), self.w) for k in range(self.n)]
            return _Value(None, vec)
        if tok.kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", offset=tok.pos)


def parse_field(src: str, n: int, weights=None) -> VectorField:
    """Parse one vector field in ``n`` variables; ``weights`` re-homes it in a weighted ring."""
    if n < 1:
        raise DimensionError("dimension must be positive")
    w = tuple(weights) if weights is not None else (1,) * n
    if len(w) != n:
        raise DimensionError("weights must have n entries")
    if src.strip() == "0":
        return VectorField.zero(w)
    v = _Parser(src, n).parse()
    if v.scalar is not None:
        raise ParseError("every product term needs exactly one derivation symbol",
                         offset=v.scalar_pos if v.scalar_pos is not None else 0)
    if v.vec is None:
        raise ParseError("expression has no derivation symbol", offset=0)
    return VectorField([Poly._raw(dict(p.terms), w) for p in v.vec])


@dataclass(frozen=True)
class FrameOptions:
    jet_order: int | None = None
    box: float | None = None
    samples: int | None = None
    seed: int | None = None
    steps: int | None = None
    guard: float | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


_TOP_KEYS = {"type", "fields", "jet_order", "samples", "flow", "name"}


def _need(cond: bool, msg: str, path: str):
    if not cond:
        raise ParseError(msg, path=path)


def _int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def parse_frame_doc(src: str | bytes | dict) -> tuple:
    """Parse the JSON frame document into ``(Frame, FrameOptions)``."""
    if isinstance(src, dict):
        doc = src
    else:
        try:
            doc = json.loads(src)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from None
    _need(isinstance(doc, dict), "document must be a JSON object", "$")
    for key in doc:
        _need(key in _TOP_KEYS, f"unknown key {key!r}", f"$.{key}")
    _need("type" in doc, "missing required key 'type'", "$")
    _need("fields" in doc, "missing required key 'fields'", "$")
    ranks = doc["type"]
    _need(isinstance(ranks, list) and ranks, "'type' must be a non-empty list of integers", "$.type")
    for i, m in enumerate(ranks):
        _need(_int(m) and m >= 1, "ranks must be positive integers", f"$.type[{i}]")
    try:
        w = WeightSequence.from_type(ranks)
    except ValueError as exc:
        raise ParseError(str(exc), path="$.type") from None
    fields = doc["fields"]
    _need(isinstance(fields, list), "'fields' must be a list of strings", "$.fields")
    _need(len(fields) == w.n, f"expected {w.n} fields for type {ranks}, got {len(fields)}", "$.fields")
    parsed = []
    for i, text in enumerate(fields):
        _need(isinstance(text, str), "field must be a string", f"$.fields[{i}]")
        try:
            parsed.append(parse_field(text, w.n, w.weights))
        except ParseError as exc:
            raise ParseError(exc.reason, offset=exc.offset, path=f"$.fields[{i}]") from None
    opts = {}
    if "jet_order" in doc:
        _need(_int(doc["jet_order"]) and doc["jet_order"] >= 1, "'jet_order' must be a positive integer", "$.jet_order")
        opts["jet_order"] = doc["jet_order"]
    if "samples" in doc:
        s = doc["samples"]
        _need(isinstance(s, dict), "'samples' must be an object", "$.samples")
        for key in s:
            _need(key in ("box", "count", "seed"), f"unknown key {key!r}", f"$.samples.{key}")
        if "box" in s:
            _need(_num(s["box"]) and s["box"] > 0, "'box' must be a positive half-width", "$.samples.box")
            opts["box"] = float(s["box"])
        if "count" in s:
            _need(_int(s["count"]) and s["count"] >= 1, "'count' must be a positive integer", "$.samples.count")
            opts["samples"] = s["count"]
        if "seed" in s:
            _need(_int(s["seed"]), "'seed' must be an integer", "$.samples.seed")
            opts["seed"] = s["seed"]
    if "flow" in doc:
        f = doc["flow"]
        _need(isinstance(f, dict), "'flow' must be an object", "$.flow")
        for key in f:
            _need(key in ("steps", "guard"), f"unknown key {key!r}", f"$.flow.{key}")
        if "steps" in f:
            _need(_int(f["steps"]) and f["steps"] >= 16, "'steps' must be an integer >= 16", "$.flow.steps")
            opts["steps"] = f["steps"]
        if "guard" in f:
            _need(_num(f["guard"]) and f["guard"] > 0, "'guard' must be positive", "$.flow.guard")
            opts["guard"] = float(f["guard"])
    return Frame(w, parsed), FrameOptions(**opts)


def frame_document(frame: Frame, ranks=None, **extra) -> dict:
    """Inverse of :func:`parse_frame_doc` for frames whose weights come from a type."""
    from .vf import format_field

    if ranks is None:
        w = frame.weights
        ranks = [sum(1 for v in w if v <= level) for level in range(1, w[-1] + 1)]
    doc = {"type": list(ranks), "fields": [format_field(X) for X in frame.fields]}
    doc.update(extra)
    return doc
