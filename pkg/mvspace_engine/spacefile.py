"""
Space definition files: parsing and canonical serialization.

    # comment
    field Q                 (or: field GF 5)
    ambient 2
    omega 6
    space V
      level 5 span { }
      level 3 span { (0,1) }
      level 1 span { (1,0) (0,1) }
    end

Level lines list the generators of each level literally, top count
first. Scalars are integers or p/q.
"""

import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from mvspace_engine.errors import DimensionMismatch, NotAMultiVectorSpace, SpaceFileError
from mvspace_engine.exact_linalg import ScalarField, Vector
from mvspace_engine.mvspace import MVSpace, make_mvspace

log = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<vector>\([^()]*\))|(?P<brace>[{}])|(?P<word>[^\s(){}]+)|(?P<bad>.)"
)
_SCALAR = re.compile(r"[+-]?\d+(?:/\d+)?$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class Token:
    text: str
    kind: str
    line: int
    column: int


@dataclass
class SpaceFile:
    """A parsed file: one field, ambient dimension and omega, named spaces."""
    field: ScalarField
    ambient: int
    omega: int
    spaces: Dict[str, MVSpace] = field(default_factory=dict)

    def get(self, name: str) -> MVSpace:
        if name not in self.spaces:
            known = ", ".join(self.spaces) or "none"
            raise KeyError(f"unknown space {name!r} (defined: {known})")
        return self.spaces[name]


def _tokenize(text: str) -> List[Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for match in _TOKEN.finditer(body):
            kind = match.lastgroup
            if kind == "space":
                continue
            column = match.start() + 1
            if kind == "bad":
                raise SpaceFileError(f"unexpected character {match.group()!r}", lineno, column)
            tokens.append(Token(match.group(), kind, lineno, column))
    return tokens


def parse_scalar(space_field: ScalarField, text: str):
    """Coerce an integer or p/q literal into the field."""
    if not _SCALAR.match(text):
        raise SpaceFileError(f"bad scalar {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise SpaceFileError(f"zero denominator in {text!r}")
    try:
        return space_field(Fraction(text))
    except ValueError as e:
        raise SpaceFileError(str(e)) from e


def parse_vector(space_field: ScalarField, text: str, length: Optional[int] = None) -> Vector:
    """
    Parse "(a,b,...)" (parentheses optional) into a field vector.

    Raises:
        SpaceFileError: On malformed scalars.
        DimensionMismatch: If `length` is given and differs.
    """
    inner = text.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    parts = [p.strip() for p in inner.split(",")] if inner.strip() else []
    vector = tuple(parse_scalar(space_field, p) for p in parts)
    if length is not None and len(vector) != length:
        raise DimensionMismatch(f"vector {text.strip()} has {len(vector)} entries, expected {length}")
    return vector


def parse_vector_list(space_field: ScalarField, text: str, length: int) -> List[Vector]:
    """Parse "(..);(..)" into vectors of the given length."""
    return [parse_vector(space_field, part, length) for part in text.split(";") if part.strip()]


class SpaceFileParser:
    """Recursive-descent parser over the token stream."""

    def __init__(self, text: str):
        self._tokens = _tokenize(text)
        self._pos = 0

    def _peek(self) -> Optional[Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _next(self, what: str) -> Token:
        token = self._peek()
        if token is None:
            last = self._tokens[-1] if self._tokens else None
            raise SpaceFileError(
                f"unexpected end of file, expected {what}",
                last.line if last else 1,
                last.column + len(last.text) if last else 1,
            )
        self._pos += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self._next(repr(text))
        if token.text != text:
            raise SpaceFileError(f"expected {text!r}, got {token.text!r}", token.line, token.column)
        return token

    def _integer(self, what: str) -> int:
        token = self._next(what)
        if not re.match(r"\d+$", token.text):
            raise SpaceFileError(
                f"expected {what} (non-negative integer), got {token.text!r}",
                token.line,
                token.column,
            )
        return int(token.text)

    def parse(self) -> SpaceFile:
        header: Dict[str, object] = {}
        while self._peek() is not None and self._peek().text != "space":
            token = self._next("header")
            if token.text in header:
                raise SpaceFileError(f"duplicate {token.text} declaration", token.line, token.column)
            if token.text == "field":
                header["field"] = self._field()
            elif token.text == "ambient":
                header["ambient"] = self._integer("ambient dimension")
            elif token.text == "omega":
                header["omega"] = self._integer("omega")
            else:
                raise SpaceFileError(f"unknown declaration {token.text!r}", token.line, token.column)
        for key in ("field", "ambient", "omega"):
            if key not in header:
                raise SpaceFileError(f"missing {key} declaration", 1, 1)

        result = SpaceFile(header["field"], header["ambient"], header["omega"])
        while self._peek() is not None:
            start = self._expect("space")
            name_token = self._next("space name")
            if not _NAME.match(name_token.text):
                raise SpaceFileError(
                    f"bad space name {name_token.text!r}", name_token.line, name_token.column
                )
            if name_token.text in result.spaces:
                raise SpaceFileError(
                    f"duplicate space name {name_token.text!r}", name_token.line, name_token.column
                )
            levels = self._levels(result)
            try:
                space = make_mvspace(result.field, result.ambient, result.omega, levels)
            except NotAMultiVectorSpace as e:
                raise NotAMultiVectorSpace(
                    f"space {name_token.text} (line {start.line}): {e}", e.witness
                ) from e
            result.spaces[name_token.text] = space
        if not result.spaces:
            raise SpaceFileError("no spaces defined", 1, 1)
        log.debug("parsed %d spaces over %s^%d", len(result.spaces), result.field.tag, result.ambient)
        return result

    def _field(self) -> ScalarField:
        token = self._next("field name")
        if token.text == "Q":
            return ScalarField.rational()
        if token.text == "GF":
            p = self._integer("field characteristic")
            try:
                return ScalarField.prime(p)
            except ValueError as e:
                raise SpaceFileError(str(e), token.line, token.column) from e
        raise SpaceFileError(f"unknown field {token.text!r}", token.line, token.column)

    def _levels(self, result: SpaceFile) -> List[Tuple[int, List[Vector]]]:
        levels = []
        while True:
            token = self._next("'level' or 'end'")
            if token.text == "end":
                return levels
            if token.text != "level":
                raise SpaceFileError(
                    f"expected 'level' or 'end', got {token.text!r}", token.line, token.column
                )
            n = self._integer("level count")
            self._expect("span")
            self._expect("{")
            gens = []
            while True:
                item = self._next("vector or '}'")
                if item.text == "}":
                    break
                if item.kind != "vector":
                    raise SpaceFileError(f"expected a vector, got {item.text!r}", item.line, item.column)
                try:
                    gens.append(parse_vector(result.field, item.text, result.ambient))
                except (SpaceFileError, DimensionMismatch) as e:
                    raise SpaceFileError(str(e), item.line, item.column) from e
            levels.append((n, gens))


def parse(text: str) -> SpaceFile:
    return SpaceFileParser(text).parse()


def parse_file(file_path: str) -> SpaceFile:
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"File not found: {file_path}")
    with open(file_path, "r", encoding="utf-8") as f:
        return parse(f.read())


def serialize(spacefile: SpaceFile) -> str:
    """Canonical text: RREF generators, one level per line."""
    f = spacefile.field
    header = "field Q" if f.is_rational else f"field GF {f.p}"
    lines = [header, f"ambient {spacefile.ambient}", f"omega {spacefile.omega}"]
    for name, space in spacefile.spaces.items():
        lines.append("")
        lines.append(f"space {name}")
        lines.extend(f"  {line}" for line in space.format_lines())
        lines.append("end")
    return "\n".join(lines) + "\n"
