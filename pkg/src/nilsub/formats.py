"""Line-oriented text formats for pair objects, covering data and dimension vectors.

Pair file::

    field 5
    nilpotency 6
    partition 6 4 2
    generator e3 + e8
    generator e11 - e8

Cover file: ``field``, ``nilpotency``, ``window <lo> <hi>``, ``bottom`` and
``top`` dimension lists, then matrix blocks ``alpha <i>``, ``alphaprime <i>``
and ``beta <i>`` followed by their rows, one row per line. Blocks left out are
zero.

Box file: ``nilpotency <n>`` followed by entries::

    entry n3-07
      provenance figure for n = 3, column 4
      dimvec 0110/1221
      column 3 2
      column 1 1
      generator 1 a1x + a2
    end

Indices of ``e<k>`` and ``a<j>`` start at 1. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Set, Tuple, Union

from nilsub.covering import CoverRep
from nilsub.errors import ParseError
from nilsub.exactla import Field, Matrix, Scalar
from nilsub.kform import DimVector
from nilsub.nilmod import PairObject, Partition, make_pair

PathLike = Union[str, Path]

_PAIR_TERM = re.compile(r"^(?:(?P<coeff>[0-9/]+)\*?)?e(?P<index>\d+)$")
_BOX_TERM = re.compile(r"^(?:(?P<coeff>[0-9/]+)\*?)?a(?P<col>\d+)(?:x(?:\^(?P<power>\d+))?)?$")
_SIGNED = re.compile(r"([+-]?)([^+-]+)")


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def field_token(field: Field) -> str:
    return "Q" if field.p is None else str(field.p)


def _int(token: str, path: Optional[str], line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", path, line) from None


def _signed_terms(expr: str, path: Optional[str], line: int) -> Iterator[Tuple[int, str]]:
    compact = expr.replace(" ", "")
    if not compact:
        raise ParseError("empty linear combination", path, line)
    pos = 0
    for match in _SIGNED.finditer(compact):
        if match.start() != pos:
            raise ParseError(f"cannot parse {expr!r}", path, line)
        pos = match.end()
        yield (-1 if match.group(1) == "-" else 1), match.group(2)
    if pos != len(compact):
        raise ParseError(f"cannot parse {expr!r}", path, line)


# ---------------------------------------------------------------------------
# Pair files


def parse_pair(text: str, path: Optional[str] = None, field: Optional[Field] = None) -> PairObject:
    """Parse a pair file. ``field`` overrides a missing ``field`` line."""
    n: Optional[int] = None
    parts: Optional[List[int]] = None
    generators: List[Tuple[int, str]] = []
    for number, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        if key == "field":
            if len(args) != 1:
                raise ParseError("field takes one value", path, number)
            try:
                field = Field.parse(args[0])
            except ValueError as exc:
                raise ParseError(str(exc), path, number) from None
        elif key == "nilpotency":
            if len(args) != 1:
                raise ParseError("nilpotency takes one value", path, number)
            n = _int(args[0], path, number)
        elif key == "partition":
            parts = [_int(a, path, number) for a in args]
        elif key == "generator":
            generators.append((number, " ".join(args)))
        else:
            raise ParseError(f"unknown key {key!r}", path, number)
    if field is None:
        raise ParseError("missing field line", path)
    if n is None:
        raise ParseError("missing nilpotency line", path)
    if parts is None:
        raise ParseError("missing partition line", path)
    try:
        partition = Partition(tuple(parts), n)
    except ValueError as exc:
        raise ParseError(str(exc), path) from None
    rows: List[List[Scalar]] = []
    for number, expr in generators:
        row = [field.zero] * partition.total
        for sign, term in _signed_terms(expr, path, number):
            match = _PAIR_TERM.match(term)
            if match is None:
                raise ParseError(f"bad term {term!r}, expected [coeff*]e<k>", path, number)
            index = int(match.group("index"))
            if not 1 <= index <= partition.total:
                raise ParseError(f"e{index} outside 1..{partition.total}", path, number)
            coeff = _coefficient(field, match.group("coeff"), sign, path, number)
            row[index - 1] = field.add(row[index - 1], coeff)
        rows.append(row)
    return make_pair(field, n, partition, rows)


def _coefficient(field: Field, text: Optional[str], sign: int, path: Optional[str], line: int) -> Scalar:
    try:
        value = field.parse_element(text) if text else field.one
    except ValueError as exc:
        raise ParseError(str(exc), path, line) from None
    return value if sign > 0 else field.neg(value)


def _format_combination(field: Field, row: List[Scalar], symbol: str) -> str:
    out: List[str] = []
    for k, value in enumerate(row):
        if value == field.zero:
            continue
        text = field.format_element(value)
        sign = "+"
        if text.startswith("-"):
            sign, text = "-", text[1:]
        term = f"{symbol}{k + 1}" if text == "1" else f"{text}*{symbol}{k + 1}"
        out.append(f"{sign} {term}")
    joined = " ".join(out)
    return joined[2:] if joined.startswith("+ ") else joined


def format_pair(x: PairObject) -> str:
    lines = [
        f"field {field_token(x.field)}",
        f"nilpotency {x.n}",
        "partition " + " ".join(str(p) for p in x.partition.parts),
    ]
    for row in x.subspace.tolist():
        lines.append("generator " + _format_combination(x.field, row, "e"))
    return "\n".join(lines) + "\n"


def read_pair(path: PathLike, field: Optional[Field] = None) -> PairObject:
    return parse_pair(Path(path).read_text(encoding="utf-8"), str(path), field)


def write_pair(x: PairObject, path: PathLike) -> None:
    Path(path).write_text(format_pair(x), encoding="utf-8")


# ---------------------------------------------------------------------------
# Cover files


def parse_cover(text: str, path: Optional[str] = None, field: Optional[Field] = None) -> CoverRep:
    """Parse a cover file; the result is not validated."""
    n: Optional[int] = None
    window: Optional[Tuple[int, int]] = None
    dims: Dict[str, List[int]] = {}
    blocks: Dict[Tuple[str, int], List[Tuple[int, List[str]]]] = {}
    current: Optional[Tuple[str, int]] = None
    for number, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        if key == "field":
            try:
                field = Field.parse(args[0] if args else "")
            except ValueError as exc:
                raise ParseError(str(exc), path, number) from None
            current = None
        elif key == "nilpotency":
            n = _int(args[0] if args else "", path, number)
            current = None
        elif key == "window":
            if len(args) != 2:
                raise ParseError("window takes <lo> <hi>", path, number)
            window = (_int(args[0], path, number), _int(args[1], path, number))
            current = None
        elif key in ("bottom", "top"):
            dims[key] = [_int(a, path, number) for a in args]
            current = None
        elif key in ("alpha", "alphaprime", "beta"):
            if len(args) != 1:
                raise ParseError(f"{key} takes one index", path, number)
            current = (key, _int(args[0], path, number))
            if current in blocks:
                raise ParseError(f"duplicate block {key} {current[1]}", path, number)
            blocks[current] = []
        elif current is not None:
            blocks[current].append((number, tokens))
        else:
            raise ParseError(f"unknown key {key!r}", path, number)
    if field is None or n is None or window is None:
        raise ParseError("cover files need field, nilpotency and window lines", path)
    lo, hi = window
    width = hi - lo + 1
    bottom = dims.get("bottom", [0] * width)
    top = dims.get("top", [0] * width)
    if len(bottom) != width or len(top) != width:
        raise ParseError(f"bottom and top need {width} entries for window {lo}..{hi}", path)

    def d(row: List[int], i: int) -> int:
        return row[i - lo] if lo <= i <= hi else 0

    def matrix(kind: str, i: int, rows: int, cols: int) -> Matrix:
        data = blocks.pop((kind, i), None)
        if data is None:
            return Matrix.zeros(field, rows, cols)
        if len(data) != rows:
            where = data[0][0] if data else None
            raise ParseError(f"{kind} {i} needs {rows} rows, got {len(data)}", path, where)
        values: List[List[Scalar]] = []
        for number, tokens in data:
            if len(tokens) != cols:
                raise ParseError(f"{kind} {i} needs {cols} columns, got {len(tokens)}", path, number)
            try:
                values.append([field.parse_element(t) for t in tokens])
            except ValueError as exc:
                raise ParseError(str(exc), path, number) from None
        return Matrix.from_rows(field, values, cols)

    idx = range(lo, hi + 1)
    alpha = tuple(matrix("alpha", i, d(bottom, i - 1), d(bottom, i)) for i in idx)
    alpha_prime = tuple(matrix("alphaprime", i, d(top, i - 1), d(top, i)) for i in idx)
    beta = tuple(matrix("beta", i, d(bottom, i), d(top, i)) for i in idx)
    if blocks:
        kind, i = next(iter(blocks))
        raise ParseError(f"block {kind} {i} lies outside the window {lo}..{hi}", path)
    return CoverRep(field, n, lo, tuple(bottom), tuple(top), alpha, alpha_prime, beta)


def format_cover(r: CoverRep) -> str:
    lines = [
        f"field {field_token(r.field)}",
        f"nilpotency {r.n}",
        f"window {r.lo} {r.hi}",
        "bottom " + " ".join(map(str, r.bottom)),
        "top " + " ".join(map(str, r.top)),
    ]
    for kind, getter in (("alpha", r.alpha_at), ("alphaprime", r.alpha_prime_at), ("beta", r.beta_at)):
        for i in r.indices:
            mat = getter(i)
            if mat.rows == 0 or mat.cols == 0 or mat.is_zero():
                continue
            lines.append(f"{kind} {i}")
            lines.extend(mat.format().splitlines())
    return "\n".join(lines) + "\n"


def read_cover(path: PathLike, field: Optional[Field] = None) -> CoverRep:
    return parse_cover(Path(path).read_text(encoding="utf-8"), str(path), field)


def write_cover(r: CoverRep, path: PathLike) -> None:
    Path(path).write_text(format_cover(r), encoding="utf-8")


# ---------------------------------------------------------------------------
# Dimension vectors


def parse_dimvec(text: str) -> DimVector:
    """Parse ``dimvec a..b | bottom: ... | top: ...`` or the compact ``top/bottom`` form.

    The compact form may carry a start index as ``01221000/01233210@-2``.
    """
    text = text.strip()
    if text.startswith("dimvec"):
        sections = [s.strip() for s in text[len("dimvec"):].split("|")]
        if len(sections) != 3:
            raise ParseError(f"expected 'dimvec a..b | bottom: ... | top: ...', got {text!r}")
        lo_text, _, hi_text = sections[0].partition("..")
        try:
            lo, hi = int(lo_text), int(hi_text)
            rows = {}
            for section in sections[1:]:
                name, _, values = section.partition(":")
                rows[name.strip()] = tuple(int(v) for v in values.split())
        except ValueError:
            raise ParseError(f"bad dimension vector {text!r}") from None
        bottom, top = rows.get("bottom"), rows.get("top")
        if bottom is None or top is None or len(bottom) != hi - lo + 1 or len(top) != hi - lo + 1:
            raise ParseError(f"bottom and top need {hi - lo + 1} entries in {text!r}")
        return DimVector(lo, bottom, top)
    body, _, lo_text = text.partition("@")
    try:
        return DimVector.from_digits(body, int(lo_text) if lo_text else 0)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_dimvec(x: DimVector) -> str:
    if x.is_zero():
        return "dimvec 0..-1 | bottom: | top:"
    return (
        f"dimvec {x.lo}..{x.hi} | bottom: {' '.join(map(str, x.bottom))}"
        f" | top: {' '.join(map(str, x.top))}"
    )


# ---------------------------------------------------------------------------
# Box files


class BoxTerm(NamedTuple):
    column: int
    power: int
    coeff: str
    sign: int


class BoxDiagram(NamedTuple):
    """One entry of a box file; columns and terms are 0-based, coefficients unparsed."""

    id: str
    provenance: str
    dimvec: Optional[DimVector]
    columns: List[Tuple[int, int]]
    generators: List[Tuple[int, List[BoxTerm]]]
    line: int


def parse_box_file(text: str, path: Optional[str] = None) -> Tuple[int, List[BoxDiagram]]:
    """Parse a box file into its nilpotency bound and entries."""
    n: Optional[int] = None
    entries: List[BoxDiagram] = []
    current: Optional[Dict[str, object]] = None
    seen: Set[str] = set()
    for number, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        if key == "nilpotency" and current is None:
            n = _int(args[0] if args else "", path, number)
        elif key == "entry":
            if current is not None:
                raise ParseError("entry inside an entry", path, number)
            if len(args) != 1:
                raise ParseError("entry takes one id", path, number)
            if args[0] in seen:
                raise ParseError(f"duplicate entry id {args[0]!r}", path, number)
            seen.add(args[0])
            current = {"id": args[0], "provenance": "", "dimvec": None, "columns": [],
                       "generators": [], "line": number}
        elif current is None:
            raise ParseError(f"{key!r} outside an entry", path, number)
        elif key == "provenance":
            current["provenance"] = " ".join(args)
        elif key == "dimvec":
            try:
                current["dimvec"] = parse_dimvec(" ".join(args))
            except ParseError as exc:
                raise ParseError(str(exc), path, number) from None
        elif key == "column":
            if len(args) != 2:
                raise ParseError("column takes <length> <top index>", path, number)
            columns = current["columns"]
            assert isinstance(columns, list)
            columns.append((_int(args[0], path, number), _int(args[1], path, number)))
        elif key == "generator":
            if len(args) < 2:
                raise ParseError("generator takes <index> <terms>", path, number)
            index = _int(args[0], path, number)
            terms: List[BoxTerm] = []
            for sign, term in _signed_terms(" ".join(args[1:]), path, number):
                match = _BOX_TERM.match(term)
                if match is None:
                    raise ParseError(f"bad term {term!r}, expected [coeff*]a<j>[x^<k>]", path, number)
                power_text = match.group("power")
                has_x = "x" in term
                power = int(power_text) if power_text else (1 if has_x else 0)
                terms.append(BoxTerm(int(match.group("col")) - 1, power, match.group("coeff") or "1", sign))
            generators = current["generators"]
            assert isinstance(generators, list)
            generators.append((index, terms))
        elif key == "end":
            entries.append(
                BoxDiagram(
                    str(current["id"]),
                    str(current["provenance"]),
                    current["dimvec"],  # type: ignore[arg-type]
                    current["columns"],  # type: ignore[arg-type]
                    current["generators"],  # type: ignore[arg-type]
                    int(current["line"]),  # type: ignore[call-overload]
                )
            )
            current = None
        else:
            raise ParseError(f"unknown key {key!r}", path, number)
    if current is not None:
        raise ParseError(f"entry {current['id']} is not closed", path)
    if n is None:
        raise ParseError("missing nilpotency line", path)
    return n, entries


def format_box_entry(entry: BoxDiagram) -> str:
    lines = [f"entry {entry.id}"]
    if entry.provenance:
        lines.append(f"  provenance {entry.provenance}")
    if entry.dimvec is not None:
        lines.append(f"  dimvec {entry.dimvec.digits()}")
    for length, top in entry.columns:
        lines.append(f"  column {length} {top}")
    for index, terms in entry.generators:
        parts = []
        for term in terms:
            power = "" if term.power == 0 else ("x" if term.power == 1 else f"x^{term.power}")
            coeff = "" if term.coeff == "1" else f"{term.coeff}*"
            parts.append(("- " if term.sign < 0 else "+ ") + f"{coeff}a{term.column + 1}{power}")
        body = " ".join(parts)
        lines.append(f"  generator {index} {body[2:] if body.startswith('+ ') else body}")
    lines.append("end")
    return "\n".join(lines) + "\n"
