"""Instance files: parsing and serialization.

Grammar (``#`` starts a comment, blank lines are ignored)::

    file     := header nline (matrix | block+)
    header   := "field" "p=" INT "m=" INT ["modulus=" INT ("," INT)*]
    nline    := "n=" INT
    matrix   := row{n}                      rows of Laurent polynomials in x
    block    := "place" ("inf" | "a=" const) row{n}   rational entries in t
    row      := expr (";" expr){n-1}
    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("+" | "-") unary | power
    power    := atom ["^" ["-"] INT]
    atom     := INT | "x" | "t" | "a" | "(" expr ")"

``a`` is the generator of F_q over F_p (only when m > 1).  Places absent
from an adele file carry the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .adele import AdeleMat
from .errors import BirkhoffError, ParseError, SingularInput
from .ff import FieldSpec, FqElem
from .matgl import LAURENT, MatG, det
from .series import LaurentPoly, Place, RatFun

_TOKEN = re.compile(r"\s*(?:(\d+)|([xta])|(\^|\*|/|\+|-|\(|\)))")


@dataclass
class _Tok:
    kind: str  # int, sym, op, end
    text: str
    col: int


def _tokenize(text: str, line: int | None, col0: int) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
        start = m.start(m.lastindex)
        kind = ("int", "sym", "op")[m.lastindex - 1]
        toks.append(_Tok(kind, m.group(m.lastindex), col0 + start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text) + 1))
    return toks


class _Parser:
    """Recursive descent over one entry; ``var`` is 'x' (Laurent) or 't' (rational)."""

    def __init__(self, text: str, field: FieldSpec, var: str, line=None, col0=0):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.field, self.var, self.line = field, var, line

    def err(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        return ParseError(msg, self.line, tok.col)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def const(self, c):
        return LaurentPoly.constant(self.field, c) if self.var == "x" else RatFun.constant(self.field, c)

    def parse(self):
        if self.peek().kind == "end":
            raise self.err("empty entry")
        v = self.expr()
        if self.peek().kind != "end":
            raise self.err(f"unexpected {self.peek().text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            w = self.unary()
            if tok.text == "*":
                v = v * w
                continue
            try:
                v = v / w
            except (ZeroDivisionError, ArithmeticError, ValueError, BirkhoffError) as exc:
                raise self.err(f"cannot divide here: {exc}", tok) from None
        return v

    def unary(self):
        if self.peek().text in ("+", "-"):
            op = self.take().text
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text != "^":
            return base
        tok = self.take()
        sign = 1
        if self.peek().text == "-":
            self.take()
            sign = -1
        e = self.take()
        if e.kind != "int":
            raise self.err("exponent must be an integer", e)
        try:
            return base ** (sign * int(e.text))
        except (ZeroDivisionError, ArithmeticError, ValueError, BirkhoffError) as exc:
            raise self.err(f"bad power: {exc}", tok) from None

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.const(int(tok.text))
        if tok.kind == "sym":
            if tok.text == "a":
                if self.field.m == 1:
                    raise self.err("symbol 'a' needs an extension field (m > 1)", tok)
                return self.const(self.field.gen())
            if tok.text != self.var:
                raise self.err(f"variable {tok.text!r} not allowed here (use {self.var!r})", tok)
            if self.var == "x":
                return LaurentPoly.monomial(self.field, 1)
            return RatFun.t(self.field)
        if tok.text == "(":
            v = self.expr()
            if self.take().text != ")":
                raise self.err("expected ')'", self.toks[self.i - 1])
            return v
        raise self.err(f"unexpected {tok.text or 'end of entry'!r}", tok)


def parse_entry(text: str, field: FieldSpec, var: str = "x", line=None, col0=0):
    """A Laurent polynomial in x (var='x') or a rational function of t (var='t')."""
    return _Parser(text, field, var, line, col0).parse()


def parse_fq(text: str, field: FieldSpec, line=None, col0=0) -> FqElem:
    v = parse_entry(text, field, "x", line, col0)
    if not (v.is_zero() or v.is_constant()):
        raise ParseError("expected a field element", line, col0 + 1)
    return v.coeff(0)


# --- whole files ----------------------------------------------------------------

_HEADER = re.compile(r"^field\s+p\s*=\s*(\d+)\s+m\s*=\s*(\d+)(?:\s+modulus\s*=\s*([\d\s,]+))?\s*$")
_NLINE = re.compile(r"^n\s*=\s*(\d+)\s*$")
_PLACE = re.compile(r"^place\s+(?:(inf)|a\s*=\s*(.+?))\s*$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, body


def parse_header(line_no: int, body: str) -> FieldSpec:
    m = _HEADER.match(body.strip())
    if not m:
        raise ParseError("expected 'field p=<int> m=<int> [modulus=c0,...,cm]'", line_no, 1)
    p, deg = int(m.group(1)), int(m.group(2))
    modulus = None
    if m.group(3):
        try:
            modulus = [int(c) for c in m.group(3).replace(" ", "").split(",")]
        except ValueError:
            raise ParseError("malformed modulus list", line_no, body.index("modulus") + 1) from None
    return FieldSpec(p, deg, modulus)


def _parse_row(body: str, n: int, field: FieldSpec, var: str, line_no: int) -> list:
    cells, start = [], 0
    for part in body.split(";"):
        cells.append((part, start))
        start += len(part) + 1
    if len(cells) != n:
        raise ParseError(f"expected {n} entries separated by ';', found {len(cells)}", line_no, 1)
    return [parse_entry(txt, field, var, line_no, col) for txt, col in cells]


def parse_instance(text: str, check_singular: bool = True):
    """(FieldSpec, MatG) for a local file, or (FieldSpec, AdeleMat) for a place file."""
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty instance", 1, 1)
    field = parse_header(*lines[0])
    if len(lines) < 2:
        raise ParseError("missing 'n=<int>' line", lines[0][0] + 1, 1)
    no, body = lines[1]
    m = _NLINE.match(body.strip())
    if not m or int(m.group(1)) < 1:
        raise ParseError("expected 'n=<int>' with n >= 1", no, 1)
    n = int(m.group(1))
    rest = lines[2:]
    if rest and rest[0][1].strip().startswith("place"):
        return field, _parse_adele(rest, field, n, check_singular)
    if len(rest) != n:
        where = rest[n][0] if len(rest) > n else (rest[-1][0] + 1 if rest else no + 1)
        raise ParseError(f"expected {n} matrix rows, found {len(rest)}", where, 1)
    rows = [_parse_row(b, n, field, "x", ln) for ln, b in rest]
    g = MatG(rows, field, LAURENT)
    if check_singular and det(g).is_zero():
        raise SingularInput("matrix is singular (determinant is 0)")
    return field, g


def _parse_adele(lines, field: FieldSpec, n: int, check_singular: bool) -> AdeleMat:
    comps: dict[Place, MatG] = {}
    i = 0
    while i < len(lines):
        no, body = lines[i]
        m = _PLACE.match(body.strip())
        if not m:
            raise ParseError("expected 'place inf' or 'place a=<element>'", no, 1)
        if m.group(1):
            v = Place.infinity()
        else:
            v = Place(parse_fq(m.group(2), field, no, body.index(m.group(2))))
        if v in comps:
            raise ParseError(f"place {v} listed twice", no, 1)
        block = lines[i + 1 : i + 1 + n]
        if len(block) < n or any(b.strip().startswith("place") for _, b in block):
            raise ParseError(f"place {v} needs {n} rows", no, 1)
        rows = [_parse_row(b, n, field, "t", ln) for ln, b in block]
        g = MatG(rows, field)
        if check_singular and det(g).is_zero():
            raise SingularInput(f"component at place {v} is singular")
        comps[v] = g
        i += 1 + n
    return AdeleMat(field, n, comps)


def format_entry(x) -> str:
    if isinstance(x, RatFun):
        return x.format()
    return x.format("x")


def serialize_matrix(g: MatG, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or []]
    out.append(g.field.header())
    out.append(f"n={g.n}")
    out += ["; ".join(format_entry(x) for x in r) for r in g.rows]
    return "\n".join(out) + "\n"


def serialize_adele(A: AdeleMat, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or []]
    out.append(A.field.header())
    out.append(f"n={A.n}")
    for v in A.support:
        out.append(f"place {v}")
        out += ["; ".join(format_entry(x) for x in r) for r in A.components[v].rows]
    return "\n".join(out) + "\n"


def parse_place(text: str, field: FieldSpec) -> Place:
    text = text.strip()
    if text == "inf":
        return Place.infinity()
    if not text.startswith("a="):
        raise ParseError(f"bad place {text!r}")
    return Place(parse_fq(text[2:], field))


def matrix_to_strings(g: MatG) -> list[list[str]]:
    return [[format_entry(x) for x in r] for r in g.rows]


def matrix_from_strings(rows, field: FieldSpec, var: str) -> MatG:
    try:
        return MatG([[parse_entry(s, field, var) for s in r] for r in rows], field)
    except (TypeError, BirkhoffError) as exc:
        raise ParseError(f"bad matrix in witness: {exc}") from None
