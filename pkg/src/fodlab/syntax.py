"""Text syntax for polynomials and maps.

Grammar::

    map     := '[' [expr (';' expr)*] ']' ':' INT '->' INT
    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := atom ['^' INT]
    atom    := INT ['/' INT] | 'x' INT | '(' expr ')'

Whitespace is insignificant. Errors carry the byte offset of the offending
token.
"""
from __future__ import annotations

import re

from .poly import Poly, PolyMap, Rational


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<arrow>->)|(?P<op>[-+*^/()\[\];:]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    data = text.encode("utf-8")
    src = data.decode("ascii", errors="replace")
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(f"unexpected character {src[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(data)))
    return tokens


class _Parser:
    def __init__(self, text: str, arity: int | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.arity = arity
        self.max_var = -1

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def integer(self) -> int:
        kind, val, off = self.next()
        if kind != "num":
            raise ParseError(f"expected an integer, found {val or 'end of input'!r}", off)
        return int(val)

    # polynomials are built as dicts over an open set of variable indices
    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if val in "+-" and kind == "op":
            self.next()
            sign = -1 if val == "-" else 1
        acc = _scale(self.term(), sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                acc = _add(acc, _scale(self.term(), -1 if val == "-" else 1))
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek()[1] == "*":
            self.next()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.next()
            n = self.integer()
            out = {(): Rational(1)}
            for _ in range(n):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        kind, val, off = self.next()
        if kind == "num":
            num = int(val)
            if self.peek()[1] == "/":
                self.next()
                _, dval, doff = self.peek()
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", doff)
                return {(): Rational(num, den)}
            return {(): Rational(num)}
        if kind == "var":
            idx = int(val[1:])
            if self.arity is not None and idx >= self.arity:
                raise ParseError(f"variable {val} out of range for arity {self.arity}", off)
            self.max_var = max(self.max_var, idx)
            return {((idx, 1),): Rational(1)}
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", off)


# sparse monomials: tuple of sorted (var, exp) pairs


def _add(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _scale(a, s):
    return {k: c * s for k, c in a.items()} if s != 1 else a


def _mul(a, b):
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            d = dict(k1)
            for v, e in k2:
                d[v] = d.get(v, 0) + e
            k = tuple(sorted(d.items()))
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _to_poly(sparse, arity: int) -> Poly:
    from .poly import normalize

    terms = []
    for mono, c in sparse.items():
        e = [0] * arity
        for v, k in mono:
            e[v] += k
        terms.append((e, c))
    return normalize(terms, arity)


def parse_poly(text: str, arity: int) -> Poly:
    p = _Parser(text, arity)
    sparse = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", off)
    return _to_poly(sparse, arity)


def parse_map(text: str) -> PolyMap:
    """Parse ``[e0; e1; ...] : m -> n``."""
    p = _Parser(text, None)
    p.expect("[")
    comps = []
    starts = []
    if p.peek()[1] != "]":
        while True:
            starts.append(p.peek()[2])
            comps.append(p.expr())
            if p.peek()[1] == ";":
                p.next()
                continue
            break
    p.expect("]")
    p.expect(":")
    dom_off = p.peek()[2]
    dom = p.integer()
    p.expect("->")
    cod_off = p.peek()[2]
    cod = p.integer()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", off)
    if p.max_var >= dom:
        raise ParseError(f"variable x{p.max_var} out of range for domain {dom}", dom_off)
    if len(comps) != cod:
        raise ParseError(f"{len(comps)} components but codomain {cod}", cod_off)
    return PolyMap(dom, cod, tuple(_to_poly(c, dom) for c in comps))


def _format_coeff(c: Rational) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.items():
        mono = "*".join(
            f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k
        )
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts)


def format_map(f: PolyMap) -> str:
    return "[" + "; ".join(format_poly(p) for p in f.components) + f"] : {f.dom} -> {f.cod}"


def parse_matrix(text: str) -> list[list[Rational]]:
    """Rows separated by ``;``, entries by ``,``; entries are integers or ``p/q``."""
    rows = [r for r in text.split(";")]
    out = []
    for r in rows:
        r = r.strip()
        if not r:
            continue
        try:
            out.append([Rational(x.strip()) for x in r.split(",")])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad matrix entry in {r!r}: {exc}") from None
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("ragged matrix")
    return out
