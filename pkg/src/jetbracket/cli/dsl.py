"""A small line-oriented language for PDE systems.

    system NAME
    base x y
    unknown u v
    param P [diff x -> EXPR, y -> EXPR]
    invertible EXPR
    eq NAME [order K] = EXPR

Expressions use rational literals (``3/2``), base variables, jets ``u[1,0]``
(a bare ``u`` is the zero jet), ``+ - * ^`` and parentheses.  ``#`` starts a
comment.  Jets of a parameter that has rules are expanded through them; inside
rule bodies only the rules of earlier ``param`` lines apply.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..jetcalc import DiffPoly, JetError, Universe
from ..system import PDESystem


class ParseError(JetError):
    """A diagnostic pinned to a line and column (both 1-based)."""

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {kind} error: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<op>[-+*^()\[\],=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str     # num, name, arrow, op, end
    text: str
    line: int
    col: int


def tokenize(text: str, line: int, col0: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise ParseError("lexical", f"unexpected character {text[pos]!r}", line, col0 + pos)
        if mt.lastgroup != "ws":
            out.append(Token(mt.lastgroup, mt.group(), line, col0 + pos))
        pos = mt.end()
    out.append(Token("end", "", line, col0 + len(text)))
    return out


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            raise ParseError("syntax", f"expected {text!r}, found {_describe(tok)}", tok.line, tok.col)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError("syntax", f"expected {what}, found {_describe(tok)}", tok.line, tok.col)
        return self.next()

    def finish(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError("syntax", f"unexpected {_describe(tok)}", tok.line, tok.col)


def _describe(tok: Token) -> str:
    return "end of line" if tok.kind == "end" else repr(tok.text)


class _ExprParser:
    """Recursive descent: sum := term (('+'|'-') term)*, term := unary ('*' unary)*,
    unary := '-' unary | power, power := atom ('^' integer)?"""

    def __init__(self, universe: Universe, cur: _Cursor):
        self.u = universe
        self.cur = cur

    def parse(self) -> DiffPoly:
        return self.sum()

    def sum(self) -> DiffPoly:
        acc = self.term()
        while True:
            if self.cur.accept("+"):
                acc = acc + self.term()
            elif self.cur.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> DiffPoly:
        acc = self.unary()
        while self.cur.accept("*"):
            acc = acc * self.unary()
        return acc

    def unary(self) -> DiffPoly:
        if self.cur.accept("-"):
            return -self.unary()
        if self.cur.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> DiffPoly:
        base = self.atom()
        if self.cur.accept("^"):
            tok = self.cur.expect_kind("num", "a non-negative integer exponent")
            if "/" in tok.text:
                raise ParseError("syntax", "exponents must be integers", tok.line, tok.col)
            return base ** int(tok.text)
        return base

    def atom(self) -> DiffPoly:
        tok = self.cur.next()
        if tok.kind == "num":
            num, _, den = tok.text.partition("/")
            if den and int(den) == 0:
                raise ParseError("syntax", "zero denominator", tok.line, tok.col)
            return self.u.const(Fraction(int(num), int(den or 1)))
        if tok.text == "(" and tok.kind == "op":
            inner = self.sum()
            self.cur.expect(")")
            return inner
        if tok.kind == "name":
            return self.identifier(tok)
        raise ParseError("syntax", f"expected an expression, found {_describe(tok)}", tok.line, tok.col)

    def identifier(self, tok: Token) -> DiffPoly:
        u = self.u
        if tok.text in u.base:
            if self.cur.peek().text == "[":
                t = self.cur.peek()
                raise ParseError("arity", f"base variable {tok.text!r} takes no index", t.line, t.col)
            return u.x(tok.text)
        if tok.text not in u.symbols:
            raise ParseError("unknown-identifier", f"{tok.text!r} is not declared", tok.line, tok.col)
        if not self.cur.accept("["):
            return u.jet(tok.text)
        index = []
        while True:
            t = self.cur.expect_kind("num", "a derivative count")
            if "/" in t.text:
                raise ParseError("syntax", "derivative counts must be integers", t.line, t.col)
            index.append(int(t.text))
            if self.cur.accept("]"):
                break
            self.cur.expect(",")
        if len(index) != u.n:
            raise ParseError("arity", f"{tok.text!r} needs {u.n} indices, got {len(index)}",
                             tok.line, tok.col)
        if u.symbol_index(tok.text) in u.rules:
            # a parameter with rules: its jets are total derivatives, not new variables
            return u.jet(tok.text).multi_derivative(tuple(index))
        return u.jet(tok.text, tuple(index))


@dataclass
class SystemFile:
    """Everything a system file declares, with expressions already parsed."""

    name: str
    base: list[str]
    unknowns: list[str]
    params: list[tuple[str, dict[str, DiffPoly]]]
    invertibles: list[DiffPoly]
    equations: list[tuple[str, DiffPoly, int | None]]
    universe: Universe = field(repr=False)
    _system: PDESystem | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def m(self) -> int:
        return len(self.unknowns)

    def canonical(self) -> tuple:
        return (self.name, tuple(self.base), tuple(self.unknowns),
                tuple((p, tuple((d, str(e)) for d, e in rules.items())) for p, rules in self.params),
                tuple(str(d) for d in self.invertibles),
                tuple((nm, str(e), k) for nm, e, k in self.equations))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SystemFile) and self.canonical() == other.canonical()

    def system(self) -> PDESystem:
        """The system, built once; declared invertibles register inverse symbols."""
        if self._system is None:
            self._system = PDESystem.build(self.name, self.universe,
                                           [(nm, e) for nm, e, _ in self.equations],
                                           self.invertibles)
        return self._system


_KEYWORDS = ("system", "base", "unknown", "param", "invertible", "eq")


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def parse(text: str) -> SystemFile:
    """Parse a system file; raises :class:`ParseError` with a position."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if body.strip():
            lines.append((lineno, tokenize(body, lineno)))

    # first pass: declarations, so expressions may mention later parameters
    name = None
    base: list[str] | None = None
    unknowns: list[str] | None = None
    param_lines = []
    expr_lines = []
    seen: dict[str, Token] = {}

    def declare(tok: Token) -> str:
        if tok.text in _KEYWORDS:
            raise ParseError("syntax", f"{tok.text!r} is a keyword", tok.line, tok.col)
        if tok.text in seen:
            raise ParseError("syntax", f"{tok.text!r} is already declared", tok.line, tok.col)
        seen[tok.text] = tok
        return tok.text

    for lineno, toks in lines:
        cur = _Cursor(toks)
        head = cur.expect_kind("name", "a keyword")
        kw = head.text
        if kw == "system":
            if name is not None:
                raise ParseError("syntax", "system declared twice", head.line, head.col)
            name = cur.expect_kind("name", "a system name").text
            cur.finish()
        elif kw in ("base", "unknown"):
            if (base if kw == "base" else unknowns) is not None:
                raise ParseError("syntax", f"{kw} declared twice", head.line, head.col)
            names = []
            while cur.peek().kind == "name":
                names.append(declare(cur.next()))
            cur.finish()
            if not names:
                raise ParseError("syntax", f"{kw} needs at least one name", head.line, head.col)
            if kw == "base":
                base = names
            else:
                unknowns = names
        elif kw == "param":
            pname = declare(cur.expect_kind("name", "a parameter name"))
            param_lines.append((pname, cur))
        elif kw in ("invertible", "eq"):
            expr_lines.append((kw, head, cur))
        else:
            raise ParseError("syntax", f"unknown keyword {kw!r}", head.line, head.col)

    end = Token("end", "", lines[-1][0] + 1 if lines else 1, 1)
    if name is None:
        raise ParseError("syntax", "missing 'system NAME'", end.line, end.col)
    if base is None:
        raise ParseError("syntax", "missing 'base' declaration", end.line, end.col)
    if unknowns is None:
        raise ParseError("syntax", "missing 'unknown' declaration", end.line, end.col)

    universe = Universe(base, unknowns, [p for p, _ in param_lines])
    params = []
    for pname, cur in param_lines:
        rules: dict[str, DiffPoly] = {}
        if cur.accept("["):
            cur.expect("diff")
            while True:
                d = cur.expect_kind("name", "a base variable")
                if d.text not in base:
                    raise ParseError("unknown-identifier", f"{d.text!r} is not a base variable",
                                     d.line, d.col)
                if d.text in rules:
                    raise ParseError("syntax", f"rule for {d.text!r} given twice", d.line, d.col)
                cur.expect("->")
                rules[d.text] = _ExprParser(universe, cur).parse()
                if cur.accept("]"):
                    break
                cur.expect(",")
        cur.finish()
        for d, e in rules.items():
            universe.set_rule(pname, d, e)
        params.append((pname, dict(sorted(rules.items(), key=lambda kv: base.index(kv[0])))))

    invertibles: list[DiffPoly] = []
    equations: list[tuple[str, DiffPoly, int | None]] = []
    for kw, head, cur in expr_lines:
        if kw == "invertible":
            tok = cur.peek()
            e = _ExprParser(universe, cur).parse()
            cur.finish()
            if e.is_zero():
                raise ParseError("syntax", "cannot declare zero invertible", tok.line, tok.col)
            invertibles.append(e)
            continue
        ntok = cur.expect_kind("name", "an equation name")
        if ntok.text in seen:
            raise ParseError("syntax", f"{ntok.text!r} is already declared", ntok.line, ntok.col)
        seen[ntok.text] = ntok
        declared = None
        if cur.accept("order"):
            k = cur.expect_kind("num", "an order")
            declared = int(k.text.partition("/")[0])
        cur.expect("=")
        tok = cur.peek()
        e = _ExprParser(universe, cur).parse()
        cur.finish()
        if e.is_zero():
            raise ParseError("syntax", f"equation {ntok.text} is identically zero", tok.line, tok.col)
        if declared is not None and e.order() != declared:
            raise ParseError("order", f"{ntok.text} has order {e.order()}, declared {declared}",
                             ntok.line, ntok.col)
        equations.append((ntok.text, e, declared))
    if not equations:
        raise ParseError("syntax", "no equations", end.line, end.col)
    return SystemFile(name, base, unknowns, params, invertibles, equations, universe)


def pretty(sf: SystemFile) -> str:
    """Canonical text; ``parse(pretty(sf)) == sf``."""
    out = [f"system {sf.name}", "base " + " ".join(sf.base), "unknown " + " ".join(sf.unknowns)]
    for pname, rules in sf.params:
        if rules:
            body = ", ".join(f"{d} -> {e}" for d, e in rules.items())
            out.append(f"param {pname} [diff {body}]")
        else:
            out.append(f"param {pname}")
    out.extend(f"invertible {d}" for d in sf.invertibles)
    for nm, e, k in sf.equations:
        out.append(f"eq {nm}{'' if k is None else f' order {k}'} = {e}")
    return "\n".join(out) + "\n"
