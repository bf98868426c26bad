"""Expression language for mixed polynomials.

Grammar::

    expr  := term (("+" | "-") term)*
    term  := unary ("*" unary)*
    unary := "-" unary | power
    power := atom ("^" nat)?
    atom  := "z" | "zb" | "w" | "wb" | "i" | "nsq" | number | func | "(" expr ")"
    func  := ("Re" | "Im" | "conj" | "abs2") "(" expr ")"
    number := nat ("/" nat)?

``abs2(e)`` is ``e * conj(e)`` and ``nsq`` is ``z*zb + w*wb``. There is no
implicit multiplication and no floating-point literal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional

from .algebra import GaussianRational, MixedPolynomial, norm_power

ATOM_NAMES = {"z", "zb", "w", "wb", "i", "nsq"}
FUNCTIONS = {"Re", "Im", "conj", "abs2"}
ATOM_START = frozenset({"z", "zb", "w", "wb", "i", "nsq", "number", "Re", "Im", "conj", "abs2", "(", "-"})


class ParseError(ValueError):
    """Syntax error carrying a 1-based line/column and the expected tokens."""

    def __init__(self, message: str, line: int, column: int, expected: FrozenSet[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(text)


class NegativeExponentError(ParseError):
    pass


class NonIntegerExponentError(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "float", "ident", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        start_col = col
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and src[j].isascii() and src[j].isdigit():
                j += 1
            kind = "num"
            if j + 1 < n and src[j] == "." and src[j + 1].isascii() and src[j + 1].isdigit():
                j += 1
                while j < n and src[j].isascii() and src[j].isdigit():
                    j += 1
                kind = "float"
            tokens.append(Token(kind, src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isascii() and ch.isalpha():
            j = i
            while j < n and src[j].isascii() and src[j].isalnum():
                j += 1
            tokens.append(Token("ident", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in "+-*^/()":
            tokens.append(Token("op", ch, line, start_col))
            i, col = i + 1, col + 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_op(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def fail(self, message: str, expected=frozenset(), tok: Optional[Token] = None):
        t = tok or self.tok
        raise ParseError(message, t.line, t.column, expected)

    def describe(self, t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    def expect_op(self, text: str):
        if not self.at_op(text):
            self.fail(f"unexpected {self.describe(self.tok)}", {text})
        self.advance()

    def parse(self) -> MixedPolynomial:
        result = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.describe(self.tok)}", {"+", "-", "*", "^", "end of input"})
        return result

    def expr(self) -> MixedPolynomial:
        acc = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.advance().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MixedPolynomial:
        acc = self.unary()
        while self.at_op("*"):
            self.advance()
            acc = acc * self.unary()
        return acc

    def unary(self) -> MixedPolynomial:
        if self.at_op("-"):
            self.advance()
            return -self.unary()
        return self.power()

    def power(self) -> MixedPolynomial:
        start = self.tok
        is_nsq = start.kind == "ident" and start.text == "nsq"
        base = self.atom()
        if not self.at_op("^"):
            return base
        self.advance()
        t = self.tok
        if t.kind == "op" and t.text == "-":
            raise NegativeExponentError("negative exponent", t.line, t.column, {"natural number"})
        if t.kind == "float":
            raise NonIntegerExponentError(f"non-integer exponent {t.text}", t.line, t.column, {"natural number"})
        if t.kind != "num":
            self.fail(f"unexpected {self.describe(t)}", {"natural number"})
        self.advance()
        if self.at_op("/"):
            bad = self.tok
            raise NonIntegerExponentError("non-integer exponent", bad.line, bad.column, {"natural number"})
        n = int(t.text)
        if is_nsq and n >= 1:
            return norm_power(n)
        return base**n

    def atom(self) -> MixedPolynomial:
        t = self.tok
        if t.kind == "num":
            self.advance()
            value = Fraction(int(t.text))
            if self.at_op("/"):
                self.advance()
                d = self.tok
                if d.kind != "num":
                    self.fail(f"unexpected {self.describe(d)}", {"natural number"})
                self.advance()
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.line, d.column)
                value = value / int(d.text)
            return MixedPolynomial.constant(value)
        if t.kind == "float":
            self.fail(f"floating-point literal {t.text} is not supported", {"natural number"})
        if t.kind == "ident":
            name = t.text
            if name in ATOM_NAMES:
                self.advance()
                if name == "i":
                    return MixedPolynomial.constant(GaussianRational(0, 1))
                if name == "nsq":
                    return norm_power(1)
                return MixedPolynomial.var(name)
            if name in FUNCTIONS:
                self.advance()
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return _apply(name, arg)
            self.fail(f"unknown identifier {name!r}", ATOM_START - {"-"})
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self.fail(f"unexpected {self.describe(t)}", ATOM_START)
        raise AssertionError("unreachable")


_HALF = GaussianRational(Fraction(1, 2))
_MINUS_HALF_I = GaussianRational(0, Fraction(-1, 2))


def _apply(name: str, e: MixedPolynomial) -> MixedPolynomial:
    if name == "conj":
        return e.conjugate()
    if name == "abs2":
        return e * e.conjugate()
    if name == "Re":
        return (e + e.conjugate()) * _HALF
    # Im(e) = (e - conj(e)) / (2i)
    return (e - e.conjugate()) * _MINUS_HALF_I


def parse(src: str) -> MixedPolynomial:
    """Parse an expression into canonical sparse form."""
    return _Parser(src).parse()


def _format_rational(x: Fraction) -> str:
    return str(x)


def _format_monomial(q) -> str:
    parts = []
    for name, e in zip(("z", "zb", "w", "wb"), q):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: MixedPolynomial) -> str:
    """Canonical text, one monomial at a time in lexicographic exponent order."""
    if p.is_zero():
        return "0"
    out: List[str] = []
    for q, c in p.items():
        mono = _format_monomial(q)
        negative = False
        if c.im == 0:
            negative = c.re < 0
            mag = -c.re if negative else c.re
            coef = "" if (mag == 1 and mono) else _format_rational(mag)
        elif c.re == 0:
            negative = c.im < 0
            mag = -c.im if negative else c.im
            coef = "i" if mag == 1 else f"{_format_rational(mag)}*i"
        else:
            sign = "-" if c.im < 0 else "+"
            coef = f"({_format_rational(c.re)}{sign}{_format_rational(abs(c.im))}*i)"
        body = "*".join(s for s in (coef, mono) if s)
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


format = format_polynomial


def parse_modulus_combination(src: str):
    """Parse ``[-]abs2(f) (+|- abs2(f))*`` with holomorphic ``f`` into a ModulusCombination."""
    from .algebra import HolomorphicPolynomial, ModulusCombination

    p = _Parser(src)
    summands = []
    sign = 1
    if p.at_op("-"):
        p.advance()
        sign = -1
    while True:
        t = p.tok
        if not (t.kind == "ident" and t.text == "abs2"):
            p.fail(f"unexpected {p.describe(t)}", {"abs2"})
        p.advance()
        p.expect_op("(")
        inner = p.expr()
        p.expect_op(")")
        if not inner.is_holomorphic():
            raise ParseError("abs2 argument must be holomorphic (no zb, wb)", t.line, t.column)
        summands.append((sign, HolomorphicPolynomial.from_mixed(inner)))
        if p.tok.kind == "eof":
            break
        if p.at_op("+") or p.at_op("-"):
            sign = 1 if p.advance().text == "+" else -1
            continue
        p.fail(f"unexpected {p.describe(p.tok)}", {"+", "-", "end of input"})
    return ModulusCombination(summands)
