"""Recursive-descent parser for rational-function expressions.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'x' | 'i' | '(' expr ')'

``/`` between integers yields exact rationals.
"""

from fractions import Fraction

from ..errors import ParseError
from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import GaussianRational


class _Parser:
    def __init__(self, text):
        self.src = text if isinstance(text, bytes) else text.encode("utf-8")
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.src) and self.src[self.pos] in b" \t\r\n":
            self.pos += 1

    def _peek(self):
        self._skip()
        if self.pos < len(self.src):
            return chr(self.src[self.pos])
        return ""

    def _int(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.src) and 48 <= self.src[self.pos] <= 57:
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected integer", start)
        return int(self.src[start:self.pos])

    def parse(self):
        out = self.expr()
        self._skip()
        if self.pos != len(self.src):
            raise ParseError(f"unexpected {chr(self.src[self.pos])!r}", self.pos)
        return out

    def expr(self):
        acc = self.term()
        while self._peek() in ("+", "-"):
            op = self._peek()
            self.pos += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self._peek() in ("*", "/"):
            op = self._peek()
            at = self.pos
            self.pos += 1
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by the zero polynomial", at)
                acc = acc / rhs
        return acc

    def unary(self):
        c = self._peek()
        if c == "-":
            self.pos += 1
            return -self.unary()
        if c == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            k = self._int()
            if self._peek() == "^":
                raise ParseError("chained '^' is ambiguous; use parentheses", self.pos)
            return base ** k
        return base

    def atom(self):
        c = self._peek()
        if c == "":
            raise ParseError("unexpected end of input", self.pos)
        if c.isdigit():
            return RationalFunction.constant(Fraction(self._int()))
        if c == "x":
            self.pos += 1
            return RationalFunction.x()
        if c == "i":
            self.pos += 1
            return RationalFunction(Polynomial.constant(GaussianRational(0, 1)))
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return inner
        raise ParseError(f"unexpected {c!r}", self.pos)


def parse_expression(text):
    """Parse ``text`` into a normalized :class:`RationalFunction`.

    Raises
    ------
    ParseError
        On malformed input or division by the zero polynomial; ``offset``
        locates the problem.
    """
    return _Parser(text).parse()
