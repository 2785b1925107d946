"""Coordinate-function expressions in ``u`` and ``v``.

Expressions are parsed by a small recursive descent parser into an immutable
tree and evaluated with second-order forward-mode jets, so that every
evaluation also yields the exact first and second partial derivatives.
Evaluation is vectorised: ``u`` and ``v`` may be numpy arrays of the same
shape.

>>> e = parse("u*v")
>>> j = eval_jet2(e, 2.0, 3.0)
>>> float(j.val), float(j.du), float(j.dv), float(j.duv)
(6.0, 3.0, 2.0, 1.0)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ArityError, ExprDomainError, ExprSyntaxError, UnknownIdentifier

Number = Union[float, np.ndarray]

VARIABLES = ("u", "v")
CONSTANTS = {"pi": math.pi}
FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt")


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class Jet2:
    """A value with its first and second partials in ``(u, v)``."""

    val: Number
    du: Number = 0.0
    dv: Number = 0.0
    duu: Number = 0.0
    duv: Number = 0.0
    dvv: Number = 0.0

    @classmethod
    def constant(cls, c):
        return cls(c)

    @classmethod
    def variable_u(cls, u, v=None):
        one = np.ones_like(u, dtype=float) if np.ndim(u) else 1.0
        zero = one * 0.0
        return cls(u, one, zero, zero, zero, zero)

    @classmethod
    def variable_v(cls, u, v):
        one = np.ones_like(v, dtype=float) if np.ndim(v) else 1.0
        zero = one * 0.0
        return cls(v, zero, one, zero, zero, zero)

    def chain(self, g0, g1, g2):
        """Compose with a scalar function given its value and two derivatives."""
        return Jet2(
            g0,
            g1 * self.du,
            g1 * self.dv,
            g2 * self.du * self.du + g1 * self.duu,
            g2 * self.du * self.dv + g1 * self.duv,
            g2 * self.dv * self.dv + g1 * self.dvv,
        )

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.val + other, self.du, self.dv, self.duu, self.duv, self.dvv)
        return Jet2(
            self.val + other.val,
            self.du + other.du,
            self.dv + other.dv,
            self.duu + other.duu,
            self.duv + other.duv,
            self.dvv + other.dvv,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(
                self.val * other,
                self.du * other,
                self.dv * other,
                self.duu * other,
                self.duv * other,
                self.dvv * other,
            )
        f, g = self, other
        return Jet2(
            f.val * g.val,
            f.du * g.val + f.val * g.du,
            f.dv * g.val + f.val * g.dv,
            f.duu * g.val + 2.0 * f.du * g.du + f.val * g.duu,
            f.duv * g.val + f.du * g.dv + f.dv * g.du + f.val * g.duv,
            f.dvv * g.val + 2.0 * f.dv * g.dv + f.val * g.dvv,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        x = self.val
        return self.chain(1.0 / x, -1.0 / x**2, 2.0 / x**3)

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def gradient(self):
        return self.du, self.dv

    def hessian(self):
        return np.array([[self.duu, self.duv], [self.duv, self.dvv]])


# ---------------------------------------------------------------------------
# syntax tree


class Expr:
    """Base class of expression nodes."""

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            tokens.append(_Token(kind, "^" if tok == "**" else tok, pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    # expr   := term (("+" | "-") term)*
    # term   := unary (("*" | "/") unary)*
    # unary  := ("-" | "+") unary | power
    # power  := atom ("^" unary)?
    # atom   := number | name | name "(" expr ")" | "(" expr ")"

    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self.tok.pos, self.text)
        return self.advance()

    def parse(self):
        if self.tok.kind == "end":
            raise ExprSyntaxError("empty expression", 0, self.text)
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(
                f"unexpected {self.tok.text!r} (use explicit '*' for products)",
                self.tok.pos,
                self.text,
            )
        return node

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                if self.tok.text != "(":
                    raise ExprSyntaxError(
                        f"function {tok.text!r} requires parentheses", self.tok.pos, self.text
                    )
                self.advance()
                arg = self.expr()
                if self.tok.text == ",":
                    raise ArityError(f"{tok.text} takes exactly one argument", self.tok.pos, self.text)
                self.expect(")")
                return Call(tok.text, arg)
            raise UnknownIdentifier(f"unknown identifier {tok.text!r}", tok.pos, self.text)
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", tok.pos, self.text)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Products need an explicit ``*`` and function arguments need parentheses,
    so ``"cos u cosh v"`` is rejected in favour of ``"cos(u)*cosh(v)"``.
    ``^`` (or ``**``) binds tighter than unary minus and is right associative.
    """
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def unparse(e: Expr) -> str:
    """Render ``e`` as a string that parses back to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        return f"-({unparse(e.arg)})"
    if isinstance(e, BinOp):
        return f"({unparse(e.left)} {e.op} {unparse(e.right)})"
    if isinstance(e, Pow):
        return f"({unparse(e.base)})^({unparse(e.exponent)})"
    if isinstance(e, Call):
        return f"{e.func}({unparse(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Num, Const)):
        return set()
    if isinstance(e, (Neg, Call)):
        return free_variables(e.arg)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Pow):
        return free_variables(e.base) | free_variables(e.exponent)
    raise TypeError(f"not an expression node: {e!r}")


def substitute(e: Expr, **repl: Expr) -> Expr:
    """Replace the variables named in ``repl`` by expressions."""
    if isinstance(e, Var):
        return repl.get(e.name, e)
    if isinstance(e, (Num, Const)):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, **repl))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, **repl))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, **repl), substitute(e.right, **repl))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, **repl), substitute(e.exponent, **repl))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# evaluation


def _require(cond, e, what):
    if not np.all(cond):
        raise ExprDomainError(f"{what} in {unparse(e)}", subexpression=unparse(e))


def _const_value(e):
    if free_variables(e):
        return None
    return float(np.asarray(_eval(e, Jet2(0.0), Jet2(0.0)).val))


def _power(base: Jet2, p: float, e: Pow) -> Jet2:
    x = base.val
    if p == 0:
        return Jet2(np.ones_like(x, dtype=float) if np.ndim(x) else 1.0)
    is_int = float(p).is_integer()
    if is_int:
        n = int(p)
        if n < 0:
            _require(x != 0, e, "division by zero")
        g0 = x**n if n >= 0 else 1.0 / x ** (-n)
        g1 = n * _ipow(x, n - 1)
        g2 = n * (n - 1) * _ipow(x, n - 2) if n not in (0, 1) else 0.0 * x
        return base.chain(g0, g1, g2)
    _require(x > 0, e, "non-positive base for a fractional power")
    if (2 * p).is_integer():
        r = np.sqrt(x)
        g0 = _ipow(x, int(math.floor(p))) * r
    else:
        g0 = x**p
    return base.chain(g0, p * g0 / x, p * (p - 1) * g0 / (x * x))


def _ipow(x, n):
    if n >= 0:
        return x**n
    return 1.0 / x ** (-n)


def _eval(e: Expr, ju: Jet2, jv: Jet2) -> Jet2:
    if isinstance(e, Num):
        return Jet2(e.value)
    if isinstance(e, Const):
        return Jet2(CONSTANTS[e.name])
    if isinstance(e, Var):
        return ju if e.name == "u" else jv
    if isinstance(e, Neg):
        return -_eval(e.arg, ju, jv)
    if isinstance(e, BinOp):
        left = _eval(e.left, ju, jv)
        right = _eval(e.right, ju, jv)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        _require(right.val != 0, e, "division by zero")
        return left / right
    if isinstance(e, Pow):
        base = _eval(e.base, ju, jv)
        p = _const_value(e.exponent)
        if p is not None:
            return _power(base, p, e)
        _require(base.val > 0, e, "non-positive base for a variable exponent")
        expo = _eval(e.exponent, ju, jv)
        return _exp(expo * _log(base))
    if isinstance(e, Call):
        x = _eval(e.arg, ju, jv)
        return _CALLS[e.func](x, e)
    raise TypeError(f"not an expression node: {e!r}")


def _log(x: Jet2, e=None):
    if e is not None:
        _require(x.val > 0, e, "log of a non-positive value")
    v = x.val
    return x.chain(np.log(v), 1.0 / v, -1.0 / (v * v))


def _exp(x: Jet2, e=None):
    g = np.exp(x.val)
    return x.chain(g, g, g)


def _sqrt(x: Jet2, e):
    _require(x.val > 0, e, "sqrt of a non-positive value")
    r = np.sqrt(x.val)
    return x.chain(r, 0.5 / r, -0.25 / (r * x.val))


def _tan(x: Jet2, e):
    c = np.cos(x.val)
    _require(c != 0, e, "tan at a pole")
    t = np.tan(x.val)
    sec2 = 1.0 + t * t
    return x.chain(t, sec2, 2.0 * t * sec2)


def _tanh(x: Jet2, e):
    t = np.tanh(x.val)
    sech2 = 1.0 - t * t
    return x.chain(t, sech2, -2.0 * t * sech2)


_CALLS = {
    "sin": lambda x, e: x.chain(np.sin(x.val), np.cos(x.val), -np.sin(x.val)),
    "cos": lambda x, e: x.chain(np.cos(x.val), -np.sin(x.val), -np.cos(x.val)),
    "tan": _tan,
    "sinh": lambda x, e: x.chain(np.sinh(x.val), np.cosh(x.val), np.sinh(x.val)),
    "cosh": lambda x, e: x.chain(np.cosh(x.val), np.sinh(x.val), np.cosh(x.val)),
    "tanh": _tanh,
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
}


def eval_jet2(e: Expr, u, v) -> Jet2:
    """Evaluate ``e`` at ``(u, v)`` with all first and second partials.

    Raises :class:`ExprDomainError` naming the offending subexpression when a
    partial function is evaluated outside its domain.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    if u.ndim == 0:
        u, v = float(u), float(v)
    with np.errstate(all="ignore"):
        jet = _eval(e, Jet2.variable_u(u), Jet2.variable_v(u, v))
    zero = 0.0 * u
    # constants come back as bare floats; give every slot the input shape
    return Jet2(*(slot + zero for slot in (jet.val, jet.du, jet.dv, jet.duu, jet.duv, jet.dvv)))


def evaluate(e: Expr, u, v):
    """Value only."""
    return eval_jet2(e, u, v).val
