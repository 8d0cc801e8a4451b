"""Scalar expression language: parsing, printing and jet evaluation.

Grammar (precedence climbing, lowest binding first)::

    expr     := operand (binop operand)*
    binop    := '+' | '-'            (level 1, left associative)
              | '*' | '/'            (level 2, left associative)
              | '^'                  (level 4, left associative)
    operand  := ('-' | '+') expr@3 | primary      (unary minus is level 3)
    primary  := number | name | name '(' expr ')' | '(' expr ')'
    number   := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]

So ``-t^2`` is ``-(t^2)`` and ``-t*2`` is ``(-t)*2``. A power whose
exponent contains no variables is folded to a constant exponent; any other
``f^g`` is rewritten to ``exp(g*log(f))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import (
    ArityError,
    ExprDomainError,
    ExprSyntaxError,
    UnknownIdentifierError,
)
from .jet import DualJet, Jet, JetDomainError

__all__ = [
    "Num", "Var", "Const", "Neg", "BinOp", "Pow", "Call", "Expr",
    "FUNCTIONS", "CONSTANTS",
    "parse_expression", "to_text", "variables_of", "evaluate_ast", "eval_jet",
    "eval_constant",
]

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}
MAX_ORDER = 8


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Expr = Union[Num, Var, Const, Neg, BinOp, Pow, Call]


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number' | 'name' | 'op' | 'eof'
    text: str
    offset: int  # byte offset


def _tokenize(text):
    tokens = []
    pos = 0
    byte = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", byte)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), byte))
        byte += len(m.group().encode("utf-8"))
        pos = m.end()
    tokens.append(_Token("eof", "", byte))
    return tokens


# ---------------------------------------------------------------------------
# parser

_BINARY_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


class _Parser:
    def __init__(self, text, variables):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.tok
        if tok.kind != "op" or tok.text != text:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", tok.offset)
        return self.advance()

    def parse(self):
        node = self.expr(1)
        if self.tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self, min_prec):
        lhs = self.operand()
        while True:
            tok = self.tok
            if tok.kind != "op" or tok.text not in _BINARY_PREC:
                break
            prec = _BINARY_PREC[tok.text]
            if prec < min_prec:
                break
            self.advance()
            rhs = self.expr(prec + 1)
            lhs = _power(lhs, rhs) if tok.text == "^" else BinOp(tok.text, lhs, rhs)
        return lhs

    def operand(self):
        tok = self.tok
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            inner = self.expr(_UNARY_PREC)
            return Neg(inner) if tok.text == "-" else inner
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name in FUNCTIONS:
                self.expect("(")
                args = [self.expr(1)]
                while self.tok.kind == "op" and self.tok.text == ",":
                    self.advance()
                    args.append(self.expr(1))
                close = self.expect(")")
                if len(args) != 1:
                    raise ArityError(f"{name} takes 1 argument, got {len(args)}", close.offset)
                return Call(name, tuple(args))
            if name in self.variables:
                return Var(name)
            if name in CONSTANTS:
                return Const(name)
            raise UnknownIdentifierError(f"unknown identifier {name!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr(1)
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {found}", tok.offset)


def _power(base, exponent):
    if not variables_of(exponent):
        return Pow(base, eval_constant(exponent))
    return Call("exp", (BinOp("*", exponent, Call("log", (base,))),))


def parse_expression(text: str, variables: Sequence[str] = ("t",)) -> Expr:
    """Parse ``text`` into an AST over the declared ``variables``."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    for name in variables:
        if name in FUNCTIONS or name in CONSTANTS:
            raise ValueError(f"variable name {name!r} shadows a builtin")
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# printing


def _prec(node):
    if isinstance(node, BinOp):
        return _BINARY_PREC[node.op]
    if isinstance(node, Neg):
        return _UNARY_PREC
    if isinstance(node, Pow):
        return _BINARY_PREC["^"]
    return 10


def _num_text(value):
    text = repr(float(value))
    return f"({text})" if value < 0 else text


def to_text(node: Expr) -> str:
    """Render an AST with the minimal parentheses that re-parse to it."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        if _prec(node.operand) < _UNARY_PREC or isinstance(node.operand, Neg):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < 10:
            base = f"({base})"
        return f"{base}^{_num_text(node.exponent)}"
    if isinstance(node, BinOp):
        p = _BINARY_PREC[node.op]
        left = to_text(node.left)
        right = to_text(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def variables_of(node: Expr) -> frozenset:
    if isinstance(node, Var):
        return frozenset([node.name])
    if isinstance(node, (Num, Const)):
        return frozenset()
    if isinstance(node, Neg):
        return variables_of(node.operand)
    if isinstance(node, Pow):
        return variables_of(node.base)
    if isinstance(node, BinOp):
        return variables_of(node.left) | variables_of(node.right)
    if isinstance(node, Call):
        out = frozenset()
        for a in node.args:
            out |= variables_of(a)
        return out
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation

_FLOAT_FUNCS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "log": math.log, "sqrt": math.sqrt, "atan": math.atan,
}


def _apply_float(func, x):
    if func == "log" and x <= 0:
        raise JetDomainError("log of a non-positive value")
    if func == "sqrt" and x < 0:
        raise JetDomainError("sqrt of a negative value")
    return _FLOAT_FUNCS[func](x)


def _is_scalar(x):
    return not isinstance(x, (Jet, DualJet))


def _eval(node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownIdentifierError(f"no value bound for variable {node.name!r}", 0) from None
    if isinstance(node, Neg):
        return -_eval(node.operand, env)
    try:
        if isinstance(node, BinOp):
            a = _eval(node.left, env)
            b = _eval(node.right, env)
            if node.op == "+":
                out = a + b
            elif node.op == "-":
                out = a - b
            elif node.op == "*":
                out = a * b
            else:
                if _is_scalar(b) and np.any(np.asarray(b) == 0):
                    raise JetDomainError("division by zero")
                out = a / b
        elif isinstance(node, Pow):
            a = _eval(node.base, env)
            if _is_scalar(a):
                p = node.exponent
                a_arr = np.asarray(a, dtype=float)
                if np.any(a_arr == 0) and p < 0:
                    raise JetDomainError("division by zero")
                if np.any(a_arr < 0) and not float(p).is_integer():
                    raise JetDomainError("non-integer power of a negative value")
                out = a_arr ** p if a_arr.ndim else float(a) ** p
            else:
                out = a ** node.exponent
        elif isinstance(node, Call):
            x = _eval(node.args[0], env)
            if _is_scalar(x):
                if np.ndim(x):
                    out = Jet.constant(x, 0)
                    out = getattr(out, node.func)().value
                else:
                    out = _apply_float(node.func, x)
            else:
                out = getattr(x, node.func)()
        else:
            raise TypeError(f"not an expression node: {node!r}")
    except (JetDomainError, ZeroDivisionError, OverflowError, ValueError) as exc:
        if isinstance(exc, ExprDomainError):
            raise
        raise ExprDomainError(str(exc) or type(exc).__name__, to_text(node)) from None
    return out


def evaluate_ast(node: Expr, env: Mapping[str, object]):
    """Evaluate with variables bound to floats, arrays, jets or dual jets."""
    return _eval(node, env)


def eval_constant(node: Expr) -> float:
    """Value of a variable-free expression."""
    if variables_of(node):
        raise ValueError("expression is not constant")
    return float(_eval(node, {}))


def eval_jet(node: Expr, at: Mapping[str, float], wrt: str, order: int) -> Jet:
    """Taylor jet of ``node`` in ``wrt`` at the point ``at``.

    Coefficient ``k`` is ``d^k f / d wrt^k / k!``; the remaining variables
    are held fixed. Values in ``at`` may be arrays, giving a batched jet.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {order}")
    if wrt not in at:
        raise ValueError(f"no expansion point given for {wrt!r}")
    shape = np.broadcast_shapes(*(np.shape(v) for v in at.values()))
    env = {}
    for name, value in at.items():
        value = np.broadcast_to(np.asarray(value, dtype=float), shape)
        env[name] = Jet.variable(value, order) if name == wrt else Jet.constant(value, order)
    out = _eval(node, env)
    if _is_scalar(out):
        out = Jet.constant(np.broadcast_to(np.asarray(out, dtype=float), shape), order)
    _finite_or_raise(out, node)
    return out


def _finite_or_raise(jet, node):
    if not np.all(np.isfinite(jet.c)):
        raise ExprDomainError("non-finite result", to_text(node))
