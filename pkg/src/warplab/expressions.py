"""Tiny expression language for warping functions.

Grammar (see ``docs/expressions.md``)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | power
    power  := atom (('^'|'**') unary)?
    atom   := NUMBER | VAR | CONST | FUNC '(' expr ')' | '(' expr ')'

Variables are ``t`` for one-dimensional domains and ``t1 .. tm`` on a torus
(``t`` aliases ``t1``).  Functions: sin, cos, cosh, sinh, exp, sqrt, log.
Constants: pi, e.  Expressions compile once into an AST that evaluates over
jet arithmetic, so values come back with exact first and second derivatives.
"""

from __future__ import annotations

import re

import numpy as np

from . import jets
from .errors import ExpressionError

_FUNCS_1 = {
    "sin": (jets.sin, jets.msin),
    "cos": (jets.cos, jets.mcos),
    "cosh": (jets.cosh, jets.mcosh),
    "sinh": (jets.sinh, jets.msinh),
    "exp": (jets.exp, jets.mexp),
    "sqrt": (jets.sqrt, jets.msqrt),
    "log": (jets.log, jets.mlog),
}

_CONSTS = {"pi": np.pi, "e": np.e}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExpressionError(f"unexpected character {text[pos]!r}", column=pos + 1)
        if m.group("num") is not None:
            tokens.append(("num", float(m.group("num")), m.start("num") + 1))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name") + 1))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, m.start("op") + 1))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, col = self.next()
        if kind != "op" or value != op:
            raise ExpressionError(f"expected {op!r}", column=col)

    def parse(self):
        node = self.expr()
        kind, value, col = self.peek()
        if kind != "end":
            raise ExpressionError(f"trailing input {value!r}", column=col)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            rhs = self.term()
            node = (op, node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            rhs = self.unary()
            node = (op, node, rhs)
        return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            node = self.unary()
            return node if value == "+" else ("neg", node)
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.next()
            expo = self.unary()
            return ("^", base, expo)
        return base

    def atom(self):
        kind, value, col = self.next()
        if kind == "num":
            return ("num", value)
        if kind == "name":
            if value in _FUNCS_1:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", value, arg)
            if value in _CONSTS:
                return ("num", _CONSTS[value])
            if value == "t" or re.fullmatch(r"t\d+", value):
                return ("var", value)
            raise ExpressionError(f"unknown name {value!r}", column=col)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError("expected a number, variable or '('", column=col)


def _const_value(node):
    """Fold a constant subtree to a float, or return None."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "neg":
        v = _const_value(node[1])
        return None if v is None else -v
    if kind in "+-*/^":
        a, b = _const_value(node[1]), _const_value(node[2])
        if a is None or b is None:
            return None
        return {"+": a + b, "-": a - b, "*": a * b, "/": a / b, "^": a ** b}[kind]
    if kind == "call":
        v = _const_value(node[2])
        if v is None:
            return None
        return float(_FUNCS_1[node[1]][0](jets.constant(v)).val)
    return None


def _free_vars(node, out):
    kind = node[0]
    if kind == "var":
        out.add(node[1])
    elif kind == "neg":
        _free_vars(node[1], out)
    elif kind in "+-*/^":
        _free_vars(node[1], out)
        _free_vars(node[2], out)
    elif kind == "call":
        _free_vars(node[2], out)


class Expression:
    """A parsed expression evaluable over univariate or multivariate jets."""

    def __init__(self, text: str):
        self.text = text
        self.ast = _Parser(text).parse()
        names = set()
        _free_vars(self.ast, names)
        self.variables = sorted(names)

    def __repr__(self):
        return f"Expression({self.text!r})"

    def _eval(self, node, env, multivariate: bool):
        kind = node[0]
        if kind == "num":
            return node[1]
        if kind == "var":
            return env[node[1]]
        if kind == "neg":
            return -self._eval(node[1], env, multivariate)
        if kind == "call":
            fn = _FUNCS_1[node[1]][1 if multivariate else 0]
            arg = self._eval(node[2], env, multivariate)
            if not isinstance(arg, (jets.Jet, jets.MJet)):
                arg = jets.constant(arg) if not multivariate else arg
            return fn(arg)
        a = self._eval(node[1], env, multivariate)
        if kind == "^":
            c = _const_value(node[2])
            if c is not None:
                return a ** c
        b = self._eval(node[2], env, multivariate)
        if kind == "+":
            return a + b
        if kind == "-":
            return a - b
        if kind == "*":
            return a * b
        if kind == "/":
            return a / b
        return a ** b

    def jet(self, t) -> jets.Jet:
        """Evaluate at scalar/array ``t`` with the single variable ``t``."""
        var = jets.variable(t)
        env = {name: var for name in self.variables}
        unknown = [n for n in self.variables if n not in ("t", "t1")]
        if unknown:
            raise ExpressionError(f"expression uses torus variables {unknown}, expected only 't'")
        out = self._eval(self.ast, env, multivariate=False)
        if not isinstance(out, jets.Jet):
            out = jets.constant(out + 0.0 * np.asarray(t, dtype=float))
        return out

    def mjet(self, points, m: int) -> jets.MJet:
        """Evaluate on torus points of shape (m,) or (m, N)."""
        points = np.asarray(points, dtype=float)
        env = {}
        for i in range(m):
            env[f"t{i + 1}"] = jets.mvariable(i, m, points[i])
        if m >= 1:
            env["t"] = env["t1"]
        for name in self.variables:
            if name not in env:
                raise ExpressionError(f"variable {name!r} exceeds base dimension {m}")
        out = self._eval(self.ast, env, multivariate=True)
        if not isinstance(out, jets.MJet):
            out = jets.as_mjet(out, m, points[0].shape if points.ndim > 1 else ())
        return out


def parse_expression(text: str) -> Expression:
    return Expression(text)
