"""Minimal arithmetic expression language for config files.

Grammar (whitespace ignored):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | name | name '(' expr ')' | '(' expr ')'

Names: the variables ``x`` and ``v``, the constants ``pi`` and ``L``
(half domain length, bound at parse time), and the functions ``sin``,
``cos``, ``exp``.  Evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

import re

import numpy as np

_FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


class ExpressionError(ValueError):
    """Raised when an expression fails to parse or uses unknown names."""


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionError(f"bad character at position {pos}: {text[pos:]!r}")
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", float(number)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class Expression:
    """Parsed expression; call with keyword arrays for the free variables."""

    def __init__(self, text: str, constants: dict | None = None,
                 variables: tuple = ("x", "v")):
        self.text = text
        self._constants = {"pi": np.pi}
        if constants:
            self._constants.update(constants)
        self._variables = tuple(variables)
        self._tokens = _tokenize(text)
        self._pos = 0
        self._ast = self._parse_expr()
        if self._tokens[self._pos][0] != "end":
            raise ExpressionError(f"trailing input in {text!r}")

    # -- recursive descent ------------------------------------------------

    def _peek(self):
        return self._tokens[self._pos]

    def _next(self):
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect(self, op):
        kind, val = self._next()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r} in {self.text!r}")

    def _parse_expr(self):
        node = self._parse_term()
        while self._peek() == ("op", "+") or self._peek() == ("op", "-"):
            _, op = self._next()
            node = (op, node, self._parse_term())
        return node

    def _parse_term(self):
        node = self._parse_unary()
        while self._peek() == ("op", "*") or self._peek() == ("op", "/"):
            _, op = self._next()
            node = (op, node, self._parse_unary())
        return node

    def _parse_unary(self):
        if self._peek() == ("op", "-"):
            self._next()
            return ("neg", self._parse_unary())
        return self._parse_power()

    def _parse_power(self):
        base = self._parse_atom()
        if self._peek() == ("op", "^"):
            self._next()
            return ("^", base, self._parse_unary())
        return base

    def _parse_atom(self):
        kind, val = self._next()
        if kind == "num":
            return ("const", val)
        if kind == "name":
            if val in _FUNCTIONS:
                self._expect("(")
                arg = self._parse_expr()
                self._expect(")")
                return ("call", val, arg)
            if val in self._constants:
                return ("const", float(self._constants[val]))
            if val in self._variables:
                return ("var", val)
            raise ExpressionError(f"unknown name {val!r} in {self.text!r}")
        if kind == "op" and val == "(":
            node = self._parse_expr()
            self._expect(")")
            return node
        raise ExpressionError(f"unexpected token in {self.text!r}")

    # -- evaluation --------------------------------------------------------

    def __call__(self, **env):
        return self._eval(self._ast, env)

    def _eval(self, node, env):
        tag = node[0]
        if tag == "const":
            return node[1]
        if tag == "var":
            try:
                return env[node[1]]
            except KeyError:
                raise ExpressionError(f"variable {node[1]!r} not supplied") from None
        if tag == "neg":
            return -self._eval(node[1], env)
        if tag == "call":
            return _FUNCTIONS[node[1]](self._eval(node[2], env))
        a = self._eval(node[1], env)
        b = self._eval(node[2], env)
        if tag == "+":
            return a + b
        if tag == "-":
            return a - b
        if tag == "*":
            return a * b
        if tag == "/":
            return a / b
        if tag == "^":
            return a ** b
        raise ExpressionError(f"corrupt AST node {tag!r}")

    def free_variables(self) -> set:
        found = set()

        def walk(node):
            if node[0] == "var":
                found.add(node[1])
            elif node[0] in ("neg",):
                walk(node[1])
            elif node[0] == "call":
                walk(node[2])
            elif node[0] in "+-*/^":
                walk(node[1])
                walk(node[2])

        walk(self._ast)
        return found
