"""Expression language for the CLI: parse, print, evaluate.

Grammar (precedence ``^`` > unary ``-`` > ``*`` > ``+``/``-``, binary
operators left associative)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | GENERATOR | FUNC '(' arguments ')' | '(' expr ')'

NUMBER is a nonnegative rational literal (``3`` or ``3/2``); GENERATOR is
``a<i>``/``u<i>`` (loop homology) or ``alpha<i>``/``v<i>`` (cohomology); the
function forms are ``cap(w,b)``, ``bracket(b,c)``, ``product(x,y)``,
``s(x)``, ``Delta(x)``, ``D(x)``, ``Dinv(x)`` and
``intersect([w,...],[w,...],b)``.  ``*`` multiplies inside a single ring;
cross-ring actions must go through the function forms.

Every token and node carries a source position and all diagnostics are
``line:col: message``.  Printing a parse tree and reparsing the text yields
an equal tree (positions are ignored by equality).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .kernel import AlgebraError, Element, ModelSpec, Ring
from .loop import bv_delta, loop_bracket, s_star
from .cohomology import coh_delta, poincare_dual, poincare_dual_inverse, to_full
from .extended import cap, loop_intersection


class ExpressionError(Exception):
    """Parse or evaluation error with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<NUMBER>[0-9]+(?:/[0-9]+)?)
  | (?P<IDENT>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<SYMBOL>[-+*^()\[\],])
  | (?P<SPACE>[ \t\r\n]+)
  | (?P<BAD>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, IDENT, one of the symbol characters, or EOF
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        if kind == "SPACE":
            newlines = value.count("\n")
            if newlines:
                line += newlines
                col = len(value) - value.rfind("\n")
            else:
                col += len(value)
            continue
        if kind == "BAD":
            raise ExpressionError("unexpected character %r" % value, line, col)
        if kind == "SYMBOL":
            kind = value
        tokens.append(Token(kind, value, line, col))
        col += len(value)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class Gen:
    family: str  # "a", "u", "alpha", "v"
    index: int
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: object
    right: object
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class ClassList:
    items: tuple
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


_FUNCTIONS = {
    "cap": 2,
    "bracket": 2,
    "product": 2,
    "s": 1,
    "Delta": 1,
    "D": 1,
    "Dinv": 1,
    "intersect": 3,
}

_GEN_FAMILIES = ("alpha", "a", "u", "v")  # longest prefix first


def _classify_ident(token: Token):
    name = token.text
    if name in _FUNCTIONS:
        return ("func", name)
    for family in _GEN_FAMILIES:
        if name.startswith(family) and name[len(family) :].isdigit():
            index = int(name[len(family) :])
            if index < 1:
                raise ExpressionError(
                    "generator index must be >= 1 in %r" % name, token.line, token.col
                )
            return ("gen", (family, index))
    raise ExpressionError(
        "unknown identifier %r (generators are a<i>, u<i>, alpha<i>, v<i>)" % name,
        token.line,
        token.col,
    )


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            shown = token.text if token.kind != "EOF" else "end of input"
            raise ExpressionError("expected %s, found %r" % (what, shown), token.line, token.col)
        return self.advance()

    def fail_unexpected(self):
        token = self.peek()
        shown = token.text if token.kind != "EOF" else "end of input"
        raise ExpressionError("unexpected %r" % shown, token.line, token.col)

    # grammar rules ---------------------------------------------------------

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            right = self.term()
            node = BinOp(op.kind, node, right, (op.line, op.col))
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "*":
            op = self.advance()
            right = self.unary()
            node = BinOp("*", node, right, (op.line, op.col))
        return node

    def unary(self):
        token = self.peek()
        if token.kind == "-":
            self.advance()
            return Neg(self.unary(), (token.line, token.col))
        return self.power()

    def power(self):
        node = self.atom()
        token = self.peek()
        if token.kind == "^":
            self.advance()
            exp_token = self.peek()
            if exp_token.kind != "NUMBER" or "/" in exp_token.text:
                shown = exp_token.text if exp_token.kind != "EOF" else "end of input"
                raise ExpressionError(
                    "exponent must be a nonnegative integer, found %r" % shown,
                    exp_token.line,
                    exp_token.col,
                )
            self.advance()
            node = Pow(node, int(exp_token.text), (token.line, token.col))
        return node

    def atom(self):
        token = self.peek()
        if token.kind == "NUMBER":
            self.advance()
            if "/" in token.text:
                num, den = token.text.split("/")
                if int(den) == 0:
                    raise ExpressionError("zero denominator in %r" % token.text, token.line, token.col)
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(token.text))
            return Num(value, (token.line, token.col))
        if token.kind == "IDENT":
            role, info = _classify_ident(token)
            self.advance()
            if role == "gen":
                family, index = info
                return Gen(family, index, (token.line, token.col))
            return self.call(token, info)
        if token.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")", "')'")
            return node
        self.fail_unexpected()

    def call(self, token: Token, func: str):
        self.expect("(", "'(' after %r" % func)
        if func == "intersect":
            first = self.class_list()
            self.expect(",", "','")
            second = self.class_list()
            self.expect(",", "','")
            family = self.expr()
            self.expect(")", "')'")
            return Call(func, (first, second, family), (token.line, token.col))
        args = [self.expr()]
        while self.peek().kind == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")", "')'")
        if len(args) != _FUNCTIONS[func]:
            raise ExpressionError(
                "%s expects %d argument(s), got %d" % (func, _FUNCTIONS[func], len(args)),
                token.line,
                token.col,
            )
        return Call(func, tuple(args), (token.line, token.col))

    def class_list(self):
        opening = self.expect("[", "'['")
        items = []
        if self.peek().kind != "]":
            items.append(self.expr())
            while self.peek().kind == ",":
                self.advance()
                items.append(self.expr())
        self.expect("]", "']'")
        return ClassList(tuple(items), (opening.line, opening.col))


def parse(text: str):
    """Parse an expression; raises ExpressionError with line:col on failure."""
    parser = _Parser(tokenize(text))
    node = parser.expr()
    if parser.peek().kind != "EOF":
        parser.fail_unexpected()
    return node


# ---------------------------------------------------------------------------
# printing (inverse of parse, up to positions)

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _print(node, min_prec: int) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Gen):
        return "%s%d" % (node.family, node.index)
    if isinstance(node, Call):
        return "%s(%s)" % (node.func, ", ".join(_print(arg, _PREC_ADD) for arg in node.args))
    if isinstance(node, ClassList):
        return "[%s]" % ", ".join(_print(item, _PREC_ADD) for item in node.items)
    if isinstance(node, Pow):
        text = "%s^%d" % (_print(node.base, _PREC_ATOM), node.exponent)
        prec = _PREC_POW
    elif isinstance(node, Neg):
        text = "-%s" % _print(node.operand, _PREC_NEG)
        prec = _PREC_NEG
    elif isinstance(node, BinOp):
        if node.op == "*":
            prec = _PREC_MUL
        else:
            prec = _PREC_ADD
        text = "%s %s %s" % (_print(node.left, prec), node.op, _print(node.right, prec + 1))
    else:
        raise TypeError("not an expression node: %r" % (node,))
    if prec < min_prec:
        return "(%s)" % text
    return text


def to_text(node) -> str:
    """Render a parse tree back to source text; reparsing gives an equal tree."""
    return _print(node, _PREC_ADD)


# ---------------------------------------------------------------------------
# evaluation

_RING_LABEL = {
    Ring.LOOP: "loop-homology",
    Ring.COH: "cohomology",
    Ring.BASE: "base-cohomology",
}


def _err(node, message: str) -> ExpressionError:
    line, col = node.pos
    return ExpressionError(message, line, col)


def _ring_of(value) -> str:
    if isinstance(value, Element):
        return _RING_LABEL[value.ring]
    return "scalar"


def _promote_scalar(value, like: Element) -> Element:
    return Element.unit(like.model, like.ring).scale(value)


def _eval_add(node, lhs, rhs, subtract: bool):
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs - rhs if subtract else lhs + rhs
    if isinstance(lhs, Fraction):
        lhs = _promote_scalar(lhs, rhs)
    if isinstance(rhs, Fraction):
        rhs = _promote_scalar(rhs, lhs)
    if lhs.ring is not rhs.ring:
        raise _err(
            node,
            "cannot %s %s and %s classes: sums live in a single ring"
            % ("subtract" if subtract else "add", _ring_of(lhs), _ring_of(rhs)),
        )
    return lhs - rhs if subtract else lhs + rhs


def _eval_mul(node, lhs, rhs):
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs * rhs
    if isinstance(lhs, Fraction):
        return rhs.scale(lhs)
    if isinstance(rhs, Fraction):
        return lhs.scale(rhs)
    if lhs.ring is not rhs.ring:
        raise _err(
            node,
            "'*' multiplies inside a single ring, got %s and %s; use cap(...) for "
            "the cohomology action on loop classes" % (_ring_of(lhs), _ring_of(rhs)),
        )
    return lhs * rhs


def _as_loop(node, value, model: ModelSpec, what: str) -> Element:
    if isinstance(value, Fraction):
        return Element.unit(model, Ring.LOOP).scale(value)
    if value.ring is not Ring.LOOP:
        raise _err(node, "%s must be a loop-homology class, got %s" % (what, _ring_of(value)))
    return value


def _as_coh(node, value, model: ModelSpec, what: str) -> Element:
    if isinstance(value, Fraction):
        return Element.unit(model, Ring.COH).scale(value)
    if value.ring is Ring.BASE:
        return to_full(value)
    if value.ring is not Ring.COH:
        raise _err(node, "%s must be a cohomology class, got %s" % (what, _ring_of(value)))
    return value


def _eval_call(node, model: ModelSpec, values):
    func = node.func
    if func == "product":
        return _eval_mul(node, values[0], values[1])
    if func == "bracket":
        b = _as_loop(node, values[0], model, "bracket argument 1")
        c = _as_loop(node, values[1], model, "bracket argument 2")
        return loop_bracket(b, c)
    if func == "cap":
        w = _as_coh(node, values[0], model, "cap argument 1")
        b = _as_loop(node, values[1], model, "cap argument 2")
        return cap(w, b)
    if func == "Delta":
        value = values[0]
        if isinstance(value, Fraction):
            return Fraction(0)
        if value.ring is Ring.LOOP:
            return bv_delta(value)
        return coh_delta(to_full(value))
    if func == "s":
        value = values[0]
        if isinstance(value, Fraction):
            return value
        value = _as_loop(node, value, model, "s argument")
        try:
            return s_star(value)
        except AlgebraError as exc:
            raise _err(node, str(exc)) from exc
    if func == "D":
        value = values[0]
        if isinstance(value, Fraction):
            return value
        value = _as_loop(node, value, model, "D argument")
        try:
            return to_full(poincare_dual(value))
        except AlgebraError as exc:
            raise _err(node, str(exc)) from exc
    if func == "Dinv":
        value = values[0]
        if isinstance(value, Fraction):
            return value
        value = _as_coh(node, value, model, "Dinv argument")
        try:
            return poincare_dual_inverse(value)
        except AlgebraError as exc:
            raise _err(node, str(exc)) from exc
    raise _err(node, "unknown function %r" % func)


def _eval(node, model: ModelSpec):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Gen):
        if node.index > model.rank:
            raise _err(
                node,
                "unknown identifier for model %r: %s%d (generators are indexed 1..%d)"
                % (model.name, node.family, node.index, model.rank),
            )
        if node.family == "a":
            return Element.generator(model, Ring.LOOP, "odd", node.index)
        if node.family == "u":
            return Element.generator(model, Ring.LOOP, "even", node.index)
        if node.family == "alpha":
            return Element.generator(model, Ring.COH, "odd", node.index)
        return Element.generator(model, Ring.COH, "even", node.index)
    if isinstance(node, Neg):
        value = _eval(node.operand, model)
        return -value
    if isinstance(node, Pow):
        value = _eval(node.base, model)
        return value ** node.exponent
    if isinstance(node, BinOp):
        lhs = _eval(node.left, model)
        rhs = _eval(node.right, model)
        if node.op == "*":
            return _eval_mul(node, lhs, rhs)
        return _eval_add(node, lhs, rhs, subtract=node.op == "-")
    if isinstance(node, Call):
        if node.func == "intersect":
            ats_node, frees_node, family_node = node.args
            ats = [
                _as_coh(item, _eval(item, model), model, "intersect basepoint class")
                for item in ats_node.items
            ]
            frees = [
                _as_coh(item, _eval(item, model), model, "intersect free-time class")
                for item in frees_node.items
            ]
            family = _as_loop(family_node, _eval(family_node, model), model, "intersect family")
            try:
                return loop_intersection(ats, frees, family)
            except AlgebraError as exc:
                raise _err(node, str(exc)) from exc
        values = [_eval(arg, model) for arg in node.args]
        try:
            return _eval_call(node, model, values)
        except AlgebraError as exc:
            raise _err(node, str(exc)) from exc
    raise TypeError("not an expression node: %r" % (node,))


def evaluate(expr, model: ModelSpec):
    """Evaluate a parse tree (or source text) against a model.

    Returns an Element, or a plain Fraction when the expression is scalar.
    """
    if isinstance(expr, str):
        expr = parse(expr)
    return _eval(expr, model)


def describe_value(value, unicode: bool = False) -> tuple[str, str, str]:
    """(rendered value, ring label, degree label) for CLI display."""
    if isinstance(value, Fraction):
        return str(value), "scalar", "0"
    deg = value.degree()
    if isinstance(deg, int):
        degree_label = str(deg)
    elif deg.label == "any-degree":
        degree_label = "any"
    else:
        degree_label = "inhomogeneous"
    return value.render(unicode=unicode), _RING_LABEL[value.ring], degree_label
