"""Boolean activation expressions over parameter values.

The grammar covers comparisons (==, !=, <, <=, >, >=), set membership
(`name in {v1, v2}`), the connectives and/or/not, and parentheses.
Identifiers refer to parameters; values are numeric literals or quoted
strings (bare words are accepted inside set braces and treated as strings).

Evaluation is total: a comparison or membership clause that touches an
inactive parameter, or compares incompatible types, is false. Connectives
then combine clause values normally, so `not (q0 > 0.5)` is true when q0
is inactive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


class ConditionError(ValueError):
    """Raised for syntactically or semantically invalid condition text."""


class _Inactive:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INACTIVE"

    def __deepcopy__(self, memo) -> "_Inactive":
        return self

    def __copy__(self) -> "_Inactive":
        return self


#: Sentinel stored in a configuration for parameters whose condition is false.
INACTIVE = _Inactive()

Value = Union[float, int, str, _Inactive]


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class Literal:
    value: Union[float, int, str]


@dataclass(frozen=True)
class Comparison:
    op: str
    left: "Operand"
    right: "Operand"


@dataclass(frozen=True)
class Membership:
    operand: "Operand"
    values: tuple


@dataclass(frozen=True)
class Not:
    item: "Node"


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


Operand = Union[Identifier, Literal]
Node = Union[Comparison, Membership, Not, And, Or]

_COMPARATORS = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\-]*)
  | (?P<string>"[^"]*"|'[^']*')
  | (?P<op>==|!=|<=|>=|<|>|\(|\)|\{|\}|,)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "or", "not", "in"}


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | string | op | keyword | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ConditionError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        kind = m.lastgroup
        value = m.group()
        if kind == "name" and value in _KEYWORDS:
            kind = "keyword"
        tokens.append(_Token(kind, value, m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ConditionError(f"expected {want!r} at column {tok.pos + 1}, found {tok.text!r}")
        return self.advance()

    def parse(self) -> Node:
        node = self.parse_or()
        tok = self.peek()
        if tok.kind != "end":
            raise ConditionError(f"trailing input at column {tok.pos + 1}: {tok.text!r}")
        return node

    def parse_or(self) -> Node:
        items = [self.parse_and()]
        while self.peek().kind == "keyword" and self.peek().text == "or":
            self.advance()
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_and(self) -> Node:
        items = [self.parse_not()]
        while self.peek().kind == "keyword" and self.peek().text == "and":
            self.advance()
            items.append(self.parse_not())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_not(self) -> Node:
        if self.peek().kind == "keyword" and self.peek().text == "not":
            self.advance()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_or()
            self.expect("op", ")")
            return node
        return self.parse_comparison()

    def parse_comparison(self) -> Node:
        left = self.parse_operand()
        tok = self.peek()
        if tok.kind == "op" and tok.text in _COMPARATORS:
            self.advance()
            right = self.parse_operand()
            return Comparison(tok.text, left, right)
        if tok.kind == "keyword" and tok.text == "in":
            self.advance()
            return Membership(left, self.parse_set_literal())
        raise ConditionError(f"expected comparison operator at column {tok.pos + 1}")

    def parse_operand(self) -> Operand:
        tok = self.advance()
        if tok.kind == "name":
            return Identifier(tok.text)
        if tok.kind == "number":
            return Literal(_parse_number(tok.text))
        if tok.kind == "string":
            return Literal(tok.text[1:-1])
        raise ConditionError(f"expected identifier or literal at column {tok.pos + 1}")

    def parse_set_literal(self) -> tuple:
        self.expect("op", "{")
        values = []
        while True:
            tok = self.advance()
            if tok.kind == "number":
                values.append(_parse_number(tok.text))
            elif tok.kind == "string":
                values.append(tok.text[1:-1])
            elif tok.kind in ("name", "keyword"):
                values.append(tok.text)  # bare word, read as a string value
            else:
                raise ConditionError(f"expected value at column {tok.pos + 1}")
            tok = self.advance()
            if tok.kind == "op" and tok.text == ",":
                continue
            if tok.kind == "op" and tok.text == "}":
                break
            raise ConditionError(f"expected ',' or '}}' at column {tok.pos + 1}")
        if not values:
            raise ConditionError("empty membership set")
        return tuple(values)


def _parse_number(text: str) -> Union[int, float]:
    try:
        return int(text)
    except ValueError:
        return float(text)


class ConditionExpr:
    """A parsed activation condition; immutable and shareable."""

    __slots__ = ("root", "text")

    def __init__(self, root: Node, text: str):
        self.root = root
        self.text = text

    @classmethod
    def parse(cls, text: str) -> "ConditionExpr":
        root = _Parser(_tokenize(text)).parse()
        return cls(root, text.strip())

    def referenced_names(self) -> set[str]:
        names: set[str] = set()
        stack: list[object] = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Identifier):
                names.add(node.name)
            elif isinstance(node, Comparison):
                stack.extend((node.left, node.right))
            elif isinstance(node, Membership):
                stack.append(node.operand)
            elif isinstance(node, Not):
                stack.append(node.item)
            elif isinstance(node, (And, Or)):
                stack.extend(node.items)
        return names

    def evaluate(self, values: Mapping[str, Value]) -> bool:
        return _eval(self.root, values)

    def unparse(self) -> str:
        return _unparse(self.root)

    def __repr__(self) -> str:
        return f"ConditionExpr({self.text!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConditionExpr) and self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)


def _resolve(operand: Operand, values: Mapping[str, Value]) -> Value:
    if isinstance(operand, Identifier):
        return values[operand.name]
    return operand.value


def _comparable(a: Value, b: Value) -> bool:
    if a is INACTIVE or b is INACTIVE:
        return False
    a_num = isinstance(a, (int, float)) and not isinstance(a, bool)
    b_num = isinstance(b, (int, float)) and not isinstance(b, bool)
    return a_num == b_num


def _eval(node: Node, values: Mapping[str, Value]) -> bool:
    if isinstance(node, Comparison):
        left = _resolve(node.left, values)
        right = _resolve(node.right, values)
        if not _comparable(left, right):
            return False
        return _COMPARATORS[node.op](left, right)
    if isinstance(node, Membership):
        operand = _resolve(node.operand, values)
        if operand is INACTIVE:
            return False
        return any(_comparable(operand, v) and operand == v for v in node.values)
    if isinstance(node, Not):
        return not _eval(node.item, values)
    if isinstance(node, And):
        return all(_eval(item, values) for item in node.items)
    if isinstance(node, Or):
        return any(_eval(item, values) for item in node.items)
    raise TypeError(f"unknown node {node!r}")


def _fmt_value(value: Union[int, float, str]) -> str:
    if isinstance(value, str):
        return f'"{value}"'
    return repr(value)


def _unparse(node: object, parent: str = "") -> str:
    if isinstance(node, Identifier):
        return node.name
    if isinstance(node, Literal):
        return _fmt_value(node.value)
    if isinstance(node, Comparison):
        return f"{_unparse(node.left)} {node.op} {_unparse(node.right)}"
    if isinstance(node, Membership):
        inner = ", ".join(_fmt_value(v) for v in node.values)
        return f"{_unparse(node.operand)} in {{{inner}}}"
    if isinstance(node, Not):
        return f"not {_wrap(node.item, 'not')}"
    if isinstance(node, And):
        return " and ".join(_wrap(item, "and") for item in node.items)
    if isinstance(node, Or):
        return " or ".join(_wrap(item, "or") for item in node.items)
    raise TypeError(f"unknown node {node!r}")


def _wrap(node: object, context: str) -> str:
    text = _unparse(node)
    if context == "or":
        return text
    if isinstance(node, Or) or (context == "not" and isinstance(node, And)):
        return f"({text})"
    return text
