"""Boolean filter expressions over resolved feature and usage-limit values.

Grammar (keywords case-insensitive, ``∧``/``∨``/``¬`` accepted as AND/OR/NOT)::

    expr    := or
    or      := and (("OR" | "∨") and)*
    and     := not (("AND" | "∧") not)*
    not     := ("NOT" | "¬") not | atom
    atom    := "(" expr ")" | ident cmp literal | ident
    cmp     := "=" | "!=" | "<" | "<=" | ">" | ">="
    literal := "true" | "false" | decimal-number | double-quoted string

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*`` and must resolve to a declared
feature or usage limit; ordering comparisons are only defined for NUMERIC
targets. Expressions are evaluated against a subscription's resolved
valuation, not against declared defaults.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Mapping, Union

from .model import (
    Ordering,
    Pricing,
    PricingError,
    UNLIMITED,
    Value,
    ValueType,
    compare_values,
)


class CmpOp(str, Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="


@dataclass(frozen=True)
class And:
    children: tuple["FilterExpr", ...] = ()


@dataclass(frozen=True)
class Or:
    children: tuple["FilterExpr", ...] = ()


@dataclass(frozen=True)
class Not:
    child: "FilterExpr"


@dataclass(frozen=True)
class Compare:
    identifier: str
    op: CmpOp
    literal: Value


@dataclass(frozen=True)
class IsTrue:
    identifier: str


FilterExpr = Union[And, Or, Not, Compare, IsTrue]

#: Filter accepting every subscription; counts like no filter at all.
TRUE = And()


class FilterError(PricingError):
    """A problem in a filter expression, with its source position (0-based)."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class FilterSyntaxError(FilterError):
    pass


class FilterNameError(FilterError):
    pass


class FilterTypeError(FilterError):
    pass


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<op><=|>=|!=|<|>|=)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<and>∧)
      | (?P<or>∨)
      | (?P<not>¬)
      | (?P<number>-?\d+(?:\.\d+)?)
      | (?P<string>"(?:[^"\\]|\\.)*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)

_KEYWORDS = {"and": "and", "or": "or", "not": "not", "true": "true", "false": "false"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise FilterSyntaxError(f"unexpected character {text[bad_at]!r}", bad_at)
        pos = match.end()
        kind = match.lastgroup
        value = match.group(kind)
        start = match.end() - len(value)
        if kind == "ident":
            keyword = _KEYWORDS.get(value.lower())
            if keyword in ("and", "or", "not"):
                kind = keyword
            elif keyword in ("true", "false"):
                kind = "bool"
        elif kind == "and" or kind == "or" or kind == "not":
            pass
        tokens.append(_Token(kind, value, start))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], pricing: Pricing):
        self.tokens = tokens
        self.pricing = pricing
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> _Token:
        if self.current.kind != kind:
            raise FilterSyntaxError(f"expected {what}", self.current.position)
        return self.advance()

    def parse(self) -> FilterExpr:
        expr = self.or_expr()
        if self.current.kind != "end":
            raise FilterSyntaxError(
                f"unexpected {self.current.text!r} after expression", self.current.position)
        return expr

    def or_expr(self) -> FilterExpr:
        parts = [self.and_expr()]
        while self.current.kind == "or":
            self.advance()
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_expr(self) -> FilterExpr:
        parts = [self.not_expr()]
        while self.current.kind == "and":
            self.advance()
            parts.append(self.not_expr())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def not_expr(self) -> FilterExpr:
        if self.current.kind == "not":
            self.advance()
            return Not(self.not_expr())
        return self.atom()

    def atom(self) -> FilterExpr:
        token = self.current
        if token.kind == "lparen":
            self.advance()
            expr = self.or_expr()
            self.expect("rparen", "')'")
            return expr
        if token.kind != "ident":
            raise FilterSyntaxError("expected an identifier or '('", token.position)
        self.advance()
        _, declared = self._resolve(token)
        if self.current.kind == "op":
            op_token = self.advance()
            op = CmpOp(op_token.text)
            literal = self._literal()
            self._check_types(token, declared, op, literal)
            return Compare(token.text, op, literal[0])
        if declared is not ValueType.BOOLEAN:
            raise FilterTypeError(
                f"'{token.text}' is {declared.value}; a bare identifier must be BOOLEAN",
                token.position,
            )
        return IsTrue(token.text)

    def _resolve(self, token: _Token) -> tuple[str, ValueType]:
        try:
            return self.pricing.declared_type(token.text)
        except KeyError:
            raise FilterNameError(
                f"unknown feature or usage limit '{token.text}'", token.position) from None

    def _literal(self) -> tuple[Value, int]:
        token = self.current
        if token.kind == "bool":
            self.advance()
            return token.text.lower() == "true", token.position
        if token.kind == "number":
            self.advance()
            return Decimal(token.text), token.position
        if token.kind == "string":
            self.advance()
            body = token.text[1:-1]
            return re.sub(r"\\(.)", r"\1", body), token.position
        raise FilterSyntaxError("expected a literal (true/false, number, or string)", token.position)

    def _check_types(self, ident: _Token, declared: ValueType, op: CmpOp, literal: tuple[Value, int]) -> None:
        value, position = literal
        literal_type = (
            ValueType.BOOLEAN if isinstance(value, bool)
            else ValueType.NUMERIC if isinstance(value, Decimal)
            else ValueType.TEXT
        )
        if op not in (CmpOp.EQ, CmpOp.NE) and declared is not ValueType.NUMERIC:
            raise FilterTypeError(
                f"ordering comparison on '{ident.text}' requires a NUMERIC target, got {declared.value}",
                ident.position,
            )
        if literal_type is not declared:
            raise FilterTypeError(
                f"cannot compare {declared.value} '{ident.text}' with a {literal_type.value} literal",
                position,
            )


def parse_filter(text: str, pricing: Pricing) -> FilterExpr:
    """Parse a filter string, resolving identifiers against a pricing."""
    return _Parser(_tokenize(text), pricing).parse()


def evaluate(expr: FilterExpr, feature_values: Mapping[str, Value],
             usage_limit_values: Mapping[str, Value]) -> bool:
    """Evaluate a filter against resolved values; pure and deterministic."""
    if isinstance(expr, And):
        return all(evaluate(c, feature_values, usage_limit_values) for c in expr.children)
    if isinstance(expr, Or):
        return any(evaluate(c, feature_values, usage_limit_values) for c in expr.children)
    if isinstance(expr, Not):
        return not evaluate(expr.child, feature_values, usage_limit_values)
    if isinstance(expr, IsTrue):
        return bool(_lookup(expr.identifier, feature_values, usage_limit_values))
    if isinstance(expr, Compare):
        actual = _lookup(expr.identifier, feature_values, usage_limit_values)
        ordering = compare_values(actual, expr.literal)
        return _ORDERING_ACCEPTS[expr.op](ordering)
    raise TypeError(f"not a filter expression: {expr!r}")


def _lookup(identifier: str, feature_values: Mapping[str, Value],
            usage_limit_values: Mapping[str, Value]) -> Value:
    if identifier in feature_values:
        return feature_values[identifier]
    return usage_limit_values[identifier]


_ORDERING_ACCEPTS = {
    CmpOp.EQ: lambda o: o is Ordering.EQUAL,
    CmpOp.NE: lambda o: o is not Ordering.EQUAL,
    CmpOp.LT: lambda o: o is Ordering.LESS,
    CmpOp.LE: lambda o: o in (Ordering.LESS, Ordering.EQUAL),
    CmpOp.GT: lambda o: o is Ordering.GREATER,
    CmpOp.GE: lambda o: o in (Ordering.GREATER, Ordering.EQUAL),
}
