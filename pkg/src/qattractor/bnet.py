"""Reader for BoolNet ``targets, factors`` network files.

Only the plain synchronous subset is accepted: ``!``, ``&``, ``|``, the
constants ``0``/``1`` and parentheses. Precedence is NOT > AND > OR and the
binary operators associate to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import (
    BnetError,
    CapacityExceeded,
    DuplicateGene,
    EmptyNetwork,
    ExprSyntaxError,
    InvalidGeneName,
    UndefinedVariable,
    UnexpectedCharacter,
    UnsupportedFeature,
)

MAX_GENES = 24

_NAME_CHARS = re.compile(r"[A-Za-z0-9_.\-]")
_GENE_NAME = re.compile(r"[A-Za-z_.\-][A-Za-z0-9_.\-]*\Z")
_HEADER = re.compile(r"\s*targets\s*,\s*factors\s*\Z", re.IGNORECASE)
_PROB_HEADER = re.compile(r"\s*targets\s*,\s*factors\s*,", re.IGNORECASE)


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[Var, Const, Not, And, Or]


def variables(expr: BoolExpr) -> set[str]:
    """Names of all genes read by ``expr``."""
    out: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend((node.left, node.right))
    return out


def to_text(expr: BoolExpr, full_parens: bool = False) -> str:
    """Render ``expr`` back to BoolNet syntax.

    With ``full_parens`` every binary node is wrapped, otherwise parentheses
    are emitted only where precedence requires them.
    """
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Not):
        inner = to_text(expr.child, full_parens)
        if isinstance(expr.child, (And, Or)) and not full_parens:
            inner = f"({inner})"
        return "!" + inner
    op = " & " if isinstance(expr, And) else " | "
    left = to_text(expr.left, full_parens)
    right = to_text(expr.right, full_parens)
    if full_parens:
        return f"({left}{op}{right})"
    if isinstance(expr, And):
        if isinstance(expr.left, Or):
            left = f"({left})"
        if isinstance(expr.right, (And, Or)):
            right = f"({right})"
    elif isinstance(expr.right, Or):
        right = f"({right})"
    return f"{left}{op}{right}"


# -- tokens ------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # IDENT AND OR NOT LPAREN RPAREN COMMA CONST0 CONST1
    text: str
    pos: int


_SINGLE = {"&": "AND", "|": "OR", "!": "NOT", "(": "LPAREN", ")": "RPAREN", ",": "COMMA"}


def tokenize(text: str, line: int | None = None) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, i))
            i += 1
            continue
        if _NAME_CHARS.match(ch):
            j = i
            while j < len(text) and _NAME_CHARS.match(text[j]):
                j += 1
            word = text[i:j]
            if ch.isdigit():
                if word == "0":
                    tokens.append(Token("CONST0", word, i))
                elif word == "1":
                    tokens.append(Token("CONST1", word, i))
                else:
                    # identifiers may not start with a digit
                    bad = 1 if len(word) > 1 and word[0] in "01" else 0
                    raise UnexpectedCharacter(word[bad], i + bad, line)
            else:
                tokens.append(Token("IDENT", word, i))
            i = j
            continue
        raise UnexpectedCharacter(ch, i, line)
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.i = 0
        self.line = line

    def peek(self):
        return self.tokens[self.i].kind if self.i < len(self.tokens) else "EOF"

    def fail(self, expected):
        if self.peek() == "COMMA":
            raise UnsupportedFeature(
                "',' inside a rule: probabilistic and temporal BoolNet extensions are not supported",
                self.line,
            )
        raise ExprSyntaxError(self.i, expected, self.line)

    def parse(self):
        node = self.disjunction()
        if self.peek() != "EOF":
            self.fail("end of expression")
        return node

    def disjunction(self):
        node = self.conjunction()
        while self.peek() == "OR":
            self.i += 1
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.peek() == "AND":
            self.i += 1
            node = And(node, self.unary())
        return node

    def unary(self):
        nots = 0
        while self.peek() == "NOT":
            self.i += 1
            nots += 1
        node = self.atom()
        for _ in range(nots):
            node = Not(node)
        return node

    def atom(self):
        kind = self.peek()
        if kind == "IDENT":
            tok = self.tokens[self.i]
            self.i += 1
            if self.peek() == "LPAREN":
                raise UnsupportedFeature(
                    f"function call {tok.text}(...) is a BoolNet extension and is not supported",
                    self.line,
                )
            return Var(tok.text)
        if kind in ("CONST0", "CONST1"):
            self.i += 1
            return Const(1 if kind == "CONST1" else 0)
        if kind == "LPAREN":
            self.i += 1
            node = self.disjunction()
            if self.peek() != "RPAREN":
                self.fail("')'")
            self.i += 1
            return node
        self.fail("variable, constant, '!' or '('")


def parse_expr(tokens: list[Token], line: int | None = None) -> BoolExpr:
    return _Parser(tokens, line).parse()


def parse_rule(text: str) -> BoolExpr:
    """Tokenize and parse a single rule expression."""
    return parse_expr(tokenize(text))


# -- networks ----------------------------------------------------------------

@dataclass(frozen=True)
class NetworkSpec:
    genes: tuple[str, ...]
    rules: tuple[BoolExpr, ...]

    @property
    def n(self) -> int:
        return len(self.genes)

    def index(self, gene: str) -> int:
        return self.genes.index(gene)

    def to_text(self) -> str:
        lines = ["targets, factors"]
        lines += [f"{g}, {to_text(r)}" for g, r in zip(self.genes, self.rules)]
        return "\n".join(lines) + "\n"


def parse_network(text: str, max_genes: int = MAX_GENES) -> NetworkSpec:
    """Parse a whole BoolNet file into a validated :class:`NetworkSpec`.

    Variables are resolved in a second pass so rules may reference genes
    declared further down the file.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    genes: list[str] = []
    rules: list[BoolExpr] = []
    lines: list[int] = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if first:
            first = False
            if _HEADER.match(body):
                continue
            if _PROB_HEADER.match(body):
                raise UnsupportedFeature("probabilistic BoolNet networks are not supported", lineno)
        if "[" in body or "]" in body:
            raise UnsupportedFeature("temporal BoolNet predicates are not supported", lineno)
        if "," not in body:
            raise BnetError("expected 'gene, expression'", lineno)
        target, factors = (part.strip() for part in body.split(",", 1))
        if "," in factors:
            raise UnsupportedFeature(
                "extra ',' in rule: probabilistic and function-style BoolNet rules are not supported",
                lineno,
            )
        if not _GENE_NAME.match(target):
            raise InvalidGeneName(f"invalid gene name {target!r}", lineno)
        if target in genes:
            raise DuplicateGene(target, lineno)
        genes.append(target)
        rules.append(parse_expr(tokenize(factors, lineno), lineno))
        lines.append(lineno)

    if not genes:
        raise EmptyNetwork()
    if len(genes) > max_genes:
        raise CapacityExceeded(f"{len(genes)} genes exceeds the limit of {max_genes}")
    declared = set(genes)
    for rule, lineno in zip(rules, lines):
        missing = sorted(variables(rule) - declared)
        if missing:
            raise UndefinedVariable(missing[0], lineno)
    return NetworkSpec(tuple(genes), tuple(rules))


def load_network(path) -> NetworkSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())
