"""AST, parser and renderer for the normal-logic-program input language.

The language is a small subset of common ASP/Prolog syntax:

    fact        p(a, 3.0).
    rule        head :- lit, not lit, Term =< Term, ... .
    constraint  :- body.
    directive   #abducible atom.
    comment     % to end of line

Statements end with ``.``.  Terms are constants (lowercase-leading names),
exact decimal numbers, and variables (uppercase- or ``_``-leading names).
Names such as ``_neg_foo`` (underscore followed by a lowercase letter or
digit) denote *hidden* auxiliary predicates rather than variables; hidden
atoms are omitted when answer sets are rendered.

There is no classical negation, no choice rules, no aggregates and no
disjunctive heads, and arguments are flat (no compound terms or lists).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Iterator, Sequence, Union


class ParseError(ValueError):
    """Malformed statement; carries the source line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SafetyError(ValueError):
    """A variable occurs only in the head, under negation, or in a builtin."""

    def __init__(self, variable: str, rule_text: str):
        super().__init__(f"unsafe variable {variable} in rule: {rule_text}")
        self.variable = variable


# Prefixes reserved for the abducible transformation; user programs may not
# define predicates under them.
RESERVED_PREFIXES = ("_neg_", "_abd_", "_negabd_")

COMPARISON_OPS = ("=<", ">=", "\\=", "<", ">", "=")


# --------------------------------------------------------------------------
# Terms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Number:
    """Exact decimal value; printing round-trips the source spelling."""

    value: Decimal

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


Term = Union[Constant, Number, Variable]


def is_ground_term(term: Term) -> bool:
    return not isinstance(term, Variable)


# --------------------------------------------------------------------------
# Atoms, literals, rules
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def hidden(self) -> bool:
        """Auxiliary atoms (underscore-prefixed) are excluded from rendering."""
        return self.predicate.startswith("_")

    @property
    def is_ground(self) -> bool:
        return all(is_ground_term(t) for t in self.args)

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


BodyItem = Union[Literal, Comparison]


@dataclass(frozen=True)
class Rule:
    """Normal rule; ``head is None`` means an integrity constraint."""

    head: Atom | None
    body: tuple[BodyItem, ...] = ()

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def __str__(self):
        body = ", ".join(str(item) for item in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    abducible_directives: tuple[Atom, ...] = ()
    # Side table for diagnostics only; not part of structural equality.
    positions: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __str__(self):
        lines = [str(r) for r in self.rules]
        lines.extend(f"#abducible {a}." for a in self.abducible_directives)
        return "\n".join(lines)

    def extended(self, rules: Iterable[Rule]) -> "Program":
        return Program(self.rules + tuple(rules), self.abducible_directives)


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+|%[^\n]*)
    | (?P<NUMBER>\d+\.\d+|\d+)
    | (?P<NAME>[a-z][A-Za-z0-9_]*)
    | (?P<HIDDEN>_[a-z0-9][A-Za-z0-9_]*)
    | (?P<VARIABLE>[A-Z_][A-Za-z0-9_]*)
    | (?P<DIRECTIVE>\#[a-z]+)
    | (?P<PUNCT>:-|\?-|=<|>=|\\=|[(),.<>=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup or ""
        value = m.group()
        if kind != "WS":
            tokens.append(_Token(kind, value, line, m.start() - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def _error(self, message: str) -> ParseError:
        tok = self.current
        return ParseError(message, tok.line, tok.column)

    def _expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.current
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise self._error(f"expected {want!r}, found {tok.text or 'end of input'!r}")
        return self._advance()

    def _at_punct(self, text: str) -> bool:
        return self.current.kind == "PUNCT" and self.current.text == text

    # -- terms and atoms ----------------------------------------------------

    def _term(self) -> Term:
        tok = self.current
        if tok.kind == "NUMBER":
            self._advance()
            return Number(Decimal(tok.text))
        if tok.kind == "NAME":
            self._advance()
            return Constant(tok.text)
        if tok.kind == "VARIABLE":
            self._advance()
            return Variable(tok.text)
        raise self._error(f"expected a term, found {tok.text!r}")

    def _atom(self) -> Atom:
        tok = self.current
        if tok.kind not in ("NAME", "HIDDEN"):
            raise self._error(f"expected a predicate name, found {tok.text!r}")
        for prefix in RESERVED_PREFIXES:
            if tok.text.startswith(prefix):
                raise self._error(
                    f"predicate name {tok.text!r} collides with the reserved "
                    f"prefix {prefix!r}"
                )
        self._advance()
        args: list[Term] = []
        if self._at_punct("("):
            self._advance()
            args.append(self._term())
            while self._at_punct(","):
                self._advance()
                args.append(self._term())
            self._expect("PUNCT", ")")
        return Atom(tok.text, tuple(args))

    def _body_item(self) -> BodyItem:
        if self.current.kind == "NAME" and self.current.text == "not":
            nxt = self.tokens[self.index + 1]
            if nxt.kind in ("NAME", "HIDDEN"):
                self._advance()
                return Literal(self._atom(), negated=True)
        # Comparison operands can be any term; a lone atom is a literal.
        if self.current.kind in ("NUMBER", "VARIABLE"):
            left = self._term()
            op = self._comparison_op()
            return Comparison(left, op, self._term())
        atom = self._atom()
        if self.current.kind == "PUNCT" and self.current.text in COMPARISON_OPS:
            if atom.args:
                raise self._error("comparison operand must be a plain term")
            op = self._comparison_op()
            return Comparison(Constant(atom.predicate), op, self._term())
        return Literal(atom)

    def _comparison_op(self) -> str:
        tok = self.current
        if tok.kind != "PUNCT" or tok.text not in COMPARISON_OPS:
            raise self._error(f"expected a comparison operator, found {tok.text!r}")
        self._advance()
        return tok.text

    def _body(self) -> tuple[BodyItem, ...]:
        items = [self._body_item()]
        while self._at_punct(","):
            self._advance()
            items.append(self._body_item())
        return tuple(items)

    # -- statements ----------------------------------------------------------

    def parse_program(self) -> Program:
        rules: list[Rule] = []
        directives: list[Atom] = []
        positions: list[tuple[int, int]] = []
        while self.current.kind != "EOF":
            tok = self.current
            if tok.kind == "DIRECTIVE":
                if tok.text != "#abducible":
                    raise self._error(f"unknown directive {tok.text!r}")
                self._advance()
                directives.append(self._atom())
                self._expect("PUNCT", ".")
                continue
            positions.append((tok.line, tok.column))
            if self._at_punct(":-"):
                self._advance()
                rule = Rule(None, self._body())
            else:
                head = self._atom()
                if self._at_punct(":-"):
                    self._advance()
                    rule = Rule(head, self._body())
                else:
                    rule = Rule(head)
            self._expect("PUNCT", ".")
            _check_safety(rule)
            rules.append(rule)
        return Program(tuple(rules), tuple(directives), tuple(positions))

    def parse_query(self) -> tuple[Literal, ...]:
        if self._at_punct("?-") or self._at_punct(":-"):
            self._advance()
        literals: list[Literal] = []
        while True:
            item = self._body_item()
            if isinstance(item, Comparison):
                raise self._error("comparisons are not allowed in queries")
            literals.append(item)
            if self._at_punct(","):
                self._advance()
                continue
            break
        if self._at_punct("."):
            self._advance()
        if self.current.kind != "EOF":
            raise self._error(f"unexpected input {self.current.text!r} after query")
        return tuple(literals)


def _variables_of(term: Term) -> set[str]:
    return {term.name} if isinstance(term, Variable) else set()


def _check_safety(rule: Rule) -> None:
    positive: set[str] = set()
    for item in rule.body:
        if isinstance(item, Literal) and not item.negated:
            for arg in item.atom.args:
                positive |= _variables_of(arg)
    unsafe: set[str] = set()
    if rule.head is not None:
        for arg in rule.head.args:
            unsafe |= _variables_of(arg)
    for item in rule.body:
        if isinstance(item, Literal) and item.negated:
            for arg in item.atom.args:
                unsafe |= _variables_of(arg)
        elif isinstance(item, Comparison):
            unsafe |= _variables_of(item.left) | _variables_of(item.right)
    unsafe -= positive
    if unsafe:
        raise SafetyError(min(unsafe), str(rule))


def parse_program(text: str) -> Program:
    """Parse a program; every rule is safety-checked on acceptance."""
    return _Parser(text).parse_program()


def parse_query(text: str) -> tuple[Literal, ...]:
    """Parse a comma-separated literal conjunction (optional ``?-``/``:-``)."""
    parser = _Parser(text)
    if parser.current.kind == "EOF":
        raise parser._error("empty query")
    return parser.parse_query()


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def format_signed(atom: Atom, positive: bool) -> str:
    return str(atom) if positive else f"not {atom}"


def format_literal_set(pairs: Sequence[tuple[Atom, bool]]) -> str:
    """Render signed ground literals as ``{ a, not b }``, hiding auxiliaries."""
    visible = [format_signed(a, s) for a, s in pairs if not a.hidden]
    if not visible:
        return "{ }"
    return "{ " + ", ".join(visible) + " }"


def format_atom_set(atoms: Iterable[Atom]) -> str:
    """Render an unordered atom set deterministically (lexicographic)."""
    visible = sorted(str(a) for a in atoms if not a.hidden)
    if not visible:
        return "{ }"
    return "{ " + ", ".join(visible) + " }"


def render(item) -> str:
    """Canonical text for a literal, atom, or partial answer set.

    Partial answer sets render their literals in derivation order; plain
    (unordered) atom collections should go through :func:`format_atom_set`.
    """
    if isinstance(item, Literal):
        return str(item)
    if isinstance(item, Atom):
        return str(item)
    signed = getattr(item, "signed_literals", None)
    if signed is not None:
        return format_literal_set(signed)
    raise TypeError(f"cannot render {type(item).__name__}")


def iter_atoms(program: Program) -> Iterator[Atom]:
    for rule in program.rules:
        if rule.head is not None:
            yield rule.head
        for item in rule.body:
            if isinstance(item, Literal):
                yield item.atom
    yield from program.abducible_directives
