"""Lexer, parser, AST, and printer for the logic-program dialect.

The dialect covers normal rules, integrity constraints, cardinality choice
rules, ``#count`` assignment aggregates, interval facts (``p(1..20).``) and
``#show`` directives.  Negation is negation-as-failure only; terms are
integers, lowercase symbolic constants, uppercase variables, ``_`` and
single-level arithmetic expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union


class DialectError(Exception):
    """Base class for lexer/parser errors carrying a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class LexicalError(DialectError):
    pass


class ParseError(DialectError):
    pass


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

# Token kinds
IDENT = "ident"
VARIABLE = "variable"
NUMBER = "number"
ANON = "anonymous"
DOTDOT = "dotdot"
IF = "if"  # ":-"
COLON = "colon"
SEMI = "semi"
LBRACE = "lbrace"
RBRACE = "rbrace"
LPAREN = "lparen"
RPAREN = "rparen"
COMMA = "comma"
PERIOD = "period"
NOT = "not"
COUNT = "count"  # "#count"
SHOW = "show"  # "#show"
CMP = "cmp"  # one of < <= > >= == != =
PLUS = "plus"
MINUS = "minus"
STAR = "star"
SLASH = "slash"
EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int


_PUNCT = {
    "{": LBRACE,
    "}": RBRACE,
    "(": LPAREN,
    ")": RPAREN,
    ",": COMMA,
    ";": SEMI,
    "+": PLUS,
    "-": MINUS,
    "*": STAR,
    "/": SLASH,
}


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; raises :class:`LexicalError` on junk."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def push(kind: str, lexeme: str) -> None:
        tokens.append(Token(kind, lexeme, line, start_col))

    while i < n:
        ch = source[i]
        start_col = col
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":  # comment to end of line
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            push(NUMBER, source[i:j])
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word == "not":
                push(NOT, word)
            elif ch.isupper():
                push(VARIABLE, word)
            else:
                push(IDENT, word)
            col += j - i
            i = j
            continue
        if ch == "_":
            push(ANON, "_")
            i += 1
            col += 1
            continue
        if ch == "#":
            j = i + 1
            while j < n and source[j].isalpha():
                j += 1
            word = source[i:j]
            if word == "#count":
                push(COUNT, word)
            elif word == "#show":
                push(SHOW, word)
            else:
                raise LexicalError(f"unknown directive {word!r}", line, start_col)
            col += j - i
            i = j
            continue
        two = source[i : i + 2]
        if two == "..":
            push(DOTDOT, two)
        elif two == ":-":
            push(IF, two)
        elif two in ("<=", ">=", "==", "!="):
            push(CMP, two)
        else:
            if ch in "<>":
                push(CMP, ch)
            elif ch == "=":
                push(CMP, ch)
            elif ch == ":":
                push(COLON, ch)
            elif ch == ".":
                push(PERIOD, ch)
            elif ch in _PUNCT:
                push(_PUNCT[ch], ch)
            else:
                raise LexicalError(f"unexpected character {ch!r}", line, start_col)
            i += 1
            col += 1
            continue
        i += 2
        col += 2
    tokens.append(Token(EOF, "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Variable:
    name: str

    @property
    def anonymous(self) -> bool:
        return self.name.startswith("_")


@dataclass(frozen=True)
class Arith:
    op: str  # + - * /
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int


Term = Union[Number, Symbol, Variable, Arith]
FactArg = Union[Term, Interval]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[FactArg, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class AtomLiteral:
    atom: Atom
    negated: bool = False


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str  # canonical: < <= > >= == !=
    right: Term


Literal = Union[AtomLiteral, Comparison]


@dataclass(frozen=True)
class CountElement:
    terms: tuple[Term, ...]
    condition: tuple[Literal, ...]


@dataclass(frozen=True)
class CountAggregate:
    target: Variable
    elements: tuple[CountElement, ...]


BodyItem = Union[AtomLiteral, Comparison, CountAggregate]


@dataclass(frozen=True)
class ChoiceElement:
    head: Atom
    condition: tuple[Literal, ...]


@dataclass(frozen=True)
class Fact:
    atom: Atom  # args may contain Interval


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[BodyItem, ...]


@dataclass(frozen=True)
class Choice:
    lower: int
    upper: int
    elements: tuple[ChoiceElement, ...]
    body: tuple[Literal, ...]


@dataclass(frozen=True)
class Constraint:
    body: tuple[Literal, ...]


@dataclass(frozen=True)
class Show:
    predicate: str
    arity: int


Statement = Union[Fact, Rule, Choice, Constraint, Show]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...] = ()

    def __add__(self, other: "Program") -> "Program":
        return Program(self.statements + other.statements)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.anon_counter = 0

    # --- token plumbing ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.lexeme or "end of input"
            raise ParseError(
                f"expected {what or kind}, found {found!r}", tok.line, tok.column
            )
        return self.advance()

    def fail(self, message: str) -> "ParseError":
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def fresh_anon(self) -> Variable:
        self.anon_counter += 1
        return Variable(f"_{self.anon_counter}")

    # --- grammar ---

    def program(self) -> Program:
        statements: list[Statement] = []
        while self.peek().kind != EOF:
            statements.append(self.statement())
        return Program(tuple(statements))

    def statement(self) -> Statement:
        tok = self.peek()
        if tok.kind == SHOW:
            return self.show_directive()
        if tok.kind == IF:
            self.advance()
            body = self.literal_list()
            self.expect(PERIOD, "'.'")
            return Constraint(tuple(body))
        if tok.kind == NUMBER and self.peek(1).kind == LBRACE:
            return self.choice_rule()
        head = self.atom(allow_interval=True)
        if self.peek().kind == PERIOD:
            self.advance()
            return Fact(head)
        if self.peek().kind == IF:
            self.advance()
            self._reject_intervals(head)
            body = self.body_items()
            self.expect(PERIOD, "'.'")
            return Rule(head, tuple(body))
        raise self.fail("expected '.' or ':-' after head atom")

    def show_directive(self) -> Show:
        self.advance()
        name = self.expect(IDENT, "predicate name")
        self.expect(SLASH, "'/'")
        arity = self.expect(NUMBER, "arity")
        self.expect(PERIOD, "'.'")
        return Show(name.lexeme, int(arity.lexeme))

    def choice_rule(self) -> Choice:
        lower = int(self.expect(NUMBER).lexeme)
        self.expect(LBRACE, "'{'")
        elements = [self.choice_element()]
        while self.peek().kind == SEMI:
            self.advance()
            elements.append(self.choice_element())
        self.expect(RBRACE, "'}'")
        upper_tok = self.expect(NUMBER, "upper bound")
        upper = int(upper_tok.lexeme)
        if not 0 <= lower <= upper:
            raise ParseError(
                f"bad choice bounds {lower}..{upper}", upper_tok.line, upper_tok.column
            )
        body: list[Literal] = []
        if self.peek().kind == IF:
            self.advance()
            body = self.literal_list()
        self.expect(PERIOD, "'.'")
        return Choice(lower, upper, tuple(elements), tuple(body))

    def choice_element(self) -> ChoiceElement:
        head = self.atom()
        condition: list[Literal] = []
        if self.peek().kind == COLON:
            self.advance()
            condition = self.condition_list()
        return ChoiceElement(head, tuple(condition))

    def condition_list(self) -> list[Literal]:
        """Comma-separated literals inside braces (stops at ';' or '}')."""
        literals = [self.literal()]
        while self.peek().kind == COMMA:
            self.advance()
            literals.append(self.literal())
        return literals

    def literal_list(self) -> list[Literal]:
        literals = [self.literal()]
        while self.peek().kind == COMMA:
            self.advance()
            literals.append(self.literal())
        return literals

    def body_items(self) -> list[BodyItem]:
        items = [self.body_item()]
        while self.peek().kind == COMMA:
            self.advance()
            items.append(self.body_item())
        return items

    def body_item(self) -> BodyItem:
        # Aggregate assignment: VAR = #count { ... }
        if (
            self.peek().kind == VARIABLE
            and self.peek(1).kind == CMP
            and self.peek(1).lexeme == "="
            and self.peek(2).kind == COUNT
        ):
            target = Variable(self.advance().lexeme)
            self.advance()  # '='
            self.advance()  # '#count'
            self.expect(LBRACE, "'{'")
            elements = [self.count_element()]
            while self.peek().kind == SEMI:
                self.advance()
                elements.append(self.count_element())
            self.expect(RBRACE, "'}'")
            return CountAggregate(target, tuple(elements))
        return self.literal()

    def count_element(self) -> CountElement:
        terms = [self.term()]
        while self.peek().kind == COMMA:
            self.advance()
            terms.append(self.term())
        condition: list[Literal] = []
        if self.peek().kind == COLON:
            self.advance()
            condition = self.condition_list()
        return CountElement(tuple(terms), tuple(condition))

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == NOT:
            self.advance()
            return AtomLiteral(self.atom(), negated=True)
        if tok.kind == IDENT:
            nxt = self.peek(1)
            if nxt.kind == LPAREN:
                return AtomLiteral(self.atom())
            if nxt.kind == CMP:
                left = self.term()
                return self.comparison_tail(left)
            self.advance()
            return AtomLiteral(Atom(tok.lexeme))
        left = self.term()
        return self.comparison_tail(left)

    def comparison_tail(self, left: Term) -> Comparison:
        op_tok = self.expect(CMP, "comparison operator")
        op = "==" if op_tok.lexeme == "=" else op_tok.lexeme
        right = self.term()
        return Comparison(left, op, right)

    def atom(self, allow_interval: bool = False) -> Atom:
        name = self.expect(IDENT, "predicate name")
        args: list[FactArg] = []
        if self.peek().kind == LPAREN:
            self.advance()
            args.append(self.argument(allow_interval))
            while self.peek().kind == COMMA:
                self.advance()
                args.append(self.argument(allow_interval))
            self.expect(RPAREN, "')'")
        return Atom(name.lexeme, tuple(args))

    def argument(self, allow_interval: bool) -> FactArg:
        term = self.term()
        if self.peek().kind == DOTDOT:
            dot = self.advance()
            if not allow_interval:
                raise ParseError("interval only allowed in facts", dot.line, dot.column)
            if not isinstance(term, Number):
                raise ParseError("interval bound must be an integer", dot.line, dot.column)
            hi_tok = self.expect(NUMBER, "interval upper bound")
            hi = int(hi_tok.lexeme)
            if term.value > hi:
                raise ParseError(
                    f"empty interval {term.value}..{hi}", hi_tok.line, hi_tok.column
                )
            return Interval(term.value, hi)
        return term

    # Arithmetic: standard precedence, left associative.
    def term(self) -> Term:
        left = self.mul_term()
        while self.peek().kind in (PLUS, MINUS):
            op = self.advance().lexeme
            left = Arith(op, left, self.mul_term())
        return left

    def mul_term(self) -> Term:
        left = self.prim_term()
        while self.peek().kind in (STAR, SLASH):
            op = self.advance().lexeme
            left = Arith(op, left, self.prim_term())
        return left

    def prim_term(self) -> Term:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            return Number(int(tok.lexeme))
        if tok.kind == VARIABLE:
            self.advance()
            return Variable(tok.lexeme)
        if tok.kind == ANON:
            self.advance()
            return self.fresh_anon()
        if tok.kind == IDENT:
            self.advance()
            return Symbol(tok.lexeme)
        if tok.kind == LPAREN:
            self.advance()
            inner = self.term()
            self.expect(RPAREN, "')'")
            return inner
        found = tok.lexeme or "end of input"
        raise ParseError(f"expected term, found {found!r}", tok.line, tok.column)

    def _reject_intervals(self, atom: Atom) -> None:
        for arg in atom.args:
            if isinstance(arg, Interval):
                raise self.fail("interval only allowed in facts")


def parse_program(source: str) -> Program:
    """Parse ``source`` into a :class:`Program`.

    Anonymous ``_`` terms become fresh variables ``_1``, ``_2``, ... in
    first-seen order, so a parse of printed output reproduces the same AST.
    """
    return _Parser(tokenize(source)).program()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def print_term(term: FactArg) -> str:
    if isinstance(term, Number):
        return str(term.value)
    if isinstance(term, Symbol):
        return term.name
    if isinstance(term, Variable):
        return "_" if term.anonymous else term.name
    if isinstance(term, Interval):
        return f"{term.lo}..{term.hi}"
    if isinstance(term, Arith):
        prec = {"+": 1, "-": 1, "*": 2, "/": 2}
        left = print_term(term.left)
        right = print_term(term.right)
        if isinstance(term.left, Arith) and prec[term.left.op] < prec[term.op]:
            left = f"({left})"
        # Compound right operands always get parens at equal precedence so the
        # left-associative reparse reproduces the same tree.
        if isinstance(term.right, Arith) and prec[term.right.op] <= prec[term.op]:
            right = f"({right})"
        return f"{left}{term.op}{right}"
    raise TypeError(f"not a term: {term!r}")


def print_atom(atom: Atom) -> str:
    if not atom.args:
        return atom.predicate
    return f"{atom.predicate}({', '.join(print_term(a) for a in atom.args)})"


def print_literal(lit: Literal) -> str:
    if isinstance(lit, AtomLiteral):
        prefix = "not " if lit.negated else ""
        return prefix + print_atom(lit.atom)
    return f"{print_term(lit.left)} {lit.op} {print_term(lit.right)}"


def print_body_item(item: BodyItem) -> str:
    if isinstance(item, CountAggregate):
        elements = "; ".join(
            ", ".join(print_term(t) for t in el.terms)
            + (": " + ", ".join(print_literal(c) for c in el.condition) if el.condition else "")
            for el in item.elements
        )
        return f"{item.target.name} = #count{{{elements}}}"
    return print_literal(item)


def print_statement(stmt: Statement) -> str:
    if isinstance(stmt, Fact):
        return print_atom(stmt.atom) + "."
    if isinstance(stmt, Rule):
        body = ", ".join(print_body_item(i) for i in stmt.body)
        return f"{print_atom(stmt.head)} :- {body}."
    if isinstance(stmt, Constraint):
        return ":- " + ", ".join(print_literal(l) for l in stmt.body) + "."
    if isinstance(stmt, Choice):
        elements = "; ".join(
            print_atom(el.head)
            + (": " + ", ".join(print_literal(c) for c in el.condition) if el.condition else "")
            for el in stmt.elements
        )
        text = f"{stmt.lower}{{{elements}}}{stmt.upper}"
        if stmt.body:
            text += " :- " + ", ".join(print_literal(l) for l in stmt.body)
        return text + "."
    if isinstance(stmt, Show):
        return f"#show {stmt.predicate}/{stmt.arity}."
    raise TypeError(f"not a statement: {stmt!r}")


def print_program(program: Program) -> str:
    if not program.statements:
        return ""
    return "\n".join(print_statement(s) for s in program.statements) + "\n"
