"""Tokenizer and recursive-descent parser for the supported SQL subset.

The grammar covers the query shapes the corpus generator and the evaluator
need to understand: SELECT-FROM-JOIN-WHERE-GROUP BY-HAVING-ORDER BY-LIMIT,
set operations, CTEs (including recursive ones), derived tables, scalar and
predicate subqueries, aggregate/scalar function calls, and CASE. Anything
else is a syntax error with a character offset.

Identifiers keep their original spelling; ``normalize_sql`` re-emits the
token stream with canonical whitespace only, so normalization never changes
what a statement means.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SqlSyntaxError

KEYWORDS = {
    "SELECT", "FROM", "WHERE", "JOIN", "INNER", "LEFT", "RIGHT", "FULL",
    "OUTER", "CROSS", "ON", "AND", "OR", "NOT", "IN", "EXISTS", "BETWEEN",
    "LIKE", "IS", "NULL", "GROUP", "BY", "HAVING", "ORDER", "ASC", "DESC",
    "LIMIT", "OFFSET", "AS", "WITH", "UNION", "ALL", "DISTINCT", "CASE",
    "WHEN", "THEN", "ELSE", "END", "CAST", "TRUE", "FALSE", "RECURSIVE",
}

_MULTI_CHAR_OPS = ("<=", ">=", "<>", "!=", "||")
_SINGLE_CHAR_OPS = "=<>+-*/%(),.;"


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | op
    value: str  # unquoted identifier text / literal content / operator
    raw: str  # exact source slice
    pos: int

    def is_kw(self, *words: str) -> bool:
        return self.kind == "ident" and self.value.upper() in words


def tokenize(sql: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(sql)
    while i < n:
        ch = sql[i]
        if ch.isspace():
            i += 1
            continue
        if sql.startswith("--", i):
            nl = sql.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if sql.startswith("/*", i):
            end = sql.find("*/", i + 2)
            if end < 0:
                raise SqlSyntaxError("unterminated block comment", i)
            i = end + 2
            continue
        if ch == "'":
            j = i + 1
            while j < n:
                if sql[j] == "'":
                    if j + 1 < n and sql[j + 1] == "'":
                        j += 2
                        continue
                    break
                j += 1
            else:
                raise SqlSyntaxError("unterminated string literal", i)
            raw = sql[i : j + 1]
            tokens.append(Token("string", raw[1:-1].replace("''", "'"), raw, i))
            i = j + 1
            continue
        if ch in '"`':
            j = sql.find(ch, i + 1)
            if j < 0:
                raise SqlSyntaxError("unterminated quoted identifier", i)
            raw = sql[i : j + 1]
            tokens.append(Token("ident", raw[1:-1], raw, i))
            i = j + 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and sql[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (sql[j].isdigit() or (sql[j] == "." and not seen_dot)):
                seen_dot = seen_dot or sql[j] == "."
                j += 1
            if j < n and sql[j] in "eE":
                k = j + 1
                if k < n and sql[k] in "+-":
                    k += 1
                if k < n and sql[k].isdigit():
                    while k < n and sql[k].isdigit():
                        k += 1
                    j = k
            raw = sql[i:j]
            tokens.append(Token("number", raw, raw, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (sql[j].isalnum() or sql[j] == "_"):
                j += 1
            raw = sql[i:j]
            tokens.append(Token("ident", raw, raw, i))
            i = j
            continue
        matched = False
        for op in _MULTI_CHAR_OPS:
            if sql.startswith(op, i):
                tokens.append(Token("op", op, op, i))
                i += len(op)
                matched = True
                break
        if matched:
            continue
        if ch == "*":
            tokens.append(Token("op", "*", "*", i))
            i += 1
            continue
        if ch in _SINGLE_CHAR_OPS:
            tokens.append(Token("op", ch, ch, i))
            i += 1
            continue
        raise SqlSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


def normalize_sql(sql: str) -> str:
    """Collapse whitespace/comments into one canonical single-line spelling.

    Tokenizes identically to the input: only spacing changes.
    """
    tokens = tokenize(sql)
    # A trailing semicolon is presentation, not meaning.
    while tokens and tokens[-1].value == ";":
        tokens = tokens[:-1]
    parts: list[str] = []
    prev: Token | None = None
    for tok in tokens:
        if prev is not None:
            joined = not (
                tok.value in (",", ";", ")", ".")
                or prev.value in ("(", ".")
                or (
                    tok.value == "("
                    and prev.kind == "ident"
                    and prev.value.upper() not in KEYWORDS
                )
            )
            if joined:
                parts.append(" ")
        parts.append(tok.raw)
        prev = tok
    return "".join(parts)


# --- AST node types -------------------------------------------------------


@dataclass
class ColumnRef:
    qualifier: str | None
    name: str


@dataclass
class Star:
    qualifier: str | None = None


@dataclass
class Literal:
    kind: str  # number | string | null | bool
    value: str


@dataclass
class FuncCall:
    name: str
    args: list
    distinct: bool = False
    star: bool = False


@dataclass
class Binary:
    op: str
    left: object
    right: object


@dataclass
class Unary:
    op: str
    operand: object


@dataclass
class InExpr:
    expr: object
    items: list | None
    query: "Query | None"
    negated: bool


@dataclass
class ExistsExpr:
    query: "Query"
    negated: bool


@dataclass
class BetweenExpr:
    expr: object
    low: object
    high: object
    negated: bool


@dataclass
class IsNullExpr:
    expr: object
    negated: bool


@dataclass
class LikeExpr:
    expr: object
    pattern: object
    negated: bool


@dataclass
class CaseExpr:
    operand: object | None
    whens: list
    else_: object | None


@dataclass
class CastExpr:
    expr: object
    type_name: str


@dataclass
class SubqueryExpr:
    query: "Query"


@dataclass
class SelectItem:
    expr: object
    alias: str | None = None


@dataclass
class TableRef:
    name: str
    alias: str | None = None


@dataclass
class DerivedTable:
    query: "Query"
    alias: str | None = None


@dataclass
class Join:
    kind: str  # INNER | LEFT | RIGHT | FULL | CROSS
    item: object  # TableRef | DerivedTable
    on: object | None = None


@dataclass
class SelectCore:
    distinct: bool
    items: list[SelectItem]
    from_items: list = field(default_factory=list)
    joins: list[Join] = field(default_factory=list)
    where: object | None = None
    group_by: list = field(default_factory=list)
    having: object | None = None


@dataclass
class OrderItem:
    expr: object
    descending: bool = False


@dataclass
class Query:
    ctes: list[tuple[str, "Query"]] = field(default_factory=list)
    selects: list[SelectCore] = field(default_factory=list)
    setops: list[str] = field(default_factory=list)
    order_by: list[OrderItem] = field(default_factory=list)
    limit: str | None = None
    offset: str | None = None


# --- Parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, sql: str):
        self.tokens = tokenize(sql)
        self.i = 0

    # token plumbing

    def peek(self, ahead: int = 0) -> Token | None:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise SqlSyntaxError("unexpected end of input", self._end_pos())
        self.i += 1
        return tok

    def _end_pos(self) -> int:
        return self.tokens[-1].pos if self.tokens else 0

    def accept_kw(self, *words: str) -> str | None:
        tok = self.peek()
        if tok is not None and tok.is_kw(*words):
            self.i += 1
            return tok.value.upper()
        return None

    def expect_kw(self, word: str) -> None:
        tok = self.peek()
        if tok is None or not tok.is_kw(word):
            found = tok.raw if tok else "end of input"
            raise SqlSyntaxError(
                f"expected {word}, found {found!r}",
                tok.pos if tok else self._end_pos(),
            )
        self.i += 1

    def accept_op(self, op: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.value == op:
            self.i += 1
            return True
        return False

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "op" or tok.value != op:
            found = tok.raw if tok else "end of input"
            raise SqlSyntaxError(
                f"expected {op!r}, found {found!r}",
                tok.pos if tok else self._end_pos(),
            )
        self.i += 1

    def expect_ident(self, what: str) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "ident" or tok.value.upper() in KEYWORDS:
            found = tok.raw if tok else "end of input"
            raise SqlSyntaxError(
                f"expected {what}, found {found!r}",
                tok.pos if tok else self._end_pos(),
            )
        self.i += 1
        return tok.value

    # grammar

    def parse_statement(self) -> Query:
        query = self.parse_query()
        self.accept_op(";")
        tok = self.peek()
        if tok is not None:
            raise SqlSyntaxError(f"unexpected trailing token {tok.raw!r}", tok.pos)
        return query

    def parse_query(self) -> Query:
        query = Query()
        if self.accept_kw("WITH"):
            self.accept_kw("RECURSIVE")
            while True:
                name = self.expect_ident("CTE name")
                self.expect_kw("AS")
                self.expect_op("(")
                query.ctes.append((name, self.parse_query()))
                self.expect_op(")")
                if not self.accept_op(","):
                    break
        query.selects.append(self.parse_select_core())
        while True:
            tok = self.peek()
            if tok is not None and tok.is_kw("UNION"):
                self.next()
                op = "UNION ALL" if self.accept_kw("ALL") else "UNION"
                query.setops.append(op)
                query.selects.append(self.parse_select_core())
            else:
                break
        if self.accept_kw("ORDER"):
            self.expect_kw("BY")
            while True:
                item = OrderItem(self.parse_expr())
                if self.accept_kw("DESC"):
                    item.descending = True
                else:
                    self.accept_kw("ASC")
                query.order_by.append(item)
                if not self.accept_op(","):
                    break
        if self.accept_kw("LIMIT"):
            query.limit = self._expect_number()
            if self.accept_kw("OFFSET"):
                query.offset = self._expect_number()
        return query

    def _expect_number(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "number":
            found = tok.raw if tok else "end of input"
            raise SqlSyntaxError(
                f"expected number, found {found!r}",
                tok.pos if tok else self._end_pos(),
            )
        self.i += 1
        return tok.value

    def parse_select_core(self) -> SelectCore:
        self.expect_kw("SELECT")
        distinct = bool(self.accept_kw("DISTINCT"))
        self.accept_kw("ALL")
        items = [self.parse_select_item()]
        while self.accept_op(","):
            items.append(self.parse_select_item())
        core = SelectCore(distinct=distinct, items=items)
        if self.accept_kw("FROM"):
            core.from_items.append(self.parse_from_item())
            while True:
                if self.accept_op(","):
                    core.from_items.append(self.parse_from_item())
                    continue
                join = self._maybe_join()
                if join is None:
                    break
                core.joins.append(join)
        if self.accept_kw("WHERE"):
            core.where = self.parse_expr()
        if self.accept_kw("GROUP"):
            self.expect_kw("BY")
            core.group_by.append(self.parse_expr())
            while self.accept_op(","):
                core.group_by.append(self.parse_expr())
        if self.accept_kw("HAVING"):
            core.having = self.parse_expr()
        return core

    def _maybe_join(self) -> Join | None:
        tok = self.peek()
        if tok is None or not tok.is_kw(
            "JOIN", "INNER", "LEFT", "RIGHT", "FULL", "CROSS"
        ):
            return None
        kind = "INNER"
        word = self.accept_kw("INNER", "LEFT", "RIGHT", "FULL", "CROSS")
        if word:
            kind = word
            self.accept_kw("OUTER")
        self.expect_kw("JOIN")
        item = self.parse_from_item()
        on = None
        if self.accept_kw("ON"):
            on = self.parse_expr()
        elif kind != "CROSS":
            tok = self.peek()
            raise SqlSyntaxError(
                "JOIN requires an ON clause",
                tok.pos if tok else self._end_pos(),
            )
        return Join(kind=kind, item=item, on=on)

    def parse_select_item(self) -> SelectItem:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.value == "*":
            self.next()
            return SelectItem(Star())
        expr = self.parse_expr()
        alias = None
        if self.accept_kw("AS"):
            alias = self.expect_ident("alias")
        else:
            nxt = self.peek()
            if (
                nxt is not None
                and nxt.kind == "ident"
                and nxt.value.upper() not in KEYWORDS
            ):
                self.i += 1
                alias = nxt.value
        return SelectItem(expr, alias)

    def parse_from_item(self):
        if self.accept_op("("):
            query = self.parse_query()
            self.expect_op(")")
            alias = self._maybe_alias()
            return DerivedTable(query=query, alias=alias)
        name = self.expect_ident("table name")
        alias = self._maybe_alias()
        return TableRef(name=name, alias=alias)

    def _maybe_alias(self) -> str | None:
        if self.accept_kw("AS"):
            return self.expect_ident("alias")
        tok = self.peek()
        if tok is not None and tok.kind == "ident" and tok.value.upper() not in KEYWORDS:
            self.i += 1
            return tok.value
        return None

    # expressions, loosest binding first

    def parse_expr(self):
        return self._parse_or()

    def _parse_or(self):
        left = self._parse_and()
        while self.accept_kw("OR"):
            left = Binary("OR", left, self._parse_and())
        return left

    def _parse_and(self):
        left = self._parse_not()
        while self.accept_kw("AND"):
            left = Binary("AND", left, self._parse_not())
        return left

    def _parse_not(self):
        if self.accept_kw("NOT"):
            return Unary("NOT", self._parse_not())
        return self._parse_comparison()

    def _parse_comparison(self):
        left = self._parse_additive()
        while True:
            tok = self.peek()
            if tok is None:
                return left
            if tok.kind == "op" and tok.value in ("=", "!=", "<>", "<", ">", "<=", ">="):
                self.next()
                left = Binary(tok.value, left, self._parse_additive())
                continue
            if tok.is_kw("IS"):
                self.next()
                negated = bool(self.accept_kw("NOT"))
                self.expect_kw("NULL")
                left = IsNullExpr(left, negated)
                continue
            negated = False
            if tok.is_kw("NOT"):
                nxt = self.peek(1)
                if nxt is not None and nxt.is_kw("IN", "BETWEEN", "LIKE"):
                    self.next()
                    negated = True
                    tok = self.peek()
                else:
                    return left
            if tok.is_kw("IN"):
                self.next()
                left = self._parse_in_tail(left, negated)
                continue
            if tok.is_kw("BETWEEN"):
                self.next()
                low = self._parse_additive()
                self.expect_kw("AND")
                high = self._parse_additive()
                left = BetweenExpr(left, low, high, negated)
                continue
            if tok.is_kw("LIKE"):
                self.next()
                left = LikeExpr(left, self._parse_additive(), negated)
                continue
            return left

    def _parse_in_tail(self, left, negated: bool):
        self.expect_op("(")
        tok = self.peek()
        if tok is not None and tok.is_kw("SELECT", "WITH"):
            query = self.parse_query()
            self.expect_op(")")
            return InExpr(left, None, query, negated)
        items = [self.parse_expr()]
        while self.accept_op(","):
            items.append(self.parse_expr())
        self.expect_op(")")
        return InExpr(left, items, None, negated)

    def _parse_additive(self):
        left = self._parse_multiplicative()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "op" and tok.value in ("+", "-", "||"):
                self.next()
                left = Binary(tok.value, left, self._parse_multiplicative())
            else:
                return left

    def _parse_multiplicative(self):
        left = self._parse_unary()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "op" and tok.value in ("*", "/", "%"):
                self.next()
                left = Binary(tok.value, left, self._parse_unary())
            else:
                return left

    def _parse_unary(self):
        if self.accept_op("-"):
            return Unary("-", self._parse_unary())
        if self.accept_op("+"):
            return self._parse_unary()
        return self._parse_primary()

    def _parse_primary(self):
        tok = self.peek()
        if tok is None:
            raise SqlSyntaxError("unexpected end of expression", self._end_pos())
        if tok.kind == "number":
            self.next()
            return Literal("number", tok.value)
        if tok.kind == "string":
            self.next()
            return Literal("string", tok.value)
        if tok.is_kw("NULL"):
            self.next()
            return Literal("null", "NULL")
        if tok.is_kw("TRUE", "FALSE"):
            self.next()
            return Literal("bool", tok.value.upper())
        if tok.is_kw("EXISTS"):
            self.next()
            self.expect_op("(")
            query = self.parse_query()
            self.expect_op(")")
            return ExistsExpr(query, negated=False)
        if tok.is_kw("NOT"):
            # NOT EXISTS reaches here when used as a primary.
            nxt = self.peek(1)
            if nxt is not None and nxt.is_kw("EXISTS"):
                self.next()
                self.next()
                self.expect_op("(")
                query = self.parse_query()
                self.expect_op(")")
                return ExistsExpr(query, negated=True)
        if tok.is_kw("CASE"):
            return self._parse_case()
        if tok.is_kw("CAST"):
            self.next()
            self.expect_op("(")
            expr = self.parse_expr()
            self.expect_kw("AS")
            type_name = self.expect_ident("type name")
            self.expect_op(")")
            return CastExpr(expr, type_name)
        if self.accept_op("("):
            inner_tok = self.peek()
            if inner_tok is not None and inner_tok.is_kw("SELECT", "WITH"):
                query = self.parse_query()
                self.expect_op(")")
                return SubqueryExpr(query)
            expr = self.parse_expr()
            self.expect_op(")")
            return expr
        if tok.kind == "ident" and tok.value.upper() not in KEYWORDS:
            self.next()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "op" and nxt.value == "(":
                return self._parse_func_call(tok.value)
            if nxt is not None and nxt.kind == "op" and nxt.value == ".":
                self.next()
                after = self.peek()
                if after is not None and after.kind == "op" and after.value == "*":
                    self.next()
                    return Star(qualifier=tok.value)
                name = self.expect_ident("column name")
                return ColumnRef(qualifier=tok.value, name=name)
            return ColumnRef(qualifier=None, name=tok.value)
        raise SqlSyntaxError(f"unexpected token {tok.raw!r}", tok.pos)

    def _parse_func_call(self, name: str) -> FuncCall:
        self.expect_op("(")
        if self.accept_op(")"):
            return FuncCall(name=name, args=[])
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.value == "*":
            self.next()
            self.expect_op(")")
            return FuncCall(name=name, args=[], star=True)
        distinct = bool(self.accept_kw("DISTINCT"))
        args = [self.parse_expr()]
        while self.accept_op(","):
            args.append(self.parse_expr())
        self.expect_op(")")
        return FuncCall(name=name, args=args, distinct=distinct)

    def _parse_case(self) -> CaseExpr:
        self.expect_kw("CASE")
        operand = None
        tok = self.peek()
        if tok is not None and not tok.is_kw("WHEN"):
            operand = self.parse_expr()
        whens = []
        while self.accept_kw("WHEN"):
            cond = self.parse_expr()
            self.expect_kw("THEN")
            whens.append((cond, self.parse_expr()))
        if not whens:
            tok = self.peek()
            raise SqlSyntaxError(
                "CASE requires at least one WHEN",
                tok.pos if tok else self._end_pos(),
            )
        else_ = None
        if self.accept_kw("ELSE"):
            else_ = self.parse_expr()
        self.expect_kw("END")
        return CaseExpr(operand, whens, else_)


def parse_statement(sql: str) -> Query:
    """Parse a single SELECT statement (optionally with CTEs)."""
    parser = _Parser(sql)
    tok = parser.peek()
    if tok is None:
        raise SqlSyntaxError("empty statement", 0)
    if not tok.is_kw("SELECT", "WITH"):
        raise SqlSyntaxError("statement must start with SELECT or WITH", tok.pos)
    return parser.parse_statement()


def outermost_order_by(sql: str) -> bool:
    """True when the statement's outermost clause carries an ORDER BY.

    Token-level check at parenthesis depth zero, so it works even for
    statements slightly outside the parsed grammar.
    """
    depth = 0
    for tok in tokenize(sql):
        if tok.kind == "op" and tok.value == "(":
            depth += 1
        elif tok.kind == "op" and tok.value == ")":
            depth -= 1
        elif depth == 0 and tok.is_kw("ORDER"):
            return True
    return False


def statement_keyword(sql: str) -> str:
    """Uppercased first keyword of a statement ('' when there is none)."""
    tokens = tokenize(sql)
    return tokens[0].value.upper() if tokens and tokens[0].kind == "ident" else ""
