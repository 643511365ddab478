"""Derive step-by-step reasoning answers from gold SQL by AST analysis.

``analyze_sql`` walks the parsed statement and resolves every column
reference against the catalog, collecting the physical tables, qualified
columns, and equi-join pairs the query touches — transitively through
derived tables and CTEs. ``build_cot_answer`` turns one analysis into the
four numbered reasoning steps that precede the SQL in a reasoning-style
training answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sqlast
from .catalog import Catalog
from .errors import AmbiguityError, ResolutionError, SqlCorpusError

# Functions the embedded evaluation engine can execute. Anything else is
# treated as a dialect extension: analysis still works, execution may not.
PORTABLE_FUNCTIONS = {
    "COUNT", "SUM", "AVG", "MIN", "MAX", "TOTAL", "ABS", "ROUND", "COALESCE",
    "IFNULL", "NULLIF", "LOWER", "UPPER", "LENGTH", "SUBSTR", "TRIM", "LTRIM",
    "RTRIM", "REPLACE", "INSTR", "DATE", "TIME", "DATETIME", "STRFTIME",
    "JULIANDAY", "GROUP_CONCAT",
}


@dataclass(frozen=True)
class SqlAnalysis:
    tables: tuple[str, ...]
    columns: tuple[tuple[str, str], ...]
    join_pairs: tuple[tuple[tuple[str, str], tuple[str, str]], ...]
    normalized_sql: str
    dialect_functions: tuple[str, ...] = ()

    @property
    def portable(self) -> bool:
        """False when the SQL calls functions outside the portable set."""
        return not self.dialect_functions


@dataclass(frozen=True)
class CotAnswer:
    step_tables: str
    step_columns: str
    step_joins: str
    final_sql: str

    def answer_text(self) -> str:
        return (
            f"1. Tables: {self.step_tables}\n"
            f"2. Columns: {self.step_columns}\n"
            f"3. Join columns: {self.step_joins}\n"
            f"4. SQL: {self.final_sql}"
        )


class _Scope:
    """Name resolution context for one SELECT core.

    ``physical``/``derived`` hold the FROM-clause bindings usable as column
    qualifiers (visible to subqueries through the parent chain). ``ctes``
    holds CTE definitions, which unlike derived-table aliases are also
    bindable as table sources by inner FROM clauses.
    """

    def __init__(self, parent: "_Scope | None" = None):
        self.parent = parent
        self.physical: dict[str, str] = {}  # alias/name -> catalog table
        self.derived: dict[str, set[str] | None] = {}  # alias -> exported names
        self.ctes: dict[str, set[str] | None] = {}  # cte name -> exported names
        self.select_aliases: set[str] = set()

    def lookup_qualifier(self, qualifier: str):
        scope: _Scope | None = self
        while scope is not None:
            if qualifier in scope.physical:
                return "physical", scope.physical[qualifier]
            if qualifier in scope.derived:
                return "derived", qualifier
            scope = scope.parent
        return None, None

    def lookup_cte(self, name: str):
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.ctes:
                return True, scope.ctes[name]
            scope = scope.parent
        return False, None


class _Analyzer:
    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self.tables: dict[str, None] = {}
        self.columns: dict[tuple[str, str], None] = {}
        self.join_pairs: dict[tuple, None] = {}
        self.functions: dict[str, None] = {}

    # -- query structure --

    def analyze_query(self, query: sqlast.Query, parent: _Scope | None):
        cte_scope = _Scope(parent)
        for name, body in query.ctes:
            # Register before analyzing so recursive references resolve.
            cte_scope.ctes[name] = None
            cte_scope.ctes[name] = self.analyze_query(body, cte_scope)
        exports: set[str] | None = set()
        core_scopes = []
        for core in query.selects:
            scope = _Scope(cte_scope)
            core_scopes.append(scope)
            core_exports = self.analyze_select_core(core, scope)
            if exports is not None:
                exports = None if core_exports is None else exports | core_exports
        if query.order_by:
            # ORDER BY resolves against the first core, but may also use any
            # output alias of the set operation.
            order_scope = core_scopes[0]
            for scope in core_scopes[1:]:
                order_scope.select_aliases |= scope.select_aliases
            for item in query.order_by:
                self.walk_expr(item.expr, order_scope, collect_joins=False)
        return exports

    def analyze_select_core(self, core: sqlast.SelectCore, scope: _Scope):
        for item in core.from_items:
            self._bind_from_item(item, scope)
        for join in core.joins:
            self._bind_from_item(join.item, scope)
        for item in core.items:
            if item.alias:
                scope.select_aliases.add(item.alias)
        exports: set[str] | None = set()
        for item in core.items:
            if isinstance(item.expr, sqlast.Star):
                exports = None
            elif exports is not None:
                if item.alias:
                    exports.add(item.alias)
                elif isinstance(item.expr, sqlast.ColumnRef):
                    exports.add(item.expr.name)
            self.walk_expr(item.expr, scope, collect_joins=False)
        for join in core.joins:
            if join.on is not None:
                self.walk_expr(join.on, scope, collect_joins=True)
        if core.where is not None:
            self.walk_expr(core.where, scope, collect_joins=True)
        for expr in core.group_by:
            self.walk_expr(expr, scope, collect_joins=False)
        if core.having is not None:
            self.walk_expr(core.having, scope, collect_joins=False)
        return exports

    def _bind_from_item(self, item, scope: _Scope):
        if isinstance(item, sqlast.TableRef):
            is_cte, exports = scope.lookup_cte(item.name)
            if is_cte:  # CTE shadows a physical table of the same name
                scope.derived[item.alias or item.name] = exports
                return
            if not self.catalog.has_table(item.name):
                raise ResolutionError(f"unknown table {item.name!r}")
            self.tables.setdefault(item.name, None)
            scope.physical[item.alias or item.name] = item.name
        elif isinstance(item, sqlast.DerivedTable):
            exports = self.analyze_query(item.query, scope)
            if item.alias:
                scope.derived[item.alias] = exports
        else:  # pragma: no cover - parser only emits the two kinds
            raise SqlCorpusError(f"unexpected FROM item: {item!r}")

    # -- expressions --

    def walk_expr(self, expr, scope: _Scope, collect_joins: bool):
        if expr is None or isinstance(expr, (sqlast.Literal, sqlast.Star)):
            return
        if isinstance(expr, sqlast.ColumnRef):
            self._resolve_column(expr, scope)
            return
        if isinstance(expr, sqlast.Binary):
            if collect_joins and expr.op == "=":
                self._maybe_join_pair(expr, scope)
            self.walk_expr(expr.left, scope, collect_joins)
            self.walk_expr(expr.right, scope, collect_joins)
            return
        if isinstance(expr, sqlast.Unary):
            self.walk_expr(expr.operand, scope, collect_joins)
            return
        if isinstance(expr, sqlast.FuncCall):
            self.functions.setdefault(expr.name.upper(), None)
            for arg in expr.args:
                self.walk_expr(arg, scope, collect_joins=False)
            return
        if isinstance(expr, sqlast.InExpr):
            self.walk_expr(expr.expr, scope, collect_joins=False)
            if expr.items is not None:
                for item in expr.items:
                    self.walk_expr(item, scope, collect_joins=False)
            if expr.query is not None:
                self.analyze_query(expr.query, scope)
            return
        if isinstance(expr, sqlast.ExistsExpr):
            self.analyze_query(expr.query, scope)
            return
        if isinstance(expr, sqlast.SubqueryExpr):
            self.analyze_query(expr.query, scope)
            return
        if isinstance(expr, sqlast.BetweenExpr):
            for child in (expr.expr, expr.low, expr.high):
                self.walk_expr(child, scope, collect_joins=False)
            return
        if isinstance(expr, sqlast.IsNullExpr):
            self.walk_expr(expr.expr, scope, collect_joins=False)
            return
        if isinstance(expr, sqlast.LikeExpr):
            self.walk_expr(expr.expr, scope, collect_joins=False)
            self.walk_expr(expr.pattern, scope, collect_joins=False)
            return
        if isinstance(expr, sqlast.CaseExpr):
            self.walk_expr(expr.operand, scope, collect_joins=False)
            for cond, result in expr.whens:
                self.walk_expr(cond, scope, collect_joins=False)
                self.walk_expr(result, scope, collect_joins=False)
            self.walk_expr(expr.else_, scope, collect_joins=False)
            return
        if isinstance(expr, sqlast.CastExpr):
            self.walk_expr(expr.expr, scope, collect_joins=False)
            return
        raise SqlCorpusError(f"unexpected expression node: {expr!r}")  # pragma: no cover

    def _resolve_column(self, ref: sqlast.ColumnRef, scope: _Scope):
        """Record the physical (table, column) behind a reference, if any.

        Returns None for references into derived tables / CTEs / select
        aliases; their physical lineage is captured when the inner query is
        analyzed.
        """
        if ref.qualifier is not None:
            kind, target = scope.lookup_qualifier(ref.qualifier)
            if kind == "physical":
                if not self.catalog.table(target).has_column(ref.name):
                    raise ResolutionError(
                        f"unknown column {target}.{ref.name} "
                        f"(via qualifier {ref.qualifier!r})"
                    )
                self.columns.setdefault((target, ref.name), None)
                return (target, ref.name)
            if kind == "derived":
                return None
            raise ResolutionError(f"unknown table qualifier {ref.qualifier!r}")

        s: _Scope | None = scope
        while s is not None:
            candidates = sorted(
                {t for t in s.physical.values() if self.catalog.table(t).has_column(ref.name)}
            )
            if len(candidates) > 1:
                raise AmbiguityError(
                    f"column {ref.name!r} is ambiguous; candidates: "
                    + ", ".join(f"{t}.{ref.name}" for t in candidates)
                )
            if len(candidates) == 1:
                self.columns.setdefault((candidates[0], ref.name), None)
                return (candidates[0], ref.name)
            for exports in s.derived.values():
                if exports is None or ref.name in exports:
                    return None
            if ref.name in s.select_aliases:
                return None
            s = s.parent
        raise ResolutionError(f"cannot resolve column {ref.name!r}")

    def _maybe_join_pair(self, expr: sqlast.Binary, scope: _Scope):
        if not (
            isinstance(expr.left, sqlast.ColumnRef)
            and isinstance(expr.right, sqlast.ColumnRef)
        ):
            return
        left = self._resolve_column(expr.left, scope)
        right = self._resolve_column(expr.right, scope)
        if left is None or right is None or left[0] == right[0]:
            return
        self.join_pairs.setdefault((left, right), None)


def analyze_sql(sql: str, catalog: Catalog) -> SqlAnalysis:
    """Extract tables, qualified columns, and join pairs from one statement."""
    query = sqlast.parse_statement(sql)
    analyzer = _Analyzer(catalog)
    analyzer.analyze_query(query, None)
    dialect = tuple(
        sorted(name for name in analyzer.functions if name not in PORTABLE_FUNCTIONS)
    )
    return SqlAnalysis(
        tables=tuple(analyzer.tables),
        columns=tuple(analyzer.columns),
        join_pairs=tuple(analyzer.join_pairs),
        normalized_sql=sqlast.normalize_sql(sql),
        dialect_functions=dialect,
    )


def build_cot_answer(answer_sql: str, analysis: SqlAnalysis) -> CotAnswer:
    """Render the four numbered reasoning steps for one gold SQL.

    ``analysis`` must come from ``answer_sql`` itself; the final step repeats
    the gold SQL in normalized spelling.
    """
    if sqlast.normalize_sql(answer_sql) != analysis.normalized_sql:
        raise SqlCorpusError(
            "analysis does not belong to this SQL "
            f"(expected {analysis.normalized_sql!r})"
        )
    step_tables = ", ".join(analysis.tables) if analysis.tables else "none"
    step_columns = (
        ", ".join(f"{t}.{c}" for t, c in analysis.columns)
        if analysis.columns
        else "none"
    )
    step_joins = (
        ", ".join(f"{lt}.{lc} = {rt}.{rc}" for (lt, lc), (rt, rc) in analysis.join_pairs)
        if analysis.join_pairs
        else "none"
    )
    return CotAnswer(
        step_tables=step_tables,
        step_columns=step_columns,
        step_joins=step_joins,
        final_sql=analysis.normalized_sql,
    )
