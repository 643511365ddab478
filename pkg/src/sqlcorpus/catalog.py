"""Database metadata: ingestion, validation, and schema context blocks.

The catalog is the single source of truth for table/column names, data
types, descriptions, filter/metric flags, and join relationships. It is
loaded either from a JSON document or from a restricted CREATE TABLE DDL
subset, validated once, and then shared immutably by every downstream
stage.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CatalogError,
    DdlError,
    ReferentialError,
    ResolutionError,
    UnsupportedTypeError,
)


class SqlType(str, Enum):
    INTEGER = "integer"
    FLOAT = "float"
    TEXT = "text"
    DATE = "date"
    BOOLEAN = "boolean"
    TIMESTAMP = "timestamp"


# DDL type keywords accepted on ingest, normalized to the enumeration.
DDL_TYPE_ALIASES = {
    "int": SqlType.INTEGER,
    "integer": SqlType.INTEGER,
    "bigint": SqlType.INTEGER,
    "smallint": SqlType.INTEGER,
    "float": SqlType.FLOAT,
    "real": SqlType.FLOAT,
    "double": SqlType.FLOAT,
    "numeric": SqlType.FLOAT,
    "text": SqlType.TEXT,
    "varchar": SqlType.TEXT,
    "char": SqlType.TEXT,
    "string": SqlType.TEXT,
    "date": SqlType.DATE,
    "boolean": SqlType.BOOLEAN,
    "bool": SqlType.BOOLEAN,
    "timestamp": SqlType.TIMESTAMP,
    "datetime": SqlType.TIMESTAMP,
}

JOIN_KINDS = ("equi-join",)


@dataclass(frozen=True)
class ColumnDef:
    name: str
    data_type: SqlType
    description: str = ""
    is_filter: bool = False
    is_metric_component: bool = False

    def __post_init__(self):
        if not self.name:
            raise CatalogError("column name must be non-empty")
        if not isinstance(self.data_type, SqlType):
            raise UnsupportedTypeError(f"unsupported data type: {self.data_type!r}")


@dataclass(frozen=True)
class TableDef:
    name: str
    description: str = ""
    columns: tuple[ColumnDef, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise CatalogError("table name must be non-empty")
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.columns:
            raise CatalogError(f"table {self.name!r} has no columns")
        seen = set()
        for col in self.columns:
            if col.name in seen:
                raise CatalogError(
                    f"duplicate column {col.name!r} in table {self.name!r}"
                )
            seen.add(col.name)

    def column(self, name: str) -> ColumnDef:
        for col in self.columns:
            if col.name == name:
                return col
        raise ResolutionError(f"no column {name!r} in table {self.name!r}")

    def has_column(self, name: str) -> bool:
        return any(col.name == name for col in self.columns)


@dataclass(frozen=True)
class Relationship:
    left_table: str
    left_column: str
    right_table: str
    right_column: str
    kind: str = "equi-join"

    def __post_init__(self):
        if self.kind not in JOIN_KINDS:
            raise CatalogError(f"unsupported relationship kind: {self.kind!r}")
        if self.left_table == self.right_table:
            raise CatalogError(
                f"relationship joins table {self.left_table!r} to itself"
            )

    def condition(self) -> str:
        return (
            f"{self.left_table}.{self.left_column}"
            f" = {self.right_table}.{self.right_column}"
        )


@dataclass(frozen=True)
class Catalog:
    tables: tuple[TableDef, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    _by_name: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "relationships", tuple(self.relationships))
        index = {}
        for table in self.tables:
            if table.name in index:
                raise CatalogError(f"duplicate table name: {table.name!r}")
            index[table.name] = table
        object.__setattr__(self, "_by_name", index)
        if len(set(self.relationships)) != len(self.relationships):
            raise CatalogError("duplicate relationship declared")
        for rel in self.relationships:
            for tname, cname in (
                (rel.left_table, rel.left_column),
                (rel.right_table, rel.right_column),
            ):
                if tname not in index:
                    raise ReferentialError(
                        f"relationship references unknown table {tname!r}"
                    )
                if not index[tname].has_column(cname):
                    raise ReferentialError(
                        f"relationship references unknown column {tname}.{cname}"
                    )

    def table(self, name: str) -> TableDef:
        try:
            return self._by_name[name]
        except KeyError:
            raise ResolutionError(f"no table {name!r} in catalog") from None

    def has_table(self, name: str) -> bool:
        return name in self._by_name

    def table_names(self) -> list[str]:
        return [t.name for t in self.tables]

    def tables_with_column(self, column_name: str) -> list[str]:
        """Names of every table owning a column of this name, in catalog order."""
        return [t.name for t in self.tables if t.has_column(column_name)]

    def all_columns(self) -> list[tuple[str, str]]:
        """Every (table, column) pair in catalog order."""
        return [(t.name, c.name) for t in self.tables for c in t.columns]

    def resolve_anchor(self, anchor) -> list[tuple[str, str]]:
        """Validate an iterable of (table, column) pairs against the catalog.

        Returns the pairs deduplicated in catalog order.
        """
        wanted = set()
        for tname, cname in anchor:
            if not self.has_table(tname):
                raise ResolutionError(f"anchor references unknown table {tname!r}")
            if not self.table(tname).has_column(cname):
                raise ResolutionError(
                    f"anchor references unknown column {tname}.{cname}"
                )
            wanted.add((tname, cname))
        return [pair for pair in self.all_columns() if pair in wanted]


class SchemaMode(str, Enum):
    EXACT = "exact"
    FULL = "full"
    DYNAMIC = "dynamic"


def ingest_catalog(source: str) -> Catalog:
    """Build a validated Catalog from catalog-JSON or CREATE TABLE DDL text."""
    if source.lstrip().startswith("{"):
        return _catalog_from_document(json.loads(source))
    return _catalog_from_ddl(source)


def emit_catalog(catalog: Catalog) -> str:
    """Serialize a catalog to its canonical JSON document form.

    The output is byte-deterministic; ``ingest_catalog(emit_catalog(c)) == c``.
    """
    doc = {
        "tables": [
            {
                "name": t.name,
                "description": t.description,
                "columns": [
                    {
                        "name": c.name,
                        "data_type": c.data_type.value,
                        "description": c.description,
                        "is_filter": c.is_filter,
                        "is_metric_component": c.is_metric_component,
                    }
                    for c in t.columns
                ],
            }
            for t in catalog.tables
        ],
        "relationships": [
            {
                "left_table": r.left_table,
                "left_column": r.left_column,
                "right_table": r.right_table,
                "right_column": r.right_column,
                "kind": r.kind,
            }
            for r in catalog.relationships
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _require_keys(obj: dict, allowed: set, required: set, what: str):
    unknown = set(obj) - allowed
    if unknown:
        raise CatalogError(f"unknown key(s) in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise CatalogError(f"missing key(s) in {what}: {sorted(missing)}")


def _catalog_from_document(doc: dict) -> Catalog:
    _require_keys(doc, {"tables", "relationships"}, {"tables"}, "catalog document")
    tables = []
    for tdoc in doc["tables"]:
        _require_keys(
            tdoc, {"name", "description", "columns"}, {"name", "columns"}, "table"
        )
        columns = []
        for cdoc in tdoc["columns"]:
            _require_keys(
                cdoc,
                {"name", "data_type", "description", "is_filter", "is_metric_component"},
                {"name", "data_type"},
                f"column of table {tdoc['name']!r}",
            )
            raw_type = str(cdoc["data_type"]).lower()
            try:
                data_type = SqlType(raw_type)
            except ValueError:
                raise UnsupportedTypeError(
                    f"unsupported data type {cdoc['data_type']!r} "
                    f"on column {tdoc['name']}.{cdoc['name']}"
                ) from None
            columns.append(
                ColumnDef(
                    name=cdoc["name"],
                    data_type=data_type,
                    description=cdoc.get("description", ""),
                    is_filter=bool(cdoc.get("is_filter", False)),
                    is_metric_component=bool(cdoc.get("is_metric_component", False)),
                )
            )
        tables.append(
            TableDef(
                name=tdoc["name"],
                description=tdoc.get("description", ""),
                columns=tuple(columns),
            )
        )
    relationships = []
    for rdoc in doc.get("relationships", []):
        _require_keys(
            rdoc,
            {"left_table", "left_column", "right_table", "right_column", "kind"},
            {"left_table", "left_column", "right_table", "right_column"},
            "relationship",
        )
        relationships.append(
            Relationship(
                left_table=rdoc["left_table"],
                left_column=rdoc["left_column"],
                right_table=rdoc["right_table"],
                right_column=rdoc["right_column"],
                kind=rdoc.get("kind", "equi-join"),
            )
        )
    return Catalog(tables=tuple(tables), relationships=tuple(relationships))


def _catalog_from_ddl(text: str) -> Catalog:
    """Parse a sequence of CREATE TABLE statements.

    Supported subset: ``CREATE TABLE name ( col TYPE [-- description], ... );``
    Constraints, keys, partitions, and any other clause are rejected.
    """
    tables = []
    pos = 0
    n = len(text)
    while True:
        # Skip whitespace, semicolons, and free-standing comments between statements.
        while pos < n:
            if text[pos].isspace() or text[pos] == ";":
                pos += 1
            elif text.startswith("--", pos):
                nl = text.find("\n", pos)
                pos = n if nl < 0 else nl + 1
            else:
                break
        if pos >= n:
            break
        words, pos = _read_words(text, pos, 2)
        if [w.lower() for w in words] != ["create", "table"]:
            raise DdlError(f"expected CREATE TABLE, found {' '.join(words)!r}")
        (name,), pos = _read_words(text, pos, 1)
        if not name.replace("_", "").isalnum():
            raise DdlError(f"invalid table name {name!r}")
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n or text[pos] != "(":
            raise DdlError(f"expected '(' after table name {name!r}")
        columns, pos = _read_ddl_columns(text, pos + 1, name)
        tables.append(TableDef(name=name, columns=tuple(columns)))
    if not tables:
        raise DdlError("no CREATE TABLE statement found")
    return Catalog(tables=tuple(tables))


def _read_words(text: str, pos: int, count: int):
    words = []
    n = len(text)
    for _ in range(count):
        while pos < n and text[pos].isspace():
            pos += 1
        start = pos
        while pos < n and not text[pos].isspace() and text[pos] not in "(),;":
            pos += 1
        if start == pos:
            raise DdlError("unexpected end of DDL input")
        words.append(text[start:pos])
    return words, pos


def _read_ddl_columns(text: str, pos: int, table_name: str):
    """Scan a column list body up to its closing paren.

    A ``--`` comment attaches to the column definition it follows, whether it
    appears before or after that column's separating comma.
    """
    chunks: list[list[str]] = [[]]  # token lists per column chunk
    comments: dict[int, str] = {}
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == ")":
            pos += 1
            break
        if text.startswith("--", pos):
            nl = text.find("\n", pos)
            end = n if nl < 0 else nl
            comment = text[pos + 2 : end].strip()
            target = len(chunks) - 1
            if not chunks[target]:
                target -= 1
            if target < 0:
                raise DdlError(f"comment before any column in table {table_name!r}")
            comments[target] = comment
            pos = end
        elif ch == ",":
            chunks.append([])
            pos += 1
        elif ch.isspace():
            pos += 1
        else:
            start = pos
            while pos < n and not text[pos].isspace() and text[pos] not in "(),;-":
                pos += 1
            if pos == start:
                raise DdlError(
                    f"unexpected character {ch!r} in table {table_name!r}"
                )
            chunks[-1].append(text[start:pos])
    else:
        raise DdlError(f"unterminated column list in table {table_name!r}")

    columns = []
    for idx, tokens in enumerate(chunks):
        if not tokens:
            if idx == len(chunks) - 1:
                continue  # trailing comma
            raise DdlError(f"empty column definition in table {table_name!r}")
        if len(tokens) < 2:
            raise DdlError(
                f"column {tokens[0]!r} in table {table_name!r} has no data type"
            )
        if len(tokens) > 2:
            raise DdlError(
                f"unsupported DDL token(s) {tokens[2:]} on column "
                f"{table_name}.{tokens[0]} (constraints and options are not accepted)"
            )
        cname, ctype = tokens
        key = ctype.lower()
        if key not in DDL_TYPE_ALIASES:
            raise UnsupportedTypeError(
                f"unsupported data type {ctype!r} on column {table_name}.{cname}"
            )
        columns.append(
            ColumnDef(
                name=cname,
                data_type=DDL_TYPE_ALIASES[key],
                description=comments.get(idx, ""),
            )
        )
    if not columns:
        raise DdlError(f"table {table_name!r} has no columns")
    return columns, pos


def schema_context(
    catalog: Catalog,
    mode: SchemaMode,
    anchor=(),
    seed: int = 0,
    column_budget: int | None = None,
) -> str:
    """Render the CREATE TABLE text block for a prompt's system section.

    ``exact`` emits only the anchor pairs, ``full`` the whole catalog, and
    ``dynamic`` a seeded superset of the anchor capped at ``column_budget``
    columns (default: three times the anchor size, clamped to the catalog).
    """
    mode = SchemaMode(mode)
    anchor_pairs = catalog.resolve_anchor(anchor)
    if mode in (SchemaMode.EXACT, SchemaMode.DYNAMIC) and not anchor_pairs:
        raise ResolutionError(f"{mode.value} schema mode requires a non-empty anchor")

    if mode is SchemaMode.FULL:
        selected = catalog.all_columns()
    elif mode is SchemaMode.EXACT:
        selected = anchor_pairs
    else:
        all_pairs = catalog.all_columns()
        budget = column_budget if column_budget is not None else 3 * len(anchor_pairs)
        budget = max(len(anchor_pairs), min(budget, len(all_pairs)))
        remaining = [p for p in all_pairs if p not in set(anchor_pairs)]
        rng = random.Random(seed)
        extra = rng.sample(remaining, budget - len(anchor_pairs))
        chosen = set(anchor_pairs) | set(extra)
        selected = [p for p in all_pairs if p in chosen]

    by_table: dict[str, list[str]] = {}
    for tname, cname in selected:
        by_table.setdefault(tname, []).append(cname)

    blocks = []
    for table in catalog.tables:
        if table.name not in by_table:
            continue
        lines = [f"CREATE TABLE {table.name} ("]
        for col in table.columns:
            if col.name not in by_table[table.name]:
                continue
            line = f"  {col.name} {col.data_type.value}"
            if col.description:
                line += f" {col.description}"
            lines.append(line)
        lines.append(")")
        blocks.append("\n".join(lines))
    return "\n".join(blocks)


def parse_schema_block(text: str) -> dict[str, list[str]]:
    """Read back a schema_context block as {table: [column, ...]}.

    Inverse of ``schema_context`` on column membership; used to verify the
    subset relations the dynamic mode promises.
    """
    result: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        if line.startswith("CREATE TABLE "):
            current = line[len("CREATE TABLE ") :].rstrip(" (")
            result[current] = []
        elif line.startswith("  ") and current is not None:
            result[current].append(line.strip().split(" ", 1)[0])
        elif line == ")":
            current = None
        elif line.strip():
            raise CatalogError(f"unrecognized schema block line: {line!r}")
    return result
