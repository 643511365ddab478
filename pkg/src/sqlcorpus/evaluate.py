"""Execution accuracy: run predicted and gold SQL, compare result sets.

Both queries run on an embedded SQLite fixture database opened read-only.
A prediction counts as a match when its result set is equivalent to the
gold query's: same column count, rows compared as sequences when the gold
query orders its output and as multisets otherwise, numeric cells within
relative tolerance, text byte-equal, and NULL equal only to NULL.

Predictions are untrusted model output: anything mutating is rejected
without execution, reasoning-style answers are stripped to their final SQL
statement, and every query runs under a wall-clock timeout and a row cap.
"""

from __future__ import annotations

import json
import math
import re
import sqlite3
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EvalEnvironmentError, FixtureIntegrityError
from .sqlast import outermost_order_by, statement_keyword

MATCH = "match"
MISMATCH = "mismatch"
PREDICTED_ERROR = "predicted_error"

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_ROW_CAP = 100_000
DEFAULT_TOLERANCE = 1e-6

_FENCED_BLOCK = re.compile(r"```(?:[a-zA-Z]+)?\n(.*?)```", re.DOTALL)
_SQL_START = re.compile(r"\b(SELECT|WITH)\b", re.IGNORECASE)


@dataclass(frozen=True)
class EvalCase:
    id: str
    predicted_sql: str
    gold_sql: str
    database_ref: str = "default"
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    id: str
    outcome: str
    error_detail: str | None = None
    gold_rows: int = 0
    predicted_rows: int | None = None

    def __post_init__(self):
        if self.outcome == PREDICTED_ERROR and not self.error_detail:
            raise ValueError("predicted_error verdicts must carry a diagnostic")


@dataclass(frozen=True)
class ResultSet:
    columns: int
    rows: tuple[tuple, ...]


@dataclass
class EvalReport:
    cases: list[Verdict]
    execution_accuracy: float
    breakdown: dict

    def to_json(self) -> str:
        doc = {
            "execution_accuracy": self.execution_accuracy,
            "cases": [
                {
                    "id": v.id,
                    "outcome": v.outcome,
                    "error_detail": v.error_detail,
                    "gold_rows": v.gold_rows,
                    "predicted_rows": v.predicted_rows,
                }
                for v in self.cases
            ],
            "breakdown": self.breakdown,
        }
        return json.dumps(doc, indent=2) + "\n"

    def summary_table(self) -> str:
        lines = [
            f"cases: {len(self.cases)}",
            f"execution accuracy: {self.execution_accuracy:.4f}",
        ]
        for key in sorted(self.breakdown):
            lines.append(f"by {key}:")
            for value in sorted(self.breakdown[key]):
                cell = self.breakdown[key][value]
                lines.append(
                    f"  {value}: {cell['matches']}/{cell['cases']}"
                    f" = {cell['accuracy']:.4f}"
                )
        return "\n".join(lines)


def load_cases(text: str) -> list[EvalCase]:
    cases = []
    for line in text.splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        cases.append(
            EvalCase(
                id=doc["id"],
                predicted_sql=doc["predicted_sql"],
                gold_sql=doc["gold_sql"],
                database_ref=doc.get("database_ref", "default"),
                meta=doc.get("meta", {}),
            )
        )
    return cases


def extract_final_sql(text: str) -> str:
    """Pull the executable statement out of free-form model output.

    A fenced code block wins when present (the last one); otherwise the last
    semicolon-delimited segment that starts a query. Reasoning steps before
    the statement are dropped.
    """
    blocks = _FENCED_BLOCK.findall(text)
    region = blocks[-1] if blocks else text
    segments = [seg for seg in region.split(";") if seg.strip()]
    for segment in reversed(segments):
        match = _SQL_START.search(segment)
        if match:
            return segment[match.start() :].strip()
    return segments[-1].strip() if segments else region.strip()


# --- result-set comparison --------------------------------------------------


def _cell_equal(a, b, tolerance: float) -> bool:
    if a is None or b is None:
        return a is None and b is None
    a_num = isinstance(a, (int, float)) and not isinstance(a, bool)
    b_num = isinstance(b, (int, float)) and not isinstance(b, bool)
    if a_num and b_num:
        return math.isclose(a, b, rel_tol=tolerance, abs_tol=0.0)
    if type(a) is not type(b):
        return False
    return a == b


def _row_equal(a: tuple, b: tuple, tolerance: float) -> bool:
    return len(a) == len(b) and all(
        _cell_equal(x, y, tolerance) for x, y in zip(a, b)
    )


def _cell_sort_key(cell):
    if cell is None:
        return (0, "")
    if isinstance(cell, (int, float)) and not isinstance(cell, bool):
        # Bucket numerics well below the comparison tolerance so reordering
        # cannot split nearly-equal values.
        return (1, f"{float(cell):+.9e}")
    if isinstance(cell, bytes):
        return (3, cell.hex())
    return (2, str(cell))


def rows_equivalent(
    a: ResultSet, b: ResultSet, ordered: bool, tolerance: float = DEFAULT_TOLERANCE
) -> bool:
    """Result-set equivalence under the evaluation contract.

    Column counts must agree; rows compare as sequences when ``ordered`` and
    as multisets otherwise. Numeric cells match within relative
    ``tolerance``; the relation is therefore only approximately transitive,
    which exact-value fixtures sidestep.
    """
    if a.columns != b.columns or len(a.rows) != len(b.rows):
        return False
    rows_a, rows_b = a.rows, b.rows
    if not ordered:
        key = lambda row: tuple(_cell_sort_key(cell) for cell in row)
        rows_a = sorted(rows_a, key=key)
        rows_b = sorted(rows_b, key=key)
    return all(_row_equal(x, y, tolerance) for x, y in zip(rows_a, rows_b))


# --- execution ---------------------------------------------------------------


class _Timeout(Exception):
    pass


def _run_query(
    conn: sqlite3.Connection, sql: str, timeout_s: float, row_cap: int
) -> ResultSet:
    deadline = time.monotonic() + timeout_s

    def tick():
        if time.monotonic() > deadline:
            return 1  # non-zero aborts the statement
        return 0

    conn.set_progress_handler(tick, 5_000)
    try:
        cursor = conn.execute(sql)
        if cursor.description is None:
            raise sqlite3.OperationalError("statement returned no result set")
        columns = len(cursor.description)
        rows: list[tuple] = []
        while True:
            batch = cursor.fetchmany(1_000)
            if not batch:
                break
            rows.extend(batch)
            if len(rows) > row_cap:
                raise _Timeout(f"row cap exceeded ({row_cap} rows)")
            if time.monotonic() > deadline:
                raise _Timeout(f"query timed out after {timeout_s}s")
        return ResultSet(columns=columns, rows=tuple(rows))
    except sqlite3.OperationalError as exc:
        if "interrupt" in str(exc).lower():
            raise _Timeout(f"query timed out after {timeout_s}s") from exc
        raise
    finally:
        conn.set_progress_handler(None, 0)


def open_fixture_db(path: str | Path) -> sqlite3.Connection:
    path = Path(path)
    if not path.exists():
        raise EvalEnvironmentError(f"fixture database missing: {path}")
    conn = sqlite3.connect(f"file:{path}?mode=ro", uri=True)
    return conn


def build_fixture_db(db_path: str | Path, seed_script: str | Path) -> None:
    """Create and populate a fixture database from its seed SQL script."""
    seed_script = Path(seed_script)
    if not seed_script.exists():
        raise EvalEnvironmentError(f"seed script missing: {seed_script}")
    db_path = Path(db_path)
    db_path.parent.mkdir(parents=True, exist_ok=True)
    if db_path.exists():
        db_path.unlink()
    conn = sqlite3.connect(db_path)
    try:
        conn.executescript(seed_script.read_text(encoding="utf-8"))
        conn.commit()
    finally:
        conn.close()


def evaluate(
    cases: list[EvalCase],
    db_path: str | Path,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    row_cap: int = DEFAULT_ROW_CAP,
    tolerance: float = DEFAULT_TOLERANCE,
) -> EvalReport:
    """Score every case on the fixture database and aggregate accuracy.

    Gold queries must always execute; a gold failure is a fixture-integrity
    error and halts the run. Predicted queries may fail in any way; failures
    become ``predicted_error`` verdicts.
    """
    conn = open_fixture_db(db_path)
    verdicts = []
    try:
        for case in sorted(cases, key=lambda c: c.id):
            verdicts.append(
                _evaluate_case(conn, case, timeout_s, row_cap, tolerance)
            )
    finally:
        conn.close()
    matches = sum(1 for v in verdicts if v.outcome == MATCH)
    accuracy = matches / len(verdicts) if verdicts else 0.0
    return EvalReport(
        cases=verdicts,
        execution_accuracy=accuracy,
        breakdown=_breakdown(cases, verdicts),
    )


def _evaluate_case(conn, case: EvalCase, timeout_s, row_cap, tolerance) -> Verdict:
    try:
        gold = _run_query(conn, case.gold_sql, timeout_s, row_cap)
    except Exception as exc:
        raise FixtureIntegrityError(
            f"gold query for case {case.id!r} failed: {exc}"
        ) from exc

    predicted_sql = extract_final_sql(case.predicted_sql)
    keyword = ""
    try:
        keyword = statement_keyword(predicted_sql)
    except Exception:
        pass
    if keyword not in ("SELECT", "WITH"):
        return Verdict(
            id=case.id,
            outcome=PREDICTED_ERROR,
            error_detail=f"not a read-only query (starts with {keyword or 'nothing'!r})",
            gold_rows=len(gold.rows),
            predicted_rows=None,
        )
    try:
        predicted = _run_query(conn, predicted_sql, timeout_s, row_cap)
    except (_Timeout, sqlite3.Error) as exc:
        return Verdict(
            id=case.id,
            outcome=PREDICTED_ERROR,
            error_detail=str(exc) or type(exc).__name__,
            gold_rows=len(gold.rows),
            predicted_rows=None,
        )
    ordered = outermost_order_by(case.gold_sql)
    equivalent = rows_equivalent(gold, predicted, ordered, tolerance)
    return Verdict(
        id=case.id,
        outcome=MATCH if equivalent else MISMATCH,
        error_detail=None,
        gold_rows=len(gold.rows),
        predicted_rows=len(predicted.rows),
    )


def _breakdown(cases: list[EvalCase], verdicts: list[Verdict]) -> dict:
    by_id = {v.id: v for v in verdicts}
    keys = sorted({key for case in cases for key in case.meta})
    table: dict = {}
    for key in keys:
        groups: dict = {}
        for case in cases:
            if key not in case.meta:
                continue
            value = str(case.meta[key])
            cell = groups.setdefault(value, {"cases": 0, "matches": 0})
            cell["cases"] += 1
            if by_id[case.id].outcome == MATCH:
                cell["matches"] += 1
        for cell in groups.values():
            cell["accuracy"] = cell["matches"] / cell["cases"]
        table[key] = groups
    return table
