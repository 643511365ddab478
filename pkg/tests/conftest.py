import json
from pathlib import Path

import pytest

from sqlcorpus.catalog import Catalog, ColumnDef, Relationship, SqlType, TableDef

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def make_catalog(spec: dict, relationships=()) -> Catalog:
    """Build a catalog from {table: [(col, type[, desc]), ...]} shorthand."""
    tables = []
    for tname, cols in spec.items():
        columns = []
        for col in cols:
            name, dtype, *rest = col
            columns.append(
                ColumnDef(
                    name=name,
                    data_type=SqlType(dtype),
                    description=rest[0] if rest else "",
                )
            )
        tables.append(TableDef(name=tname, columns=tuple(columns)))
    rels = tuple(Relationship(*r) for r in relationships)
    return Catalog(tables=tuple(tables), relationships=rels)


@pytest.fixture(scope="session")
def fixture_catalog() -> Catalog:
    from sqlcorpus.catalog import ingest_catalog

    return ingest_catalog((FIXTURES / "catalog.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_inputs(fixture_catalog):
    from sqlcorpus.templates import load_filters, load_metrics, load_templates

    templates = load_templates(
        (FIXTURES / "templates.json").read_text(encoding="utf-8"), fixture_catalog
    )
    metrics = load_metrics((FIXTURES / "metrics.json").read_text(encoding="utf-8"))
    filters = load_filters(
        (FIXTURES / "filters.json").read_text(encoding="utf-8"), fixture_catalog
    )
    return templates, metrics, filters


@pytest.fixture(scope="session")
def fixture_config_doc() -> dict:
    return json.loads((FIXTURES / "config.json").read_text(encoding="utf-8"))
